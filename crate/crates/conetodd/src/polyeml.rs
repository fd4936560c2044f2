//! Exact weighted sums of a polynomial over the lattice points of an
//! integral polytope.
//!
//! The sum decomposes over the faces of the polytope: each face
//! contributes the exact integral of a corrected polynomial, where the
//! correction operator's symbol is the holomorphic germ of the transverse
//! cone at the face. Everything is exact rational arithmetic; the
//! brute-force enumerator serves as an independent oracle.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::cones::Cone;
use crate::mu::MuContext;
use crate::polytope::LatticePolytope;
use crate::ratlin::{
    ivec_to_qvec, qvec_is_zero, qvec_sub, qvec_to_ivec, sublattice_basis, IVec, Int, QMat, QSpace,
    QVec, QuotientModel, Rat,
};
use crate::series::{bernoulli, Expo, TruncSeries};
use crate::{Error, Result};

/// Upper bound on the bounding-box point count the brute-force oracle
/// will enumerate.
const BRUTE_FORCE_LIMIT: u128 = 4_000_000;

/// An exact polynomial with rational coefficients, stored sparsely by
/// exponent vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyFunc {
    nvars: usize,
    terms: BTreeMap<Expo, Rat>,
}

impl PolyFunc {
    pub fn zero(nvars: usize) -> PolyFunc {
        PolyFunc {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> PolyFunc {
        let mut p = PolyFunc::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Expo::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> PolyFunc {
        PolyFunc::constant(nvars, Rat::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Result<PolyFunc> {
        if i >= nvars {
            return Err(Error::DimMismatch(format!(
                "variable {i} out of range for {nvars} variables"
            )));
        }
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        let mut p = PolyFunc::zero(nvars);
        p.terms.insert(Expo(e), Rat::one());
        Ok(p)
    }

    pub fn from_terms(nvars: usize, terms: &[(Rat, Vec<u32>)]) -> Result<PolyFunc> {
        let mut p = PolyFunc::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::DimMismatch(format!(
                    "exponent vector has {} entries, expected {nvars}",
                    e.len()
                )));
            }
            let entry = p.terms.entry(Expo(e.clone())).or_insert_with(Rat::zero);
            *entry += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.total()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms
            .get(&Expo(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn check_vars(&self, other: &PolyFunc) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyFunc) -> Result<PolyFunc> {
        self.check_vars(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(PolyFunc {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn neg(&self) -> PolyFunc {
        PolyFunc {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &PolyFunc) -> Result<PolyFunc> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rat) -> PolyFunc {
        if r.is_zero() {
            return PolyFunc::zero(self.nvars);
        }
        PolyFunc {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &PolyFunc) -> Result<PolyFunc> {
        self.check_vars(other)?;
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                let entry = terms.entry(Expo(e)).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(PolyFunc {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Result<PolyFunc> {
        let mut acc = PolyFunc::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.nvars
            )));
        }
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &ei) in x.iter().zip(&e.0) {
                for _ in 0..ei {
                    t *= xi;
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Partial derivative in one variable.
    pub fn partial(&self, var: usize) -> Result<PolyFunc> {
        if var >= self.nvars {
            return Err(Error::DimMismatch(format!(
                "variable {var} out of range for {} variables",
                self.nvars
            )));
        }
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.0[var] == 0 {
                continue;
            }
            let mut d = e.0.clone();
            d[var] -= 1;
            terms.insert(Expo(d), c * Rat::from_integer(Int::from(e.0[var])));
        }
        Ok(PolyFunc {
            nvars: self.nvars,
            terms,
        })
    }

    /// Iterated partial derivative by an exponent vector.
    pub fn derive(&self, alpha: &[u32]) -> Result<PolyFunc> {
        if alpha.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "derivative order has {} entries, expected {}",
                alpha.len(),
                self.nvars
            )));
        }
        let mut acc = self.clone();
        for (var, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                acc = acc.partial(var)?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
        }
        Ok(acc)
    }

    /// Affine substitution `x = base + sum_j dirs[j] * u_j`; the result is
    /// a polynomial in `dirs.len()` variables.
    pub fn subst_affine(&self, base: &[Rat], dirs: &[QVec]) -> Result<PolyFunc> {
        if base.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "base point has {} coordinates, expected {}",
                base.len(),
                self.nvars
            )));
        }
        let m = dirs.len();
        for d in dirs {
            if d.len() != self.nvars {
                return Err(Error::DimMismatch(
                    "direction length does not match variable count".into(),
                ));
            }
        }
        // Substitution polynomial for each original variable.
        let mut subs = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut s = PolyFunc::constant(m, base[i].clone());
            for (j, dir) in dirs.iter().enumerate() {
                if !dir[i].is_zero() {
                    s = s.add(&PolyFunc::var(m, j)?.scale(&dir[i]))?;
                }
            }
            subs.push(s);
        }
        let mut acc = PolyFunc::zero(m);
        for (e, c) in &self.terms {
            let mut term = PolyFunc::constant(m, c.clone());
            for (i, &ei) in e.0.iter().enumerate() {
                if ei > 0 {
                    term = term.mul(&subs[i].pow(ei)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// Apply the differential operator with the given symbol to a polynomial:
/// each series term `c * xi^alpha` acts as `c * d^alpha`. The symbol must
/// be trusted at least through the degree of `h`; higher-order terms
/// annihilate `h` and are skipped.
pub fn apply_symbol(symbol: &TruncSeries, h: &PolyFunc) -> Result<PolyFunc> {
    if symbol.nvars() != h.nvars() {
        return Err(Error::DimMismatch(format!(
            "symbol in {} variables applied to polynomial in {}",
            symbol.nvars(),
            h.nvars()
        )));
    }
    if symbol.order() < h.degree() {
        return Err(Error::InsufficientOrder {
            required: h.degree(),
            available: symbol.order(),
        });
    }
    let mut acc = PolyFunc::zero(h.nvars());
    for (e, c) in symbol.terms() {
        if e.total() > h.degree() {
            continue;
        }
        acc = acc.add(&h.derive(&e.0)?.scale(c))?;
    }
    Ok(acc)
}

/// The transverse cone of a polytope along a face: feasible directions
/// from the face, projected to the quotient model of the face's linear
/// span. Pointed and full-dimensional in the model; the projection does
/// not depend on which point of the face the directions are based at.
pub fn transverse_cone_at_face(
    space: &QSpace,
    p: &LatticePolytope,
    face: &[usize],
) -> Result<(QuotientModel, Cone)> {
    let span: Vec<QVec> = p
        .face_span_dirs(face)
        .iter()
        .map(|d| ivec_to_qvec(d))
        .filter(|q| !qvec_is_zero(q))
        .collect();
    let model = QuotientModel::new(space, &span)?;
    let (_, dirs) = p.feasible_directions(face);
    let projected: Vec<QVec> = dirs
        .iter()
        .map(|d| model.project_point(&ivec_to_qvec(d)))
        .filter(|q| !qvec_is_zero(q))
        .collect();
    let cone = Cone::from_rays(model.model_dim(), &projected)?;
    Ok((model, cone))
}

/// One face's share of the lattice sum.
#[derive(Clone, Debug)]
pub struct FaceContribution {
    /// Vertex indices of the face.
    pub face: Vec<usize>,
    pub face_dim: usize,
    /// The corrected polynomial integrated over the face.
    pub applied: PolyFunc,
    pub integral: Rat,
}

fn face_contribution(
    ctx: &MuContext,
    p: &LatticePolytope,
    face: &[usize],
    h: &PolyFunc,
) -> Result<FaceContribution> {
    let deg = h.degree();
    let (model, tcone) = transverse_cone_at_face(ctx.space(), p, face)?;
    let symbol = if model.model_dim() == 0 {
        TruncSeries::one(0, deg)
    } else {
        ctx.subcontext(model.model_space().clone()).mu(&tcone, deg)?
    };
    let ambient_symbol = symbol.subst_linear(&model.dual_extension_matrix())?;
    let applied = apply_symbol(&ambient_symbol, h)?;
    let integral = integrate_over_face(p, face, &applied)?;
    Ok(FaceContribution {
        face: face.to_vec(),
        face_dim: p.face_dim(face),
        applied,
        integral,
    })
}

fn factorial(n: u32) -> Int {
    let mut f = Int::one();
    for k in 2..=u64::from(n) {
        f *= Int::from(k);
    }
    f
}

/// `int over the standard k-simplex of t^a dt = prod(a_i!) / (k+|a|)!`.
fn dirichlet(k: usize, a: &[u32]) -> Rat {
    let mut num = Int::one();
    let mut total = k as u32;
    for &ai in a {
        num *= factorial(ai);
        total += ai;
    }
    Rat::new(num, factorial(total))
}

fn integrate_over_simplex(g: &PolyFunc, verts: &[IVec]) -> Result<Rat> {
    let k = g.nvars();
    debug_assert_eq!(verts.len(), k + 1);
    let w0 = ivec_to_qvec(&verts[0]);
    let cols: Vec<QVec> = verts[1..]
        .iter()
        .map(|w| qvec_sub(&ivec_to_qvec(w), &w0))
        .collect();
    let det = QMat::from_cols(&cols).det().abs();
    if det.is_zero() {
        return Ok(Rat::zero());
    }
    let gt = g.subst_affine(&w0, &cols)?;
    let mut s = Rat::zero();
    for (e, c) in gt.terms() {
        s += c * dirichlet(k, &e.0);
    }
    Ok(det * s)
}

/// Exact integral of a polynomial over one face of the polytope, against
/// the Lebesgue measure normalized so a fundamental cell of the lattice
/// inside the face's span has volume one. A vertex integrates to the
/// value of the polynomial there.
pub fn integrate_over_face(
    p: &LatticePolytope,
    face: &[usize],
    g: &PolyFunc,
) -> Result<Rat> {
    let d = p.ambient_dim();
    if g.nvars() != d {
        return Err(Error::DimMismatch(format!(
            "integrand has {} variables, expected {d}",
            g.nvars()
        )));
    }
    let base = p.base_vertex(face).clone();
    let base_q = ivec_to_qvec(&base);
    let span: Vec<QVec> = p
        .face_span_dirs(face)
        .iter()
        .map(|v| ivec_to_qvec(v))
        .filter(|q| !qvec_is_zero(q))
        .collect();
    if span.is_empty() {
        return g.eval(&base_q);
    }
    let u_basis = sublattice_basis(d, &span);
    let k = u_basis.len();
    let u_q: Vec<QVec> = u_basis.iter().map(|v| ivec_to_qvec(v)).collect();
    let umat = QMat::from_cols(&u_q);
    let pinv = umat
        .transpose()
        .mul(&umat)
        .inverse()
        .expect("lattice basis is independent")
        .mul(&umat.transpose());
    let mut u_verts = Vec::new();
    for &i in face {
        let diff = qvec_sub(&ivec_to_qvec(&p.vertices()[i]), &base_q);
        let coords = pinv.mul_vec(&diff);
        u_verts.push(qvec_to_ivec(&coords)?);
    }
    let g_face = g.subst_affine(&base_q, &u_q)?;
    let face_poly = LatticePolytope::from_points(k, &u_verts)?;
    let mut total = Rat::zero();
    for piece in face_poly.homogenization().triangulate()? {
        let pverts: Vec<IVec> = piece.rays().iter().map(|r| r[..k].to_vec()).collect();
        total += integrate_over_simplex(&g_face, &pverts)?;
    }
    Ok(total)
}

/// Re-express a possibly lower-dimensional polytope inside its affine
/// lattice span: returns a context, polytope, and weight in span
/// coordinates whose lattice sum equals the original one. Full
/// dimensional inputs come back unchanged. The restricted metric is the
/// pullback of the ambient one, so results remain consistent for any
/// choice of scalar product.
pub fn restrict_to_span(
    ctx: &MuContext,
    p: &LatticePolytope,
    h: &PolyFunc,
) -> Result<(MuContext, LatticePolytope, PolyFunc)> {
    let d = p.ambient_dim();
    if p.dim() == d {
        return Ok((ctx.clone(), p.clone(), h.clone()));
    }
    let base = p
        .vertices()
        .iter()
        .min()
        .expect("polytopes have vertices")
        .clone();
    let base_q = ivec_to_qvec(&base);
    let dirs: Vec<QVec> = p
        .vertices()
        .iter()
        .map(|v| qvec_sub(&ivec_to_qvec(v), &base_q))
        .filter(|q| !qvec_is_zero(q))
        .collect();
    let u_basis = sublattice_basis(d, &dirs);
    let k = u_basis.len();
    let u_q: Vec<QVec> = u_basis.iter().map(|v| ivec_to_qvec(v)).collect();
    let mut u_verts = Vec::new();
    if k == 0 {
        u_verts.push(Vec::new());
    } else {
        let umat = QMat::from_cols(&u_q);
        let pinv = umat
            .transpose()
            .mul(&umat)
            .inverse()
            .expect("lattice basis is independent")
            .mul(&umat.transpose());
        for v in p.vertices() {
            let diff = qvec_sub(&ivec_to_qvec(v), &base_q);
            u_verts.push(qvec_to_ivec(&pinv.mul_vec(&diff))?);
        }
    }
    let restricted = LatticePolytope::from_points(k, &u_verts)?;
    let h_restricted = h.subst_affine(&base_q, &u_q)?;
    let metric = if k == 0 {
        QMat::zero(0, 0)
    } else {
        let umat = QMat::from_cols(&u_q);
        umat.transpose().mul(ctx.space().metric()).mul(&umat)
    };
    let space = QSpace::with_metric(k, metric)?;
    Ok((ctx.subcontext(space), restricted, h_restricted))
}

/// Per-face contributions of the lattice sum, in face order. Requires a
/// full-dimensional polytope; degenerate ones go through
/// `restrict_to_span` first.
pub fn face_contributions(
    ctx: &MuContext,
    p: &LatticePolytope,
    h: &PolyFunc,
) -> Result<Vec<FaceContribution>> {
    if ctx.space().dim() != p.ambient_dim() {
        return Err(Error::DimMismatch(format!(
            "context dimension {} does not match polytope dimension {}",
            ctx.space().dim(),
            p.ambient_dim()
        )));
    }
    if h.nvars() != p.ambient_dim() {
        return Err(Error::DimMismatch(format!(
            "weight has {} variables, polytope lives in dimension {}",
            h.nvars(),
            p.ambient_dim()
        )));
    }
    if p.dim() != p.ambient_dim() {
        return Err(Error::InvalidPolytope(
            "face breakdown requires a full-dimensional polytope; restrict to the span first"
                .into(),
        ));
    }
    p.face_sets()
        .par_iter()
        .map(|f| face_contribution(ctx, p, f, h))
        .collect()
}

/// Exact value of `sum over p's lattice points of h`, computed through the
/// face expansion. Lower-dimensional polytopes are first rewritten inside
/// their affine lattice span.
pub fn lattice_sum(ctx: &MuContext, p: &LatticePolytope, h: &PolyFunc) -> Result<Rat> {
    let (rctx, rp, rh) = restrict_to_span(ctx, p, h)?;
    let mut total = Rat::zero();
    for c in face_contributions(&rctx, &rp, &rh)? {
        total += c.integral;
    }
    Ok(total)
}

/// Independent oracle: enumerate the lattice points of the bounding box,
/// filter by the facet inequalities, and sum the weight directly.
pub fn brute_force_sum(p: &LatticePolytope, h: &PolyFunc) -> Result<Rat> {
    if h.nvars() != p.ambient_dim() {
        return Err(Error::DimMismatch(format!(
            "weight has {} variables, polytope lives in dimension {}",
            h.nvars(),
            p.ambient_dim()
        )));
    }
    let (lo, hi) = p.bounding_box();
    let mut count: u128 = 1;
    for (l, u) in lo.iter().zip(&hi) {
        let width = u128::try_from(u - l + 1).expect("box bounds are ordered");
        count = count.saturating_mul(width);
        if count > BRUTE_FORCE_LIMIT {
            return Err(Error::InvalidPolytope(format!(
                "bounding box holds more than {BRUTE_FORCE_LIMIT} candidate points"
            )));
        }
    }
    let mut total = Rat::zero();
    for pt in p.lattice_points() {
        total += h.eval(&ivec_to_qvec(&pt))?;
    }
    Ok(total)
}

/// Term-by-term breakdown of the classical one-dimensional summation
/// formula on a lattice interval.
#[derive(Clone, Debug)]
pub struct Eml1d {
    pub integral: Rat,
    /// Term n (starting at n = 1): `-b(n)/n! * h^(n-1)(a1)`.
    pub lower: Vec<Rat>,
    /// Term n: `(-1)^n b(n)/n! * h^(n-1)(a2)`.
    pub upper: Vec<Rat>,
    pub total: Rat,
}

/// Evaluate the classical summation formula exactly on `[a1, a2]`:
/// the integral of `h` plus Bernoulli-weighted derivative corrections at
/// both endpoints. Equals `sum over x = a1..=a2 of h(x)`.
pub fn euler_maclaurin_1d(a1: &Int, a2: &Int, h: &PolyFunc) -> Result<Eml1d> {
    if h.nvars() != 1 {
        return Err(Error::DimMismatch(format!(
            "expected a univariate polynomial, got {} variables",
            h.nvars()
        )));
    }
    if a1 > a2 {
        return Err(Error::InvalidPolytope(
            "interval endpoints out of order".into(),
        ));
    }
    let x1 = Rat::from_integer(a1.clone());
    let x2 = Rat::from_integer(a2.clone());
    // Exact integral via the antiderivative.
    let mut integral = Rat::zero();
    for (e, c) in h.terms() {
        let k = e.0[0];
        let mut p1 = Rat::one();
        let mut p2 = Rat::one();
        for _ in 0..=k {
            p1 *= &x1;
            p2 *= &x2;
        }
        integral += c * (p2 - p1) / Rat::from_integer(Int::from(k + 1));
    }
    let deg = h.degree();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut derivative = h.clone();
    let mut total = integral.clone();
    for n in 1..=deg + 1 {
        // derivative currently holds h^(n-1).
        let b = bernoulli(n as usize) / Rat::from_integer(factorial(n));
        let at1 = derivative.eval(std::slice::from_ref(&x1))?;
        let at2 = derivative.eval(std::slice::from_ref(&x2))?;
        let lo = -&b * at1;
        let hi = if n % 2 == 0 { &b * at2 } else { -&b * at2 };
        total += &lo + &hi;
        lower.push(lo);
        upper.push(hi);
        derivative = derivative.partial(0)?;
    }
    Ok(Eml1d {
        integral,
        lower,
        upper,
        total,
    })
}
