//! Rational polyhedral cones, face lattices, duals, triangulations,
//! half-open decompositions and fans.
//!
//! Cones live in `Q^d` with the standard lattice and are generated by
//! integer rays. Construction normalises rays to primitive vectors, removes
//! duplicates and (for pointed cones) non-extreme generators, and computes
//! the facet structure eagerly by brute-force hyperplane enumeration inside
//! the cone's linear span. That enumeration is exponential in the number of
//! generators and is intended for desk-scale dimensions (<= 4).

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::ratlin::{
    ivec_dot, ivec_to_qvec, primitive, qvec_is_zero, qvec_to_ivec, snf, sublattice_basis, IMat,
    IVec, Int, QMat, QVec, Rat,
};
use crate::{Error, Result};

/// A facet of a cone: a primitive inward normal (an ambient functional
/// lying in the cone's span) together with the incident ray indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: IVec,
    pub rays: Vec<usize>,
}

/// A rational polyhedral cone generated by primitive integer rays.
///
/// `rays` are sorted, primitive and deduplicated; for pointed cones they
/// are exactly the extreme rays (non-extreme generators are dropped and
/// recorded in `dropped`).
#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    rays: Vec<IVec>,
    lin_dim: usize,
    pointed: bool,
    facets: Vec<Facet>,
    /// Ray-index sets of all faces (pointed cones only), sorted by
    /// (dimension, indices); includes the empty set and the full set.
    faces: Vec<Vec<usize>>,
    dropped: Vec<IVec>,
    /// Lattice basis of the saturated sublattice of the span (columns).
    span_basis: Vec<IVec>,
    /// Rays in span-basis coordinates.
    rays_span: Vec<IVec>,
    /// Facet normals in span coordinates, parallel to `facets`.
    normals_span: Vec<IVec>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl Cone {
    pub fn zero(dim: usize) -> Cone {
        Cone {
            dim,
            rays: Vec::new(),
            lin_dim: 0,
            pointed: true,
            facets: Vec::new(),
            faces: vec![Vec::new()],
            dropped: Vec::new(),
            span_basis: Vec::new(),
            rays_span: Vec::new(),
            normals_span: Vec::new(),
        }
    }

    pub fn from_int_rays(dim: usize, rays: &[IVec]) -> Result<Cone> {
        let qrays: Vec<QVec> = rays.iter().map(|r| ivec_to_qvec(r)).collect();
        Cone::from_rays(dim, &qrays)
    }

    pub fn from_rays(dim: usize, rays: &[QVec]) -> Result<Cone> {
        if dim > 8 {
            return Err(Error::DimTooLarge(dim));
        }
        let mut prim: Vec<IVec> = Vec::new();
        for r in rays {
            if r.len() != dim {
                return Err(Error::DimMismatch(format!(
                    "ray has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            if qvec_is_zero(r) {
                continue;
            }
            prim.push(primitive(r)?);
        }
        prim.sort();
        prim.dedup();
        if prim.is_empty() {
            return Ok(Cone::zero(dim));
        }

        let span_basis = sublattice_basis(dim, &prim.iter().map(|r| ivec_to_qvec(r)).collect::<Vec<_>>());
        let lin_dim = span_basis.len();
        let rays_span = span_coords(&span_basis, &prim)?;

        let (normals_span, incidences) = enumerate_facets(&rays_span, lin_dim);
        let pointed = rank_int(&normals_span, lin_dim) == lin_dim;

        let (rays, rays_span, dropped) = if pointed {
            let mut keep = Vec::new();
            let mut drop = Vec::new();
            for (i, r) in prim.iter().enumerate() {
                let active: Vec<IVec> = normals_span
                    .iter()
                    .zip(&incidences)
                    .filter(|(_, inc)| inc.contains(&i))
                    .map(|(n, _)| n.clone())
                    .collect();
                if rank_int(&active, lin_dim) == lin_dim.saturating_sub(1) {
                    keep.push(r.clone());
                } else {
                    drop.push(r.clone());
                }
            }
            let keep_span = span_coords(&span_basis, &keep)?;
            (keep, keep_span, drop)
        } else {
            (prim, rays_span, Vec::new())
        };

        // Re-derive incidences against the kept rays.
        let mut facet_data: Vec<(IVec, Vec<usize>)> = normals_span
            .iter()
            .map(|n| {
                let inc: Vec<usize> = rays_span
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| ivec_dot(n, r).is_zero())
                    .map(|(i, _)| i)
                    .collect();
                (n.clone(), inc)
            })
            .collect();

        // Ambient normals: pull span functionals back through the basis.
        let b = IMat::from_cols(&span_basis).to_rat();
        let left_inv = b
            .transpose()
            .mul(&b)
            .inverse()
            .expect("span basis is independent")
            .mul(&b.transpose());
        let mut facets: Vec<Facet> = Vec::new();
        for (n_span, inc) in facet_data.drain(..) {
            let n_q = left_inv
                .transpose()
                .mul_vec(&ivec_to_qvec(&n_span));
            let normal = primitive(&n_q)?;
            facets.push(Facet { normal, rays: inc });
        }
        let mut order: Vec<usize> = (0..facets.len()).collect();
        order.sort_by(|&a, &b| facets[a].normal.cmp(&facets[b].normal));
        let facets: Vec<Facet> = order.iter().map(|&i| facets[i].clone()).collect();
        let normals_span: Vec<IVec> = order.iter().map(|&i| normals_span[i].clone()).collect();

        // Face lattice by closure under intersections with facets.
        let faces = if pointed {
            let full: Vec<usize> = (0..rays.len()).collect();
            let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
            sets.insert(full);
            loop {
                let mut added = false;
                let snapshot: Vec<Vec<usize>> = sets.iter().cloned().collect();
                for s in &snapshot {
                    for f in &facets {
                        let inter: Vec<usize> = s
                            .iter()
                            .copied()
                            .filter(|i| f.rays.contains(i))
                            .collect();
                        if sets.insert(inter) {
                            added = true;
                        }
                    }
                }
                if !added {
                    break;
                }
            }
            if rays.is_empty() {
                sets.insert(Vec::new());
            }
            let mut faces: Vec<Vec<usize>> = sets.into_iter().collect();
            faces.sort_by_key(|s| (s.len(), s.clone()));
            faces
        } else {
            Vec::new()
        };

        Ok(Cone {
            dim,
            rays,
            lin_dim,
            pointed,
            facets,
            faces,
            dropped,
            span_basis,
            rays_span,
            normals_span,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lin_dim(&self) -> usize {
        self.lin_dim
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn is_fulldim(&self) -> bool {
        self.lin_dim == self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.pointed && self.rays.len() == self.lin_dim
    }

    /// Input generators that were dropped as non-extreme.
    pub fn dropped_rays(&self) -> &[IVec] {
        &self.dropped
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Lattice basis (columns) of the saturated sublattice of the span.
    pub fn span_basis(&self) -> &[IVec] {
        &self.span_basis
    }

    /// Rays expressed in span-basis coordinates.
    pub fn rays_in_span(&self) -> &[IVec] {
        &self.rays_span
    }

    /// Ray-index sets of all faces, sorted by (cardinality, indices).
    /// Requires a pointed cone.
    pub fn face_index_sets(&self) -> Result<&[Vec<usize>]> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        Ok(&self.faces)
    }

    /// The face spanned by the given ray indices, as a cone.
    pub fn face_cone(&self, indices: &[usize]) -> Result<Cone> {
        let rays: Vec<IVec> = indices.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::from_int_rays(self.dim, &rays)
    }

    /// All faces as cones, sorted by (dimension, rays).
    pub fn faces(&self) -> Result<Vec<Cone>> {
        let sets = self.face_index_sets()?.to_vec();
        let mut out = Vec::new();
        for s in &sets {
            out.push(self.face_cone(s)?);
        }
        Ok(out)
    }

    /// Exact membership test.
    pub fn contains(&self, x: &[Rat]) -> bool {
        if qvec_is_zero(x) {
            return true;
        }
        if self.rays.is_empty() {
            return false;
        }
        // x must lie in the span: solve B y = x.
        let b = IMat::from_cols(&self.span_basis).to_rat();
        let gram_inv = match b.transpose().mul(&b).inverse() {
            Ok(g) => g,
            Err(_) => return false,
        };
        let y = gram_inv.mul_vec(&b.transpose().mul_vec(x));
        if b.mul_vec(&y) != x {
            return false;
        }
        self.normals_span
            .iter()
            .all(|n| !crate::ratlin::qvec_dot(&ivec_to_qvec(n), &y).is_negative())
    }

    /// Inward facet normals double as the extreme rays of the dual cone
    /// when the cone is full-dimensional and pointed.
    pub fn dual_fulldim(&self) -> Result<Cone> {
        if !self.is_fulldim() {
            return Err(Error::NotFullDim);
        }
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        let rays: Vec<IVec> = self.facets.iter().map(|f| f.normal.clone()).collect();
        Cone::from_int_rays(self.dim, &rays)
    }

    /// Dual rays of a full-dimensional simplicial cone, paired with the
    /// input rays: `<dual[i], rays[j]> = 0` for `i != j` and `> 0` for
    /// `i == j`.
    pub fn dual_rays_paired(&self) -> Result<Vec<IVec>> {
        if !self.is_fulldim() {
            return Err(Error::NotFullDim);
        }
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let r = IMat::from_cols(&self.rays).to_rat();
        let inv = r.inverse().map_err(|_| Error::NotSimplicial)?;
        (0..self.dim).map(|i| primitive(&inv.row(i))).collect()
    }

    pub fn dual_simplicial(&self) -> Result<Cone> {
        Cone::from_int_rays(self.dim, &self.dual_rays_paired()?)
    }

    /// Half-space description: inward facet normals (inequalities) plus
    /// span equations encoded as opposite inequality pairs.
    pub fn halfspace_description(&self) -> Vec<IVec> {
        if self.rays.is_empty() {
            // The zero cone: x >= 0 and -x >= 0 coordinatewise.
            let mut out = Vec::new();
            for i in 0..self.dim {
                let mut e = vec![Int::zero(); self.dim];
                e[i] = Int::one();
                out.push(e.clone());
                out.push(e.iter().map(|x| -x).collect());
            }
            return out;
        }
        let mut out: Vec<IVec> = self.facets.iter().map(|f| f.normal.clone()).collect();
        // Annihilator of the span: integer kernel of the transposed ray
        // matrix, written as +/- inequality pairs.
        if self.lin_dim < self.dim {
            let m = IMat::from_rows(&self.rays);
            for a in crate::ratlin::integer_kernel(&m) {
                out.push(a.clone());
                out.push(a.iter().map(|x| -x).collect());
            }
        }
        out
    }

    /// Intersection of two pointed cones in the same space.
    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(
                "cannot intersect cones of different ambient dimension".into(),
            ));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Cone::zero(self.dim));
        }
        let mut ineqs = self.halfspace_description();
        ineqs.extend(other.halfspace_description());
        cone_from_inequalities(self.dim, &ineqs)
    }

    /// Multiplicity: the index of the sublattice spanned by the rays of a
    /// simplicial cone inside the saturated lattice of its span. The zero
    /// cone has multiplicity one.
    pub fn mult(&self) -> Result<Int> {
        if self.is_zero() {
            return Ok(Int::one());
        }
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let v = IMat::from_cols(&self.rays_span);
        Ok(v.det().abs())
    }

    /// Pulling triangulation: simplicial cones of the same span, using only
    /// extreme rays, with the lexicographically smallest ray as the apex at
    /// every level. Deterministic and independent of input ray order.
    pub fn triangulate(&self) -> Result<Vec<Cone>> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        if self.is_simplicial() {
            return Ok(vec![self.clone()]);
        }
        let apex = 0usize; // rays are sorted, so rays[0] is lex-smallest
        let mut pieces = Vec::new();
        for f in &self.facets {
            if f.rays.contains(&apex) {
                continue;
            }
            let facet_cone = self.face_cone(&f.rays)?;
            for p in facet_cone.triangulate()? {
                let mut rays = p.rays().to_vec();
                rays.push(self.rays[apex].clone());
                pieces.push(Cone::from_int_rays(self.dim, &rays)?);
            }
        }
        Ok(pieces)
    }
}

fn span_coords(basis: &[IVec], vecs: &[IVec]) -> Result<Vec<IVec>> {
    if basis.is_empty() {
        return if vecs.is_empty() {
            Ok(Vec::new())
        } else {
            Err(Error::DimMismatch("empty span basis".into()))
        };
    }
    let b = IMat::from_cols(basis).to_rat();
    let gram_inv = b
        .transpose()
        .mul(&b)
        .inverse()
        .map_err(|_| Error::DependentVectors("span basis".into()))?;
    let proj = gram_inv.mul(&b.transpose());
    let mut out = Vec::new();
    for v in vecs {
        let vq = ivec_to_qvec(v);
        let y = proj.mul_vec(&vq);
        if b.mul_vec(&y) != vq {
            return Err(Error::DimMismatch(
                "vector does not lie in the span".into(),
            ));
        }
        out.push(qvec_to_ivec(&y)?);
    }
    Ok(out)
}

/// Brute-force facet enumeration for a cone of full dimension `k` in span
/// coordinates: candidate hyperplanes through (k-1)-subsets of generators,
/// kept when all generators lie weakly on one side.
fn enumerate_facets(rays: &[IVec], k: usize) -> (Vec<IVec>, Vec<Vec<usize>>) {
    let mut normals: BTreeSet<IVec> = BTreeSet::new();
    if k == 0 {
        return (Vec::new(), Vec::new());
    }
    for subset in (0..rays.len()).combinations(k - 1) {
        let rows: Vec<QVec> = subset.iter().map(|&i| ivec_to_qvec(&rays[i])).collect();
        let kernel = if rows.is_empty() {
            vec![vec![Rat::one(); 1]]
        } else {
            QMat::from_rows(&rows).kernel_basis()
        };
        if kernel.len() != 1 {
            continue;
        }
        let n = match primitive(&kernel[0]) {
            Ok(n) => n,
            Err(_) => continue,
        };
        let mut pos = false;
        let mut neg = false;
        for r in rays {
            let d = ivec_dot(&n, r);
            if d.is_positive() {
                pos = true;
            } else if d.is_negative() {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        let oriented: IVec = if neg { n.iter().map(|x| -x).collect() } else { n };
        normals.insert(oriented);
    }
    let normals: Vec<IVec> = normals.into_iter().collect();
    let incidences: Vec<Vec<usize>> = normals
        .iter()
        .map(|n| {
            rays.iter()
                .enumerate()
                .filter(|(_, r)| ivec_dot(n, r).is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    (normals, incidences)
}

fn rank_int(rows: &[IVec], width: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let _ = width;
    QMat::from_rows(&rows.iter().map(|r| ivec_to_qvec(r)).collect::<Vec<_>>()).rank()
}

/// Extreme rays of the pointed cone `{x : a x >= 0 for each row a}`,
/// by brute force over (dim-1)-subsets of rows. Errors if the described
/// cone is not pointed.
pub fn cone_from_inequalities(dim: usize, ineqs: &[IVec]) -> Result<Cone> {
    if ineqs.is_empty() {
        return Err(Error::NotPointed);
    }
    let m = QMat::from_rows(&ineqs.iter().map(|r| ivec_to_qvec(r)).collect::<Vec<_>>());
    if !m.kernel_basis().is_empty() {
        return Err(Error::NotPointed);
    }
    let mut rays: BTreeSet<IVec> = BTreeSet::new();
    for subset in (0..ineqs.len()).combinations(dim.saturating_sub(1)) {
        let rows: Vec<QVec> = subset.iter().map(|&i| ivec_to_qvec(&ineqs[i])).collect();
        let kernel = if rows.is_empty() {
            if dim == 1 {
                vec![vec![Rat::one()]]
            } else {
                continue;
            }
        } else {
            QMat::from_rows(&rows).kernel_basis()
        };
        if kernel.len() != 1 {
            continue;
        }
        let k = primitive(&kernel[0])?;
        let feasible = |v: &IVec| ineqs.iter().all(|a| !ivec_dot(a, v).is_negative());
        if feasible(&k) {
            rays.insert(k);
        } else {
            let neg: IVec = k.iter().map(|x| -x).collect();
            if feasible(&neg) {
                rays.insert(neg);
            }
        }
    }
    Cone::from_int_rays(dim, &rays.into_iter().collect::<Vec<_>>())
}

/// A simplicial cone with a subset of its facets removed: coordinate `i`
/// ranges over `[0,1)` when kept, `(0,1]` when `excluded[i]` (the facet
/// opposite ray `i` is open).
#[derive(Clone, Debug)]
pub struct HalfOpenCone {
    pub cone: Cone,
    pub excluded: Vec<bool>,
}

impl HalfOpenCone {
    pub fn closed(cone: Cone) -> Result<HalfOpenCone> {
        if !cone.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let n = cone.rays().len();
        Ok(HalfOpenCone {
            cone,
            excluded: vec![false; n],
        })
    }

    /// Membership of a lattice/rational point in the half-open cone.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let k = self.cone.rays().len();
        if k == 0 {
            return qvec_is_zero(x);
        }
        let b = IMat::from_cols(self.cone.span_basis()).to_rat();
        let gram_inv = match b.transpose().mul(&b).inverse() {
            Ok(g) => g,
            Err(_) => return false,
        };
        let y = gram_inv.mul_vec(&b.transpose().mul_vec(x));
        if b.mul_vec(&y) != x {
            return false;
        }
        let v = IMat::from_cols(self.cone.rays_in_span()).to_rat();
        let t = match v.inverse() {
            Ok(inv) => inv.mul_vec(&y),
            Err(_) => return false,
        };
        t.iter().zip(&self.excluded).all(|(ti, &excl)| {
            if excl {
                ti.is_positive()
            } else {
                !ti.is_negative()
            }
        })
    }
}

/// Half-open decomposition of a simplicial subdivision: given pieces that
/// tile a cone and an interior witness point, mark each piece facet as
/// excluded when the (symbolically perturbed) witness lies strictly on its
/// far side. Lattice points of the union are then counted exactly once.
pub fn half_open_decompose(pieces: &[Cone], witness: &[Rat]) -> Result<Vec<HalfOpenCone>> {
    if pieces.is_empty() {
        return Ok(Vec::new());
    }
    let dim = pieces[0].dim();
    if witness.len() != dim {
        return Err(Error::DimMismatch("witness has wrong dimension".into()));
    }
    if !pieces.iter().any(|p| p.contains(witness)) {
        return Err(Error::WitnessOutside);
    }
    let mut out = Vec::new();
    for piece in pieces {
        if !piece.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        let k = piece.rays().len();
        // Inward normal of the facet opposite ray i, as an ambient
        // functional lying in the span: row i of the pseudo-inverse of the
        // ray matrix.
        let r = IMat::from_cols(piece.rays()).to_rat();
        let gram_inv = r
            .transpose()
            .mul(&r)
            .inverse()
            .map_err(|_| Error::NotSimplicial)?;
        let pinv = gram_inv.mul(&r.transpose());
        let mut excluded = vec![false; k];
        for (i, excl) in excluded.iter_mut().enumerate() {
            let eta = pinv.row(i);
            // Lexicographic sign of <eta, witness + eps e_1 + eps^2 e_2 + ...>.
            let mut sign = crate::ratlin::qvec_dot(&eta, witness);
            if sign.is_zero() {
                for coord in eta.iter() {
                    if !coord.is_zero() {
                        sign = coord.clone();
                        break;
                    }
                }
            }
            debug_assert!(!sign.is_zero(), "perturbed witness still on a wall");
            *excl = sign.is_negative();
        }
        out.push(HalfOpenCone {
            cone: piece.clone(),
            excluded,
        });
    }
    Ok(out)
}

/// All lattice points `sum t_i v_i` with `t_i` in `[0,1)` (kept facets) or
/// `(0,1]` (excluded facets), enumerated through the Smith normal form of
/// the ray matrix in the saturated span lattice. The count equals the
/// multiplicity.
pub fn box_points(h: &HalfOpenCone) -> Result<Vec<IVec>> {
    let cone = &h.cone;
    if cone.is_zero() {
        return Ok(vec![vec![Int::zero(); cone.dim()]]);
    }
    if !cone.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let k = cone.rays().len();
    let v = IMat::from_cols(cone.rays_in_span());
    let (u, s, _w) = snf(&v);
    let u_inv = u
        .to_rat()
        .inverse()
        .expect("unimodular matrix is invertible")
        .to_int()?;
    let v_inv = v.to_rat().inverse().map_err(|_| Error::NotSimplicial)?;
    let b = IMat::from_cols(cone.span_basis());

    // Cartesian product over diagonal residues.
    let diag: Vec<Int> = (0..k).map(|i| s[(i, i)].clone()).collect();
    let mut reps: Vec<Vec<Int>> = vec![Vec::new()];
    for d in &diag {
        let mut next = Vec::new();
        let bound = d.abs();
        let mut a = Int::zero();
        while a < bound {
            for r in &reps {
                let mut r2 = r.clone();
                r2.push(a.clone());
                next.push(r2);
            }
            a += 1;
        }
        reps = next;
    }

    let mut out = Vec::new();
    for a in reps {
        // Coset representative in span coordinates.
        let x: IVec = (0..k)
            .map(|i| (0..k).map(|j| &u_inv[(i, j)] * &a[j]).sum())
            .collect();
        // Reduce into the half-open box.
        let t = v_inv.mul_vec(&ivec_to_qvec(&x));
        let shifted: QVec = t
            .iter()
            .zip(&h.excluded)
            .map(|(ti, &excl)| {
                if excl {
                    ti - Rat::from_integer(ti.ceil().to_integer() - Int::one())
                } else {
                    ti - Rat::from_integer(ti.floor().to_integer())
                }
            })
            .collect();
        let span_pt = IMat::from_cols(cone.rays_in_span())
            .to_rat()
            .mul_vec(&shifted);
        let ambient = b.to_rat().mul_vec(&span_pt);
        out.push(qvec_to_ivec(&ambient)?);
    }
    out.sort();
    Ok(out)
}

/// A fan: a finite family of pointed cones closed under taking faces.
#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    /// Builds a fan from generating cones by closing under faces and
    /// deduplicating. All cones must be pointed.
    pub fn from_cones(dim: usize, gens: &[Cone]) -> Result<Fan> {
        let mut seen: BTreeSet<Vec<IVec>> = BTreeSet::new();
        let mut cones: Vec<Cone> = Vec::new();
        for g in gens {
            if g.dim() != dim {
                return Err(Error::InvalidFan(
                    "cone ambient dimension does not match the fan".into(),
                ));
            }
            if !g.is_pointed() {
                return Err(Error::InvalidFan("fan cones must be pointed".into()));
            }
            for f in g.faces()? {
                if seen.insert(f.rays().to_vec()) {
                    cones.push(f);
                }
            }
        }
        cones.sort_by_key(|c| (c.lin_dim(), c.rays().to_vec()));
        Ok(Fan { dim, cones })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.lin_dim() == k)
    }

    pub fn fulldim_cones(&self) -> impl Iterator<Item = &Cone> {
        self.cones_of_dim(self.dim)
    }

    /// Checks that pairwise intersections are common faces, and (when
    /// `complete`) the two-sided facet condition: every cone of dimension
    /// `dim - 1` is a facet of exactly two full-dimensional cones.
    pub fn validate(&self, complete: bool) -> Result<()> {
        for (i, c) in self.cones.iter().enumerate() {
            for d in self.cones.iter().skip(i + 1) {
                let inter = c.intersect(d)?;
                let key = inter.rays().to_vec();
                let is_face_of = |cone: &Cone| -> Result<bool> {
                    for s in cone.face_index_sets()? {
                        let face_rays: Vec<IVec> =
                            s.iter().map(|&j| cone.rays()[j].clone()).collect();
                        let mut sorted = face_rays;
                        sorted.sort();
                        if sorted == key {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                };
                if !is_face_of(c)? || !is_face_of(d)? {
                    return Err(Error::InvalidFan(format!(
                        "intersection of cones {:?} and {:?} is not a common face",
                        c.rays(),
                        d.rays()
                    )));
                }
            }
        }
        if complete {
            if self.dim == 0 {
                return Ok(());
            }
            let maximal: Vec<&Cone> = self.fulldim_cones().collect();
            if maximal.is_empty() {
                return Err(Error::InvalidFan(
                    "claimed complete but has no full-dimensional cone".into(),
                ));
            }
            for ridge in self.cones_of_dim(self.dim - 1) {
                let key = ridge.rays().to_vec();
                let mut count = 0;
                for m in &maximal {
                    for s in m.face_index_sets()? {
                        let mut face_rays: Vec<IVec> =
                            s.iter().map(|&j| m.rays()[j].clone()).collect();
                        face_rays.sort();
                        if face_rays == key {
                            count += 1;
                        }
                    }
                }
                if count != 2 {
                    return Err(Error::InvalidFan(format!(
                        "cone {:?} of codimension one borders {count} full-dimensional cones, expected 2",
                        ridge.rays()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Looks up a cone by its sorted primitive rays.
    pub fn find(&self, rays: &[IVec]) -> Option<&Cone> {
        let mut key = rays.to_vec();
        key.sort();
        self.cones.iter().find(|c| c.rays() == key.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{ivec, qvec};

    fn cone2(rays: &[&[i64]]) -> Cone {
        Cone::from_int_rays(
            rays[0].len(),
            &rays.iter().map(|r| ivec(r)).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn orthant_facets_and_faces() {
        let c = cone2(&[&[1, 0], &[0, 1]]);
        assert!(c.is_pointed());
        assert!(c.is_simplicial());
        let normals: Vec<IVec> = c.facets().iter().map(|f| f.normal.clone()).collect();
        assert_eq!(normals, vec![ivec(&[0, 1]), ivec(&[1, 0])]);
        assert_eq!(c.face_index_sets().unwrap().len(), 4);
    }

    #[test]
    fn cone_over_square_has_ten_faces() {
        let c = cone2(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]);
        assert!(c.is_pointed());
        assert!(!c.is_simplicial());
        assert_eq!(c.facets().len(), 4);
        assert_eq!(c.face_index_sets().unwrap().len(), 10);
    }

    #[test]
    fn non_extreme_ray_is_dropped() {
        let c = cone2(&[&[1, 0], &[1, 1], &[0, 1]]);
        assert_eq!(c.rays().len(), 2);
        assert_eq!(c.dropped_rays(), &[ivec(&[1, 1])]);
    }

    #[test]
    fn halfplane_is_not_pointed() {
        let c = cone2(&[&[1, 0], &[-1, 0], &[0, 1]]);
        assert!(!c.is_pointed());
        assert!(c.face_index_sets().is_err());
    }

    #[test]
    fn line_cone_detects_nonpointed() {
        let c = cone2(&[&[1], &[-1]]);
        assert!(!c.is_pointed());
        assert!(c.is_fulldim());
    }

    #[test]
    fn dual_simplicial_example() {
        let c = cone2(&[&[1, 0], &[1, 2]]);
        let paired = c.dual_rays_paired().unwrap();
        // rays are sorted at construction: (1,0), (1,2).
        assert_eq!(c.rays(), &[ivec(&[1, 0]), ivec(&[1, 2])]);
        assert_eq!(paired, vec![ivec(&[2, -1]), ivec(&[0, 1])]);
        let d = c.dual_simplicial().unwrap();
        assert_eq!(d.rays(), &[ivec(&[0, 1]), ivec(&[2, -1])]);
    }

    #[test]
    fn dual_of_cone_over_square_is_cone_over_dual_square() {
        let c = cone2(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]);
        let d = c.dual_fulldim().unwrap();
        let mut expect = vec![
            ivec(&[1, 0, 1]),
            ivec(&[-1, 0, 1]),
            ivec(&[0, 1, 1]),
            ivec(&[0, -1, 1]),
        ];
        expect.sort();
        assert_eq!(d.rays(), expect.as_slice());
    }

    #[test]
    fn intersection_is_shared_face() {
        let a = cone2(&[&[1, 0], &[1, 2]]);
        let b = cone2(&[&[1, 2], &[0, 1]]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.rays(), &[ivec(&[1, 2])]);
        let disjoint = cone2(&[&[0, -1], &[-1, 0]]);
        let z = a.intersect(&disjoint).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn mult_of_singular_cone() {
        let c = cone2(&[&[1, 0], &[1, 2]]);
        assert_eq!(c.mult().unwrap(), Int::from(2));
        let unimod = cone2(&[&[1, 0], &[0, 1]]);
        assert_eq!(unimod.mult().unwrap(), Int::from(1));
        // Lower-dimensional: a single ray always has multiplicity one after
        // primitivisation.
        let ray = cone2(&[&[2, 2]]);
        assert_eq!(ray.rays(), &[ivec(&[1, 1])]);
        assert_eq!(ray.mult().unwrap(), Int::from(1));
    }

    #[test]
    fn box_points_of_singular_cone() {
        let c = cone2(&[&[1, 0], &[1, 2]]);
        let h = HalfOpenCone::closed(c).unwrap();
        let pts = box_points(&h).unwrap();
        assert_eq!(pts, vec![ivec(&[0, 0]), ivec(&[1, 1])]);
        // Excluding a facet shifts the box points off that facet.
        let c = cone2(&[&[1, 0], &[1, 2]]);
        let h = HalfOpenCone {
            excluded: vec![true, false],
            cone: c,
        };
        let pts = box_points(&h).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            // In coordinates t of the rays, t_0 must now be positive.
            assert_ne!(p, &ivec(&[0, 0]));
        }
    }

    #[test]
    fn box_count_equals_mult() {
        for rays in [
            vec![ivec(&[1, 0]), ivec(&[1, 2])],
            vec![ivec(&[2, 1]), ivec(&[1, 3])],
            vec![ivec(&[1, 0, 0]), ivec(&[1, 2, 0]), ivec(&[1, 1, 3])],
        ] {
            let c = Cone::from_int_rays(rays[0].len(), &rays).unwrap();
            let m = c.mult().unwrap();
            let h = HalfOpenCone::closed(c).unwrap();
            let pts = box_points(&h).unwrap();
            assert_eq!(Int::from(pts.len()), m);
        }
    }

    #[test]
    fn triangulate_cone_over_square() {
        let c = cone2(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]);
        let pieces = c.triangulate().unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert!(p.is_simplicial());
            assert!(p.is_fulldim());
            // Apex (lex-smallest ray) is shared.
            assert!(p.rays().contains(&ivec(&[-1, -1, 1])));
        }
        // Face-to-face: the intersection of the two pieces is a common face.
        let inter = pieces[0].intersect(&pieces[1]).unwrap();
        assert_eq!(inter.lin_dim(), 2);
    }

    #[test]
    fn triangulate_hexagon_cone() {
        // Cone over a hexagon: pulling gives 4 pieces.
        let rays: Vec<IVec> = vec![
            ivec(&[2, 0, 1]),
            ivec(&[1, 2, 1]),
            ivec(&[-1, 2, 1]),
            ivec(&[-2, 0, 1]),
            ivec(&[-1, -2, 1]),
            ivec(&[1, -2, 1]),
        ];
        let c = Cone::from_int_rays(3, &rays).unwrap();
        let pieces = c.triangulate().unwrap();
        assert_eq!(pieces.len(), 4);
        // All pieces share the lex-smallest ray.
        for p in &pieces {
            assert!(p.rays().contains(&ivec(&[-2, 0, 1])));
        }
    }

    #[test]
    fn half_open_line_subdivision() {
        let plus = cone2(&[&[1]]);
        let minus = cone2(&[&[-1]]);
        let pieces = vec![plus, minus];
        let ho = half_open_decompose(&pieces, &qvec(&[1])).unwrap();
        // Witness 1 lies inside R+; the R- piece must exclude the origin.
        assert!(!ho[0].excluded[0]);
        assert!(ho[1].excluded[0]);
        // Each integer is in exactly one piece.
        for z in -5..=5i64 {
            let x = qvec(&[z]);
            let count = ho.iter().filter(|h| h.contains(&x)).count();
            assert_eq!(count, 1, "point {z}");
        }
    }

    #[test]
    fn half_open_partition_of_split_quadrant() {
        let a = cone2(&[&[1, 0], &[1, 1]]);
        let b = cone2(&[&[1, 1], &[0, 1]]);
        let union = cone2(&[&[1, 0], &[0, 1]]);
        let ho = half_open_decompose(&[a, b], &qvec(&[2, 1])).unwrap();
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                let p = qvec(&[x, y]);
                let expect = usize::from(union.contains(&p));
                let count = ho.iter().filter(|h| h.contains(&p)).count();
                assert_eq!(count, expect, "point ({x},{y})");
            }
        }
    }

    #[test]
    fn witness_outside_is_rejected() {
        let a = cone2(&[&[1, 0], &[1, 1]]);
        let err = half_open_decompose(&[a], &qvec(&[-1, 5])).unwrap_err();
        assert!(matches!(err, Error::WitnessOutside));
    }

    #[test]
    fn fan_closure_and_completeness() {
        let p1 = Fan::from_cones(1, &[cone2(&[&[1]]), cone2(&[&[-1]])]).unwrap();
        assert_eq!(p1.cones().len(), 3);
        p1.validate(true).unwrap();

        let p2 = Fan::from_cones(
            2,
            &[
                cone2(&[&[1, 0], &[0, 1]]),
                cone2(&[&[0, 1], &[-1, -1]]),
                cone2(&[&[-1, -1], &[1, 0]]),
            ],
        )
        .unwrap();
        assert_eq!(p2.cones().len(), 7);
        p2.validate(true).unwrap();

        // Dropping one maximal cone breaks completeness.
        let partial = Fan::from_cones(
            2,
            &[
                cone2(&[&[1, 0], &[0, 1]]),
                cone2(&[&[0, 1], &[-1, -1]]),
            ],
        )
        .unwrap();
        partial.validate(false).unwrap();
        assert!(partial.validate(true).is_err());
    }

    #[test]
    fn overlapping_fan_is_rejected() {
        let overlapping = Fan::from_cones(
            2,
            &[
                cone2(&[&[1, 0], &[0, 1]]),
                cone2(&[&[1, 1], &[-1, 1]]),
            ],
        )
        .unwrap();
        assert!(overlapping.validate(false).is_err());
    }

    #[test]
    fn cone_from_inequalities_recovers_orthant() {
        let c = cone_from_inequalities(2, &[ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!(c.rays(), &[ivec(&[0, 1]), ivec(&[1, 0])]);
        // Opposite pairs give the zero cone.
        let z = cone_from_inequalities(1, &[ivec(&[1]), ivec(&[-1])]).unwrap();
        assert!(z.is_zero());
    }
}
