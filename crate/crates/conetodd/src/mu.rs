//! Local correction germs for exact lattice-point summation over cones.
//!
//! The central identity expresses the exponential lattice-point sum of a
//! pointed full-dimensional cone as a sum over its faces: each face
//! contributes its exponential volume integral weighted by a holomorphic
//! germ attached to the transverse cone along that face. Solving the
//! identity for the top term defines the germ `mu` recursively; `mu_star`
//! is its dual-side variant used for Todd expansions of fans.
//!
//! All germs are represented as [`PoleCleared`] forms or truncated series
//! with exact rational coefficients; pole cancellations are verified by
//! exact division, never by numeric cutoff.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::cones::{box_points, cone_from_inequalities, half_open_decompose, Cone};
use crate::ratlin::{
    ivec_to_qvec, primitive, qvec_add, qvec_dot, qvec_is_zero, IVec, QMat, QSpace, QVec,
    QuotientModel, Rat,
};
use crate::series::{PoleCleared, TruncSeries};
use crate::{Error, Result};

/// Exponential lattice-point sum of a cone as a pole-cleared form, trusted
/// through `trusted`. Non-pointed cones sum to zero by definition; the zero
/// cone sums to 1. Works for lower-dimensional cones (the lattice measure
/// is the one of the span).
pub fn s_series_general(cone: &Cone, trusted: u32) -> Result<PoleCleared> {
    let d = cone.dim();
    if cone.is_zero() {
        return Ok(PoleCleared::from_series(TruncSeries::one(d, trusted)));
    }
    if !cone.is_pointed() {
        return Ok(PoleCleared::zero(d, trusted));
    }
    let pieces = cone.triangulate()?;
    let mut witness = vec![Rat::from_integer(0.into()); d];
    for r in cone.rays() {
        witness = qvec_add(&witness, &ivec_to_qvec(r));
    }
    let half_open = half_open_decompose(&pieces, &witness)?;
    let k = cone.lin_dim() as u32;
    let num_order = trusted + k;

    let mut parts = Vec::with_capacity(half_open.len());
    for h in &half_open {
        let mut boxsum = TruncSeries::zero(d, num_order);
        for pt in box_points(h)? {
            boxsum = boxsum.add(&TruncSeries::exp_linform(&ivec_to_qvec(&pt), num_order))?;
        }
        let mut num = boxsum;
        let mut denoms: Vec<QVec> = Vec::with_capacity(h.cone.rays().len());
        for ray in h.cone.rays() {
            let v = ivec_to_qvec(ray);
            num = num.mul(&TruncSeries::todd_one_var(&v, num_order))?;
            denoms.push(v);
        }
        parts.push(PoleCleared::new(Rat::one(), num, &denoms)?);
    }
    PoleCleared::join(&parts)
}

/// The exponential volume integral of a face, one pole-cleared term per
/// triangulation piece: a piece with primitive edges `v_1..v_k` and
/// multiplicity `m` contributes `m * prod 1/<-xi, v_j>`. Numerators are
/// sized so each piece is trusted through `trusted`.
pub fn i_form_pieces(face: &Cone, trusted: u32) -> Result<Vec<PoleCleared>> {
    let d = face.dim();
    if face.is_zero() {
        return Ok(vec![PoleCleared::from_series(TruncSeries::one(d, trusted))]);
    }
    if !face.is_pointed() {
        return Err(Error::NotPointed);
    }
    let k = face.lin_dim();
    let mut out = Vec::new();
    for piece in face.triangulate()? {
        let mut scale = Rat::from_integer(piece.mult()?);
        if k % 2 == 1 {
            scale = -scale;
        }
        let num = TruncSeries::one(d, trusted + k as u32);
        let denoms: Vec<QVec> = piece.rays().iter().map(|r| ivec_to_qvec(r)).collect();
        out.push(PoleCleared::new(scale, num, &denoms)?);
    }
    Ok(out)
}

/// The exponential volume integral of a face as a single joined form.
pub fn i_form(face: &Cone, trusted: u32) -> Result<PoleCleared> {
    PoleCleared::join(&i_form_pieces(face, trusted)?)
}

/// Quotient model along the span of a face together with the image of a
/// cone in it: rays are projected, zero images dropped, and the result is
/// primitivised with respect to the projected lattice.
pub fn transverse_cone(
    space: &QSpace,
    parent: &Cone,
    face_rays: &[IVec],
) -> Result<(QuotientModel, Cone)> {
    let span: Vec<QVec> = face_rays.iter().map(|r| ivec_to_qvec(r)).collect();
    let model = QuotientModel::new(space, &span)?;
    let mut rays: Vec<QVec> = Vec::new();
    for r in parent.rays() {
        let p = model.project_point(&ivec_to_qvec(r));
        if !qvec_is_zero(&p) {
            rays.push(p);
        }
    }
    let image = Cone::from_rays(model.model_dim(), &rays)?;
    Ok((model, image))
}

type MuKey = (usize, Vec<Rat>, Vec<IVec>);

/// Evaluation context: the ambient space (lattice plus scalar product) and
/// a memo table shared across quotient models. Cloning shares the table.
#[derive(Clone)]
pub struct MuContext {
    space: QSpace,
    cache: Arc<Mutex<HashMap<MuKey, (u32, TruncSeries)>>>,
}

impl MuContext {
    pub fn new(space: QSpace) -> MuContext {
        MuContext {
            space,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn standard(dim: usize) -> MuContext {
        MuContext::new(QSpace::standard(dim))
    }

    pub fn space(&self) -> &QSpace {
        &self.space
    }

    pub(crate) fn subcontext(&self, space: QSpace) -> MuContext {
        MuContext {
            space,
            cache: Arc::clone(&self.cache),
        }
    }

    fn cache_key(&self, cone: &Cone) -> MuKey {
        let d = self.space.dim();
        let metric: Vec<Rat> = (0..d).flat_map(|i| self.space.metric().row(i)).collect();
        (d, metric, cone.rays().to_vec())
    }

    /// The holomorphic correction germ of a pointed full-dimensional cone,
    /// as a series trusted through `order`. The germ of the zero cone is 1.
    ///
    /// Defined by solving the face identity
    /// `S(c) = sum over faces f of pullback(mu(t(c,f))) * I(f)`
    /// for the `f = {0}` term, where the transverse germs of proper faces
    /// come from lower-dimensional quotient models.
    pub fn mu(&self, cone: &Cone, order: u32) -> Result<TruncSeries> {
        let d = self.space.dim();
        if cone.dim() != d {
            return Err(Error::DimMismatch(format!(
                "cone lives in dimension {}, context in {d}",
                cone.dim()
            )));
        }
        if cone.is_zero() {
            return Ok(TruncSeries::one(d, order));
        }
        if !cone.is_pointed() {
            return Err(Error::NotPointed);
        }
        if !cone.is_fulldim() {
            return Err(Error::NotFullDim);
        }

        let key = self.cache_key(cone);
        if let Some((cached_order, series)) = self.cache.lock().unwrap().get(&key) {
            if *cached_order >= order {
                return Ok(series.truncate(order));
            }
        }

        let mut terms = vec![s_series_general(cone, order)?];
        for face_set in cone.face_index_sets()?.to_vec() {
            if face_set.is_empty() {
                continue;
            }
            let f_cone = cone.face_cone(&face_set)?;
            let f_dim = f_cone.lin_dim() as u32;
            let (model, image) = transverse_cone(&self.space, cone, f_cone.rays())?;
            let mu_t = if model.model_dim() == 0 {
                TruncSeries::one(0, order + f_dim)
            } else {
                self.subcontext(model.model_space().clone())
                    .mu(&image, order + f_dim)?
            };
            let pulled = mu_t.subst_linear(&model.dual_extension_matrix())?;
            for piece in i_form_pieces(&f_cone, order)? {
                terms.push(piece.mul_series(&pulled)?.negate());
            }
        }
        let result = PoleCleared::join(&terms)?.extract_holomorphic(order)?;

        let mut map = self.cache.lock().unwrap();
        match map.get(&key) {
            Some((cached_order, _)) if *cached_order >= order => {}
            _ => {
                map.insert(key, (order, result.clone()));
            }
        }
        Ok(result)
    }

    /// Dual-side germ of a fan cone: quotient the context space by the
    /// annihilator of the cone's span, form the image of the dual cone
    /// there, evaluate `mu`, and extend back by precomposition with the
    /// dual extension matrix (equivalently, by the orthogonal projection
    /// under the inverse scalar product on the other side).
    ///
    /// Accepts non-pointed cones: the image of the dual degenerates (for a
    /// full line it is the zero cone, giving the constant 1).
    pub fn mu_star(&self, sigma: &Cone, order: u32) -> Result<TruncSeries> {
        let d = self.space.dim();
        if sigma.dim() != d {
            return Err(Error::DimMismatch(format!(
                "cone lives in dimension {}, context in {d}",
                sigma.dim()
            )));
        }
        if sigma.is_zero() {
            return Ok(TruncSeries::one(d, order));
        }
        let rows: Vec<QVec> = sigma.rays().iter().map(|r| ivec_to_qvec(r)).collect();
        let annihilator = QMat::from_rows(&rows).kernel_basis();
        let model = QuotientModel::new(&self.space, &annihilator)?;
        let ext = model.dual_extension_matrix();
        let mut ineqs: Vec<IVec> = Vec::new();
        for r in sigma.rays() {
            ineqs.push(primitive(&ext.mul_vec(&ivec_to_qvec(r)))?);
        }
        let dual_image = cone_from_inequalities(model.model_dim(), &ineqs)?;
        let mu_model = self
            .subcontext(model.model_space().clone())
            .mu(&dual_image, order)?;
        mu_model.subst_linear(&ext)
    }

    /// Verifies the defining face identity of `mu` forward:
    /// `sum over faces of pullback(mu(t(c,f))) * I(f) == S(c)` through
    /// `order`. Returns `VerificationFailed` with the first differing
    /// coefficient on mismatch.
    pub fn check_definition(&self, cone: &Cone, order: u32) -> Result<()> {
        let mut terms = vec![s_series_general(cone, order)?.negate()];
        for face_set in cone.face_index_sets()?.to_vec() {
            let f_cone = cone.face_cone(&face_set)?;
            let f_dim = f_cone.lin_dim() as u32;
            let (model, image) = transverse_cone(&self.space, cone, f_cone.rays())?;
            let mu_t = if model.model_dim() == 0 {
                TruncSeries::one(0, order + f_dim)
            } else {
                self.subcontext(model.model_space().clone())
                    .mu(&image, order + f_dim)?
            };
            let pulled = mu_t.subst_linear(&model.dual_extension_matrix())?;
            for piece in i_form_pieces(&f_cone, order)? {
                terms.push(piece.mul_series(&pulled)?);
            }
        }
        match PoleCleared::join(&terms)?.vanishes_through(order)? {
            Ok(()) => Ok(()),
            Err((expo, coeff)) => Err(Error::VerificationFailed(format!(
                "face identity fails for cone {:?} at {:?}: residual {}",
                cone.rays(),
                expo.0,
                coeff
            ))),
        }
    }
}

/// Verifies the boundary relation of the volume integrals:
/// `-<v, xi> I(c) == sum over facets tau of <v, n_tau> I(tau)` with
/// primitive inward facet normals `n_tau`, as pole-cleared forms through
/// `order + 1`.
pub fn check_stokes(cone: &Cone, direction: &[Rat], order: u32) -> Result<()> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let mut terms = Vec::new();
    for piece in i_form_pieces(cone, order)? {
        terms.push(piece.times_linform(direction)?.negate());
    }
    for facet in cone.facets() {
        let pairing = qvec_dot(direction, &ivec_to_qvec(&facet.normal));
        if pairing.is_zero() {
            continue;
        }
        let f_cone = cone.face_cone(&facet.rays)?;
        for piece in i_form_pieces(&f_cone, order + 1)? {
            terms.push(piece.scale_by(&pairing).negate());
        }
    }
    match PoleCleared::join(&terms)?.vanishes_through(order + 1)? {
        Ok(()) => Ok(()),
        Err((expo, coeff)) => Err(Error::VerificationFailed(format!(
            "boundary relation fails for cone {:?}, direction {:?}, at {:?}: residual {}",
            cone.rays(),
            direction,
            expo.0,
            coeff
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{ivec, qvec, rat};
    use crate::series::bernoulli;

    fn cone_of(rays: &[&[i64]]) -> Cone {
        Cone::from_int_rays(
            rays[0].len(),
            &rays.iter().map(|r| ivec(r)).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// Independent closed form for the half-line germ: coefficient of
    /// `xi^k` is `-B_{k+1}/(k+1)!`.
    fn halfline_coeff(k: usize) -> Rat {
        let mut fact = Rat::one();
        for i in 1..=(k + 1) {
            fact *= Rat::from_integer((i as i64).into());
        }
        -bernoulli(k + 1) / fact
    }

    #[test]
    fn mu_of_zero_cone_is_one() {
        let ctx = MuContext::standard(2);
        let m = ctx.mu(&Cone::zero(2), 5).unwrap();
        assert_eq!(m, TruncSeries::one(2, 5));
    }

    #[test]
    fn mu_halfline_matches_bernoulli_oracle() {
        let ctx = MuContext::standard(1);
        let m = ctx.mu(&cone_of(&[&[1]]), 12).unwrap();
        for k in 0..=12usize {
            assert_eq!(m.coeff(&[k as u32]), halfline_coeff(k), "xi^{k}");
        }
        assert_eq!(m.coeff(&[0]), rat(1, 2));
        assert_eq!(m.coeff(&[1]), rat(-1, 12));
        assert_eq!(m.coeff(&[2]), rat(0, 1));
        assert_eq!(m.coeff(&[3]), rat(1, 720));
    }

    #[test]
    fn mu_halfline_reflection_sums_to_one() {
        let ctx = MuContext::standard(1);
        let plus = ctx.mu(&cone_of(&[&[1]]), 10).unwrap();
        let minus = ctx.mu(&cone_of(&[&[-1]]), 10).unwrap();
        let sum = plus.add(&minus).unwrap();
        assert_eq!(sum, TruncSeries::one(1, 10));
        for k in 0..=10u32 {
            let flip = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                minus.coeff(&[k]),
                plus.coeff(&[k]) * rat(flip, 1),
                "reflection at degree {k}"
            );
        }
    }

    #[test]
    fn mu_orthant_factorizes() {
        let ctx2 = MuContext::standard(2);
        let m = ctx2.mu(&cone_of(&[&[1, 0], &[0, 1]]), 6).unwrap();
        let ctx1 = MuContext::standard(1);
        let a = ctx1.mu(&cone_of(&[&[1]]), 6).unwrap();
        let ax = a
            .subst_linear(&QMat::from_rows(&[qvec(&[1, 0])]))
            .unwrap();
        let ay = a
            .subst_linear(&QMat::from_rows(&[qvec(&[0, 1])]))
            .unwrap();
        assert_eq!(m, ax.mul(&ay).unwrap());
        assert_eq!(m.coeff(&[0, 0]), rat(1, 4));
    }

    #[test]
    fn mu_requires_full_dimension() {
        let ctx = MuContext::standard(2);
        let err = ctx.mu(&cone_of(&[&[1, 0]]), 4).unwrap_err();
        assert!(matches!(err, Error::NotFullDim));
    }

    #[test]
    fn definition_identity_singular_cone() {
        let ctx = MuContext::standard(2);
        ctx.check_definition(&cone_of(&[&[1, 0], &[1, 2]]), 6)
            .unwrap();
    }

    #[test]
    fn definition_identity_nonsimplicial() {
        let ctx = MuContext::standard(3);
        ctx.check_definition(
            &cone_of(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]),
            4,
        )
        .unwrap();
    }

    #[test]
    fn definition_identity_nonstandard_metric() {
        let q = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 3])]);
        let ctx = MuContext::new(QSpace::with_metric(2, q).unwrap());
        ctx.check_definition(&cone_of(&[&[1, 0], &[0, 1]]), 5)
            .unwrap();
        ctx.check_definition(&cone_of(&[&[1, 0], &[1, 2]]), 5)
            .unwrap();
    }

    #[test]
    fn transverse_cone_at_a_ray_of_a_singular_cone() {
        let space = QSpace::standard(2);
        let parent = cone_of(&[&[1, 0], &[1, 2]]);
        let (model, image) = transverse_cone(&space, &parent, &[ivec(&[1, 0])]).unwrap();
        assert_eq!(model.model_dim(), 1);
        assert_eq!(image.rays(), &[ivec(&[1])]);
    }

    #[test]
    fn mu_star_halfline_and_line() {
        let ctx = MuContext::standard(1);
        let plus = ctx.mu_star(&cone_of(&[&[1]]), 8).unwrap();
        let direct = ctx.mu(&cone_of(&[&[1]]), 8).unwrap();
        assert_eq!(plus, direct);
        let line = ctx.mu_star(&cone_of(&[&[1], &[-1]]), 8).unwrap();
        assert_eq!(line, TruncSeries::one(1, 8));
        let minus = ctx.mu_star(&cone_of(&[&[-1]]), 8).unwrap();
        assert_eq!(plus.add(&minus).unwrap(), line);
    }

    #[test]
    fn mu_star_of_axis_ray_depends_on_its_variable_only() {
        let ctx = MuContext::standard(2);
        let m = ctx.mu_star(&cone_of(&[&[1, 0]]), 6).unwrap();
        let ctx1 = MuContext::standard(1);
        let a = ctx1.mu(&cone_of(&[&[1]]), 6).unwrap();
        for k in 0..=6u32 {
            assert_eq!(m.coeff(&[k, 0]), a.coeff(&[k]));
            if k >= 1 {
                assert_eq!(m.coeff(&[0, k]), rat(0, 1));
            }
        }
    }

    #[test]
    fn mu_star_zero_cone_is_one() {
        let ctx = MuContext::standard(3);
        let m = ctx.mu_star(&Cone::zero(3), 4).unwrap();
        assert_eq!(m, TruncSeries::one(3, 4));
    }

    #[test]
    fn stokes_relation_examples() {
        check_stokes(&cone_of(&[&[1, 0], &[0, 1]]), &qvec(&[1, 1]), 6).unwrap();
        check_stokes(&cone_of(&[&[1, 0], &[1, 2]]), &qvec(&[2, -3]), 6).unwrap();
        check_stokes(
            &cone_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            &qvec(&[1, -2, 5]),
            5,
        )
        .unwrap();
        check_stokes(
            &cone_of(&[&[1, 1, 1], &[-1, 1, 1], &[1, -1, 1], &[-1, -1, 1]]),
            &qvec(&[3, 1, -2]),
            4,
        )
        .unwrap();
    }

    #[test]
    fn fresh_contexts_agree() {
        let a = MuContext::standard(2)
            .mu(&cone_of(&[&[1, 0], &[1, 2]]), 6)
            .unwrap();
        let b = MuContext::standard(2)
            .mu(&cone_of(&[&[1, 0], &[1, 2]]), 6)
            .unwrap();
        assert_eq!(a, b);
        // Ray order does not matter: cones are canonicalized.
        let c = MuContext::standard(2)
            .mu(&cone_of(&[&[1, 2], &[1, 0]]), 6)
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn s_series_of_halfline_has_bernoulli_tail() {
        // S(R+) = 1/(1 - e^xi) as a pole-cleared form: numerator is the
        // one-variable todd factor, denominator xi.
        let s = s_series_general(&cone_of(&[&[1]]), 8).unwrap();
        assert_eq!(s.denoms().len(), 1);
        // Compare against mu + the integral: S = mu(R+) + I(R+) means
        // S - mu has exactly the simple pole -1/xi.
        let ctx = MuContext::standard(1);
        let m = ctx.mu(&cone_of(&[&[1]]), 8).unwrap();
        let diff = s.sub(&PoleCleared::from_series(m)).unwrap();
        let i = i_form(&cone_of(&[&[1]]), 8).unwrap();
        assert!(matches!(diff.eq_through(&i, 8), Ok(Ok(()))));
    }

    #[test]
    fn s_series_nonpointed_is_zero() {
        let s = s_series_general(&cone_of(&[&[1], &[-1]]), 6).unwrap();
        assert!(s.numerator().is_zero());
    }
}
