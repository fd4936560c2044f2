//! Fan-level Todd machinery: the per-cone coefficient family of a
//! complete fan, restrictions to maximal cones of simplicial fans, and
//! the localization, subdivision, and fan-independence identities as
//! executable checks.
//!
//! The central object is the family `sigma -> mu_star(sigma)`: one
//! holomorphic series per cone, computed independently per cone. Each
//! check here compares two expressions for the same germ that are
//! computed along genuinely different code paths, so a pass is evidence
//! the whole pipeline agrees with itself.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cones::{box_points, Cone, Fan, HalfOpenCone};
use crate::mu::{i_form_pieces, s_series_general, MuContext};
use crate::ratlin::{ivec_dot, ivec_to_qvec, IVec, QSpace, Rat};
use crate::series::{PoleCleared, TruncSeries};
use crate::{Error, Result};

/// The equivariant Todd coefficient family of a complete fan: one series
/// per cone, in the same order as `fan.cones()`. The entry for the zero
/// cone is the constant series 1.
#[derive(Clone, Debug)]
pub struct ToddExpansion {
    order: u32,
    entries: Vec<(Cone, TruncSeries)>,
}

impl ToddExpansion {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn entries(&self) -> &[(Cone, TruncSeries)] {
        &self.entries
    }

    /// Coefficient series for the cone with the given primitive rays,
    /// if it belongs to the fan.
    pub fn coeff_for(&self, rays: &[IVec]) -> Option<&TruncSeries> {
        let mut key: Vec<IVec> = rays.to_vec();
        key.sort();
        self.entries
            .iter()
            .find(|(c, _)| c.rays() == key.as_slice())
            .map(|(_, s)| s)
    }
}

/// Compute `mu_star` for every cone of a complete fan. Cones are
/// independent, so the work is parallelized; the shared context cache
/// only accelerates, it never changes results.
pub fn todd_coefficients(ctx: &MuContext, fan: &Fan, order: u32) -> Result<ToddExpansion> {
    fan.validate(true)?;
    let entries = fan
        .cones()
        .par_iter()
        .map(|c| Ok((c.clone(), ctx.mu_star(c, order)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ToddExpansion { order, entries })
}

fn require_fulldim_simplicial(sigma0: &Cone) -> Result<()> {
    if !sigma0.is_pointed() {
        return Err(Error::NotPointed);
    }
    if !sigma0.is_fulldim() {
        return Err(Error::NotFullDim);
    }
    if !sigma0.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    Ok(())
}

/// Restriction of the Todd series to a simplicial maximal cone: the
/// product of the dual cone's lattice-point series with the linear forms
/// of its edges, normalized by the dual multiplicity. The poles cancel
/// exactly, leaving the honest power series
/// `((-1)^d / mult) * boxsum * prod_i t_i/(1 - e^{t_i})` with
/// `t_i = <xi, v_i>` over the dual generators `v_i`. Its constant term
/// is always 1.
pub fn simplicial_restriction(sigma0: &Cone, order: u32) -> Result<TruncSeries> {
    require_fulldim_simplicial(sigma0)?;
    let d = sigma0.dim();
    let duals = sigma0.dual_rays_paired()?;
    let dual_cone = Cone::from_int_rays(d, &duals)?;
    let mult = dual_cone.mult()?;
    let mut acc = TruncSeries::zero(d, order);
    for p in box_points(&HalfOpenCone::closed(dual_cone)?)? {
        acc = acc.add(&TruncSeries::exp_linform(&ivec_to_qvec(&p), order))?;
    }
    for v in &duals {
        acc = acc.mul(&TruncSeries::todd_one_var(&ivec_to_qvec(v), order))?;
    }
    let mut factor = Rat::one() / Rat::from_integer(mult);
    if d % 2 == 1 {
        factor = -factor;
    }
    Ok(acc.scale(&factor))
}

/// The polynomial obtained by restricting the face indicator of `sigma`
/// to a simplicial maximal cone `sigma0`: zero unless `sigma` is a face
/// of `sigma0`, otherwise a scaled product of the dual generators paired
/// with the rays of `sigma`. Exact polynomial of degree `dim sigma`,
/// carried at trusted order at least `order`.
pub fn phi_restriction(sigma: &Cone, sigma0: &Cone, order: u32) -> Result<TruncSeries> {
    require_fulldim_simplicial(sigma0)?;
    let d = sigma0.dim();
    if sigma.dim() != d {
        return Err(Error::DimMismatch(format!(
            "cone lives in dimension {}, expected {d}",
            sigma.dim()
        )));
    }
    let mut j_set = Vec::new();
    for r in sigma.rays() {
        match sigma0.rays().iter().position(|s| s == r) {
            Some(i) => j_set.push(i),
            None => return Ok(TruncSeries::zero(d, order)),
        }
    }
    let duals = sigma0.dual_rays_paired()?;
    let complement: Vec<IVec> = (0..d)
        .filter(|i| !j_set.contains(i))
        .map(|i| duals[i].clone())
        .collect();
    let f = Cone::from_int_rays(d, &complement)?;
    let dual_cone = Cone::from_int_rays(d, &duals)?;
    let ratio = Rat::new(f.mult()?, dual_cone.mult()?);
    let mut poly = TruncSeries::constant(d, ratio, order);
    for j in &j_set {
        poly = poly.mul_linform(&ivec_to_qvec(&duals[*j]))?;
    }
    Ok(poly)
}

/// Check, on one simplicial maximal cone, that the direct restriction
/// formula agrees with the alternating sum of `mu_star` coefficients
/// against the face-indicator polynomials, coefficientwise through
/// `order`.
pub fn check_tt_at(ctx: &MuContext, sigma0: &Cone, order: u32) -> Result<()> {
    let d = sigma0.dim();
    let lhs = simplicial_restriction(sigma0, order)?;
    let mut rhs = TruncSeries::zero(d, order);
    for idx in sigma0.face_index_sets()?.to_vec() {
        let sigma = sigma0.face_cone(&idx)?;
        let mu = ctx.mu_star(&sigma, order)?;
        let phi = phi_restriction(&sigma, sigma0, order)?;
        let mut term = mu.mul(&phi)?;
        if idx.len() % 2 == 1 {
            term = term.neg();
        }
        rhs = rhs.add(&term)?;
    }
    if let Some((e, a, b)) = lhs.first_difference(&rhs, order) {
        return Err(Error::VerificationFailed(format!(
            "todd restriction mismatch on cone {:?}: coefficient {:?} is {a} directly, {b} via the expansion",
            sigma0.rays(),
            e
        )));
    }
    Ok(())
}

/// Run the restriction consistency check on every maximal cone of a
/// simplicial complete fan.
pub fn check_tt(ctx: &MuContext, fan: &Fan, order: u32) -> Result<()> {
    fan.validate(true)?;
    for sigma0 in fan.fulldim_cones() {
        check_tt_at(ctx, sigma0, order)?;
    }
    Ok(())
}

/// Localization identity at one maximal cone (simplicial or not): the
/// lattice-point germ of the dual cone equals the sum, over faces of
/// `sigma0`, of `mu_star` times the integral germ of the corresponding
/// dual face. Verified exactly through `order` as pole-cleared forms.
pub fn localization_check(ctx: &MuContext, sigma0: &Cone, order: u32) -> Result<()> {
    if !sigma0.is_pointed() {
        return Err(Error::NotPointed);
    }
    if !sigma0.is_fulldim() {
        return Err(Error::NotFullDim);
    }
    let d = sigma0.dim();
    let dual = sigma0.dual_fulldim()?;
    let mut terms = vec![s_series_general(&dual, order)?.negate()];
    for idx in sigma0.face_index_sets()?.to_vec() {
        let sigma = sigma0.face_cone(&idx)?;
        // The face of the dual cone matching sigma: spanned by the dual
        // rays orthogonal to all of sigma's rays.
        let f_rays: Vec<IVec> = dual
            .rays()
            .iter()
            .filter(|w| sigma.rays().iter().all(|r| ivec_dot(w, r).is_zero()))
            .cloned()
            .collect();
        let f = Cone::from_int_rays(d, &f_rays)?;
        let f_dim = f.lin_dim() as u32;
        let mu = ctx.mu_star(&sigma, order + f_dim)?;
        for piece in i_form_pieces(&f, order)? {
            terms.push(piece.mul_series(&mu)?);
        }
    }
    match PoleCleared::join(&terms)?.vanishes_through(order)? {
        Ok(()) => Ok(()),
        Err((e, c)) => Err(Error::VerificationFailed(format!(
            "localization mismatch on cone {:?}: residual coefficient {c} at {:?}",
            sigma0.rays(),
            e
        ))),
    }
}

/// Localization identity on every maximal cone of a fan.
pub fn localization_check_fan(ctx: &MuContext, fan: &Fan, order: u32) -> Result<()> {
    for sigma0 in fan.fulldim_cones() {
        localization_check(ctx, sigma0, order)?;
    }
    Ok(())
}

/// Recompute `mu_star(sigma)` inside each fan with a fresh context and
/// require the results to be identical. Returns the common series.
pub fn danilov_check(
    space: &QSpace,
    sigma: &Cone,
    fans: &[Fan],
    order: u32,
) -> Result<TruncSeries> {
    let mut reference: Option<TruncSeries> = None;
    for fan in fans {
        let found = fan.find(sigma.rays()).ok_or_else(|| {
            Error::InvalidFan(format!("fan does not contain the cone {:?}", sigma.rays()))
        })?;
        let fresh = MuContext::new(space.clone());
        let series = fresh.mu_star(found, order)?;
        match &reference {
            None => reference = Some(series),
            Some(r) => {
                if *r != series {
                    return Err(Error::VerificationFailed(format!(
                        "coefficient of cone {:?} differs between fans",
                        sigma.rays()
                    )));
                }
            }
        }
    }
    reference.ok_or_else(|| Error::InvalidFan("no fans supplied".into()))
}

/// Pulling refinement: triangulate every full-dimensional cone and
/// assemble the pieces into a new fan. The pulling rule picks the
/// lexicographically least ray as apex in every subface, which is a
/// global choice, so the pieces meet face to face.
pub fn pulling_refinement(fan: &Fan) -> Result<Fan> {
    let mut gens = Vec::new();
    for c in fan.fulldim_cones() {
        gens.extend(c.triangulate()?);
    }
    Fan::from_cones(fan.dim(), &gens)
}

/// Subdivision additivity of `mu_star`: the coefficient of each cone of
/// the coarse fan equals the sum over the same-dimension refinement
/// pieces it contains.
pub fn check_pushforward(
    ctx: &MuContext,
    coarse: &Fan,
    refined: &Fan,
    order: u32,
) -> Result<()> {
    let d = coarse.dim();
    for sigma in coarse.cones() {
        let target = ctx.mu_star(sigma, order)?;
        let mut sum = TruncSeries::zero(d, order);
        for tilde in refined.cones() {
            if tilde.lin_dim() == sigma.lin_dim()
                && tilde
                    .rays()
                    .iter()
                    .all(|r| sigma.contains(&ivec_to_qvec(r)))
            {
                sum = sum.add(&ctx.mu_star(tilde, order)?)?;
            }
        }
        if let Some((e, a, b)) = target.first_difference(&sum, order) {
            return Err(Error::VerificationFailed(format!(
                "pushforward mismatch on cone {:?}: coefficient {:?} is {a} coarse, {b} refined",
                sigma.rays(),
                e
            )));
        }
    }
    Ok(())
}

/// Valuation property of `mu_star` for one subdivision: the coefficient
/// of the whole cone equals the sum over the full-dimensional pieces.
pub fn check_valuation(
    ctx: &MuContext,
    whole: &Cone,
    pieces: &[Cone],
    order: u32,
) -> Result<()> {
    let target = ctx.mu_star(whole, order)?;
    let mut sum = TruncSeries::zero(whole.dim(), order);
    for p in pieces {
        sum = sum.add(&ctx.mu_star(p, order)?)?;
    }
    if let Some((e, a, b)) = target.first_difference(&sum, order) {
        return Err(Error::VerificationFailed(format!(
            "valuation mismatch on cone {:?}: coefficient {:?} is {a} whole, {b} summed",
            whole.rays(),
            e
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ratlin::{ivec, rat};

    #[test]
    fn p1_todd_coefficients_match_closed_forms() {
        let fan = corpus::p1_fan();
        let ctx = MuContext::standard(1);
        let todd = todd_coefficients(&ctx, &fan, 10).unwrap();
        assert_eq!(todd.entries().len(), 3);

        let zero = todd.coeff_for(&[]).unwrap();
        assert_eq!(zero.constant_term(), rat(1, 1));
        assert!(zero.first_difference(&TruncSeries::one(1, 10), 10).is_none());

        // The ray coefficients are exactly the half-line germs.
        let pos_cone = Cone::from_int_rays(1, &[ivec(&[1])]).unwrap();
        let neg_cone = Cone::from_int_rays(1, &[ivec(&[-1])]).unwrap();
        let pos = todd.coeff_for(&[ivec(&[1])]).unwrap();
        let neg = todd.coeff_for(&[ivec(&[-1])]).unwrap();
        assert_eq!(*pos, ctx.mu(&pos_cone, 10).unwrap());
        assert_eq!(*neg, ctx.mu(&neg_cone, 10).unwrap());
        assert_eq!(pos.constant_term(), rat(1, 2));
        assert_eq!(pos.coeff(&[1]), rat(-1, 12));
        assert_eq!(neg.coeff(&[1]), rat(1, 12));
    }

    #[test]
    fn p2_todd_has_seven_series_with_unit_zero_coefficient() {
        let fan = corpus::p2_fan();
        let ctx = MuContext::standard(2);
        let todd = todd_coefficients(&ctx, &fan, 4).unwrap();
        assert_eq!(todd.entries().len(), 7);
        assert_eq!(todd.coeff_for(&[]).unwrap().constant_term(), rat(1, 1));
    }

    #[test]
    fn restriction_on_p1_is_the_todd_factor() {
        let pos = Cone::from_int_rays(1, &[ivec(&[1])]).unwrap();
        let r = simplicial_restriction(&pos, 6).unwrap();
        // -xi/(1 - e^xi) = 1 - xi/2 + xi^2/12 - xi^4/720 + ...
        assert_eq!(r.coeff(&[0]), rat(1, 1));
        assert_eq!(r.coeff(&[1]), rat(-1, 2));
        assert_eq!(r.coeff(&[2]), rat(1, 12));
        assert_eq!(r.coeff(&[3]), rat(0, 1));
        assert_eq!(r.coeff(&[4]), rat(-1, 720));
    }

    #[test]
    fn restriction_constant_term_is_one_even_for_singular_cones() {
        for (_, fan) in [
            ("weighted", corpus::weighted_fan()),
            ("p1xp1", corpus::p1xp1_fan()),
        ] {
            for sigma0 in fan.fulldim_cones() {
                let r = simplicial_restriction(sigma0, 3).unwrap();
                assert_eq!(r.constant_term(), rat(1, 1));
            }
        }
    }

    #[test]
    fn phi_restriction_examples() {
        let pos = Cone::from_int_rays(1, &[ivec(&[1])]).unwrap();
        let neg = Cone::from_int_rays(1, &[ivec(&[-1])]).unwrap();
        let zero = Cone::zero(1);

        // The zero cone restricts to the constant 1.
        let one = phi_restriction(&zero, &pos, 4).unwrap();
        assert_eq!(one.constant_term(), rat(1, 1));
        assert!(one
            .first_difference(&TruncSeries::one(1, 4), 4)
            .is_none());

        // The ray's own indicator restricts to xi.
        let xi = phi_restriction(&pos, &pos, 4).unwrap();
        assert_eq!(xi.coeff(&[1]), rat(1, 1));
        assert_eq!(xi.constant_term(), rat(0, 1));

        // A cone not contained in sigma0 restricts to zero.
        let z = phi_restriction(&neg, &pos, 4).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn phi_restriction_quadrant_face() {
        let quadrant =
            Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])]).unwrap();
        let e1 = Cone::from_int_rays(2, &[ivec(&[1, 0])]).unwrap();
        let phi = phi_restriction(&e1, &quadrant, 4).unwrap();
        assert_eq!(phi.coeff(&[1, 0]), rat(1, 1));
        assert_eq!(phi.coeff(&[0, 1]), rat(0, 1));
    }

    #[test]
    fn tt_identity_on_simplicial_corpus_fans() {
        let fans = [
            ("p1", corpus::p1_fan()),
            ("p2", corpus::p2_fan()),
            ("p1xp1", corpus::p1xp1_fan()),
            ("weighted", corpus::weighted_fan()),
        ];
        for (name, fan) in fans {
            let ctx = MuContext::standard(fan.dim());
            check_tt(&ctx, &fan, 6).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn localization_on_p1_and_p2() {
        for fan in [corpus::p1_fan(), corpus::p2_fan()] {
            let ctx = MuContext::standard(fan.dim());
            localization_check_fan(&ctx, &fan, 6).unwrap();
        }
    }

    #[test]
    fn localization_on_a_cube_fan_cone() {
        let fan = corpus::cube_fan();
        let ctx = MuContext::standard(3);
        let sigma0 = fan
            .fulldim_cones()
            .next()
            .expect("cube fan has maximal cones");
        assert!(!sigma0.is_simplicial());
        localization_check(&ctx, sigma0, 4).unwrap();
    }

    #[test]
    fn valuation_under_line_and_square_cone_splits() {
        let ctx1 = MuContext::standard(1);
        let line = Cone::from_int_rays(1, &[ivec(&[1]), ivec(&[-1])]).unwrap();
        let pieces = [
            Cone::from_int_rays(1, &[ivec(&[1])]).unwrap(),
            Cone::from_int_rays(1, &[ivec(&[-1])]).unwrap(),
        ];
        check_valuation(&ctx1, &line, &pieces, 8).unwrap();

        let ctx3 = MuContext::standard(3);
        let (whole, pieces) = corpus::cone_over_square_split();
        assert_eq!(pieces.len(), 2);
        check_valuation(&ctx3, &whole, &pieces, 3).unwrap();
    }

    #[test]
    fn danilov_ray_agrees_across_fans() {
        let space = QSpace::standard(2);
        let ray = Cone::from_int_rays(2, &[ivec(&[1, 0])]).unwrap();
        let fans = [corpus::p2_fan(), corpus::p1xp1_fan(), corpus::weighted_fan()];
        let series = danilov_check(&space, &ray, &fans, 6).unwrap();
        // Depends only on the first coordinate.
        assert_eq!(series.coeff(&[0, 1]), rat(0, 1));
        assert_eq!(series.constant_term(), rat(1, 2));
    }

    #[test]
    fn pushforward_along_pulling_refinement() {
        // Fan consisting of the cone over the square and its faces
        // (not complete; the pushforward check does not need that).
        let (whole, _) = corpus::cone_over_square_split();
        let coarse = Fan::from_cones(3, &[whole]).unwrap();
        let refined = pulling_refinement(&coarse).unwrap();
        assert_eq!(refined.fulldim_cones().count(), 2);
        let ctx = MuContext::standard(3);
        check_pushforward(&ctx, &coarse, &refined, 3).unwrap();
    }
}
