//! Bundled verification suites: each runs one of the library's exact
//! identities over the built-in corpus plus seeded random instances and
//! reports per-instance pass/fail with the first failing coefficient.
//!
//! A failed identity is reported in the items, never raised as an error;
//! errors from these functions mean the suite itself could not run.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::Cone;
use crate::corpus;
use crate::mu::{check_stokes, MuContext};
use crate::polyeml::{brute_force_sum, euler_maclaurin_1d, lattice_sum, PolyFunc};
use crate::ratlin::{ivec, qvec_is_zero, Int, QSpace, Rat};
use crate::todd;
use crate::{Error, Result};

/// The named property suites exposed by the tool.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Valuation,
    Stokes,
    Tt,
    Localization,
    Danilov,
    Oracle,
    Eml1d,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Valuation => "valuation",
            Suite::Stokes => "stokes",
            Suite::Tt => "tt",
            Suite::Localization => "localization",
            Suite::Danilov => "danilov",
            Suite::Oracle => "oracle",
            Suite::Eml1d => "eml1d",
        }
    }

    pub fn all() -> [Suite; 7] {
        [
            Suite::Valuation,
            Suite::Stokes,
            Suite::Tt,
            Suite::Localization,
            Suite::Danilov,
            Suite::Oracle,
            Suite::Eml1d,
        ]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::all()
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Document(format!(
                    "unknown suite {s:?}; expected one of valuation, stokes, tt, localization, danilov, oracle, eml1d"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyItem {
    /// Which object the identity was checked on.
    pub instance: String,
    /// Which identity was checked.
    pub identity: String,
    pub pass: bool,
    /// Empty when passing; the first failing coefficient otherwise.
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub order: u32,
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Record one identity outcome: verification mismatches become failed
/// items, infrastructure errors abort the suite.
fn push_item(
    items: &mut Vec<VerifyItem>,
    instance: String,
    identity: &str,
    outcome: Result<()>,
) -> Result<()> {
    match outcome {
        Ok(()) => items.push(VerifyItem {
            instance,
            identity: identity.to_string(),
            pass: true,
            detail: String::new(),
        }),
        Err(Error::VerificationFailed(detail)) => items.push(VerifyItem {
            instance,
            identity: identity.to_string(),
            pass: false,
            detail,
        }),
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Check one exact equality of rationals as a report item.
fn push_eq(
    items: &mut Vec<VerifyItem>,
    instance: String,
    identity: &str,
    left: &Rat,
    right: &Rat,
) {
    let pass = left == right;
    items.push(VerifyItem {
        instance,
        identity: identity.to_string(),
        pass,
        detail: if pass {
            String::new()
        } else {
            format!("{left} vs {right}")
        },
    });
}

pub fn run_suite(suite: Suite, seed: u64, order: u32) -> Result<VerifyReport> {
    let items = match suite {
        Suite::Valuation => valuation_items(seed, order)?,
        Suite::Stokes => stokes_items(seed, order)?,
        Suite::Tt => tt_items(seed, order)?,
        Suite::Localization => localization_items(order)?,
        Suite::Danilov => danilov_items(order)?,
        Suite::Oracle => oracle_items(seed)?,
        Suite::Eml1d => eml1d_items(seed)?,
    };
    Ok(VerifyReport {
        suite: suite.name().to_string(),
        seed,
        order,
        items,
    })
}

fn label(cone: &Cone) -> String {
    format!("cone{:?}", cone.rays())
}

fn valuation_items(seed: u64, order: u32) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str = "coefficient of the whole cone equals the sum over subdivision pieces";
    let mut items = Vec::new();

    let ctx1 = MuContext::standard(1);
    let line = Cone::from_int_rays(1, &[ivec(&[1]), ivec(&[-1])])?;
    let halves = [
        Cone::from_int_rays(1, &[ivec(&[1])])?,
        Cone::from_int_rays(1, &[ivec(&[-1])])?,
    ];
    push_item(
        &mut items,
        "line split at the origin".into(),
        IDENTITY,
        todd::check_valuation(&ctx1, &line, &halves, order),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx2 = MuContext::standard(2);
    for i in 0..10 {
        let (whole, pieces) = corpus::random_split_2d(&mut rng);
        push_item(
            &mut items,
            format!("random 2-D split {i}: {}", label(&whole)),
            IDENTITY,
            todd::check_valuation(&ctx2, &whole, &pieces, order),
        )?;
    }

    let ctx3 = MuContext::standard(3);
    let (whole, pieces) = corpus::cone_over_square_split();
    push_item(
        &mut items,
        "cone over the unit square, pulling triangulation".into(),
        IDENTITY,
        todd::check_valuation(&ctx3, &whole, &pieces, order),
    )?;
    Ok(items)
}

fn stokes_items(seed: u64, order: u32) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str =
        "direction-weighted integral germ equals the flux sum over facet germs";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::new();
    let cones = [
        Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])])?,
        Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[1, 2])])?,
        Cone::from_int_rays(2, &[ivec(&[2, -1]), ivec(&[-1, 3])])?,
        Cone::from_int_rays(3, &[ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[0, 0, 1])])?,
        corpus::cone_over_square(),
    ];
    for cone in &cones {
        for k in 0..5 {
            let dir: Vec<Rat> = loop {
                let v: Vec<Rat> = (0..cone.dim())
                    .map(|_| Rat::from_integer(Int::from(rng.gen_range(-4i64..=4))))
                    .collect();
                if !qvec_is_zero(&v) {
                    break v;
                }
            };
            push_item(
                &mut items,
                format!("{} direction {k}", label(cone)),
                IDENTITY,
                check_stokes(cone, &dir, order),
            )?;
        }
    }
    Ok(items)
}

fn tt_items(seed: u64, order: u32) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str =
        "restriction to a maximal cone equals the alternating coefficient expansion";
    let mut items = Vec::new();
    let named = [
        ("p1", corpus::p1_fan()),
        ("p2", corpus::p2_fan()),
        ("p1xp1", corpus::p1xp1_fan()),
        ("weighted", corpus::weighted_fan()),
    ];
    for (name, fan) in &named {
        let ctx = MuContext::standard(fan.dim());
        for sigma0 in fan.fulldim_cones() {
            push_item(
                &mut items,
                format!("{name} {}", label(sigma0)),
                IDENTITY,
                todd::check_tt_at(&ctx, sigma0, order),
            )?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = MuContext::standard(2);
    for i in 0..10 {
        let fan = corpus::random_complete_fan_2d(&mut rng);
        for sigma0 in fan.fulldim_cones() {
            push_item(
                &mut items,
                format!("random fan {i} {}", label(sigma0)),
                IDENTITY,
                todd::check_tt_at(&ctx, sigma0, order),
            )?;
        }
    }
    Ok(items)
}

fn localization_items(order: u32) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str =
        "dual lattice-point germ equals the coefficient-weighted dual face germs";
    let mut items = Vec::new();
    for (name, fan) in corpus::corpus_fans() {
        let ctx = MuContext::standard(fan.dim());
        for sigma0 in fan.fulldim_cones() {
            push_item(
                &mut items,
                format!("{name} {}", label(sigma0)),
                IDENTITY,
                todd::localization_check(&ctx, sigma0, order),
            )?;
        }
    }
    Ok(items)
}

fn danilov_items(order: u32) -> Result<Vec<VerifyItem>> {
    let mut items = Vec::new();

    // Shared cones across genuinely different complete fans.
    let fans2 = [
        corpus::p2_fan(),
        corpus::p1xp1_fan(),
        corpus::weighted_fan(),
    ];
    let space2 = QSpace::standard(2);
    for rays in [vec![ivec(&[1, 0])], vec![ivec(&[0, 1])], vec![]] {
        let sigma = Cone::from_int_rays(2, &rays)?;
        let in_all: Vec<_> = fans2
            .iter()
            .filter(|f| f.find(sigma.rays()).is_some())
            .cloned()
            .collect();
        push_item(
            &mut items,
            format!("{} across {} plane fans", label(&sigma), in_all.len()),
            "coefficient recomputed in fresh contexts is identical",
            todd::danilov_check(&space2, &sigma, &in_all, order).map(|_| ()),
        )?;
    }

    // The cube fan against its pulling refinement: identical coefficients
    // for preserved cones, additivity for subdivided ones.
    let cube = corpus::cube_fan();
    let refined = todd::pulling_refinement(&cube)?;
    refined.validate(true)?;
    let space3 = QSpace::standard(3);
    let mut preserved = 0;
    for sigma in cube.cones() {
        if refined.find(sigma.rays()).is_some() && sigma.lin_dim() > 0 {
            preserved += 1;
            if preserved <= 4 {
                push_item(
                    &mut items,
                    format!("cube fan {} under pulling refinement", label(sigma)),
                    "coefficient recomputed in fresh contexts is identical",
                    todd::danilov_check(
                        &space3,
                        sigma,
                        &[cube.clone(), refined.clone()],
                        order,
                    )
                    .map(|_| ()),
                )?;
            }
        }
    }
    let ctx3 = MuContext::standard(3);
    push_item(
        &mut items,
        "cube fan vs pulling refinement, all cones".into(),
        "coefficients push forward additively along the refinement",
        todd::check_pushforward(&ctx3, &cube, &refined, order),
    )?;
    Ok(items)
}

fn oracle_items(seed: u64) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str = "face expansion equals brute-force enumeration";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::new();
    for dim in 1..=3usize {
        let ctx = MuContext::standard(dim);
        for i in 0..10 {
            let p = corpus::random_polytope(&mut rng, dim, 4);
            let h = PolyFunc::from_terms(dim, &corpus::random_poly_terms(&mut rng, dim, 3))?;
            let fast = lattice_sum(&ctx, &p, &h)?;
            let slow = brute_force_sum(&p, &h)?;
            push_eq(
                &mut items,
                format!("dim {dim} random polytope {i}, vertices {:?}", p.vertices()),
                IDENTITY,
                &fast,
                &slow,
            );
        }
    }
    let ctx2 = MuContext::standard(2);
    let one = PolyFunc::one(2);
    for k in 1..=4i64 {
        let p = corpus::unit_cube(2).dilate(&Int::from(k))?;
        let fast = lattice_sum(&ctx2, &p, &one)?;
        push_eq(
            &mut items,
            format!("square dilated by {k}"),
            "count equals (k+1)^2",
            &fast,
            &Rat::from_integer(Int::from((k + 1) * (k + 1))),
        );
    }
    Ok(items)
}

fn eml1d_items(seed: u64) -> Result<Vec<VerifyItem>> {
    const IDENTITY: &str = "face expansion equals the classical endpoint-corrected formula";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = MuContext::standard(1);
    let mut items = Vec::new();
    for i in 0..12 {
        let a = rng.gen_range(-6i64..=6);
        let b = a + rng.gen_range(0i64..=9);
        let h = PolyFunc::from_terms(1, &corpus::random_poly_terms(&mut rng, 1, 4))?;
        let p = crate::polytope::LatticePolytope::from_points(1, &[ivec(&[a]), ivec(&[b])])?;
        let via_faces = lattice_sum(&ctx, &p, &h)?;
        let classical = euler_maclaurin_1d(&Int::from(a), &Int::from(b), &h)?;
        push_eq(
            &mut items,
            format!("interval [{a}, {b}] instance {i}"),
            IDENTITY,
            &via_faces,
            &classical.total,
        );
        let slow = brute_force_sum(&p, &h)?;
        push_eq(
            &mut items,
            format!("interval [{a}, {b}] instance {i}"),
            "classical formula equals brute-force enumeration",
            &classical.total,
            &slow,
        );
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::all() {
            assert_eq!(Suite::from_str(s.name()).unwrap(), s);
        }
        assert!(Suite::from_str("bogus").is_err());
    }

    #[test]
    fn valuation_suite_passes() {
        let r = run_suite(Suite::Valuation, 7, 5).unwrap();
        assert!(r.passed());
        assert_eq!(r.items.len(), 12);
    }

    #[test]
    fn stokes_suite_passes() {
        let r = run_suite(Suite::Stokes, 3, 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.items.len(), 25);
    }

    #[test]
    fn oracle_suite_passes() {
        let r = run_suite(Suite::Oracle, 5, 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.items.len(), 34);
    }

    #[test]
    fn eml1d_suite_passes() {
        let r = run_suite(Suite::Eml1d, 11, 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.items.len(), 24);
    }

    #[test]
    fn tt_suite_passes_at_low_order() {
        let r = run_suite(Suite::Tt, 2, 3).unwrap();
        assert!(r.passed());
        assert!(r.items.len() > 10);
    }

    #[test]
    fn localization_suite_passes_at_low_order() {
        let r = run_suite(Suite::Localization, 0, 3).unwrap();
        assert!(r.passed());
        // One item per maximal cone across the five corpus fans.
        assert_eq!(r.items.len(), 2 + 3 + 4 + 3 + 6);
    }

    #[test]
    fn danilov_suite_passes_at_low_order() {
        let r = run_suite(Suite::Danilov, 0, 3).unwrap();
        assert!(r.passed());
    }
}
