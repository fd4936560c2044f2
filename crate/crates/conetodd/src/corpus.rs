//! Named example fans, cones, and polytopes, plus seeded random
//! generators used by the verification suites and integration tests.
//!
//! Everything here is deterministic: the random generators take a
//! `ChaCha8Rng` so the same seed always reproduces the same instance.

use num_traits::Zero;
use rand::Rng;

use crate::cones::{Cone, Fan};
use crate::polytope::LatticePolytope;
use crate::ratlin::{ivec, IVec, Int, Rat};
use crate::{Error, Result};

/// Fan of the projective line: `{0}`, the positive ray, the negative ray.
pub fn p1_fan() -> Fan {
    let pos = Cone::from_int_rays(1, &[ivec(&[1])]).unwrap();
    let neg = Cone::from_int_rays(1, &[ivec(&[-1])]).unwrap();
    Fan::from_cones(1, &[pos, neg]).unwrap()
}

/// Fan of the projective plane: rays `e1, e2, -e1-e2`.
pub fn p2_fan() -> Fan {
    let rays = [ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -1])];
    complete_fan_from_rays_2d(&rays).unwrap()
}

/// Fan of the product of two projective lines: rays `±e1, ±e2`.
pub fn p1xp1_fan() -> Fan {
    let rays = [
        ivec(&[1, 0]),
        ivec(&[0, 1]),
        ivec(&[-1, 0]),
        ivec(&[0, -1]),
    ];
    complete_fan_from_rays_2d(&rays).unwrap()
}

/// Weighted projective fan with rays `e1, e2, -e1-2*e2`; the cone spanned
/// by `-e1-2*e2` and `e1` has multiplicity 2, so this fan is complete and
/// simplicial but not smooth.
pub fn weighted_fan() -> Fan {
    let rays = [ivec(&[1, 0]), ivec(&[0, 1]), ivec(&[-1, -2])];
    complete_fan_from_rays_2d(&rays).unwrap()
}

/// Face fan of the cube `[-1,1]^3`: six square-based maximal cones, one
/// over each facet of the cube. Complete but not simplicial.
pub fn cube_fan() -> Fan {
    let mut maximal = Vec::new();
    for axis in 0..3 {
        for sign in [1i64, -1] {
            let mut rays = Vec::new();
            for s1 in [1i64, -1] {
                for s2 in [1i64, -1] {
                    let mut v = vec![Int::from(0); 3];
                    v[axis] = Int::from(sign);
                    v[(axis + 1) % 3] = Int::from(s1);
                    v[(axis + 2) % 3] = Int::from(s2);
                    rays.push(v);
                }
            }
            maximal.push(Cone::from_int_rays(3, &rays).unwrap());
        }
    }
    Fan::from_cones(3, &maximal).unwrap()
}

/// The standard battery of complete fans, with short labels for reports.
pub fn corpus_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("p1", p1_fan()),
        ("p2", p2_fan()),
        ("p1xp1", p1xp1_fan()),
        ("weighted", weighted_fan()),
        ("cube", cube_fan()),
    ]
}

/// Cone over the unit square placed at height one: rays
/// `(0,0,1), (1,0,1), (0,1,1), (1,1,1)`. Pointed, full dimensional,
/// not simplicial.
pub fn cone_over_square() -> Cone {
    Cone::from_int_rays(
        3,
        &[
            ivec(&[0, 0, 1]),
            ivec(&[1, 0, 1]),
            ivec(&[0, 1, 1]),
            ivec(&[1, 1, 1]),
        ],
    )
    .unwrap()
}

/// The cone over the square together with its pulling triangulation,
/// for subdivision-invariance checks.
pub fn cone_over_square_split() -> (Cone, Vec<Cone>) {
    let c = cone_over_square();
    let pieces = c.triangulate().unwrap();
    (c, pieces)
}

/// Unit hypercube `[0,1]^dim` as a lattice polytope.
pub fn unit_cube(dim: usize) -> LatticePolytope {
    let mut pts = Vec::new();
    for mask in 0..(1usize << dim) {
        let v: IVec = (0..dim).map(|i| Int::from((mask >> i) & 1)).collect();
        pts.push(v);
    }
    LatticePolytope::from_points(dim, &pts).unwrap()
}

/// Standard unit simplex: convex hull of the origin and the basis vectors.
pub fn unit_simplex(dim: usize) -> LatticePolytope {
    let mut pts = vec![vec![Int::from(0); dim]];
    for i in 0..dim {
        let mut v = vec![Int::from(0); dim];
        v[i] = Int::from(1);
        pts.push(v);
    }
    LatticePolytope::from_points(dim, &pts).unwrap()
}

/// Exact angular comparison for nonzero integer vectors in the plane:
/// orders by angle in `[0, 2*pi)` starting at the positive x-axis.
fn angle_class(v: &IVec) -> u8 {
    let x = &v[0];
    let y = &v[1];
    // 0: positive x-axis, 1: open upper half, 2: negative x-axis,
    // 3: open lower half.
    if y.is_zero() {
        if *x > Int::from(0) {
            0
        } else {
            2
        }
    } else if *y > Int::from(0) {
        1
    } else {
        3
    }
}

fn cross(a: &IVec, b: &IVec) -> Int {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Sort primitive plane vectors counterclockwise by exact angle.
pub fn sort_by_angle_2d(rays: &mut [IVec]) {
    rays.sort_by(|a, b| {
        let (ca, cb) = (angle_class(a), angle_class(b));
        if ca != cb {
            return ca.cmp(&cb);
        }
        // Same open half plane: a before b iff the turn from a to b is
        // counterclockwise.
        let x = cross(a, b);
        if x > Int::from(0) {
            std::cmp::Ordering::Less
        } else if x < Int::from(0) {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
}

/// Build the complete fan in the plane whose maximal cones are spanned by
/// angularly consecutive rays. Requires at least three pairwise
/// non-parallel rays whose positive hull is the whole plane.
pub fn complete_fan_from_rays_2d(rays: &[IVec]) -> Result<Fan> {
    let mut prim: Vec<IVec> = Vec::new();
    for r in rays {
        let p = crate::ratlin::primitive_int(r)?;
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    if prim.len() < 3 {
        return Err(Error::InvalidFan(
            "need at least three distinct ray directions".into(),
        ));
    }
    sort_by_angle_2d(&mut prim);
    let mut maximal = Vec::new();
    for i in 0..prim.len() {
        let a = prim[i].clone();
        let b = prim[(i + 1) % prim.len()].clone();
        if cross(&a, &b) <= Int::from(0) {
            return Err(Error::InvalidFan(
                "consecutive rays do not span a counterclockwise cone".into(),
            ));
        }
        maximal.push(Cone::from_int_rays(2, &[a, b])?);
    }
    let fan = Fan::from_cones(2, &maximal)?;
    fan.validate(true)?;
    Ok(fan)
}

fn random_primitive_2d<R: Rng>(rng: &mut R, bound: i64) -> IVec {
    loop {
        let x = rng.gen_range(-bound..=bound);
        let y = rng.gen_range(-bound..=bound);
        if x == 0 && y == 0 {
            continue;
        }
        return crate::ratlin::primitive_int(&ivec(&[x, y])).unwrap();
    }
}

/// Random complete plane fan: samples a few ray directions, throws in the
/// negation of each so no half plane is empty, and fans out the
/// consecutive cones.
pub fn random_complete_fan_2d<R: Rng>(rng: &mut R) -> Fan {
    loop {
        let n = rng.gen_range(2..=5);
        let mut rays = Vec::new();
        for _ in 0..n {
            let r = random_primitive_2d(rng, 5);
            let neg = vec![-r[0].clone(), -r[1].clone()];
            rays.push(r);
            rays.push(neg);
        }
        if let Ok(fan) = complete_fan_from_rays_2d(&rays) {
            return fan;
        }
    }
}

/// Random pointed two dimensional cone spanned by two independent
/// primitive rays.
pub fn random_pointed_cone_2d<R: Rng>(rng: &mut R) -> Cone {
    loop {
        let a = random_primitive_2d(rng, 5);
        let b = random_primitive_2d(rng, 5);
        if cross(&a, &b).is_zero() {
            continue;
        }
        return Cone::from_int_rays(2, &[a, b]).unwrap();
    }
}

/// Random two dimensional cone together with the two pieces obtained by
/// splitting along an interior ray, for valuation checks.
pub fn random_split_2d<R: Rng>(rng: &mut R) -> (Cone, Vec<Cone>) {
    let whole = random_pointed_cone_2d(rng);
    let rays = whole.rays();
    let mid: IVec = (0..2).map(|i| &rays[0][i] + &rays[1][i]).collect();
    let mid = crate::ratlin::primitive_int(&mid).unwrap();
    let p1 = Cone::from_int_rays(2, &[rays[0].clone(), mid.clone()]).unwrap();
    let p2 = Cone::from_int_rays(2, &[mid, rays[1].clone()]).unwrap();
    (whole, vec![p1, p2])
}

/// Random full dimensional lattice polytope with vertices in
/// `[-bound, bound]^dim`.
pub fn random_polytope<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> LatticePolytope {
    loop {
        let n = rng.gen_range(dim + 1..=dim + 4);
        let pts: Vec<IVec> = (0..n)
            .map(|_| {
                (0..dim)
                    .map(|_| Int::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        if let Ok(p) = LatticePolytope::from_points(dim, &pts) {
            if p.dim() == dim {
                return p;
            }
        }
    }
}

/// Random exact polynomial of total degree at most `max_deg` in `dim`
/// variables, as a list of (coefficient, exponent) pairs.
pub fn random_poly_terms<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_deg: u32,
) -> Vec<(Rat, Vec<u32>)> {
    let n_terms = rng.gen_range(1..=4);
    let mut terms = Vec::new();
    for _ in 0..n_terms {
        let mut expo = vec![0u32; dim];
        let deg = rng.gen_range(0..=max_deg);
        for _ in 0..deg {
            if dim > 0 {
                expo[rng.gen_range(0..dim)] += 1;
            }
        }
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        terms.push((Rat::from_integer(Int::from(c)), expo));
    }
    terms
}
