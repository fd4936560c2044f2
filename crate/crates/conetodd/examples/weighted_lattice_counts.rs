//! Exact weighted sums over the lattice points of integral polytopes,
//! computed face by face: each face contributes the integral of a
//! differential operator (built from the germ of its transverse cone)
//! applied to the weight. Every value is cross-checked by enumeration.
//!
//! Run with: cargo run --example weighted_lattice_counts

use conetodd::corpus;
use conetodd::mu::MuContext;
use conetodd::polyeml::{brute_force_sum, face_contributions, lattice_sum, PolyFunc};
use conetodd::polytope::LatticePolytope;
use conetodd::ratlin::{ivec, rat, Int};

fn main() -> conetodd::Result<()> {
    // Unweighted counts on small standard bodies.
    let triangle = corpus::unit_simplex(2);
    let cube = corpus::unit_cube(3);
    for (name, p) in [("unit triangle", &triangle), ("unit cube", &cube)] {
        let ctx = MuContext::standard(p.ambient_dim());
        let one = PolyFunc::one(p.ambient_dim());
        let sum = lattice_sum(&ctx, p, &one)?;
        assert_eq!(sum, brute_force_sum(p, &one)?);
        println!("{name}: {sum} lattice points");
    }

    // Dilates of the unit square: (k+1)^2 points.
    let square = corpus::unit_cube(2);
    let ctx2 = MuContext::standard(2);
    let one2 = PolyFunc::one(2);
    let counts: Vec<String> = (1..=4)
        .map(|k| {
            let dilated = square.dilate(&Int::from(k))?;
            let sum = lattice_sum(&ctx2, &dilated, &one2)?;
            assert_eq!(sum, rat((k + 1) * (k + 1), 1));
            Ok(sum.to_string())
        })
        .collect::<conetodd::Result<_>>()?;
    println!("square dilates k = 1..4: {}", counts.join(", "));

    // A weighted count: sum of x^2 over the integers 0..=10 is 385.
    let interval = LatticePolytope::from_points(1, &[ivec(&[0]), ivec(&[10])])?;
    let ctx1 = MuContext::standard(1);
    let x_squared = PolyFunc::var(1, 0)?.pow(2)?;
    let total = lattice_sum(&ctx1, &interval, &x_squared)?;
    assert_eq!(total, rat(385, 1));
    println!("sum of x^2 over [0, 10]: {total}");

    // The same sum, face by face: the open interval contributes the
    // integral 1000/3, each endpoint a Bernoulli-weighted correction.
    for c in face_contributions(&ctx1, &interval, &x_squared)? {
        println!("  face {:?} (dim {}): {}", c.face, c.face_dim, c.integral);
    }

    // A degenerate polytope: the diagonal segment from (0,0) to (2,2).
    // The computation restricts to the segment's own lattice first.
    let diagonal = LatticePolytope::from_points(2, &[ivec(&[0, 0]), ivec(&[2, 2])])?;
    let weight = PolyFunc::var(2, 0)?.mul(&PolyFunc::var(2, 1)?)?;
    let diag_sum = lattice_sum(&ctx2, &diagonal, &weight)?;
    assert_eq!(diag_sum, brute_force_sum(&diagonal, &weight)?);
    println!("sum of x*y over the diagonal of [0,2]^2: {diag_sum}");
    Ok(())
}
