//! The classical one-dimensional Euler-Maclaurin formula with exact
//! rational arithmetic: for a polynomial h and integers a <= b,
//!
//!   sum over a..=b of h  =  integral from a to b of h
//!                         + Bernoulli corrections from each endpoint,
//!
//! and the corrections are finitely many because h is a polynomial. The
//! same numbers fall out of the general face-by-face machinery, which is
//! the one-dimensional sanity anchor for everything else in this crate.
//!
//! Run with: cargo run --example interval_euler_maclaurin

use conetodd::mu::MuContext;
use conetodd::polyeml::{euler_maclaurin_1d, lattice_sum, PolyFunc};
use conetodd::polytope::LatticePolytope;
use conetodd::ratlin::{ivec, rat, Int};

fn main() -> conetodd::Result<()> {
    // h(x) = x^3 - 2x + 5 on the interval [-3, 6].
    let x = PolyFunc::var(1, 0)?;
    let h = x
        .pow(3)?
        .sub(&x.scale(&rat(2, 1)))?
        .add(&PolyFunc::constant(1, rat(5, 1)))?;

    let a = Int::from(-3);
    let b = Int::from(6);
    let parts = euler_maclaurin_1d(&a, &b, &h)?;
    println!("h(x) = x^3 - 2x + 5 on [{a}, {b}]");
    println!("  integral part      {}", parts.integral);
    println!("  corrections at {a}: {:?}", pretty(&parts.lower));
    println!("  corrections at {b}:  {:?}", pretty(&parts.upper));
    println!("  total              {}", parts.total);

    // The brute-force value and the general machinery agree exactly.
    let direct: conetodd::ratlin::Rat = (-3..=6)
        .map(|k| h.eval(&[rat(k, 1)]))
        .collect::<conetodd::Result<Vec<_>>>()?
        .into_iter()
        .sum();
    assert_eq!(parts.total, direct);

    let interval = LatticePolytope::from_points(1, &[ivec(&[-3]), ivec(&[6])])?;
    let via_faces = lattice_sum(&MuContext::standard(1), &interval, &h)?;
    assert_eq!(via_faces, parts.total);
    println!("direct sum, endpoint formula and face machinery all give {direct}");
    Ok(())
}

fn pretty(terms: &[conetodd::ratlin::Rat]) -> Vec<String> {
    terms.iter().map(|t| t.to_string()).collect()
}
