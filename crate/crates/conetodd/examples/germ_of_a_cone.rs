//! The Euler-Maclaurin germ of a pointed cone: the holomorphic series that
//! corrects integrals over the cone into sums over its lattice points.
//!
//! Run with: cargo run --example germ_of_a_cone

use conetodd::cones::Cone;
use conetodd::mu::MuContext;
use conetodd::ratlin::ivec;

fn main() -> conetodd::Result<()> {
    // Dimension zero: the germ of the origin is the constant 1.
    let origin = MuContext::standard(0).mu(&Cone::zero(0), 4)?;
    println!("origin     mu = {}", origin.pretty());

    // The half-line. Coefficient k is -B(k+1)/(k+1)! for Bernoulli numbers
    // B(n) with B(1) = -1/2, so the series starts 1/2 - x/12 + x^3/720.
    let ctx1 = MuContext::standard(1);
    let halfline = Cone::from_int_rays(1, &[ivec(&[1])])?;
    println!("half-line  mu = {}", ctx1.mu(&halfline, 7)?.pretty());

    // The quadrant factors as a product of two half-lines: its constant
    // term is (1/2)^2 and the linear terms are -1/24 each.
    let ctx2 = MuContext::standard(2);
    let quadrant = Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])])?;
    println!("quadrant   mu = {}", ctx2.mu(&quadrant, 3)?.pretty());

    // A singular cone: its rays generate an index-2 sublattice, so the
    // germ is not a product and has no closed product form.
    let singular = Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[1, 2])])?;
    println!("singular   mu = {}", ctx2.mu(&singular, 3)?.pretty());

    // The germ is the unique holomorphic solution of the recursion
    //   S(c) = sum over faces f of  ext(mu(transverse cone of c at f)) * I(f),
    // where S and I are the exponential sum and integral over the cone and
    // its faces. check_definition recomputes both sides independently.
    println!();
    for (name, ctx, cone) in [
        ("half-line", &ctx1, &halfline),
        ("quadrant", &ctx2, &quadrant),
        ("singular cone", &ctx2, &singular),
    ] {
        ctx.check_definition(cone, 6)?;
        println!("defining identity holds on the {name} through order 6");
    }
    Ok(())
}
