//! A complete fan that is not simplicial: the face fan of the cube, whose
//! six maximal cones are square-based. Todd coefficient series exist for
//! every cone, and on each maximal cone the family is pinned down by an
//! exact localization identity between meromorphic forms. Triangulating
//! the fan does not change the maximal-cone series, which is checked by a
//! pushforward identity against a pulling refinement.
//!
//! Run with: cargo run --example cube_fan_localization

use conetodd::corpus;
use conetodd::mu::MuContext;
use conetodd::todd::{check_pushforward, localization_check, pulling_refinement, todd_coefficients};

fn main() -> conetodd::Result<()> {
    let fan = corpus::cube_fan();
    let ctx = MuContext::standard(3);
    let order = 4;

    let expansion = todd_coefficients(&ctx, &fan, order)?;
    for d in 0..=3 {
        let count = fan.cones_of_dim(d).count();
        println!("cones of dimension {d}: {count}");
    }

    // The series on one square-based maximal cone.
    let square_cone = fan
        .fulldim_cones()
        .next()
        .expect("cube fan has maximal cones");
    let series = expansion
        .coeff_for(square_cone.rays())
        .expect("every cone has a series");
    println!("\nseries on a square-based maximal cone, order {order}:");
    println!("  {}", series.pretty());

    // Localization: summing germ times boundary form over the faces of
    // the polar dual reproduces the exponential sum of the dual cone as
    // an identity of pole-cleared forms.
    for (i, sigma0) in fan.fulldim_cones().enumerate() {
        localization_check(&ctx, sigma0, order)?;
        println!("localization identity holds on maximal cone {i} through order {order}");
    }

    // Refine by pulling triangulation and compare: coefficients of the
    // refined fan push forward to the coefficients of the coarse fan.
    let refined = pulling_refinement(&fan)?;
    println!(
        "\npulling refinement: {} cones (coarse fan has {})",
        refined.cones().len(),
        fan.cones().len()
    );
    check_pushforward(&ctx, &fan, &refined, order)?;
    println!("refined coefficients push forward to the coarse ones through order {order}");
    Ok(())
}
