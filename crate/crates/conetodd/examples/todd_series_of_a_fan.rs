//! Equivariant Todd coefficients of a complete fan: one exact series per
//! cone, computed from the Euler-Maclaurin germs of the dual transverse
//! cones. For the fan of the projective line the three series have a
//! closed Bernoulli form, which we reproduce coefficient by coefficient.
//!
//! Run with: cargo run --example todd_series_of_a_fan

use conetodd::corpus;
use conetodd::mu::MuContext;
use conetodd::ratlin::{ivec, rat, Int, Rat};
use conetodd::series::bernoulli;
use conetodd::todd::{check_tt, todd_coefficients};

fn main() -> conetodd::Result<()> {
    // The complete fan on the line: the origin and the two half-lines.
    let fan = corpus::p1_fan();
    let ctx = MuContext::standard(1);
    let order = 10;
    let expansion = todd_coefficients(&ctx, &fan, order)?;

    println!("fan of the projective line, order {order}:");
    for (cone, series) in expansion.entries() {
        let label = match cone.rays() {
            [] => "origin ".to_string(),
            rays => format!("ray {:>2} ", rays[0][0]),
        };
        println!("  {label} {}", series.pretty());
    }

    // Closed form: the series on the ray generated by e expands
    // 1/(1 - e^t) + 1/t at t = <xi, e>, so its k-th coefficient is
    // -B(k+1)/(k+1)! with B(1) = -1/2, and the opposite ray carries the
    // same series with t negated.
    let positive = expansion
        .coeff_for(&[ivec(&[1])])
        .expect("positive ray present");
    let negative = expansion
        .coeff_for(&[ivec(&[-1])])
        .expect("negative ray present");
    let mut factorial = rat(1, 1);
    for k in 0..=order {
        factorial *= Rat::from_integer(Int::from(k + 1));
        let expected = -(bernoulli(k as usize + 1) / factorial.clone());
        let sign = rat(if k % 2 == 0 { 1 } else { -1 }, 1);
        assert_eq!(positive.coeff(&[k]), expected);
        assert_eq!(negative.coeff(&[k]), expected * sign);
    }
    println!("both ray series match the Bernoulli closed form through order {order}");

    // On simplicial fans the whole family is characterized by the
    // restriction identity, checked here for three plane fans.
    println!();
    for (name, fan) in [
        ("projective plane", corpus::p2_fan()),
        ("product of two lines", corpus::p1xp1_fan()),
        ("weighted plane", corpus::weighted_fan()),
    ] {
        let ctx = MuContext::standard(fan.dim());
        check_tt(&ctx, &fan, 6)?;
        println!("restriction identity holds on the {name} fan through order 6");
    }
    Ok(())
}
