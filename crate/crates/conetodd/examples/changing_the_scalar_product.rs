//! The germ construction depends on a choice of rational scalar product:
//! it fixes the orthogonal complements used to build transverse cones.
//! Different choices give genuinely different germs, yet every weighted
//! lattice-point sum assembled from them is the same number.
//!
//! Run with: cargo run --example changing_the_scalar_product

use conetodd::cones::Cone;
use conetodd::corpus;
use conetodd::mu::MuContext;
use conetodd::polyeml::{lattice_sum, PolyFunc};
use conetodd::ratlin::{ivec, qvec, QMat, QSpace};

fn main() -> conetodd::Result<()> {
    // A non-diagonal positive definite scalar product on the plane.
    let skew = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 3])]);
    let standard = MuContext::standard(2);
    let skewed = MuContext::new(QSpace::with_metric(2, skew)?);

    let quadrant = Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])])?;
    println!("germ of the quadrant, order 2:");
    println!("  identity Q   {}", standard.mu(&quadrant, 2)?.pretty());
    println!("  skew Q       {}", skewed.mu(&quadrant, 2)?.pretty());

    // Both contexts satisfy the defining recursion; the germ is just a
    // different exact solution of it.
    standard.check_definition(&quadrant, 5)?;
    skewed.check_definition(&quadrant, 5)?;
    println!("defining identity holds for both choices through order 5");

    // Weighted sums are assembled from germs of transverse cones at every
    // face, yet the assembled value does not depend on the choice.
    let square = corpus::unit_cube(2).dilate(&3.into())?;
    let triangle = corpus::unit_simplex(2).dilate(&4.into())?;
    let x = PolyFunc::var(2, 0)?;
    let y = PolyFunc::var(2, 1)?;
    let weight = x.pow(2)?.add(&x.mul(&y)?)?.add(&PolyFunc::one(2))?;

    for (name, p) in [("3 * unit square", &square), ("4 * unit triangle", &triangle)] {
        let with_standard = lattice_sum(&standard, p, &weight)?;
        let with_skew = lattice_sum(&skewed, p, &weight)?;
        assert_eq!(with_standard, with_skew);
        println!("sum of x^2 + xy + 1 over {name}: {with_standard} under either Q");
    }

    // The per-face pieces do differ; print the vertex contributions of the
    // square under both choices to see where the difference lives.
    println!("\nvertex contributions over the 3 * unit square:");
    for (label, ctx) in [("identity Q", &standard), ("skew Q    ", &skewed)] {
        let pieces = conetodd::polyeml::face_contributions(ctx, &square, &weight)?;
        let vertices: Vec<String> = pieces
            .iter()
            .filter(|c| c.face_dim == 0)
            .map(|c| c.integral.to_string())
            .collect();
        println!("  {label} {}", vertices.join(", "));
    }

    // Sanity: the sums above match plain enumeration.
    assert_eq!(
        lattice_sum(&standard, &square, &weight)?,
        conetodd::polyeml::brute_force_sum(&square, &weight)?
    );
    Ok(())
}
