//! The JSON document format used by the command-line tool. Every number
//! is a decimal-integer or "a/b" string, so values stay exact at any
//! size; series payloads are dense with terms in graded-lex order, which
//! makes the printed form canonical: print(parse(print(x))) == print(x)
//! byte for byte.
//!
//! Run with: cargo run --example documents_and_roundtrips

use conetodd::cones::Cone;
use conetodd::doc;
use conetodd::mu::MuContext;
use conetodd::ratlin::ivec;

fn main() -> conetodd::Result<()> {
    // A cone document.
    let cone = Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[1, 2])])?;
    let cone_doc = doc::cone_doc(&cone);
    let printed = cone_doc.to_json();
    println!("{printed}");

    let reparsed = doc::parse_cone_doc(&doc::Document::from_json(&printed)?)?;
    assert_eq!(reparsed.rays(), cone.rays());
    assert_eq!(doc::cone_doc(&reparsed).to_json(), printed);
    println!("cone document round-trips byte for byte\n");

    // A series document: dense, so the zero coefficients are explicit and
    // two equal series always print identically.
    let series = MuContext::standard(1).mu(&Cone::from_int_rays(1, &[ivec(&[1])])?, 4)?;
    let series_doc = doc::series_doc(&series);
    let printed = series_doc.to_json();
    println!("{printed}");
    let reparsed = doc::parse_series_doc(&doc::Document::from_json(&printed)?)?;
    assert_eq!(reparsed, series);
    assert_eq!(doc::series_doc(&reparsed).to_json(), printed);
    println!("series document round-trips byte for byte");
    Ok(())
}
