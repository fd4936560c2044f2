//! Versioned JSON documents for every object the tool reads or writes.
//!
//! All numeric values are strings: decimal integers ("-3") or reduced
//! rationals ("5/12"), so documents are exact at any precision and
//! round-trip byte for byte. Series and polynomial term lists are in
//! graded-lexicographic order; series documents are dense (every exponent
//! through the stated order appears, zeros included), which makes the
//! printed form canonical.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cones::{Cone, Fan};
use crate::polyeml::{FaceContribution, PolyFunc};
use crate::polytope::LatticePolytope;
use crate::ratlin::{IVec, Int, QMat, QVec, Rat};
use crate::series::TruncSeries;
use crate::todd::ToddExpansion;
use crate::verify::VerifyReport;
use crate::{Error, Result};

pub const DOC_VERSION: u32 = 1;

/// The wire form of every input and output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub version: u32,
    pub kind: String,
    pub dim: usize,
    /// Optional scalar-product matrix; identity when absent.
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none", default)]
    pub q: Option<Vec<Vec<String>>>,
    pub payload: Value,
}

impl Document {
    fn new(kind: &str, dim: usize, payload: Value) -> Document {
        Document {
            version: DOC_VERSION,
            kind: kind.to_string(),
            dim,
            q: None,
            payload,
        }
    }

    pub fn with_metric(mut self, q: &QMat) -> Document {
        self.q = Some(qmat_to_rows(q));
        self
    }

    /// Canonical printed form: pretty JSON plus a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Document> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| Error::Document(format!("malformed document: {e}")))?;
        if doc.version != DOC_VERSION {
            return Err(Error::Document(format!(
                "unsupported document version {}",
                doc.version
            )));
        }
        Ok(doc)
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Document(format!(
                "expected a {kind} document, found kind {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    /// The scalar-product matrix carried by the document, if any.
    pub fn metric(&self) -> Result<Option<QMat>> {
        match &self.q {
            None => Ok(None),
            Some(rows) => Ok(Some(rows_to_qmat(rows, self.dim)?)),
        }
    }
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<Int> {
        t.parse::<Int>()
            .map_err(|_| Error::Document(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Document(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, den))
        }
    }
}

pub fn parse_int(s: &str) -> Result<Int> {
    s.parse::<Int>()
        .map_err(|_| Error::Document(format!("not an integer: {s:?}")))
}

fn ivec_to_json(v: &IVec) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn qmat_to_rows(q: &QMat) -> Vec<Vec<String>> {
    (0..q.rows())
        .map(|i| q.row(i).iter().map(rat_to_string).collect())
        .collect()
}

fn rows_to_qmat(rows: &[Vec<String>], dim: usize) -> Result<QMat> {
    if rows.len() != dim {
        return Err(Error::Document(format!(
            "matrix has {} rows, expected {dim}",
            rows.len()
        )));
    }
    let mut qrows: Vec<QVec> = Vec::new();
    for r in rows {
        if r.len() != dim {
            return Err(Error::Document(format!(
                "matrix row has {} entries, expected {dim}",
                r.len()
            )));
        }
        qrows.push(r.iter().map(|s| parse_rat(s)).collect::<Result<QVec>>()?);
    }
    Ok(QMat::from_rows(&qrows))
}

/// Parse a scalar-product matrix given as a bare JSON array of rows of
/// rational strings, e.g. `[["2","1"],["1","3"]]`.
pub fn parse_metric_json(text: &str, dim: usize) -> Result<QMat> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Document(format!("bad matrix: {e}")))?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Document("matrix must be an array of rows".into()))?;
    let mut parsed: Vec<Vec<String>> = Vec::new();
    for row in rows {
        let entries = row
            .as_array()
            .ok_or_else(|| Error::Document("matrix row must be an array".into()))?;
        parsed.push(
            entries
                .iter()
                .map(|e| as_str(e, "matrix entry").map(str::to_owned))
                .collect::<Result<Vec<String>>>()?,
        );
    }
    rows_to_qmat(&parsed, dim)
}

fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Document(format!("{what} must be an object")))
}

fn field<'v>(m: &'v Map<String, Value>, name: &str) -> Result<&'v Value> {
    m.get(name)
        .ok_or_else(|| Error::Document(format!("missing field {name:?}")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Document(format!("{what} must be an array")))
}

fn as_str<'v>(v: &'v Value, what: &str) -> Result<&'v str> {
    v.as_str()
        .ok_or_else(|| Error::Document(format!("{what} must be a string")))
}

fn parse_ivec(v: &Value, dim: usize, what: &str) -> Result<IVec> {
    let arr = as_array(v, what)?;
    if arr.len() != dim {
        return Err(Error::Document(format!(
            "{what} has {} coordinates, expected {dim}",
            arr.len()
        )));
    }
    arr.iter().map(|x| parse_int(as_str(x, what)?)).collect()
}

fn parse_expo(v: &Value, nvars: usize) -> Result<Vec<u32>> {
    let arr = as_array(v, "exponent")?;
    if arr.len() != nvars {
        return Err(Error::Document(format!(
            "exponent has {} entries, expected {nvars}",
            arr.len()
        )));
    }
    arr.iter()
        .map(|x| {
            x.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Document("exponents must be small nonnegative integers".into()))
        })
        .collect()
}

/// All exponent vectors with total degree at most `order`, in graded-lex
/// order.
fn dense_exponents(nvars: usize, order: u32) -> Vec<Vec<u32>> {
    fn fill(nvars: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars {
            out.push(prefix.clone());
            return;
        }
        if prefix.len() + 1 == nvars {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=remaining {
            prefix.push(k);
            fill(nvars, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(Vec::new());
        return out;
    }
    for total in 0..=order {
        fill(nvars, total, &mut Vec::new(), &mut out);
    }
    out
}

// ---------------------------------------------------------------------
// Builders and parsers per kind.

pub fn cone_doc(cone: &Cone) -> Document {
    let payload = json!({
        "rays": cone.rays().iter().map(ivec_to_json).collect::<Vec<_>>(),
    });
    Document::new("cone", cone.dim(), payload)
}

pub fn parse_cone_doc(doc: &Document) -> Result<Cone> {
    doc.expect_kind("cone")?;
    let m = as_object(&doc.payload, "cone payload")?;
    let rays = as_array(field(m, "rays")?, "rays")?
        .iter()
        .map(|r| parse_ivec(r, doc.dim, "ray"))
        .collect::<Result<Vec<IVec>>>()?;
    Cone::from_int_rays(doc.dim, &rays)
}

pub fn fan_doc(fan: &Fan) -> Document {
    let cones: Vec<Value> = fan
        .cones()
        .iter()
        .map(|c| Value::Array(c.rays().iter().map(ivec_to_json).collect()))
        .collect();
    Document::new("fan", fan.dim(), json!({ "cones": cones }))
}

pub fn parse_fan_doc(doc: &Document) -> Result<Fan> {
    doc.expect_kind("fan")?;
    let m = as_object(&doc.payload, "fan payload")?;
    let mut cones = Vec::new();
    for c in as_array(field(m, "cones")?, "cones")? {
        let rays = as_array(c, "cone rays")?
            .iter()
            .map(|r| parse_ivec(r, doc.dim, "ray"))
            .collect::<Result<Vec<IVec>>>()?;
        cones.push(Cone::from_int_rays(doc.dim, &rays)?);
    }
    Fan::from_cones(doc.dim, &cones)
}

pub fn polytope_doc(p: &LatticePolytope) -> Document {
    let payload = json!({
        "vertices": p.vertices().iter().map(ivec_to_json).collect::<Vec<_>>(),
    });
    Document::new("polytope", p.ambient_dim(), payload)
}

pub fn parse_polytope_doc(doc: &Document) -> Result<LatticePolytope> {
    doc.expect_kind("polytope")?;
    let m = as_object(&doc.payload, "polytope payload")?;
    let vertices = as_array(field(m, "vertices")?, "vertices")?
        .iter()
        .map(|v| parse_ivec(v, doc.dim, "vertex"))
        .collect::<Result<Vec<IVec>>>()?;
    LatticePolytope::from_points(doc.dim, &vertices)
}

pub fn polynomial_doc(h: &PolyFunc) -> Document {
    let terms: Vec<Value> = h
        .terms()
        .map(|(e, c)| {
            json!({
                "expo": e.0.clone(),
                "coeff": rat_to_string(c),
            })
        })
        .collect();
    Document::new("polynomial", h.nvars(), json!({ "terms": terms }))
}

pub fn parse_polynomial_doc(doc: &Document) -> Result<PolyFunc> {
    doc.expect_kind("polynomial")?;
    let m = as_object(&doc.payload, "polynomial payload")?;
    let mut terms = Vec::new();
    for t in as_array(field(m, "terms")?, "terms")? {
        let tm = as_object(t, "term")?;
        let expo = parse_expo(field(tm, "expo")?, doc.dim)?;
        let coeff = parse_rat(as_str(field(tm, "coeff")?, "coeff")?)?;
        terms.push((coeff, expo));
    }
    PolyFunc::from_terms(doc.dim, &terms)
}

fn series_value(s: &TruncSeries) -> Value {
    let terms: Vec<Value> = dense_exponents(s.nvars(), s.order())
        .into_iter()
        .map(|e| {
            let c = s.coeff(&e);
            json!({ "expo": e, "coeff": rat_to_string(&c) })
        })
        .collect();
    json!({ "order": s.order(), "terms": terms })
}

fn parse_series_value(v: &Value, nvars: usize) -> Result<TruncSeries> {
    let m = as_object(v, "series payload")?;
    let order = field(m, "order")?
        .as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .ok_or_else(|| Error::Document("series order must be a small integer".into()))?;
    let mut terms = Vec::new();
    for t in as_array(field(m, "terms")?, "terms")? {
        let tm = as_object(t, "term")?;
        let expo = parse_expo(field(tm, "expo")?, nvars)?;
        let coeff = parse_rat(as_str(field(tm, "coeff")?, "coeff")?)?;
        if expo.iter().sum::<u32>() > order {
            return Err(Error::Document(
                "series term exceeds the stated order".into(),
            ));
        }
        terms.push((expo, coeff));
    }
    TruncSeries::from_terms(nvars, order, terms)
}

pub fn series_doc(s: &TruncSeries) -> Document {
    Document::new("series", s.nvars(), series_value(s))
}

pub fn parse_series_doc(doc: &Document) -> Result<TruncSeries> {
    doc.expect_kind("series")?;
    parse_series_value(&doc.payload, doc.dim)
}

pub fn todd_doc(fan: &Fan, expansion: &ToddExpansion) -> Document {
    let entries: Vec<Value> = expansion
        .entries()
        .iter()
        .map(|(cone, series)| {
            json!({
                "cone": cone.rays().iter().map(ivec_to_json).collect::<Vec<_>>(),
                "series": series_value(series),
            })
        })
        .collect();
    Document::new(
        "todd-expansion",
        fan.dim(),
        json!({ "order": expansion.order(), "entries": entries }),
    )
}

pub fn parse_todd_doc(doc: &Document) -> Result<Vec<(Vec<IVec>, TruncSeries)>> {
    doc.expect_kind("todd-expansion")?;
    let m = as_object(&doc.payload, "todd payload")?;
    let mut out = Vec::new();
    for e in as_array(field(m, "entries")?, "entries")? {
        let em = as_object(e, "entry")?;
        let rays = as_array(field(em, "cone")?, "cone")?
            .iter()
            .map(|r| parse_ivec(r, doc.dim, "ray"))
            .collect::<Result<Vec<IVec>>>()?;
        let series = parse_series_value(field(em, "series")?, doc.dim)?;
        out.push((rays, series));
    }
    Ok(out)
}

/// Report document for a weighted count. `span_dim` is the dimension of the
/// affine span the computation ran in; when face contributions are included
/// their vertex index sets refer to the polytope restricted to that span.
pub fn count_doc(
    ambient_dim: usize,
    span_dim: usize,
    sum: &Rat,
    faces: Option<&[FaceContribution]>,
) -> Document {
    let mut payload = Map::new();
    payload.insert("sum".into(), json!(rat_to_string(sum)));
    payload.insert("span_dim".into(), json!(span_dim));
    if let Some(faces) = faces {
        let items: Vec<Value> = faces
            .iter()
            .map(|c| {
                json!({
                    "vertices": c.face,
                    "dim": c.face_dim,
                    "integral": rat_to_string(&c.integral),
                })
            })
            .collect();
        payload.insert("faces".into(), Value::Array(items));
    }
    Document::new("report", ambient_dim, Value::Object(payload))
}

pub fn report_doc(report: &VerifyReport) -> Document {
    let items: Vec<Value> = report
        .items
        .iter()
        .map(|i| {
            json!({
                "instance": i.instance,
                "identity": i.identity,
                "pass": i.pass,
                "detail": i.detail,
            })
        })
        .collect();
    Document::new(
        "report",
        0,
        json!({
            "suite": report.suite,
            "seed": report.seed.to_string(),
            "order": report.order,
            "pass": report.passed(),
            "items": items,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::ratlin::{ivec, qvec, rat};

    #[test]
    fn rational_strings_round_trip() {
        for r in [rat(0, 1), rat(5, 1), rat(-7, 3), rat(22, 4)] {
            let s = rat_to_string(&r);
            assert_eq!(parse_rat(&s).unwrap(), r);
        }
        assert_eq!(rat_to_string(&rat(22, 4)), "11/2");
        assert_eq!(rat_to_string(&rat(-3, 1)), "-3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn dense_exponents_are_graded_lex() {
        let e = dense_exponents(2, 2);
        assert_eq!(
            e,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0],
            ]
        );
        assert_eq!(dense_exponents(0, 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn cone_document_round_trips_bytes() {
        let cone = corpus::cone_over_square();
        let doc = cone_doc(&cone);
        let text = doc.to_json();
        let back = Document::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(parse_cone_doc(&back).unwrap(), cone);
    }

    #[test]
    fn fan_document_round_trips() {
        for (_, fan) in corpus::corpus_fans() {
            let doc = fan_doc(&fan);
            let text = doc.to_json();
            let back = Document::from_json(&text).unwrap();
            assert_eq!(back.to_json(), text);
            let fan2 = parse_fan_doc(&back).unwrap();
            assert_eq!(fan2.cones(), fan.cones());
        }
    }

    #[test]
    fn polytope_and_polynomial_round_trip() {
        let p = corpus::unit_simplex(3);
        let pd = polytope_doc(&p);
        let p2 = parse_polytope_doc(&Document::from_json(&pd.to_json()).unwrap()).unwrap();
        assert_eq!(p2.vertices(), p.vertices());

        let h = PolyFunc::from_terms(
            3,
            &[
                (rat(1, 2), vec![2, 0, 1]),
                (rat(-4, 1), vec![0, 0, 0]),
                (rat(7, 3), vec![1, 1, 0]),
            ],
        )
        .unwrap();
        let hd = polynomial_doc(&h);
        let h2 = parse_polynomial_doc(&Document::from_json(&hd.to_json()).unwrap()).unwrap();
        assert_eq!(h2, h);
    }

    #[test]
    fn series_documents_are_dense_and_round_trip() {
        let s = TruncSeries::from_terms(
            2,
            3,
            [(vec![1, 0], rat(1, 2)), (vec![0, 2], rat(-5, 3))],
        )
        .unwrap();
        let doc = series_doc(&s);
        // Dense: every exponent through order 3 appears.
        let n_terms = doc.payload["terms"].as_array().unwrap().len();
        assert_eq!(n_terms, 10);
        let s2 = parse_series_doc(&Document::from_json(&doc.to_json()).unwrap()).unwrap();
        assert_eq!(s2, s);
        assert_eq!(series_doc(&s2).to_json(), doc.to_json());
    }

    #[test]
    fn metric_field_round_trips() {
        let q = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 3])]);
        let cone = Cone::from_int_rays(2, &[ivec(&[1, 0]), ivec(&[1, 2])]).unwrap();
        let doc = cone_doc(&cone).with_metric(&q);
        let text = doc.to_json();
        assert!(text.contains("\"Q\""));
        let back = Document::from_json(&text).unwrap();
        let q2 = back.metric().unwrap().unwrap();
        assert_eq!(q2.row(0), qvec(&[2, 1]));
        assert_eq!(q2.row(1), qvec(&[1, 3]));
    }

    #[test]
    fn todd_document_round_trips() {
        let fan = corpus::p1_fan();
        let ctx = crate::mu::MuContext::standard(1);
        let expansion = crate::todd::todd_coefficients(&ctx, &fan, 4).unwrap();
        let doc = todd_doc(&fan, &expansion);
        let text = doc.to_json();
        let entries = parse_todd_doc(&Document::from_json(&text).unwrap()).unwrap();
        assert_eq!(entries.len(), 3);
        let pos = entries
            .iter()
            .find(|(rays, _)| rays == &vec![ivec(&[1])])
            .unwrap();
        assert_eq!(pos.1.constant_term(), rat(1, 2));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(Document::from_json("{").is_err());
        assert!(Document::from_json("{\"version\":9,\"kind\":\"cone\",\"dim\":1,\"payload\":{}}").is_err());
        let doc = Document::from_json(
            "{\"version\":1,\"kind\":\"cone\",\"dim\":1,\"payload\":{\"rays\":[[\"x\"]]}}",
        )
        .unwrap();
        assert!(parse_cone_doc(&doc).is_err());
    }
}
