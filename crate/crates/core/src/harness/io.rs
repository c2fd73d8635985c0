//! File formats. Graphs and graphons are JSON with 1-based node indices;
//! θ fields are CSV. Floats are written with 17 significant digits.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};
use serde_json::Value;

use crate::error::{bail, Error, Result};
use crate::fields::ThetaField;
use crate::graph::Graph;
use crate::graphon::{AnalyticGraphon, AnalyticKind, Graphon, StepGraphon};

/// `printf("%.17g")`: 17 significant digits, trailing zeros dropped,
/// exponent form below `1e-4` and from `1e17` up.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct G17;

impl Formatter for G17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(format_g17(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Compact JSON with 17-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, G17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn graph_to_json(g: &Graph) -> Result<String> {
    to_json(&GraphFile { n: g.n(), edges: g.edges().map(|(i, j)| [i + 1, j + 1]).collect() })
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let mut edges = Vec::with_capacity(file.edges.len());
    for [i, j] in file.edges {
        if i == 0 || j == 0 {
            bail!(Input, "node indices are 1-based, found 0");
        }
        edges.push((i - 1, j - 1));
    }
    Graph::from_edges(file.n, edges)
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum GraphonFile {
    Step {
        widths: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
    Analytic {
        kind: String,
        #[serde(default)]
        params: Value,
    },
}

pub fn graphon_to_json(w: &Graphon) -> Result<String> {
    let file = match w {
        Graphon::Step(s) => GraphonFile::Step { widths: s.widths().to_vec(), values: s.values() },
        Graphon::Analytic(a) => {
            let (kind, params) = match a.kind() {
                AnalyticKind::Constant(c) => ("constant", serde_json::json!({ "value": c })),
                AnalyticKind::HalfGraph => ("halfgraph", serde_json::json!({})),
                AnalyticKind::BlockFamily(l) => ("blocks", serde_json::json!({ "lambda": l })),
                AnalyticKind::Bipartite(g) => ("bipartite", serde_json::json!({ "gamma": g })),
                AnalyticKind::Checkerboard(n) => ("checkerboard", serde_json::json!({ "n": n })),
            };
            GraphonFile::Analytic { kind: kind.into(), params }
        }
    };
    to_json(&file)
}

fn param<T: serde::de::DeserializeOwned>(params: &Value, key: &str, kind: &str) -> Result<T> {
    let v = params.get(key).ok_or_else(|| Error::Input(format!("{kind} graphon needs params.{key}")))?;
    Ok(serde_json::from_value(v.clone())?)
}

pub fn graphon_from_value(value: Value) -> Result<Graphon> {
    // graph files are accepted wherever a graphon is expected
    if value.get("edges").is_some() {
        let file: GraphFile = serde_json::from_value(value)?;
        let g = graph_from_json(&serde_json::to_string(&file)?)?;
        return Ok(StepGraphon::from_graph(&g).into());
    }
    let file: GraphonFile = serde_json::from_value(value)?;
    Ok(match file {
        GraphonFile::Step { widths, values } => StepGraphon::new(widths, values)?.into(),
        GraphonFile::Analytic { kind, params } => match kind.as_str() {
            "constant" => AnalyticGraphon::constant(param(&params, "value", &kind)?)?.into(),
            "halfgraph" => AnalyticGraphon::halfgraph().into(),
            "blocks" | "block_family" => {
                AnalyticGraphon::block_family(param(&params, "lambda", &kind)?)?.into()
            }
            "bipartite" => AnalyticGraphon::bipartite(param(&params, "gamma", &kind)?)?.into(),
            "checkerboard" => AnalyticGraphon::checkerboard(param(&params, "n", &kind)?)?.into(),
            other => bail!(Input, "unknown analytic graphon kind '{other}'"),
        },
    })
}

pub fn graphon_from_json(text: &str) -> Result<Graphon> {
    graphon_from_value(serde_json::from_str(text)?)
}

/// CSV with header `cell,theta_1,...,theta_N`, cells numbered from 1.
pub fn theta_to_csv(theta: &ThetaField) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["cell".to_string()];
    header.extend((1..=theta.labels()).map(|k| format!("theta_{k}")));
    w.write_record(&header).map_err(csv_err)?;
    for a in 0..theta.cells() {
        let mut rec = vec![(a + 1).to_string()];
        rec.extend(theta.row(a).iter().map(|&v| format_g17(v)));
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

pub fn theta_from_csv<R: Read>(reader: R) -> Result<ThetaField> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers().map_err(csv_err)?.clone();
    let labels = header.len().saturating_sub(1);
    if header.get(0) != Some("cell")
        || labels == 0
        || (1..=labels).any(|k| header.get(k) != Some(format!("theta_{k}").as_str()))
    {
        bail!(Input, "θ file header must be cell,theta_1,...,theta_N");
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let cell: usize =
            rec[0].trim().parse().map_err(|_| Error::Input(format!("line {}: bad cell index", i + 2)))?;
        if cell != i + 1 {
            bail!(Input, "line {}: expected cell {}, found {cell}", i + 2, i + 1);
        }
        let row = rec
            .iter()
            .skip(1)
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Input(format!("line {}: bad number", i + 2)))?;
        rows.push(row);
    }
    ThetaField::from_rows(rows)
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Input(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_matches_printf() {
        let cases = [
            (0.1, "0.10000000000000001"),
            (1.0 / 3.0, "0.33333333333333331"),
            (2.0, "2"),
            (0.5, "0.5"),
            (1e-5, "1.0000000000000001e-05"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (-0.0625, "-0.0625"),
            (0.0, "0"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g17(x), s, "{x}");
        }
    }

    #[test]
    fn g17_round_trips() {
        let mut x = 0.123_456_789_f64;
        for _ in 0..200 {
            x = (x * 7.3 + 0.1).fract() * 10f64.powi((x * 40.0) as i32 - 20);
            assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(4, [(0, 2), (0, 3), (1, 3)]).unwrap();
        let text = graph_to_json(&g).unwrap();
        assert_eq!(text, "{\"n\":4,\"edges\":[[1,3],[1,4],[2,4]]}\n");
        assert_eq!(graph_from_json(&text).unwrap(), g);
        assert!(graph_from_json(r#"{"n":2,"edges":[[0,1]]}"#).is_err());
    }

    #[test]
    fn graphon_round_trip() {
        let step: Graphon =
            StepGraphon::new(vec![0.25, 0.75], vec![vec![0.1, 1.0], vec![1.0, 0.0]]).unwrap().into();
        let text = graphon_to_json(&step).unwrap();
        assert!(text.contains("0.10000000000000001"));
        assert_eq!(graphon_to_json(&graphon_from_json(&text).unwrap()).unwrap(), text);

        for kind in [
            r#"{"type":"analytic","kind":"halfgraph"}"#,
            r#"{"type":"analytic","kind":"bipartite","params":{"gamma":0.3}}"#,
            r#"{"type":"analytic","kind":"blocks","params":{"lambda":[0.5,0.5]}}"#,
            r#"{"type":"analytic","kind":"checkerboard","params":{"n":2}}"#,
            r#"{"type":"analytic","kind":"constant","params":{"value":1}}"#,
        ] {
            let w = graphon_from_json(kind).unwrap();
            let again = graphon_from_json(&graphon_to_json(&w).unwrap()).unwrap();
            assert_eq!(graphon_to_json(&again).unwrap(), graphon_to_json(&w).unwrap());
        }
        assert!(graphon_from_json(r#"{"type":"analytic","kind":"bipartite"}"#).is_err());
    }

    #[test]
    fn theta_round_trip() {
        let t = ThetaField::from_rows(vec![vec![0.1, 0.9], vec![1.0, 0.0]]).unwrap();
        let text = theta_to_csv(&t).unwrap();
        assert!(text.starts_with("cell,theta_1,theta_2\n1,0.10000000000000001,0.90000000000000002\n"));
        assert_eq!(theta_from_csv(text.as_bytes()).unwrap(), t);
        assert!(theta_from_csv("cell,x\n1,1\n".as_bytes()).is_err());
    }
}
