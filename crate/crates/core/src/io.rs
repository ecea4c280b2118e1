//! JSON file formats for complexes, graphs and exact matrices.

use serde::{Deserialize, Serialize};

use crate::complex::{Face, GraphSpec, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    faces: Option<Vec<Vec<usize>>>,
    maximal: Option<Vec<Vec<usize>>>,
    n: Option<usize>,
    edges: Option<Vec<(usize, usize)>>,
}

/// A parsed input document: either a complex or a graph (to be turned into its Whitney complex).
#[derive(Clone, Debug)]
pub enum Input {
    Complex(SimplicialComplex),
    Graph(GraphSpec),
}

impl Input {
    pub fn into_complex(self) -> Result<SimplicialComplex> {
        match self {
            Input::Complex(c) => Ok(c),
            Input::Graph(g) => SimplicialComplex::whitney(&g),
        }
    }

    pub fn graph(&self) -> Option<&GraphSpec> {
        match self {
            Input::Graph(g) => Some(g),
            Input::Complex(_) => None,
        }
    }
}

/// Parses `{"faces": ...}`, `{"maximal": ...}` or `{"n": .., "edges": ..}`.
pub fn parse_input(text: &str) -> Result<Input> {
    let raw: RawInput = serde_json::from_str(text)?;
    match raw {
        RawInput { faces: Some(faces), maximal: None, n: None, edges: None } => {
            let faces = faces.into_iter().map(Face::new).collect::<Result<Vec<_>>>()?;
            Ok(Input::Complex(SimplicialComplex::from_faces(faces)?))
        }
        RawInput { faces: None, maximal: Some(m), n: None, edges: None } => {
            Ok(Input::Complex(SimplicialComplex::from_maximal_faces(&m)?))
        }
        RawInput { faces: None, maximal: None, n: Some(n), edges } => {
            Ok(Input::Graph(GraphSpec::new(n, edges.unwrap_or_default())?))
        }
        _ => Err(Error::Parse(
            "expected exactly one of {\"faces\"}, {\"maximal\"} or {\"n\", \"edges\"}".into(),
        )),
    }
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    parse_input(text)?.into_complex()
}

#[derive(Serialize)]
struct FacesDoc<'a> {
    faces: Vec<&'a [usize]>,
}

/// Canonical complex document listing every face in canonical order.
pub fn complex_to_json(c: &SimplicialComplex) -> String {
    let doc = FacesDoc { faces: c.faces().iter().map(Face::vertices).collect() };
    serde_json::to_string(&doc).expect("faces serialize")
}

pub fn graph_to_json(g: &GraphSpec) -> String {
    serde_json::to_string(g).expect("graph serializes")
}

/// Array of arrays of exact entry strings (`"3"`, `"-1/2"`).
pub fn matrix_to_json(m: &ExactMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        (0..m.rows())
            .map(|i| {
                serde_json::Value::Array(
                    (0..m.cols()).map(|j| serde_json::Value::String(m.get(i, j).to_string())).collect(),
                )
            })
            .collect(),
    )
}

/// One row per line, entries as `p/q` strings (integers without denominator).
pub fn matrix_to_csv(m: &ExactMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
