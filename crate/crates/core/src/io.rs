//! JSON documents read and written by the command-line tool.
//!
//! Output is canonical: fields in declaration order, floats in shortest
//! round-trip form, two-space indentation, trailing newline. Reading a
//! document and writing it back reproduces the same bytes.

use serde::{Deserialize, Serialize};

use crate::dissection::{GridDissection, SquareTiling};
use crate::error::Result as GeomResult;
use crate::geometry::{ConvexQuad, Point2};

/// `{"vertices": [[u,v] x4], "label"?: string, "seed"?: int}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadDocument {
    pub vertices: [[f64; 2]; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl QuadDocument {
    pub fn from_quad(q: &ConvexQuad) -> Self {
        QuadDocument {
            vertices: q.vertices().map(<[f64; 2]>::from),
            label: None,
            seed: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn to_quad(&self) -> GeomResult<ConvexQuad> {
        ConvexQuad::from_coords(self.vertices)
    }
}

/// `{"n", "lattice": [[u,v], ...] row-major, "source": quad, "max_defect"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissectionDocument {
    pub n: usize,
    pub lattice: Vec<[f64; 2]>,
    pub source: QuadDocument,
    pub max_defect: f64,
}

impl DissectionDocument {
    pub fn new(d: &GridDissection, source: QuadDocument, max_defect: f64) -> Self {
        DissectionDocument {
            n: d.n,
            lattice: d.vertices.iter().map(|&p| p.into()).collect(),
            source,
            max_defect,
        }
    }

    /// Cells read back from the lattice, row-major.
    pub fn cells(&self) -> Result<Vec<[Point2; 4]>, String> {
        let n = self.n;
        if n == 0 || self.lattice.len() != (n + 1) * (n + 1) {
            return Err(format!(
                "lattice has {} points, expected (n+1)^2 = {}",
                self.lattice.len(),
                (n + 1) * (n + 1)
            ));
        }
        let p = |k: usize, j: usize| Point2::from(self.lattice[j * (n + 1) + k]);
        Ok((0..n)
            .flat_map(|j| (0..n).map(move |k| (k, j)))
            .map(|(k, j)| [p(k, j), p(k + 1, j), p(k + 1, j + 1), p(k, j + 1)])
            .collect())
    }
}

/// Output of a tiling dissection: one cell per square, in tiling order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellsDocument {
    pub squares: Vec<[f64; 3]>,
    pub cells: Vec<[[f64; 2]; 4]>,
    pub source: QuadDocument,
    pub max_defect: f64,
}

impl CellsDocument {
    pub fn cells(&self) -> Vec<[Point2; 4]> {
        self.cells.iter().map(|c| c.map(Point2::from)).collect()
    }
}

/// Either dissection output, for `verify`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AnyDissection {
    Grid(DissectionDocument),
    Cells(CellsDocument),
}

pub type TilingDocument = SquareTiling;

pub fn to_canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissection::dissect;
    use proptest::prelude::*;

    #[test]
    fn quad_document_shape() {
        let doc: QuadDocument =
            serde_json::from_str(r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]], "label": "sq"}"#)
                .unwrap();
        assert_eq!(doc.label.as_deref(), Some("sq"));
        assert!(doc.to_quad().is_ok());
        let bad: QuadDocument =
            serde_json::from_str(r#"{"vertices": [[0,0],[2,0],[0.5,0.5],[0,2]]}"#).unwrap();
        let err = bad.to_quad().unwrap_err().to_string();
        assert!(err.contains("convex"), "{err}");
        assert!(serde_json::from_str::<QuadDocument>(r#"{"vertices": [[0,0],[1,0]]}"#).is_err());
    }

    #[test]
    fn dissection_document_round_trip() {
        let q = ConvexQuad::from_coords([
            [0.5, 2.0 / 3.0],
            [2.0 / 7.0, 8.0 / 21.0],
            [0.5, 4.0 / 15.0],
            [5.0 / 7.0, 8.0 / 21.0],
        ])
        .unwrap();
        let d = dissect(&q, 3).unwrap();
        let rep = d.validate(1e-9);
        let doc = DissectionDocument::new(&d, QuadDocument::from_quad(&q), rep.max_defect);
        let text = to_canonical_json(&doc).unwrap();
        assert!(text.ends_with("}\n"));
        let back: DissectionDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&back).unwrap(), text);
        assert_eq!(back.cells().unwrap(), d.cells());
        match serde_json::from_str::<AnyDissection>(&text).unwrap() {
            AnyDissection::Grid(g) => assert_eq!(g.n, 3),
            AnyDissection::Cells(_) => panic!("wrong variant"),
        }
    }

    #[test]
    fn bad_lattice_length() {
        let doc = DissectionDocument {
            n: 2,
            lattice: vec![[0.0, 0.0]; 5],
            source: QuadDocument {
                vertices: [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
                label: None,
                seed: None,
            },
            max_defect: 0.0,
        };
        assert!(doc.cells().is_err());
    }

    proptest! {
        #[test]
        fn float_text_round_trips(vals in proptest::collection::vec(-1e6f64..1e6, 8)) {
            let doc = QuadDocument {
                vertices: [
                    [vals[0], vals[1]], [vals[2], vals[3]],
                    [vals[4], vals[5]], [vals[6], vals[7]],
                ],
                label: Some("p".into()),
                seed: Some(9),
            };
            let text = to_canonical_json(&doc).unwrap();
            let back: QuadDocument = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(to_canonical_json(&back).unwrap(), text);
        }
    }
}
