//! The sixteen two-dimensional reflexive polygons.
//!
//! Polygons whose models appear in the ML-degree table carry that table's
//! ideal generators verbatim, together with the lattice point behind each
//! coordinate `p_i`. The ideal-match tests check those generators against the
//! kernel of the lifted matrix, so a transcription slip shows up as a failure.

use serde::Serialize;

use super::{lift_points, singularity_profile, LatticePoint, LatticePolygon};
use crate::error::{Error, Result};
use crate::model::ToricModel;

pub const CATALOG_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub polygon: LatticePolygon,
    /// Surface name in the ML-degree table (`S3`, `S4'`, ...), if listed there.
    pub surface: Option<&'static str>,
    /// Ideal generators exactly as tabulated, in `p1*p2 - p3^2` syntax.
    pub ideal: Vec<&'static str>,
    /// Lattice point for each coordinate `p_1..p_m`, in order.
    pub coordinates: Vec<LatticePoint>,
    pub known_ml_degree: Option<u32>,
    pub note: Option<&'static str>,
}

impl CatalogEntry {
    /// Number of boundary lattice points, which is the anticanonical degree.
    pub fn degree(&self) -> usize {
        self.coordinates.len() - 1
    }

    /// Model matrix with columns in [`CatalogEntry::coordinates`] order.
    pub fn model(&self) -> Result<ToricModel> {
        lift_points(self.surface.unwrap_or(self.label), &self.coordinates)
    }
}

type Pts = &'static [(i64, i64)];

struct Raw {
    label: &'static str,
    vertices: Pts,
    surface: Option<&'static str>,
    ideal: &'static [&'static str],
    coordinates: Option<Pts>,
    ml_degree: Option<u32>,
    note: Option<&'static str>,
}

const RAW: &[Raw] = &[
    Raw {
        label: "3",
        vertices: &[(1, 0), (0, 1), (-1, -1)],
        surface: Some("S3"),
        ideal: &["p1*p2*p3 - p4^3"],
        coordinates: Some(&[(1, 0), (0, 1), (-1, -1), (0, 0)]),
        ml_degree: Some(3),
        note: None,
    },
    Raw {
        label: "4a",
        vertices: &[(0, -1), (1, 1), (-1, 1)],
        surface: Some("S4''"),
        ideal: &["p2*p4 - p3^2", "p1*p3 - p5^2"],
        coordinates: Some(&[(0, -1), (1, 1), (0, 1), (-1, 1), (0, 0)]),
        ml_degree: Some(4),
        note: Some("A3+2A1 quartic; same ideal as model S4_A3 (also labelled S4''')"),
    },
    Raw {
        label: "4b",
        vertices: &[(1, 0), (0, 1), (-1, 0), (0, -1)],
        surface: Some("S4"),
        ideal: &["p1*p4 - p5^2", "p2*p3 - p1*p4"],
        coordinates: Some(&[(1, 0), (0, 1), (0, -1), (-1, 0), (0, 0)]),
        ml_degree: Some(4),
        note: None,
    },
    Raw {
        label: "4c",
        vertices: &[(1, 0), (0, 1), (-1, 1), (0, -1)],
        surface: Some("S4'"),
        ideal: &["p2*p4 - p3*p5", "p1*p3 - p5^2"],
        coordinates: Some(&[(0, -1), (-1, 1), (0, 1), (1, 0), (0, 0)]),
        ml_degree: Some(4),
        note: Some(
            "A2+2A1 quartic; model S4_A2 (also labelled S4'') orders coordinates differently, giving ideal p1*p3 - p2*p5, p2*p4 - p5^2",
        ),
    },
    Raw {
        label: "5a",
        vertices: &[(-1, -1), (0, -1), (1, 0), (-1, 1)],
        surface: Some("S5'"),
        ideal: &["p3*p5 - p4*p6", "p2*p5 - p6^2", "p2*p4 - p3*p6", "p1*p4 - p2*p6", "p2^2 - p1*p3"],
        coordinates: Some(&[(-1, 1), (-1, 0), (-1, -1), (0, -1), (1, 0), (0, 0)]),
        ml_degree: Some(5),
        note: None,
    },
    Raw {
        label: "5b",
        vertices: &[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)],
        surface: Some("S5"),
        ideal: &["p3*p5 - p4*p6", "p2*p5 - p6^2", "p2*p4 - p3*p6", "p1*p4 - p6^2", "p1*p3 - p2*p6"],
        coordinates: Some(&[(0, -1), (-1, 0), (-1, 1), (0, 1), (1, 0), (0, 0)]),
        ml_degree: Some(3),
        note: Some("two A1 points; ML degree 3 is below the degree 5"),
    },
    Raw {
        label: "6a",
        vertices: &[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
        surface: Some("S6"),
        ideal: &[
            "p4*p6 - p5*p7", "p3*p6 - p7^2", "p2*p6 - p1*p7",
            "p3*p5 - p4*p7", "p2*p5 - p7^2", "p1*p5 - p6*p7",
            "p2*p4 - p3*p7", "p1*p4 - p7^2", "p1*p3 - p2*p7",
        ],
        coordinates: Some(&[(-1, -1), (-1, 0), (0, 1), (1, 1), (1, 0), (0, -1), (0, 0)]),
        ml_degree: Some(6),
        note: None,
    },
    Raw {
        label: "6b",
        vertices: &[(-1, -1), (1, -1), (1, 0), (0, 1), (-1, 0)],
        surface: Some("S6'"),
        ideal: &[
            "p5*p6 - p1*p7", "p4*p6 - p2*p7", "p3*p5 - p4*p7",
            "p2*p5 - p7^2", "p2*p4 - p3*p7", "p1*p4 - p7^2",
            "p1*p3 - p2*p7", "p2^2 - p3*p6", "p1*p2 - p6*p7",
        ],
        coordinates: Some(&[(-1, 0), (0, -1), (1, -1), (1, 0), (0, 1), (-1, -1), (0, 0)]),
        ml_degree: Some(6),
        note: None,
    },
    Raw {
        label: "6c",
        vertices: &[(-2, -1), (0, -1), (1, 0), (0, 1)],
        surface: Some("S6''"),
        ideal: &[
            "p6^2 - p5*p7", "p4*p6 - p3*p7", "p3*p6 - p2*p7",
            "p4*p5 - p2*p7", "p3*p5 - p2*p6", "p2*p4 - p1*p7",
            "p3^2 - p1*p7", "p2*p3 - p1*p6", "p2^2 - p1*p5",
        ],
        coordinates: Some(&[(0, 1), (-1, 0), (0, 0), (1, 0), (-2, -1), (-1, -1), (0, -1)]),
        ml_degree: Some(6),
        note: None,
    },
    Raw {
        label: "6d",
        vertices: &[(-2, 1), (0, -1), (1, 1)],
        surface: Some("S6'''"),
        ideal: &[
            "p6^2 - p5*p7", "p5*p6 - p4*p7", "p3*p6 - p2*p7",
            "p5^2 - p4*p6", "p3*p5 - p2*p6", "p3*p4 - p2*p5",
            "p3^2 - p1*p6", "p2*p3 - p1*p5", "p2^2 - p1*p4",
        ],
        coordinates: Some(&[(0, -1), (-1, 0), (0, 0), (-2, 1), (-1, 1), (0, 1), (1, 1)]),
        ml_degree: Some(6),
        note: None,
    },
    Raw {
        label: "7a",
        vertices: &[(-1, -1), (1, -1), (1, 0), (0, 1), (-1, 1)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: Some("ML degree computation reported infeasible with Macaulay2 on a laptop"),
    },
    Raw {
        label: "7b",
        vertices: &[(-2, -1), (1, -1), (1, 0), (0, 1)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: None,
    },
    Raw {
        label: "8a",
        vertices: &[(-1, -1), (1, -1), (1, 1), (-1, 1)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: None,
    },
    Raw {
        label: "8b",
        vertices: &[(-1, -1), (2, -1), (0, 1), (-1, 1)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: None,
    },
    Raw {
        label: "8c",
        vertices: &[(-1, -1), (3, -1), (-1, 1)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: None,
    },
    Raw {
        label: "9",
        vertices: &[(-1, -1), (2, -1), (-1, 2)],
        surface: None,
        ideal: &[],
        coordinates: None,
        ml_degree: None,
        note: None,
    },
];

fn pts(raw: Pts) -> Vec<LatticePoint> {
    raw.iter().map(|&(x, y)| LatticePoint::new(x, y)).collect()
}

/// All sixteen reflexive polygons, ordered by degree.
pub fn catalog() -> Vec<CatalogEntry> {
    RAW.iter()
        .map(|r| {
            let polygon = LatticePolygon::new(r.label, pts(r.vertices));
            let coordinates = match r.coordinates {
                Some(c) => pts(c),
                None => polygon.lattice_points(),
            };
            CatalogEntry {
                label: r.label,
                polygon,
                surface: r.surface,
                ideal: r.ideal.to_vec(),
                coordinates,
                known_ml_degree: r.ml_degree,
                note: r.note,
            }
        })
        .collect()
}

/// Finds an entry by polygon label (`"5b"`) or surface name (`"S5"`).
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    catalog()
        .into_iter()
        .find(|e| e.label == name || e.surface == Some(name))
        .ok_or_else(|| Error::UnknownModel(name.to_string()))
}

#[derive(Serialize)]
struct EntryJson {
    label: &'static str,
    vertices: Vec<LatticePoint>,
    degree: usize,
    singularities: Vec<String>,
    ideal: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    surface: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ml_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

#[derive(Serialize)]
struct CatalogJson {
    version: u32,
    polygons: Vec<EntryJson>,
}

/// The catalog as a versioned JSON document.
pub fn catalog_json() -> Result<serde_json::Value> {
    let polygons = catalog()
        .into_iter()
        .map(|e| {
            Ok(EntryJson {
                label: e.label,
                degree: e.degree(),
                singularities: singularity_profile(&e.polygon)?.names(),
                vertices: e.polygon.vertices,
                ideal: e.ideal,
                surface: e.surface,
                ml_degree: e.known_ml_degree,
                note: e.note,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    serde_json::to_value(CatalogJson {
        version: CATALOG_VERSION,
        polygons,
    })
    .map_err(|e| Error::Internal(e.to_string()))
}
