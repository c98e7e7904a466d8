//! Reflexive lattice polygons: validation, boundary enumeration, Du Val
//! singularity detection from the normal fan, and lifting to model matrices.

mod catalog;

pub use catalog::{catalog, catalog_json, lookup, CatalogEntry, CATALOG_VERSION};

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ToricModel;

/// A point of `Z^2`. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from(a: [i64; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i64 {
    let (u, v) = (a.sub(o), b.sub(o));
    u.x * v.y - u.y * v.x
}

fn det(a: LatticePoint, b: LatticePoint) -> i64 {
    a.x * b.y - a.y * b.x
}

fn primitive(v: LatticePoint) -> LatticePoint {
    let g = v.x.gcd(&v.y);
    LatticePoint::new(v.x / g, v.y / g)
}

/// Convex lattice polygon given by its vertices, counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolygon {
    pub label: String,
    pub vertices: Vec<LatticePoint>,
}

impl LatticePolygon {
    /// Takes the vertex list verbatim; use [`validate_reflexive`] to check it.
    pub fn new(label: impl Into<String>, vertices: Vec<LatticePoint>) -> Self {
        Self {
            label: label.into(),
            vertices,
        }
    }

    /// Convex hull of arbitrary points, vertices counterclockwise starting at
    /// the lexicographically smallest one.
    pub fn from_points(label: impl Into<String>, points: &[LatticePoint]) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::Malformed(format!(
                "convex hull has {} vertices, need at least 3",
                hull.len()
            )));
        }
        Ok(Self::new(label, hull))
    }

    /// Image under the integer matrix `[[a, b], [c, d]]` (acting on columns).
    pub fn transformed(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let pts: Vec<_> = self
            .vertices
            .iter()
            .map(|p| LatticePoint::new(m[0][0] * p.x + m[0][1] * p.y, m[1][0] * p.x + m[1][1] * p.y))
            .collect();
        Self::from_points(self.label.clone(), &pts)
    }

    fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the Euclidean area (shoelace).
    pub fn twice_area(&self) -> i64 {
        self.edges().map(|(a, b)| det(a, b)).sum::<i64>().abs()
    }

    fn bounding_box(&self) -> (i64, i64, i64, i64) {
        let xs = self.vertices.iter().map(|p| p.x);
        let ys = self.vertices.iter().map(|p| p.y);
        (
            xs.clone().min().unwrap_or(0),
            xs.max().unwrap_or(0),
            ys.clone().min().unwrap_or(0),
            ys.max().unwrap_or(0),
        )
    }

    /// Lattice points strictly inside, lexicographic order (bounding-box scan).
    pub fn interior_lattice_points(&self) -> Vec<LatticePoint> {
        let (x0, x1, y0, y1) = self.bounding_box();
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = LatticePoint::new(x, y);
                if self.edges().all(|(a, b)| cross(a, b, p) > 0) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// All lattice points: boundary (counterclockwise) followed by interior.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let mut pts = boundary_points_unchecked(self);
        pts.extend(self.interior_lattice_points());
        pts
    }
}

fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// One failed reflexivity condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Turn at this vertex is clockwise or straight (not strictly convex / not CCW).
    NotStrictlyConvex { vertex: LatticePoint },
    /// Edge whose supporting line is not at lattice distance one from the origin.
    EdgeDistance {
        from: LatticePoint,
        to: LatticePoint,
        distance: i64,
    },
    /// Interior lattice point other than the origin.
    ExtraInteriorPoint { point: LatticePoint },
    OriginNotInterior,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotStrictlyConvex { vertex } => {
                write!(f, "vertex {vertex} is not a strictly convex counterclockwise turn")
            }
            Violation::EdgeDistance { from, to, distance } => {
                write!(f, "edge {from}-{to} lies at lattice distance {distance} from the origin")
            }
            Violation::ExtraInteriorPoint { point } => write!(f, "extra interior point {point}"),
            Violation::OriginNotInterior => write!(f, "origin is not an interior point"),
        }
    }
}

/// Outcome of [`validate_reflexive`]; empty `violations` means reflexive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks strict convexity, orientation, and both reflexivity conditions.
pub fn validate_reflexive(poly: &LatticePolygon) -> Result<ValidationReport> {
    let n = poly.vertices.len();
    if n < 3 {
        return Err(Error::Malformed(format!(
            "polygon '{}' has {} vertices, need at least 3",
            poly.label, n
        )));
    }
    let mut violations = Vec::new();
    for i in 0..n {
        let (a, b, c) = (poly.vertices[(i + n - 1) % n], poly.vertices[i], poly.vertices[(i + 1) % n]);
        if cross(a, b, c) <= 0 {
            violations.push(Violation::NotStrictlyConvex { vertex: b });
        }
    }
    if !violations.is_empty() {
        // edge and interior tests assume a convex CCW polygon
        return Ok(ValidationReport { violations });
    }
    for (a, b) in poly.edges() {
        let e = b.sub(a);
        let len = e.x.gcd(&e.y);
        // signed lattice distance of the origin to the edge line
        let distance = cross(a, b, LatticePoint::ORIGIN) / len;
        if distance != 1 {
            violations.push(Violation::EdgeDistance { from: a, to: b, distance });
        }
    }
    let interior = poly.interior_lattice_points();
    if !interior.contains(&LatticePoint::ORIGIN) {
        violations.push(Violation::OriginNotInterior);
    }
    violations.extend(
        interior
            .into_iter()
            .filter(|p| *p != LatticePoint::ORIGIN)
            .map(|point| Violation::ExtraInteriorPoint { point }),
    );
    Ok(ValidationReport { violations })
}

fn require_reflexive(poly: &LatticePolygon) -> Result<()> {
    let report = validate_reflexive(poly)?;
    if report.is_ok() {
        Ok(())
    } else {
        let msgs: Vec<_> = report.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::Domain(format!(
            "polygon '{}' is not reflexive: {}",
            poly.label,
            msgs.join("; ")
        )))
    }
}

fn boundary_points_unchecked(poly: &LatticePolygon) -> Vec<LatticePoint> {
    let n = poly.vertices.len();
    let start = (0..n).min_by_key(|&i| poly.vertices[i]).unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..n {
        let a = poly.vertices[(start + k) % n];
        let b = poly.vertices[(start + k + 1) % n];
        let e = b.sub(a);
        let steps = e.x.gcd(&e.y);
        let step = primitive(e);
        for s in 0..steps {
            out.push(LatticePoint::new(a.x + s * step.x, a.y + s * step.y));
        }
    }
    out
}

/// Lattice points on the boundary, counterclockwise from the lexicographically
/// smallest vertex, each exactly once.
pub fn boundary_lattice_points(poly: &LatticePolygon) -> Result<Vec<LatticePoint>> {
    require_reflexive(poly)?;
    Ok(boundary_points_unchecked(poly))
}

/// Two-dimensional cone spanned by primitive rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cone2D {
    pub ray1: LatticePoint,
    pub ray2: LatticePoint,
}

impl Cone2D {
    pub fn new(ray1: LatticePoint, ray2: LatticePoint) -> Result<Self> {
        if det(ray1, ray2) == 0 {
            return Err(Error::Internal(format!("degenerate cone {ray1} {ray2}")));
        }
        Ok(Self {
            ray1: primitive(ray1),
            ray2: primitive(ray2),
        })
    }

    /// Index of the sublattice spanned by the rays, `|det(ray1, ray2)|`.
    pub fn index(&self) -> u32 {
        det(self.ray1, self.ray2).unsigned_abs() as u32
    }
}

/// Multiset of `A_k` singular points, stored sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SingularityProfile {
    pub entries: Vec<u32>,
}

impl SingularityProfile {
    pub fn from_entries(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Self { entries }
    }

    pub fn is_smooth(&self) -> bool {
        self.entries.is_empty()
    }

    /// Names such as `["A2", "A1", "A1"]`.
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|k| format!("A{k}")).collect()
    }
}

impl fmt::Display for SingularityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("smooth");
        }
        f.write_str(&self.names().join(" "))
    }
}

/// Normal-fan cones, one per vertex, spanned by the primitive inward normals of
/// the two edges meeting there.
pub fn vertex_cones(poly: &LatticePolygon) -> Result<Vec<Cone2D>> {
    require_reflexive(poly)?;
    let n = poly.vertices.len();
    let inward = |a: LatticePoint, b: LatticePoint| {
        let e = b.sub(a);
        primitive(LatticePoint::new(-e.y, e.x))
    };
    (0..n)
        .map(|i| {
            let prev = poly.vertices[(i + n - 1) % n];
            let v = poly.vertices[i];
            let next = poly.vertices[(i + 1) % n];
            Cone2D::new(inward(prev, v), inward(v, next))
        })
        .collect()
}

/// A vertex cone of index `m > 1` gives one singular point of type `A_{m-1}`.
pub fn singularity_profile(poly: &LatticePolygon) -> Result<SingularityProfile> {
    let entries = vertex_cones(poly)?
        .iter()
        .map(Cone2D::index)
        .filter(|&m| m > 1)
        .map(|m| m - 1)
        .collect();
    Ok(SingularityProfile::from_entries(entries))
}

/// Lifts a polygon to the 3-row model matrix of its lattice points.
///
/// Columns follow [`LatticePolygon::lattice_points`] (boundary counterclockwise
/// from the lexicographically smallest vertex, interior last). Points are
/// translated into the positive quadrant and homogenized to a common column sum
/// `h = max(x' + y')`.
pub fn polytope_to_matrix(poly: &LatticePolygon) -> Result<ToricModel> {
    lift_points(&poly.label, &poly.lattice_points())
}

/// Same lifting as [`polytope_to_matrix`] for an explicit column order.
pub fn lift_points(label: &str, points: &[LatticePoint]) -> Result<ToricModel> {
    if points.is_empty() {
        return Err(Error::Malformed("no lattice points to lift".into()));
    }
    let xmin = points.iter().map(|p| p.x).min().unwrap_or(0);
    let ymin = points.iter().map(|p| p.y).min().unwrap_or(0);
    let shifted: Vec<(i64, i64)> = points.iter().map(|p| (p.x - xmin, p.y - ymin)).collect();
    let h = shifted.iter().map(|(x, y)| x + y).max().unwrap_or(0);
    let matrix = vec![
        shifted.iter().map(|p| p.0).collect(),
        shifted.iter().map(|p| p.1).collect(),
        shifted.iter().map(|p| h - p.0 - p.1).collect(),
    ];
    ToricModel::new(label, matrix)
}
