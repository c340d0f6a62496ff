//! Dimensional synthesis of the symmetric five-bar: non-dimensional
//! parameter validation, performance charts over the reachable region,
//! the maximum inscribed circle, and the local conditioning index.
//!
//! Charts are plain row-major grids. With the `parallel` feature the
//! chart fill is distributed over rows with rayon; the serial fill is
//! always available for comparison and for builds without the feature.

use crate::fivebar::{self, BranchSelector, FiveBarGeometry};
use crate::{tol, Mat2, Point2};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error("parameters must satisfy r1 + r2 + r3 = 0.9: sum deviates by {0}")]
    SimplexViolation(f64),
    #[error("parameter {name} = {value} outside its admissible range {range}")]
    RangeViolation { name: &'static str, value: f64, range: &'static str },
    #[error("couplers cannot span the base: r1 + r2 = {sum} <= r3 = {r3}")]
    AssemblyViolation { sum: f64, r3: f64 },
    #[error("no workspace region above the base line (radicand {0} < 0)")]
    NoUpperRegion(f64),
    #[error("conditioning undefined at a singular or unreachable point")]
    SingularHere,
}

/// Validated non-dimensional design parameters of the symmetric five-bar:
/// r1 the proximal (crank) length, r2 the distal (coupler) length, r3
/// the base half-length, all scaled so that r1 + r2 + r3 = 0.9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonDimParams {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

/// Check the simplex constraint, the per-parameter ranges, then the
/// assembly inequality, in that order.
pub fn validate_params(r1: f64, r2: f64, r3: f64) -> Result<NonDimParams, SynthesisError> {
    let dev = (r1 + r2 + r3 - 0.9).abs();
    if dev > tol::SIMPLEX {
        return Err(SynthesisError::SimplexViolation(dev));
    }
    for (name, value, lo, hi, range) in [
        ("r1", r1, 0.0, 0.9, "(0, 0.9)"),
        ("r2", r2, 0.0, 0.9, "(0, 0.9)"),
        ("r3", r3, 0.0, 0.45, "(0, 0.45)"),
    ] {
        if !(value > lo && value < hi) {
            return Err(SynthesisError::RangeViolation { name, value, range });
        }
    }
    if r1 + r2 <= r3 + tol::SIMPLEX {
        return Err(SynthesisError::AssemblyViolation { sum: r1 + r2, r3 });
    }
    Ok(NonDimParams { r1, r2, r3 })
}

/// Scale factor recovering physical lengths from non-dimensional ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalFactor {
    pub d: f64,
}

/// Recover physical link lengths (mm) from validated parameters, given
/// the desired physical base half-length. Returns the scale factor and
/// (l0, l1, l2) = (base, crank, coupler).
pub fn dimensionalize(p: &NonDimParams, r3_physical: f64) -> (DimensionalFactor, f64, f64, f64) {
    assert!(r3_physical > 0.0, "physical base half-length must be positive");
    let d = r3_physical / p.r3;
    (DimensionalFactor { d }, 2.0 * r3_physical, p.r1 * d, p.r2 * d)
}

/// Symmetric five-bar built from validated parameters at physical scale.
pub fn symmetric_geometry(p: &NonDimParams, r3_physical: f64) -> FiveBarGeometry {
    let (_, l0, l1, l2) = dimensionalize(p, r3_physical);
    FiveBarGeometry { l0, l1, l4: l1, l2, l3: l2 }
}

/// Inclusive sampling grid: `nx` x `ny` points spanning both ranges,
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn x_at(&self, i: usize) -> f64 {
        lerp_index(self.x_range, i, self.nx)
    }

    pub fn y_at(&self, j: usize) -> f64 {
        lerp_index(self.y_range, j, self.ny)
    }

    /// Default chart window: the full annulus span in x, the upper half
    /// plane in y.
    pub fn default_for(geom: &FiveBarGeometry) -> Self {
        let reach = geom.l1.max(geom.l4) + geom.l2.max(geom.l3) + geom.l0 / 2.0;
        Self { x_range: (-reach, reach), y_range: (0.0, reach), nx: 200, ny: 200 }
    }
}

fn lerp_index(range: (f64, f64), i: usize, n: usize) -> f64 {
    if n <= 1 {
        return range.0;
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// A scalar field sampled over a grid. `values[j * nx + i]` pairs with
/// `mask[j * nx + i]`; masked-off points hold 0.0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl ChartGrid {
    pub fn at(&self, i: usize, j: usize) -> (f64, bool) {
        let k = j * self.spec.nx + i;
        (self.values[k], self.mask[k])
    }

    /// Median of the unmasked values; None when everything is masked.
    pub fn masked_median(&self) -> Option<f64> {
        let mut vals: Vec<f64> = self
            .values
            .iter()
            .zip(self.mask.iter())
            .filter_map(|(&v, &m)| m.then_some(v))
            .collect();
        if vals.is_empty() {
            return None;
        }
        vals.sort_by(|a, b| a.total_cmp(b));
        Some(vals[vals.len() / 2])
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// True when both chain annuli contain the point (boundaries included).
pub fn point_in_workspace(geom: &FiveBarGeometry, p: Point2) -> bool {
    let chains = [
        (geom.pivot_left(), geom.l1, geom.l2),
        (geom.pivot_right(), geom.l4, geom.l3),
    ];
    chains.into_iter().all(|(pivot, a, b)| {
        let d2 = (p - pivot).norm_squared();
        let lo = (a - b).abs();
        d2 >= lo * lo && d2 <= (a + b) * (a + b)
    })
}

/// Reachability chart: mask = in workspace, values all zero.
pub fn workspace_chart(geom: &FiveBarGeometry, spec: GridSpec) -> ChartGrid {
    let mut mask = vec![false; spec.nx * spec.ny];
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            mask[j * spec.nx + i] =
                point_in_workspace(geom, Point2::new(spec.x_at(i), spec.y_at(j)));
        }
    }
    ChartGrid { spec, values: vec![0.0; spec.nx * spec.ny], mask }
}

/// Maximum inscribed circle of the upper workspace region of a symmetric
/// five-bar, by the closed form: the circle is centered on the symmetry
/// axis, bounded by the inner and outer annulus boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicResult {
    /// Circle radius, mm.
    pub r_mic: f64,
    /// Circle center height on the symmetry axis, mm.
    pub y_mic: f64,
}

/// Closed-form maximum inscribed circle. Requires a symmetric geometry
/// (l1 = l4, l2 = l3). Fails with `NoUpperRegion` when the outer annuli
/// do not intersect above the base line.
pub fn mic(geom: &FiveBarGeometry) -> Result<MicResult, SynthesisError> {
    let (a, b) = (geom.l1, geom.l2);
    let half_base = geom.l0 / 2.0;
    // The inscribed radius is pinched between the outer boundary (pivot
    // distance d <= a + b - r) and the inner bore (d >= |a - b| + r);
    // the optimum balances both at d = max(a, b), r = min(a, b).
    let center_dist = a.max(b);
    let radicand = center_dist * center_dist - half_base * half_base;
    if radicand < 0.0 {
        return Err(SynthesisError::NoUpperRegion(radicand));
    }
    let r_mic = (a + b - (a - b).abs()) / 2.0;
    let y_mic = radicand.sqrt();
    Ok(MicResult { r_mic, y_mic })
}

/// Verify a circle fits in the workspace by dense boundary sampling.
/// Checks `n` points on the circle of radius `r` about `center`; the
/// whole disc is inside iff every rim point is (the workspace region is
/// an intersection of annuli, so rim containment with center containment
/// implies disc containment for r below the inner-bore radius).
pub fn circle_inscribed(geom: &FiveBarGeometry, center: Point2, r: f64, n: usize) -> bool {
    if !point_in_workspace(geom, center) {
        return false;
    }
    (0..n).all(|k| {
        let t = std::f64::consts::TAU * k as f64 / n as f64;
        point_in_workspace(geom, center + r * Point2::new(t.cos(), t.sin()))
    })
}

/// Inverse 2-norm condition number of a 2x2 matrix via the eigenvalues
/// of J^T J: sqrt(lambda_min / lambda_max), in [0, 1].
pub fn inverse_condition_number(j: &Mat2) -> f64 {
    let jtj = j.transpose() * j;
    let tr = jtj[(0, 0)] + jtj[(1, 1)];
    let det = jtj.determinant();
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let hi = tr / 2.0 + disc;
    let lo = (tr / 2.0 - disc).max(0.0);
    if hi <= 0.0 {
        return 0.0;
    }
    (lo / hi).sqrt()
}

/// Local conditioning index at an endpoint: the inverse condition number
/// of the velocity map from actuator rates to endpoint velocity, in
/// [0, 1] with 1 isotropic. Scale-invariant in the link lengths.
pub fn lci(
    geom: &FiveBarGeometry,
    endpoint: Point2,
    branch: &BranchSelector,
) -> Result<f64, SynthesisError> {
    let st = fivebar::ik_state(geom, endpoint, *branch).map_err(|_| SynthesisError::SingularHere)?;
    let j = fivebar::endpoint_jacobian(geom, &st).ok_or(SynthesisError::SingularHere)?;
    Ok(inverse_condition_number(&j))
}

fn lci_row(geom: &FiveBarGeometry, spec: &GridSpec, branch: &BranchSelector, j: usize) -> Vec<(f64, bool)> {
    let y = spec.y_at(j);
    (0..spec.nx)
        .map(|i| {
            let p = Point2::new(spec.x_at(i), y);
            if !point_in_workspace(geom, p) {
                return (0.0, false);
            }
            match lci(geom, p, branch) {
                Ok(v) => (v, true),
                Err(_) => (0.0, false),
            }
        })
        .collect()
}

fn assemble_rows(spec: GridSpec, rows: Vec<Vec<(f64, bool)>>) -> ChartGrid {
    let mut values = Vec::with_capacity(spec.nx * spec.ny);
    let mut mask = Vec::with_capacity(spec.nx * spec.ny);
    for row in rows {
        for (v, m) in row {
            values.push(v);
            mask.push(m);
        }
    }
    ChartGrid { spec, values, mask }
}

/// Conditioning chart, rows filled sequentially.
pub fn lci_chart_serial(geom: &FiveBarGeometry, spec: GridSpec, branch: &BranchSelector) -> ChartGrid {
    let rows: Vec<_> = (0..spec.ny).map(|j| lci_row(geom, &spec, branch, j)).collect();
    assemble_rows(spec, rows)
}

/// Conditioning chart. With the `parallel` feature rows are distributed
/// across the rayon pool; results are identical to the serial fill.
#[cfg(feature = "parallel")]
pub fn lci_chart(geom: &FiveBarGeometry, spec: GridSpec, branch: &BranchSelector) -> ChartGrid {
    let rows: Vec<_> = (0..spec.ny)
        .into_par_iter()
        .map(|j| lci_row(geom, &spec, branch, j))
        .collect();
    assemble_rows(spec, rows)
}

#[cfg(not(feature = "parallel"))]
pub fn lci_chart(geom: &FiveBarGeometry, spec: GridSpec, branch: &BranchSelector) -> ChartGrid {
    lci_chart_serial(geom, spec, branch)
}
