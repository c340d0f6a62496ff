//! Closed-form kinematics of the leg four-bar.
//!
//! Frame convention: the crank pivot sits at the origin with the ground
//! link along +x to the rocker pivot at (lg10, 0). The crank lg1 carries
//! the coupler lg12 to the foot joint; the output link lg13 connects the
//! foot joint back to the rocker pivot. The foot tip extends the output
//! link beyond the foot joint by a configurable toe length.
//!
//! With the default lengths (crank = output, coupler = ground) the linkage
//! is a change-point parallelogram: the parallel branch keeps the output
//! angle equal to the crank angle, which is what the legs run on.

use crate::{cross2, dir, normalize_angle, tol, Mat2, Point2, Sign};
use thiserror::Error;

/// Leg four-bar lengths, mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourBarGeometry {
    /// Crank, mm.
    pub lg1: f64,
    /// Coupler, mm.
    pub lg12: f64,
    /// Output link, mm.
    pub lg13: f64,
    /// Ground, mm.
    pub lg10: f64,
    /// Foot-tip extension beyond the output link's distal joint, mm.
    pub toe: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourBarError {
    #[error("invalid four-bar geometry: {0}")]
    BadGeometry(String),
    #[error("no assembly: coupler and output circles do not intersect at this crank angle")]
    NoAssembly,
    #[error("degenerate closed-form denominator")]
    DegenerateDenominator,
}

impl FourBarGeometry {
    /// Validated constructor: lengths strictly positive, toe non-negative.
    pub fn new(lg1: f64, lg12: f64, lg13: f64, lg10: f64, toe: f64) -> Result<Self, FourBarError> {
        let g = Self { lg1, lg12, lg13, lg10, toe };
        for (name, v) in [("lg1", lg1), ("lg12", lg12), ("lg13", lg13), ("lg10", lg10)] {
            if v <= 0.0 || !v.is_finite() {
                return Err(FourBarError::BadGeometry(format!("{name} = {v} must be > 0")));
            }
        }
        if toe < 0.0 || !toe.is_finite() {
            return Err(FourBarError::BadGeometry(format!("toe = {toe} must be >= 0")));
        }
        Ok(g)
    }

    /// Rocker (output link) ground pivot, mm.
    #[inline]
    pub fn rocker_pivot(&self) -> Point2 {
        Point2::new(self.lg10, 0.0)
    }
}

/// Grashof class of a four-bar by shortest/longest link sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrashofClass {
    /// s + l < p + q: some link can fully rotate.
    Grashof,
    /// s + l > p + q: no link can fully rotate.
    NonGrashof,
    /// s + l = p + q: folds through change points.
    ChangePoint,
}

/// Grashof classification of the linkage.
pub fn grashof(geom: &FourBarGeometry) -> GrashofClass {
    let mut v = [geom.lg1, geom.lg12, geom.lg13, geom.lg10];
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sl = v[0] + v[3];
    let pq = v[1] + v[2];
    let eps = 1e-9 * (sl + pq);
    if (sl - pq).abs() <= eps {
        GrashofClass::ChangePoint
    } else if sl < pq {
        GrashofClass::Grashof
    } else {
        GrashofClass::NonGrashof
    }
}

/// Pose of one leg four-bar. All angles are absolute in the leg frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourBarState {
    /// Crank angle, rad.
    pub theta_lg1: f64,
    /// Coupler angle, rad.
    pub theta_lg12: f64,
    /// Output link angle, rad.
    pub theta_lg13: f64,
    /// Foot tip (output joint plus toe extension), mm.
    pub foot_tip: Point2,
}

/// Loop-closure residual of a pose, mm.
pub fn residual(geom: &FourBarGeometry, state: &FourBarState) -> Point2 {
    geom.lg1 * dir(state.theta_lg1) + geom.lg12 * dir(state.theta_lg12)
        - geom.lg13 * dir(state.theta_lg13)
        - Point2::new(geom.lg10, 0.0)
}

/// Forward kinematics at a crank angle via the half-angle quadratic in
/// tan(theta_lg13 / 2) with atan2 back-substitution for the coupler.
/// `branch` picks the assembly: `Plus` is the foot joint on the left of
/// the directed segment from the crank tip to the rocker pivot (the
/// parallel branch of the default parallelogram).
pub fn leg_fk(
    geom: &FourBarGeometry,
    theta_lg1: f64,
    branch: Sign,
) -> Result<FourBarState, FourBarError> {
    let c = geom.lg1 * dir(theta_lg1);
    let o2 = geom.rocker_pivot();
    let v = c - o2;
    let d2 = v.norm_squared();
    if d2 < tol::DEGENERATE {
        return Err(FourBarError::DegenerateDenominator);
    }
    let d = d2.sqrt();
    let span = geom.lg12 + geom.lg13;
    let gap = (geom.lg12 - geom.lg13).abs();
    let slack = 1e-9 * span;
    if d > span + slack || d < gap - slack {
        return Err(FourBarError::NoAssembly);
    }

    // q t^2 + h t + i = 0 for t = tan(theta_lg13 / 2).
    let quad = d2 + geom.lg13 * geom.lg13 - geom.lg12 * geom.lg12;
    let qa = quad + 2.0 * geom.lg13 * v.x;
    let qb = -4.0 * geom.lg13 * v.y;
    let qc = quad - 2.0 * geom.lg13 * v.x;
    if (2.0 * qa).abs() < tol::DEGENERATE {
        return Err(FourBarError::DegenerateDenominator);
    }
    let mut disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        if disc < -1e-9 * (qb * qb + (4.0 * qa * qc).abs() + 1.0) {
            return Err(FourBarError::NoAssembly);
        }
        disc = 0.0;
    }
    let sq = disc.sqrt();

    let build = |t: f64| -> FourBarState {
        let theta_lg13 = normalize_angle(2.0 * t.atan());
        let f = o2 + geom.lg13 * dir(theta_lg13);
        let w = f - c;
        FourBarState {
            theta_lg1: normalize_angle(theta_lg1),
            theta_lg12: normalize_angle(w.y.atan2(w.x)),
            theta_lg13,
            foot_tip: o2 + (geom.lg13 + geom.toe) * dir(theta_lg13),
        }
    };
    let sa = build((-qb + sq) / (2.0 * qa));
    if classify_branch(geom, &sa) == branch {
        return Ok(sa);
    }
    Ok(build((-qb - sq) / (2.0 * qa)))
}

/// Which assembly a pose occupies: side of the foot joint relative to the
/// directed segment from the crank tip to the rocker pivot.
pub fn classify_branch(geom: &FourBarGeometry, state: &FourBarState) -> Sign {
    let c = geom.lg1 * dir(state.theta_lg1);
    let f = geom.rocker_pivot() + geom.lg13 * dir(state.theta_lg13);
    Sign::of(cross2(geom.rocker_pivot() - c, f - c))
}

/// Jacobian of the closure residual with respect to the passive joint pair
/// (output angle, crank-relative coupler angle), evaluated at stored
/// absolute angles. det = -lg12 * lg13 * sin(theta_lg12 - theta_lg13).
pub fn passive_jacobian(geom: &FourBarGeometry, state: &FourBarState) -> Mat2 {
    let (s13, c13) = state.theta_lg13.sin_cos();
    let (s12, c12) = state.theta_lg12.sin_cos();
    Mat2::new(
        geom.lg13 * s13, -geom.lg12 * s12,
        -geom.lg13 * c13, geom.lg12 * c12,
    )
}

/// Gain-singularity test: coupler and output link aligned,
/// |sin(theta_lg12 - theta_lg13)| < tol. On the parallelogram's parallel
/// branch this occurs only at the two flat fold poses of the crank.
pub fn leg_singular(geom: &FourBarGeometry, state: &FourBarState, tol: f64) -> bool {
    let _ = geom;
    (state.theta_lg12 - state.theta_lg13).sin().abs() < tol
}
