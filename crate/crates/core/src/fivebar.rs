//! Closed-form kinematics of the symmetric planar five-bar (2-RRR) used by
//! the head and tail mechanisms.
//!
//! Frame convention: the ground link lies on the x-axis with the left crank
//! pivot at (-l0/2, 0) and the right crank pivot at (+l0/2, 0). The left
//! chain is crank l1 then coupler l2; the right chain is crank l4 then
//! coupler l3. The couplers meet at the endpoint.

use crate::{cross2, dir, normalize_angle, tol, Mat2, Point2, Sign};
use thiserror::Error;

/// Five-bar link lengths, mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveBarGeometry {
    /// Ground (pivot separation), mm.
    pub l0: f64,
    /// Left crank, mm.
    pub l1: f64,
    /// Right crank, mm.
    pub l4: f64,
    /// Left coupler, mm.
    pub l2: f64,
    /// Right coupler, mm.
    pub l3: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiveBarError {
    #[error("invalid five-bar geometry: {0}")]
    BadGeometry(String),
    #[error("no assembly: coupler circles do not intersect for these crank angles")]
    NoAssembly,
    #[error("degenerate closed-form denominator (elbows coincide or half-angle pole)")]
    DegenerateDenominator,
    #[error("endpoint outside the reachable workspace")]
    OutOfWorkspace,
}

impl FiveBarGeometry {
    /// Validated constructor: all lengths strictly positive.
    pub fn new(l0: f64, l1: f64, l4: f64, l2: f64, l3: f64) -> Result<Self, FiveBarError> {
        let g = Self { l0, l1, l4, l2, l3 };
        for (name, v) in [("l0", l0), ("l1", l1), ("l4", l4), ("l2", l2), ("l3", l3)] {
            if v <= 0.0 || !v.is_finite() {
                return Err(FiveBarError::BadGeometry(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(g)
    }

    /// Left crank pivot, mm.
    #[inline]
    pub fn pivot_left(&self) -> Point2 {
        Point2::new(-0.5 * self.l0, 0.0)
    }

    /// Right crank pivot, mm.
    #[inline]
    pub fn pivot_right(&self) -> Point2 {
        Point2::new(0.5 * self.l0, 0.0)
    }
}

/// Full pose of one five-bar assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveBarState {
    /// Left crank angle, rad.
    pub theta1: f64,
    /// Right crank angle, rad.
    pub theta4: f64,
    /// Left coupler angle, rad.
    pub theta2: f64,
    /// Right coupler angle, rad.
    pub theta3: f64,
    /// Coupler junction, mm.
    pub endpoint: Point2,
}

/// Working-mode selector for inverse kinematics: the side of each elbow
/// relative to the directed pivot-to-endpoint segment of its chain
/// (`Plus` = elbow on the left of that segment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BranchSelector {
    pub elbow_left: Sign,
    pub elbow_right: Sign,
}

impl Default for BranchSelector {
    /// The upper working mode of the symmetric mechanism.
    fn default() -> Self {
        Self { elbow_left: Sign::Plus, elbow_right: Sign::Minus }
    }
}

/// Loop-closure residual of a pose, mm.
pub fn residual(geom: &FiveBarGeometry, state: &FiveBarState) -> Point2 {
    geom.l1 * dir(state.theta1) + geom.l2 * dir(state.theta2)
        - geom.l3 * dir(state.theta3)
        - geom.l4 * dir(state.theta4)
        - Point2::new(geom.l0, 0.0)
}

fn elbows(geom: &FiveBarGeometry, theta1: f64, theta4: f64) -> (Point2, Point2) {
    let e1 = geom.pivot_left() + geom.l1 * dir(theta1);
    let e2 = geom.pivot_right() + geom.l4 * dir(theta4);
    (e1, e2)
}

/// Forward kinematics: passive coupler angles and endpoint for given crank
/// angles. `assembly` picks which of the two coupler-circle intersections
/// to return: `Plus` is the endpoint on the left of the directed segment
/// from the left elbow to the right elbow.
pub fn fk(
    geom: &FiveBarGeometry,
    theta1: f64,
    theta4: f64,
    assembly: Sign,
) -> Result<FiveBarState, FiveBarError> {
    let (e1, e2) = elbows(geom, theta1, theta4);
    let k1 = e2.y - e1.y;
    let k2 = e2.x - e1.x;
    let d2 = k1 * k1 + k2 * k2;
    if d2 < tol::DEGENERATE {
        return Err(FiveBarError::DegenerateDenominator);
    }
    let d = d2.sqrt();
    let span = geom.l2 + geom.l3;
    let gap = (geom.l2 - geom.l3).abs();
    let slack = 1e-9 * span;
    if d > span + slack || d < gap - slack {
        return Err(FiveBarError::NoAssembly);
    }

    // Half-angle quadratic in t = tan(theta3/2): a t^2 + b t + c = 0.
    let (l2, l3) = (geom.l2, geom.l3);
    let a = 0.5 * (l3 * l3 - 2.0 * k2 * l3 - l2 * l2 + k2 * k2 + k1 * k1);
    let b = 2.0 * k1 * l3;
    let c = 0.5 * (l3 * l3 + 2.0 * k2 * l3 - l2 * l2 + k2 * k2 + k1 * k1);
    if (2.0 * a).abs() < tol::DEGENERATE {
        return Err(FiveBarError::DegenerateDenominator);
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc < -1e-9 * (b * b + (4.0 * a * c).abs() + 1.0) {
            return Err(FiveBarError::NoAssembly);
        }
        disc = 0.0;
    }
    let sq = disc.sqrt();

    let build = |t: f64| -> FiveBarState {
        let theta3 = normalize_angle(2.0 * t.atan());
        let theta2 = normalize_angle((k1 + l3 * theta3.sin()).atan2(k2 + l3 * theta3.cos()));
        let endpoint = e1 + l2 * dir(theta2);
        FiveBarState {
            theta1: normalize_angle(theta1),
            theta4: normalize_angle(theta4),
            theta2,
            theta3,
            endpoint,
        }
    };
    let sa = build((-b + sq) / (2.0 * a));
    if classify_assembly(geom, &sa) == assembly {
        return Ok(sa);
    }
    Ok(build((-b - sq) / (2.0 * a)))
}

/// Which coupler-circle intersection a pose occupies: the side of the
/// endpoint relative to the directed elbow-to-elbow segment.
pub fn classify_assembly(geom: &FiveBarGeometry, state: &FiveBarState) -> Sign {
    let (e1, e2) = elbows(geom, state.theta1, state.theta4);
    Sign::of(cross2(e2 - e1, state.endpoint - e1))
}

/// Working mode of a pose: per-chain elbow sides as used by [`ik`].
pub fn classify_elbows(geom: &FiveBarGeometry, state: &FiveBarState) -> BranchSelector {
    let (e1, e2) = elbows(geom, state.theta1, state.theta4);
    BranchSelector {
        elbow_left: Sign::of(cross2(state.endpoint - geom.pivot_left(), e1 - geom.pivot_left())),
        elbow_right: Sign::of(cross2(state.endpoint - geom.pivot_right(), e2 - geom.pivot_right())),
    }
}

fn chain_ik(
    pivot: Point2,
    proximal: f64,
    distal: f64,
    target: Point2,
    side: Sign,
) -> Result<f64, FiveBarError> {
    let rel = target - pivot;
    let d2 = rel.norm_squared();
    let reach = proximal + distal;
    let gap = (proximal - distal).abs();
    if d2 < tol::DEGENERATE {
        // Target at the pivot: either unreachable or every angle works.
        return if gap > tol::DEGENERATE {
            Err(FiveBarError::OutOfWorkspace)
        } else {
            Err(FiveBarError::DegenerateDenominator)
        };
    }
    let d = d2.sqrt();
    let slack = 1e-9 * reach;
    if d > reach + slack || d < gap - slack {
        return Err(FiveBarError::OutOfWorkspace);
    }
    let a = (d2 + proximal * proximal - distal * distal) / (2.0 * d);
    let h = (proximal * proximal - a * a).max(0.0).sqrt();
    let u = rel / d;
    let n = Point2::new(-u.y, u.x);
    let elbow = pivot + a * u + side.as_f64() * h * n;
    let v = elbow - pivot;
    Ok(normalize_angle(v.y.atan2(v.x)))
}

/// Inverse kinematics: crank angles (theta1, theta4) reaching `endpoint`
/// in the requested working mode.
pub fn ik(
    geom: &FiveBarGeometry,
    endpoint: Point2,
    branch: BranchSelector,
) -> Result<(f64, f64), FiveBarError> {
    let t1 = chain_ik(geom.pivot_left(), geom.l1, geom.l2, endpoint, branch.elbow_left)?;
    let t4 = chain_ik(geom.pivot_right(), geom.l4, geom.l3, endpoint, branch.elbow_right)?;
    Ok((t1, t4))
}

/// Inverse kinematics returning the full pose including coupler angles.
pub fn ik_state(
    geom: &FiveBarGeometry,
    endpoint: Point2,
    branch: BranchSelector,
) -> Result<FiveBarState, FiveBarError> {
    let (theta1, theta4) = ik(geom, endpoint, branch)?;
    let (e1, e2) = elbows(geom, theta1, theta4);
    let v1 = endpoint - e1;
    let v2 = endpoint - e2;
    Ok(FiveBarState {
        theta1,
        theta4,
        theta2: normalize_angle(v1.y.atan2(v1.x)),
        theta3: normalize_angle(v2.y.atan2(v2.x)),
        endpoint,
    })
}

/// Constraint blocks of the loop in the chart with the right chain
/// mirrored (theta -> pi - theta), evaluated at stored true angles:
/// `K` differentiates the closure residual by the crank angles, `Kstar`
/// by the coupler angles. det K = l1 l4 sin(theta4 - theta1) and
/// det Kstar = l2 l3 sin(theta3 - theta2).
pub fn jacobians(geom: &FiveBarGeometry, state: &FiveBarState) -> (Mat2, Mat2) {
    let (s1, c1) = state.theta1.sin_cos();
    let (s4, c4) = state.theta4.sin_cos();
    let (s2, c2) = state.theta2.sin_cos();
    let (s3, c3) = state.theta3.sin_cos();
    let k = Mat2::new(
        -geom.l1 * s1, -geom.l4 * s4,
        geom.l1 * c1, geom.l4 * c4,
    );
    let kstar = Mat2::new(
        -geom.l2 * s2, -geom.l3 * s3,
        geom.l2 * c2, geom.l3 * c3,
    );
    (k, kstar)
}

/// Singularity test at a pose: `(gain, loss)`.
///
/// Gain: the passive block degenerates, |det Kstar| < tol * l2 * l3
/// (couplers aligned; the endpoint gains an uncontrolled freedom).
/// Loss: the active block degenerates, |det K| < tol * l1 * l4
/// (cranks parallel; an endpoint direction is lost to the actuators).
pub fn is_singular(geom: &FiveBarGeometry, state: &FiveBarState, tol: f64) -> (bool, bool) {
    let (k, kstar) = jacobians(geom, state);
    let gain = kstar.determinant().abs() < tol * geom.l2 * geom.l3;
    let loss = k.determinant().abs() < tol * geom.l1 * geom.l4;
    (gain, loss)
}

/// Jacobian of the endpoint with respect to the crank angles, from the
/// two coupler-circle constraints. `None` when the constraint gradient in
/// the endpoint is rank-deficient (workspace boundary or coincident
/// coupler directions).
pub fn endpoint_jacobian(geom: &FiveBarGeometry, state: &FiveBarState) -> Option<Mat2> {
    let (e1, e2) = elbows(geom, state.theta1, state.theta4);
    let p = state.endpoint;
    let r1 = p - e1;
    let r2 = p - e2;
    let hp = Mat2::new(r1.x, r1.y, r2.x, r2.y);
    let scale = (geom.l2 * geom.l3).max(tol::DEGENERATE);
    if hp.determinant().abs() < 1e-9 * scale {
        return None;
    }
    let n1 = Point2::new(-state.theta1.sin(), state.theta1.cos());
    let n2 = Point2::new(-state.theta4.sin(), state.theta4.cos());
    let ha = Mat2::new(
        -geom.l1 * r1.dot(&n1), 0.0,
        0.0, -geom.l4 * r2.dot(&n2),
    );
    let hp_inv = hp.try_inverse()?;
    Some(-hp_inv * ha)
}
