//! Planar closed-chain linkage toolkit for a quadruped lizard robot.
//!
//! The robot is a planar assembly of four loops sharing one chassis: two
//! five-bar mechanisms (head and tail) whose couplers also pin into two
//! slider-coupled body loops (left and right), plus four parallelogram
//! four-bar legs driven directly by the five-bar crank angles. Everything
//! here works in millimetres and radians unless a name says otherwise.
//!
//! Module map:
//! - [`linkage`]: link tables, joint state, mobility count, loop residuals.
//! - [`fivebar`]: closed-form five-bar forward/inverse kinematics and the
//!   2x2 constraint blocks used for singularity tests.
//! - [`fourbar`]: closed-form leg four-bar kinematics.
//! - [`synthesis`]: non-dimensional design parameters, workspace charts,
//!   maximum inscribed circle, and the local conditioning index.
//! - [`robot`]: whole-robot assembly, the actuator-to-joint coupling solve,
//!   and the 8x8 constraint matrices.
//! - [`gait`]: actuator waveform profiles and trajectory rollouts.
//! - [`io`]: config file grammar, CSV/JSON emission, SVG rendering.
//!
//! The `parallel` feature (on by default) runs chart generation on a rayon
//! pool; the sequential path is always compiled and exported for comparison.

pub mod fivebar;
pub mod fourbar;
pub mod gait;
pub mod io;
pub mod linkage;
pub mod robot;
pub mod synthesis;

pub use nalgebra;

/// 2-D point or vector, mm.
pub type Point2 = nalgebra::Vector2<f64>;
/// 2x2 real matrix.
pub type Mat2 = nalgebra::Matrix2<f64>;
/// 8x8 real matrix.
pub type Mat8 = nalgebra::SMatrix<f64, 8, 8>;

/// Shared tolerance constants. Values are absolute unless noted.
pub mod tol {
    /// Loop-closure residual bound for a healthy solve, mm.
    pub const LOOP_CLOSURE_MM: f64 = 1e-9;
    /// Default singularity threshold on normalized determinant factors.
    pub const SINGULARITY: f64 = 1e-8;
    /// Denominator magnitude below which a closed form is degenerate.
    pub const DEGENERATE: f64 = 1e-12;
    /// Simplex-sum slack for non-dimensional design parameters.
    pub const SIMPLEX: f64 = 1e-12;
}

/// Unit vector at angle `a`: (cos a, sin a).
#[inline]
pub fn dir(a: f64) -> Point2 {
    Point2::new(a.cos(), a.sin())
}

/// z-component of the cross product of two planar vectors.
#[inline]
pub fn cross2(a: Point2, b: Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Normalize an angle to the half-open interval (-pi, pi].
#[inline]
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(std::f64::consts::TAU);
    if r > std::f64::consts::PI {
        r - std::f64::consts::TAU
    } else {
        r
    }
}

/// Assembly or elbow side: sign of a cross product against a reference
/// segment. `Plus` is the left side of the directed segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1.0 or -1.0.
    #[inline]
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Classify a scalar by sign; non-negative maps to `Plus`.
    #[inline]
    pub fn of(x: f64) -> Sign {
        if x >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// The opposite side.
    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}
