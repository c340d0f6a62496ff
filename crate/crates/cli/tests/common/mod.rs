//! Shared helpers for the integration suites: seeded RNG, brute-force
//! root-finding oracles that solve the closure equations numerically
//! (independent of the library's closed forms), a finite-difference
//! helper, and a dense-scan inscribed-circle oracle.
#![allow(dead_code)]

use lizard_kinematics::fivebar::FiveBarGeometry;
use lizard_kinematics::fourbar::FourBarGeometry;
use lizard_kinematics::robot::ActuatorCommand;
use lizard_kinematics::{cross2, dir, normalize_angle, Point2, Sign};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Central finite difference with step `h`.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Bisection on a bracketing interval, driven to machine width.
pub fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-15 {
            return mid;
        }
        let fm = f(mid);
        if (flo <= 0.0) == (fm <= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All roots of `f` on (-pi, pi], located by dense sign-change scanning
/// plus bisection. Misses tangencies, which random sampling avoids.
pub fn scan_roots(f: impl Fn(f64) -> f64, steps: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let mut prev_x = -PI;
    let mut prev_f = f(prev_x);
    for k in 1..=steps {
        let x = -PI + TAU * k as f64 / steps as f64;
        let fx = f(x);
        if prev_f == 0.0 {
            roots.push(prev_x);
        } else if (prev_f < 0.0) != (fx < 0.0) {
            roots.push(bisect(&f, prev_x, x));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

/// Brute-force five-bar pose found from the closure equations alone.
pub struct FiveBarOracle {
    pub theta2: f64,
    pub theta3: f64,
    pub endpoint: Point2,
}

/// Numeric five-bar forward solve: scan the right-coupler angle for
/// points of the right coupler circle lying on the left coupler circle,
/// then keep the root on the requested side of the elbow-to-elbow line.
pub fn fivebar_fk_oracle(
    geom: &FiveBarGeometry,
    theta1: f64,
    theta4: f64,
    assembly: Sign,
) -> Option<FiveBarOracle> {
    let e1 = geom.pivot_left() + geom.l1 * dir(theta1);
    let e2 = geom.pivot_right() + geom.l4 * dir(theta4);
    let g = |t3: f64| (e2 + geom.l3 * dir(t3) - e1).norm_squared() - geom.l2 * geom.l2;
    for t3 in scan_roots(g, 4096) {
        let p = e2 + geom.l3 * dir(t3);
        let side = if cross2(e2 - e1, p - e1) >= 0.0 { Sign::Plus } else { Sign::Minus };
        if side == assembly {
            let v = p - e1;
            return Some(FiveBarOracle {
                theta2: normalize_angle(v.y.atan2(v.x)),
                theta3: normalize_angle(t3),
                endpoint: p,
            });
        }
    }
    None
}

/// Brute-force four-bar pose found from the closure equations alone.
pub struct FourBarOracle {
    pub theta_lg12: f64,
    pub theta_lg13: f64,
}

/// Numeric four-bar solve: scan the output angle for rocker-tip points
/// on the coupler circle, keep the root on the requested side of the
/// crank-tip-to-rocker-pivot line.
pub fn fourbar_fk_oracle(
    geom: &FourBarGeometry,
    theta_lg1: f64,
    branch: Sign,
) -> Option<FourBarOracle> {
    let c = geom.lg1 * dir(theta_lg1);
    let o2 = geom.rocker_pivot();
    let g = |t13: f64| (o2 + geom.lg13 * dir(t13) - c).norm_squared() - geom.lg12 * geom.lg12;
    for t13 in scan_roots(g, 4096) {
        let f = o2 + geom.lg13 * dir(t13);
        let side = if cross2(o2 - c, f - c) >= 0.0 { Sign::Plus } else { Sign::Minus };
        if side == branch {
            let v = f - c;
            return Some(FourBarOracle {
                theta_lg12: normalize_angle(v.y.atan2(v.x)),
                theta_lg13: normalize_angle(t13),
            });
        }
    }
    None
}

/// Largest circle centered on the symmetry axis that fits the workspace,
/// found by dense scan plus ternary refinement of the slack function
/// (no closed form involved). Returns (radius, center height).
pub fn mic_oracle(geom: &FiveBarGeometry) -> (f64, f64) {
    let chains = [
        (geom.pivot_left(), geom.l1, geom.l2),
        (geom.pivot_right(), geom.l4, geom.l3),
    ];
    let slack = |y: f64| {
        chains
            .iter()
            .map(|&(pivot, a, b)| {
                let d = (Point2::new(0.0, y) - pivot).norm();
                (a + b - d).min(d - (a - b).abs())
            })
            .fold(f64::INFINITY, f64::min)
    };
    let y_max = geom.l1.max(geom.l4) + geom.l2.max(geom.l3);
    let mut best_y = 0.0;
    let mut best = f64::NEG_INFINITY;
    let steps = 4000;
    for k in 0..=steps {
        let y = y_max * k as f64 / steps as f64;
        let s = slack(y);
        if s > best {
            best = s;
            best_y = y;
        }
    }
    let (mut lo, mut hi) = (
        (best_y - y_max / steps as f64).max(0.0),
        (best_y + y_max / steps as f64).min(y_max),
    );
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if slack(m1) < slack(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let y = 0.5 * (lo + hi);
    (slack(y), y)
}

/// Uniform random actuator command within `dev` radians of neutral.
pub fn random_command(rng: &mut ChaCha8Rng, dev: f64) -> ActuatorCommand {
    let n = ActuatorCommand::neutral().as_array();
    let mut a = [0.0; 4];
    for i in 0..4 {
        a[i] = n[i] + rng.random_range(-dev..=dev);
    }
    ActuatorCommand::from_array(a)
}
