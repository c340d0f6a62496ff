//! Gait waveform generation and whole-robot trajectory rollout.
//!
//! Each actuator follows a duty-warped cosine about its neutral angle:
//! the first `duty` fraction of the cycle sweeps the positive half-wave
//! (stance), the remainder the negative half-wave (swing). At duty 0.5
//! the waveform is an exact cosine and satisfies w(phi + pi) = -w(phi),
//! which is what makes the two turn gaits exact mirrors of each other.

use crate::robot::{solve, ActuatorCommand, RobotConfig, RobotState, SolveError, ACTUATOR_NEUTRAL};
use crate::robot::{gain_factors, leg_gain_factor};
use crate::tol;
use std::f64::consts::{PI, TAU};
use thiserror::Error;

/// The four built-in gait families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaitKind {
    Walk,
    Trot,
    TurnLeft,
    TurnRight,
}

impl GaitKind {
    pub const ALL: [GaitKind; 4] = [GaitKind::Walk, GaitKind::Trot, GaitKind::TurnLeft, GaitKind::TurnRight];
}

impl std::fmt::Display for GaitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GaitKind::Walk => write!(f, "walk"),
            GaitKind::Trot => write!(f, "trot"),
            GaitKind::TurnLeft => write!(f, "turn-left"),
            GaitKind::TurnRight => write!(f, "turn-right"),
        }
    }
}

/// Tunable amplitudes and timing shared by the gait builders. Angles are
/// radians, times seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitDefaults {
    pub period: f64,
    pub walk_amplitude: f64,
    pub walk_duty: f64,
    pub trot_amplitude: f64,
    pub trot_duty: f64,
    /// Amplitude of the outside (driving) actuator pair in a turn.
    pub turn_outer: f64,
    /// Amplitude of the inside pair in a turn.
    pub turn_inner: f64,
}

impl Default for GaitDefaults {
    fn default() -> Self {
        Self {
            period: 2.0,
            walk_amplitude: 12f64.to_radians(),
            walk_duty: 0.75,
            trot_amplitude: 15f64.to_radians(),
            trot_duty: 0.5,
            turn_outer: 15f64.to_radians(),
            turn_inner: 5f64.to_radians(),
        }
    }
}

/// A fully specified periodic actuator program.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitProfile {
    pub kind: GaitKind,
    /// Per-actuator amplitude about neutral, rad.
    pub amplitude: [f64; 4],
    /// Per-actuator phase offset, rad.
    pub phase: [f64; 4],
    /// Per-actuator center angle, rad (the neutral pose).
    pub offset: [f64; 4],
    /// Cycle period, s.
    pub period: f64,
    /// Stance fraction of the cycle, in (0, 1].
    pub duty: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaitError {
    #[error("bad gait parameters: {0}")]
    BadParams(String),
    #[error("solve failed at t = {t} s: {source}")]
    SolveFailed {
        t: f64,
        #[source]
        source: SolveError,
    },
}

/// Build the actuator program for a gait kind. Diagonal pairs (1, 3) and
/// (2, 4) move in phase; the two pairs are a half-cycle apart. Turns fix
/// duty at 0.5 so that left and right turns mirror each other exactly,
/// and drive the pair on the outside of the turn with the larger
/// amplitude (actuators 1 and 4 sit on the robot's left).
pub fn profile(kind: GaitKind, defaults: &GaitDefaults) -> Result<GaitProfile, GaitError> {
    if !defaults.period.is_finite() || defaults.period <= 0.0 {
        return Err(GaitError::BadParams(format!("period {} must be > 0", defaults.period)));
    }
    for (name, d) in [("walk", defaults.walk_duty), ("trot", defaults.trot_duty)] {
        if d.is_nan() || d <= 0.0 || d > 1.0 {
            return Err(GaitError::BadParams(format!("{name} duty {d} outside (0, 1]")));
        }
    }
    for (name, a) in [
        ("walk", defaults.walk_amplitude),
        ("trot", defaults.trot_amplitude),
        ("turn outer", defaults.turn_outer),
        ("turn inner", defaults.turn_inner),
    ] {
        if !a.is_finite() || a < 0.0 {
            return Err(GaitError::BadParams(format!("{name} amplitude {a} must be >= 0")));
        }
    }
    let phase = [0.0, PI, 0.0, PI];
    let (amplitude, duty) = match kind {
        GaitKind::Walk => ([defaults.walk_amplitude; 4], defaults.walk_duty),
        GaitKind::Trot => ([defaults.trot_amplitude; 4], defaults.trot_duty),
        GaitKind::TurnRight => {
            ([defaults.turn_outer, defaults.turn_inner, defaults.turn_inner, defaults.turn_outer], 0.5)
        }
        GaitKind::TurnLeft => {
            ([defaults.turn_inner, defaults.turn_outer, defaults.turn_outer, defaults.turn_inner], 0.5)
        }
    };
    Ok(GaitProfile { kind, amplitude, phase, offset: ACTUATOR_NEUTRAL, period: defaults.period, duty })
}

/// Duty-warped cosine, unit amplitude. `phi` is unwarped cycle phase in
/// radians; the first `2*pi*duty` of each cycle maps onto the positive
/// half-wave, the rest onto the negative half-wave. Continuous and
/// piecewise smooth for any duty in (0, 1); an exact cosine at duty 0.5.
pub fn waveform(duty: f64, phi: f64) -> f64 {
    let phi_n = phi.rem_euclid(TAU);
    let split = TAU * duty;
    let u = if phi_n <= split {
        phi_n / (2.0 * duty)
    } else {
        PI + (phi_n - split) / (2.0 * (1.0 - duty))
    };
    u.cos()
}

impl GaitProfile {
    /// Actuator command at time `t` seconds.
    pub fn command_at(&self, t: f64) -> ActuatorCommand {
        let mut a = [0.0; 4];
        for (i, slot) in a.iter_mut().enumerate() {
            let phi = TAU * t / self.period + self.phase[i];
            *slot = self.offset[i] + self.amplitude[i] * waveform(self.duty, phi);
        }
        ActuatorCommand::from_array(a)
    }
}

/// One solved instant of a rollout.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub cmd: ActuatorCommand,
    pub state: RobotState,
    /// True when any chassis loop or leg sits at a gain singularity.
    pub singular: bool,
}

/// A solved gait trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Number of samples flagged singular.
    pub fn singular_count(&self) -> usize {
        self.samples.iter().filter(|s| s.singular).count()
    }
}

fn sample_singular(state: &RobotState) -> bool {
    gain_factors(&state.joints).iter().any(|&f| f < tol::SINGULARITY)
        || (1..=4).any(|k| leg_gain_factor(&state.joints, k) < tol::SINGULARITY)
}

/// Roll the gait forward for `n_cycles` cycles sampled every `dt`
/// seconds, solving the full robot at each instant. Sampling is inclusive
/// of both endpoints, so a whole number of cycles revisits the start pose
/// in its last sample.
pub fn rollout(
    config: &RobotConfig,
    profile: &GaitProfile,
    n_cycles: f64,
    dt: f64,
) -> Result<Trajectory, GaitError> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(GaitError::BadParams(format!("dt {dt} must be > 0")));
    }
    if !n_cycles.is_finite() || n_cycles <= 0.0 {
        return Err(GaitError::BadParams(format!("cycle count {n_cycles} must be > 0")));
    }
    let max_amp = profile.amplitude.iter().cloned().fold(0.0, f64::max);
    if max_amp > config.joint_range + 1e-12 {
        return Err(GaitError::BadParams(format!(
            "amplitude {max_amp} rad exceeds joint range {} rad",
            config.joint_range
        )));
    }
    let n = (n_cycles * profile.period / dt + 1e-9).floor() as usize + 1;
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 * dt;
        let cmd = profile.command_at(t);
        let state = solve(config, &cmd).map_err(|e| GaitError::SolveFailed { t, source: e })?;
        let singular = sample_singular(&state);
        samples.push(TrajectorySample { t, cmd, state, singular });
    }
    Ok(Trajectory { samples })
}
