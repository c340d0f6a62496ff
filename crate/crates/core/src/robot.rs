//! The assembled robot: head and tail five-bars, two slider-coupled body
//! loops, four leg four-bars, and the rigid couplings tying them together.
//!
//! Chassis frame: x to the robot's right, y forward. The four actuators sit
//! at the corners of the chassis rectangle: A1 (-l0/2, +l10/2) drives
//! theta1, A2 (+l0/2, +l15/2) drives theta4, A3 (+l0/2, -l15/2) drives
//! theta8, A4 (-l0/2, -l10/2) drives theta5. The head five-bar frame is the
//! chassis frame translated to (0, l10/2); the tail frame is rotated by pi
//! at (0, -l15/2). Each body rail runs from the rear actuator to the front
//! one (chassis +y), so rail-local angles are chassis angles minus pi/2.

use crate::fivebar::{self, FiveBarError, FiveBarGeometry};
use crate::fourbar::{self, FourBarGeometry};
use crate::linkage::{JointState, LinkSet};
use crate::{normalize_angle, Mat8, Point2, Sign};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

/// Planar mount pose of one leg on the chassis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegMount {
    /// Crank pivot position in the chassis frame, mm.
    pub x: f64,
    pub y: f64,
    /// Rotation from leg frame to chassis frame, rad.
    pub heading: f64,
    /// True when the leg is the reflected (right-handed) mechanism.
    pub mirrored: bool,
}

/// Assembly-branch choices used by [`solve`]. `Plus` everywhere is the
/// upper head assembly, the mirrored-upper tail assembly, and the parallel
/// leg branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branches {
    pub head: Sign,
    pub tail: Sign,
    pub legs: [Sign; 4],
}

impl Default for Branches {
    fn default() -> Self {
        Self { head: Sign::Plus, tail: Sign::Plus, legs: [Sign::Plus; 4] }
    }
}

/// Full robot configuration. The five-bar and four-bar geometries are
/// derived views of `links`, so they cannot drift out of sync with it.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfig {
    pub links: LinkSet,
    /// Mount poses for legs 1..4 (front-left, front-right, rear-right,
    /// rear-left).
    pub leg_mounts: [LegMount; 4],
    /// Actuator travel allowed to each side of its neutral angle, rad.
    pub joint_range: f64,
    /// Foot-tip extension beyond the leg output link, mm.
    pub toe: f64,
    /// Assembly branches used by the solver.
    pub branches: Branches,
    /// Allowed body slider travel (min, max), mm. The neutral seat is at
    /// s = l10, so the default range is symmetric about it.
    pub slider_range: (f64, f64),
}

impl Default for RobotConfig {
    fn default() -> Self {
        let links = LinkSet::default();
        let (hx, hy) = (links.l[0] / 2.0, links.l[10] / 2.0);
        Self {
            leg_mounts: [
                LegMount { x: -hx, y: hy, heading: FRAC_PI_2, mirrored: false },
                LegMount { x: hx, y: hy, heading: -FRAC_PI_2, mirrored: true },
                LegMount { x: hx, y: -hy, heading: -FRAC_PI_2, mirrored: false },
                LegMount { x: -hx, y: -hy, heading: FRAC_PI_2, mirrored: true },
            ],
            joint_range: 45f64.to_radians(),
            toe: 0.0,
            branches: Branches::default(),
            slider_range: (0.0, 2.0 * links.l[10]),
            links,
        }
    }
}

impl RobotConfig {
    /// Head five-bar: ground l0, cranks l1/l4, couplers l2/l3.
    pub fn head_geom(&self) -> FiveBarGeometry {
        let l = &self.links.l;
        FiveBarGeometry { l0: l[0], l1: l[1], l4: l[4], l2: l[2], l3: l[3] }
    }

    /// Tail five-bar in its own (pi-rotated) frame: the theta8 chain
    /// (crank l9, coupler l8) is the left chain there, the theta5 chain
    /// (crank l6, coupler l7) the right one.
    pub fn tail_geom(&self) -> FiveBarGeometry {
        let l = &self.links.l;
        FiveBarGeometry { l0: l[5], l1: l[9], l4: l[6], l2: l[8], l3: l[7] }
    }

    /// Leg four-bar (all four legs share it).
    pub fn leg_geom(&self) -> FourBarGeometry {
        FourBarGeometry {
            lg1: self.links.lg1,
            lg12: self.links.lg12,
            lg13: self.links.lg13,
            lg10: self.links.lg10,
            toe: self.toe,
        }
    }

    /// Head mechanism origin in the chassis frame.
    pub fn head_center(&self) -> Point2 {
        Point2::new(0.0, self.links.l[10] / 2.0)
    }

    /// Tail mechanism origin in the chassis frame.
    pub fn tail_center(&self) -> Point2 {
        Point2::new(0.0, -self.links.l[15] / 2.0)
    }

    /// Reject non-positive lengths or travel limits that cannot close.
    pub fn validate(&self) -> Result<(), String> {
        if !self.links.lengths_positive() {
            return Err("all link lengths must be strictly positive".into());
        }
        if !self.joint_range.is_finite() || self.joint_range <= 0.0 || self.joint_range > PI {
            return Err(format!("joint range {} rad out of (0, pi]", self.joint_range));
        }
        if !self.toe.is_finite() || self.toe < 0.0 {
            return Err(format!("toe {} must be >= 0", self.toe));
        }
        if !self.slider_range.0.is_finite()
            || !self.slider_range.1.is_finite()
            || self.slider_range.0 >= self.slider_range.1
        {
            return Err("slider range must be a nonempty interval".into());
        }
        Ok(())
    }
}

/// Actuator angles, rad, chassis frame: a1 drives theta1, a2 drives
/// theta4, a3 drives theta8, a4 drives theta5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorCommand {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// Neutral actuator pose: front cranks up, rear cranks down.
pub const ACTUATOR_NEUTRAL: [f64; 4] = [FRAC_PI_2, FRAC_PI_2, -FRAC_PI_2, -FRAC_PI_2];

impl ActuatorCommand {
    pub fn neutral() -> Self {
        Self::from_array(ACTUATOR_NEUTRAL)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { a1: a[0], a2: a[1], a3: a[2], a4: a[3] }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }
}

/// Sub-mechanism naming for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanismId {
    Head,
    Tail,
    Leg(u8),
}

impl std::fmt::Display for MechanismId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MechanismId::Head => write!(f, "head"),
            MechanismId::Tail => write!(f, "tail"),
            MechanismId::Leg(k) => write!(f, "leg{k}"),
        }
    }
}

/// Body loop naming.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodySide {
    Left,
    Right,
}

impl std::fmt::Display for BodySide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BodySide::Left => write!(f, "left"),
            BodySide::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("actuator a{actuator} = {value} rad outside the allowed joint range")]
    CommandOutOfRange { actuator: u8, value: f64 },
    #[error("{mechanism} cannot assemble at this command: {detail}")]
    NoAssembly { mechanism: MechanismId, detail: String },
    #[error("{side} body loop cannot satisfy its imposed end angles ({detail})")]
    CouplingInfeasible { side: BodySide, detail: String },
}

/// Solved robot pose.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotState {
    pub joints: JointState,
    /// Head five-bar endpoint, chassis frame, mm.
    pub head_point: Point2,
    /// Tail five-bar endpoint, chassis frame, mm.
    pub tail_point: Point2,
    /// Body output points (left, right), chassis frame, mm.
    pub body_points: [Point2; 2],
    /// Foot tips of legs 1..4, chassis frame, mm.
    pub foot_tips: [Point2; 4],
}

fn rot(heading: f64, p: Point2) -> Point2 {
    let (s, c) = heading.sin_cos();
    Point2::new(c * p.x - s * p.y, s * p.x + c * p.y)
}

fn five_bar_fail(m: MechanismId, e: FiveBarError) -> SolveError {
    SolveError::NoAssembly { mechanism: m, detail: e.to_string() }
}

/// One body loop solve: given the imposed proximal angles (rail-local),
/// find the coupler pair and the absorbing slider coordinate.
fn solve_body(
    side: BodySide,
    proximal_a: f64,   // rail-local angle of the rear proximal link
    proximal_b: f64,   // rail-local angle of the front proximal link
    lengths: [f64; 5], // rail, rear proximal, rear coupler, front coupler, front proximal
    slider_range: (f64, f64),
) -> Result<(f64, f64, f64), SolveError> {
    let [rail, la, lc_a, lc_b, lb] = lengths;
    // y closure with the symmetric-coupler constraint folded in:
    // la sin(pa) + lc_a sin(t) - lc_b sin(-t) - lb sin(pb) = 0.
    let arg = (lb * proximal_b.sin() - la * proximal_a.sin()) / (lc_a + lc_b);
    if arg.abs() > 1.0 + 1e-12 {
        return Err(SolveError::CouplingInfeasible {
            side,
            detail: format!("coupler fold argument {arg:.6} outside [-1, 1]"),
        });
    }
    let t = arg.clamp(-1.0, 1.0).asin();
    let (t10, t11) = (t, -t);
    // x closure defines the slider coordinate.
    let s = rail
        - (la * proximal_a.cos() + lc_a * t10.cos() - lc_b * t11.cos() - lb * proximal_b.cos());
    if s < slider_range.0 - 1e-9 || s > slider_range.1 + 1e-9 {
        return Err(SolveError::CouplingInfeasible {
            side,
            detail: format!("slider {s:.3} mm outside [{}, {}]", slider_range.0, slider_range.1),
        });
    }
    Ok((t10, t11, s))
}

/// Execute the actuator-to-joint coupling algorithm: solve head and tail
/// five-bars, pass their crank angles straight through to the legs, impose
/// the crank-coupled proximal angles on the body loops, and recover the
/// coupler pairs and sliders.
pub fn solve(config: &RobotConfig, cmd: &ActuatorCommand) -> Result<RobotState, SolveError> {
    let a = cmd.as_array();
    for (i, (&v, &n)) in a.iter().zip(ACTUATOR_NEUTRAL.iter()).enumerate() {
        if normalize_angle(v - n).abs() > config.joint_range + 1e-12 {
            return Err(SolveError::CommandOutOfRange { actuator: i as u8 + 1, value: v });
        }
    }
    let links = &config.links;
    let c = links.c;

    // Head five-bar in the chassis-aligned frame.
    let head = fivebar::fk(&config.head_geom(), a[0], a[1], config.branches.head)
        .map_err(|e| five_bar_fail(MechanismId::Head, e))?;

    // Tail five-bar in its pi-rotated frame; theta8 is its left crank.
    let t5_local = normalize_angle(a[3] - PI);
    let t8_local = normalize_angle(a[2] - PI);
    let tail = fivebar::fk(&config.tail_geom(), t8_local, t5_local, config.branches.tail)
        .map_err(|e| five_bar_fail(MechanismId::Tail, e))?;

    // Legs: crank values pass through from the driving five-bar cranks,
    // each expressed in the leg's own mechanism frame (front legs share
    // the head frame; rear legs the tail frame).
    let leg_geom = config.leg_geom();
    let psis = [a[0], a[1], t8_local, t5_local];
    let mut leg_angles = [[0.0; 3]; 4];
    let mut feet = [Point2::new(0.0, 0.0); 4];
    for k in 0..4 {
        let mount = &config.leg_mounts[k];
        let branch = config.branches.legs[k];
        let (angles, foot_local) = if mount.mirrored {
            let st = fourbar::leg_fk(&leg_geom, PI - psis[k], branch)
                .map_err(|e| SolveError::NoAssembly {
                    mechanism: MechanismId::Leg(k as u8 + 1),
                    detail: e.to_string(),
                })?;
            (
                [
                    normalize_angle(PI - st.theta_lg1),
                    normalize_angle(PI - st.theta_lg12),
                    normalize_angle(PI - st.theta_lg13),
                ],
                Point2::new(-st.foot_tip.x, st.foot_tip.y),
            )
        } else {
            let st = fourbar::leg_fk(&leg_geom, psis[k], branch).map_err(|e| {
                SolveError::NoAssembly {
                    mechanism: MechanismId::Leg(k as u8 + 1),
                    detail: e.to_string(),
                }
            })?;
            ([st.theta_lg1, st.theta_lg12, st.theta_lg13], st.foot_tip)
        };
        leg_angles[k] = angles;
        feet[k] = Point2::new(mount.x, mount.y) + rot(mount.heading, foot_local);
    }

    // Body loops: proximal angles imposed by the rigid crank couplings.
    let t12 = normalize_angle(a[0] + c[0]);
    let t16 = normalize_angle(a[1] + c[1]);
    let t9 = normalize_angle(a[3] - c[2]);
    let t13 = normalize_angle(a[2] - c[3]);
    let l = &links.l;
    let (t10, t11, s_left) = solve_body(
        BodySide::Left,
        t9 - FRAC_PI_2,
        t12 - FRAC_PI_2,
        [l[10], l[11], l[12], l[13], l[14]],
        config.slider_range,
    )?;
    let (t14, t15, s_right) = solve_body(
        BodySide::Right,
        t13 - FRAC_PI_2,
        t16 - FRAC_PI_2,
        [l[15], l[16], l[17], l[18], l[19]],
        config.slider_range,
    )?;

    let mut joints = JointState::default();
    for (i, v) in [
        a[0], head.theta2, head.theta3, a[1], a[3], tail.theta3 + PI, tail.theta2 + PI, a[2],
        t9, t10, t11, t12, t13, t14, t15, t16,
    ]
    .into_iter()
    .enumerate()
    {
        joints.set_t(i + 1, v);
    }
    joints.leg = leg_angles;
    joints.s_left = s_left;
    joints.s_right = s_right;

    // Output points in the chassis frame.
    let head_point = config.head_center() + head.endpoint;
    let tail_point = config.tail_center() - tail.endpoint;
    let left_local = Point2::new(
        0.5 * (l[13] * t11.cos() + l[14] * (t12 - FRAC_PI_2).cos()),
        0.5 * (l[13] * t11.sin() + l[14] * (t12 - FRAC_PI_2).sin()),
    );
    let right_local = Point2::new(
        0.5 * (l[18] * t15.cos() + l[19] * (t16 - FRAC_PI_2).cos()),
        0.5 * (l[18] * t15.sin() + l[19] * (t16 - FRAC_PI_2).sin()),
    );
    let rail_left = Point2::new(-l[0] / 2.0, -l[10] / 2.0);
    let rail_right = Point2::new(l[0] / 2.0, -l[15] / 2.0);
    let body_points = [
        rail_left + rot(FRAC_PI_2, left_local),
        rail_right + rot(FRAC_PI_2, right_local),
    ];

    Ok(RobotState { joints, head_point, tail_point, body_points, foot_tips: feet })
}

/// Assemble the block-diagonal 8x8 constraint matrices of the four chassis
/// loops. Rows 1-2 head, 3-4 tail, 5-6 left body, 7-8 right body; `K`
/// differentiates each loop residual by its active pair, `Kstar` by its
/// passive pair.
///
/// Column charts (per loop, consistent across K and Kstar): the head,
/// tail, and left-body blocks differentiate with their second chain
/// mirrored (theta -> pi - theta); the right-body block uses unmirrored
/// coordinates. Columns: K (theta1, theta4 | theta5, theta8 | theta9,
/// theta12 | theta13, theta16); Kstar (theta2, theta3 | theta6, theta7 |
/// theta10, theta11 | theta14, theta15). Under this choice det(Kstar)
/// factors exactly as [`kstar_det_factored`].
pub fn assemble_k_matrices(config: &RobotConfig, state: &JointState) -> (Mat8, Mat8) {
    let l = &config.links.l;
    let mut k = Mat8::zeros();
    let mut ks = Mat8::zeros();
    let put2 = |m: &mut Mat8, r: usize, c: usize, b: [f64; 4]| {
        m[(r, c)] = b[0];
        m[(r, c + 1)] = b[1];
        m[(r + 1, c)] = b[2];
        m[(r + 1, c + 1)] = b[3];
    };

    // Head and tail: second chain mirrored.
    let (s1, c1) = state.t(1).sin_cos();
    let (s4, c4) = state.t(4).sin_cos();
    put2(&mut k, 0, 0, [-l[1] * s1, -l[4] * s4, l[1] * c1, l[4] * c4]);
    let (s5, c5) = state.t(5).sin_cos();
    let (s8, c8) = state.t(8).sin_cos();
    put2(&mut k, 2, 2, [-l[6] * s5, -l[9] * s8, l[6] * c5, l[9] * c8]);
    // Left body: rail-local proximal angles, second chain mirrored.
    let (s9, c9) = (state.t(9) - FRAC_PI_2).sin_cos();
    let (s12, c12) = (state.t(12) - FRAC_PI_2).sin_cos();
    put2(&mut k, 4, 4, [-l[11] * s9, -l[14] * s12, l[11] * c9, l[14] * c12]);
    // Right body: unmirrored chart.
    let (s13, c13) = (state.t(13) - FRAC_PI_2).sin_cos();
    let (s16, c16) = (state.t(16) - FRAC_PI_2).sin_cos();
    put2(&mut k, 6, 6, [-l[16] * s13, l[19] * s16, l[16] * c13, -l[19] * c16]);

    let (s2, c2) = state.t(2).sin_cos();
    let (s3, c3) = state.t(3).sin_cos();
    put2(&mut ks, 0, 0, [-l[2] * s2, -l[3] * s3, l[2] * c2, l[3] * c3]);
    let (s6, c6) = state.t(6).sin_cos();
    let (s7, c7) = state.t(7).sin_cos();
    put2(&mut ks, 2, 2, [-l[7] * s6, -l[8] * s7, l[7] * c6, l[8] * c7]);
    let (s10, c10) = state.t(10).sin_cos();
    let (s11, c11) = state.t(11).sin_cos();
    put2(&mut ks, 4, 4, [-l[12] * s10, -l[13] * s11, l[12] * c10, l[13] * c11]);
    let (s14, c14) = state.t(14).sin_cos();
    let (s15, c15) = state.t(15).sin_cos();
    put2(&mut ks, 6, 6, [-l[17] * s14, l[18] * s15, l[17] * c14, -l[18] * c15]);

    (k, ks)
}

/// The published factored closed form of det(Kstar), evaluated with the
/// second-chain angles converted to their mirrored chart values
/// (theta -> pi - theta) as the factored expression expects.
pub fn kstar_det_factored(links: &LinkSet, state: &JointState) -> f64 {
    let l = &links.l;
    let coef = l[2] * l[3] * l[7] * l[8] * l[12] * l[13] * l[17] * l[18] / 2.0;
    let sum_head = state.t(2) + (PI - state.t(3));
    let sum_tail = state.t(6) + (PI - state.t(7));
    coef * (2.0 * state.t(11)).sin()
        * (2.0 * state.t(14)).sin()
        * ((sum_head - sum_tail).cos() - (sum_head + sum_tail).cos())
}

/// Physical gain factors of the four chassis loops, slider motion
/// accounted for: couplers-aligned for head/tail, coupler-fold for the
/// body loops. Each vanishes exactly at that loop's gain singularity.
pub fn gain_factors(state: &JointState) -> [f64; 4] {
    [
        (state.t(3) - state.t(2)).sin().abs(),
        (state.t(7) - state.t(6)).sin().abs(),
        state.t(10).cos().abs(),
        state.t(14).cos().abs(),
    ]
}

/// Gain factor of leg k (1-based): coupler aligned with the output link.
pub fn leg_gain_factor(state: &JointState, k: usize) -> f64 {
    let [_, t12, t13] = state.leg[k - 1];
    (t12 - t13).sin().abs()
}

/// Labels of the factored singularity terms, named as in the published
/// factored determinant (second-chain angles in the mirrored chart).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularFactor {
    HeadCouplers,
    TailCouplers,
    LeftBodyCoupler,
    RightBodyCoupler,
}

impl std::fmt::Display for SingularFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularFactor::HeadCouplers => write!(f, "sin(theta2+theta3)"),
            SingularFactor::TailCouplers => write!(f, "sin(theta6+theta7)"),
            SingularFactor::LeftBodyCoupler => write!(f, "sin(2*theta11)"),
            SingularFactor::RightBodyCoupler => write!(f, "sin(2*theta14)"),
        }
    }
}

/// One vanishing factor with its physical magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingFactor {
    pub factor: SingularFactor,
    pub value: f64,
}

/// Whole-chassis singularity report.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    /// Some loop is at a gain-type singularity (uncontrolled freedom).
    pub gain: bool,
    /// The active block is rank-deficient (endpoint direction lost).
    pub loss: bool,
    /// Factors whose physical magnitude is below the tolerance.
    pub vanishing_factors: Vec<VanishingFactor>,
}

/// Evaluate gain/loss singularity of the chassis assembly at a state.
///
/// Gain uses the per-loop physical factors of [`gain_factors`] (the
/// prismatic pairs absorb the factored determinant's spurious zero at the
/// neutral pose, so the body factors are |cos theta10| and |cos theta14|
/// rather than the raw sin(2*theta) terms; the reported labels keep the
/// published names). Loss uses det(K) normalized by the active link
/// products.
pub fn full_singularity(config: &RobotConfig, state: &JointState, tol: f64) -> SingularityReport {
    let (k, _) = assemble_k_matrices(config, state);
    let l = &config.links.l;
    let k_scale = l[1] * l[4] * l[6] * l[9] * l[11] * l[14] * l[16] * l[19];
    let loss = k.determinant().abs() / k_scale < tol;
    let factors = gain_factors(state);
    let labels = [
        SingularFactor::HeadCouplers,
        SingularFactor::TailCouplers,
        SingularFactor::LeftBodyCoupler,
        SingularFactor::RightBodyCoupler,
    ];
    let vanishing_factors: Vec<VanishingFactor> = labels
        .into_iter()
        .zip(factors)
        .filter(|&(_, v)| v < tol)
        .map(|(factor, value)| VanishingFactor { factor, value })
        .collect();
    SingularityReport { gain: !vanishing_factors.is_empty(), loss, vanishing_factors }
}
