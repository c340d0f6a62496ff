//! Link tables, joint-state storage, mobility counting, and loop residuals
//! for the four-loop chassis assembly plus its four leg four-bars.

use crate::{dir, normalize_angle, Point2};
use std::f64::consts::FRAC_PI_2;

/// Joint census of a planar mechanism for mobility counting.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCounts {
    /// Number of links, ground included.
    pub n_links: u32,
    /// Number of joints.
    pub n_joints: u32,
    /// Freedom of each joint (1 for revolute or prismatic pairs).
    pub joint_freedoms: Vec<u8>,
}

impl JointCounts {
    /// Build a census; the joint count is the freedom list length.
    pub fn new(n_links: u32, joint_freedoms: Vec<u8>) -> Self {
        let n_joints = joint_freedoms.len() as u32;
        Self { n_links, n_joints, joint_freedoms }
    }

    /// Census of the full chassis assembly: head and tail five-bars, two
    /// slider-coupled body loops (one prismatic pair each), one shared
    /// ground. 13 links, 16 joints, all single-freedom.
    pub fn chassis_assembly() -> Self {
        Self::new(13, vec![1; 16])
    }

    /// Census of one leg four-bar: 4 links, 4 revolutes.
    pub fn four_bar() -> Self {
        Self::new(4, vec![1; 4])
    }
}

/// Planar Gruebler mobility: 3(N - 1 - j) + sum of joint freedoms.
pub fn mobility(counts: &JointCounts) -> i64 {
    let n = counts.n_links as i64;
    let j = counts.n_joints as i64;
    let f: i64 = counts.joint_freedoms.iter().map(|&x| x as i64).sum();
    3 * (n - 1 - j) + f
}

/// All link lengths (mm) and crank-coupling offsets (rad) of the robot.
///
/// Slots `l[0..=4]` are the head five-bar (ground, cranks, couplers),
/// `l[5..=9]` the tail five-bar, `l[10..=14]` the left body loop (rail,
/// proximals, couplers), `l[15..=19]` the right body loop. `lg*` are the
/// leg four-bar lengths shared by all four legs. `c` holds the rigid
/// offsets between the five-bar cranks and the body proximal links.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSet {
    /// Link lengths l0..l19, mm.
    pub l: [f64; 20],
    /// Leg crank length, mm.
    pub lg1: f64,
    /// Leg ground length, mm.
    pub lg10: f64,
    /// Leg coupler length, mm.
    pub lg12: f64,
    /// Leg output link length, mm.
    pub lg13: f64,
    /// Crank-to-body rigid coupling offsets c1..c4, rad.
    pub c: [f64; 4],
}

impl Default for LinkSet {
    fn default() -> Self {
        Self {
            l: [
                20.0, 30.0, 50.0, 50.0, 30.0, // head: l0 ground, l1/l4 cranks, l2/l3 couplers
                20.0, 30.0, 50.0, 50.0, 30.0, // tail: l5 ground, l6/l9 cranks, l7/l8 couplers
                135.0, 30.0, 45.0, 45.0, 30.0, // left body: l10 rail, l11/l14 proximals, l12/l13 couplers
                135.0, 30.0, 45.0, 45.0, 30.0, // right body: l15 rail, l16/l19 proximals, l17/l18 couplers
            ],
            lg1: 45.0,
            lg10: 50.0,
            lg12: 50.0,
            lg13: 45.0,
            c: [FRAC_PI_2; 4],
        }
    }
}

impl LinkSet {
    /// True when every length is strictly positive.
    pub fn lengths_positive(&self) -> bool {
        self.l.iter().all(|&x| x > 0.0)
            && self.lg1 > 0.0
            && self.lg10 > 0.0
            && self.lg12 > 0.0
            && self.lg13 > 0.0
    }
}

/// Full joint state of the robot.
///
/// Storage frames:
/// - `theta[0..=8]`, `theta[11]`, `theta[12]`, `theta[15]` (the five-bar
///   angles and the body proximal angles theta1..theta9, theta12, theta13,
///   theta16) are chassis-frame absolute angles.
/// - `theta[9]`, `theta[10]`, `theta[13]`, `theta[14]` (the body coupler
///   angles theta10, theta11, theta14, theta15) are body-rail-local: each
///   rail frame has its x-axis along the rail (chassis +y), so a local
///   angle is the chassis angle minus pi/2.
/// - `leg[k]` holds (crank, coupler, output) absolute angles of leg k+1 in
///   that leg's own mount frame. Mirrored legs store the angles of their
///   true reflected mechanism.
///
/// All angles are normalized to (-pi, pi]. Sliders are mm along the rails.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct JointState {
    /// theta1..theta16; index i holds theta(i+1).
    pub theta: [f64; 16],
    /// Per-leg (theta_lg1, theta_lg12, theta_lg13), legs 1..4 at rows 0..3.
    pub leg: [[f64; 3]; 4],
    /// Left rail slider position, mm.
    pub s_left: f64,
    /// Right rail slider position, mm.
    pub s_right: f64,
}

impl JointState {
    /// theta(i) with the 1-based index used throughout the joint naming.
    #[inline]
    pub fn t(&self, i: usize) -> f64 {
        self.theta[i - 1]
    }

    /// Set theta(i), 1-based, normalizing to (-pi, pi].
    #[inline]
    pub fn set_t(&mut self, i: usize, v: f64) {
        self.theta[i - 1] = normalize_angle(v);
    }
}

/// One closed loop of the assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LoopId {
    Head,
    Tail,
    LeftBody,
    RightBody,
    Leg1,
    Leg2,
    Leg3,
    Leg4,
}

impl LoopId {
    /// All loops in evaluation order.
    pub const ALL: [LoopId; 8] = [
        LoopId::Head,
        LoopId::Tail,
        LoopId::LeftBody,
        LoopId::RightBody,
        LoopId::Leg1,
        LoopId::Leg2,
        LoopId::Leg3,
        LoopId::Leg4,
    ];
}

/// Loop-closure residual components, mm.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// Two components (x, y) per independent loop evaluated.
    pub values: Vec<f64>,
}

impl Residual {
    /// Largest absolute component, mm.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn chain_sum(terms: &[(f64, f64)]) -> Point2 {
    terms
        .iter()
        .fold(Point2::new(0.0, 0.0), |acc, &(len, ang)| acc + len * dir(ang))
}

/// Closure residual of one loop, mm.
///
/// Head and tail evaluate in the chassis frame; the body loops evaluate in
/// their rail-local frames with the slider folded into the ground segment;
/// the legs evaluate in their mount frames. Legs 2 and 4 are the mirrored
/// pair of the bilateral layout, so their ground vector is reflected.
pub fn loop_residual(links: &LinkSet, state: &JointState, loop_id: LoopId) -> Residual {
    let l = &links.l;
    let v = match loop_id {
        LoopId::Head => {
            chain_sum(&[
                (l[1], state.t(1)),
                (l[2], state.t(2)),
                (-l[3], state.t(3)),
                (-l[4], state.t(4)),
            ]) - Point2::new(l[0], 0.0)
        }
        LoopId::Tail => {
            chain_sum(&[
                (l[6], state.t(5)),
                (l[7], state.t(6)),
                (-l[8], state.t(7)),
                (-l[9], state.t(8)),
            ]) - Point2::new(l[5], 0.0)
        }
        LoopId::LeftBody => {
            chain_sum(&[
                (l[11], state.t(9) - FRAC_PI_2),
                (l[12], state.t(10)),
                (-l[13], state.t(11)),
                (-l[14], state.t(12) - FRAC_PI_2),
            ]) + Point2::new(state.s_left - l[10], 0.0)
        }
        LoopId::RightBody => {
            chain_sum(&[
                (l[16], state.t(13) - FRAC_PI_2),
                (l[17], state.t(14)),
                (-l[18], state.t(15)),
                (-l[19], state.t(16) - FRAC_PI_2),
            ]) + Point2::new(state.s_right - l[15], 0.0)
        }
        LoopId::Leg1 | LoopId::Leg2 | LoopId::Leg3 | LoopId::Leg4 => {
            let (k, mirrored) = match loop_id {
                LoopId::Leg1 => (0, false),
                LoopId::Leg2 => (1, true),
                LoopId::Leg3 => (2, false),
                _ => (3, true),
            };
            let ground = if mirrored { -links.lg10 } else { links.lg10 };
            let [t1, t12, t13] = state.leg[k];
            chain_sum(&[(links.lg1, t1), (links.lg12, t12), (-links.lg13, t13)])
                - Point2::new(ground, 0.0)
        }
    };
    Residual { values: vec![v.x, v.y] }
}

/// Residuals of the six rigid coupling constraints between the five-bar
/// cranks and the body loops, rad (wrapped):
/// theta12 - theta1 - c1, theta16 - theta4 - c2, theta9 - theta5 + c3,
/// theta13 - theta8 + c4, theta10 + theta11, theta14 + theta15.
pub fn coupling_residuals(links: &LinkSet, state: &JointState) -> [f64; 6] {
    [
        normalize_angle(state.t(12) - state.t(1) - links.c[0]),
        normalize_angle(state.t(16) - state.t(4) - links.c[1]),
        normalize_angle(state.t(9) - state.t(5) + links.c[2]),
        normalize_angle(state.t(13) - state.t(8) + links.c[3]),
        normalize_angle(state.t(10) + state.t(11)),
        normalize_angle(state.t(14) + state.t(15)),
    ]
}
