//! Command-line front end for the linkage toolkit: mobility counts,
//! dimensional synthesis, performance charts, pose solves, singularity
//! scans, and gait trajectory generation.
//!
//! Exit codes: 0 success, 2 bad invocation or config file, 3 infeasible
//! geometry, 4 kinematic failure (unreachable pose or broken rollout).

use clap::{Parser, Subcommand, ValueEnum};
use lizard_kinematics::fivebar::BranchSelector;
use lizard_kinematics::gait::{profile, rollout, GaitError, GaitKind};
use lizard_kinematics::io::svg::{chart_svg, foot_paths_svg};
use lizard_kinematics::io::{fmt_sig, parse_config, serialize_config, ConfigFile, Table};
use lizard_kinematics::linkage::{loop_residual, JointCounts, LoopId};
use lizard_kinematics::robot::{
    assemble_k_matrices, gain_factors, leg_gain_factor, solve, ActuatorCommand, BodySide,
    MechanismId, RobotConfig, SolveError, ACTUATOR_NEUTRAL,
};
use lizard_kinematics::synthesis::{
    dimensionalize, lci_chart, mic, symmetric_geometry, validate_params, workspace_chart, ChartGrid,
    GridSpec,
};
use lizard_kinematics::{normalize_angle, tol, Sign};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lizard-kin",
    version,
    about = "Planar closed-chain linkage toolkit for a lizard-style quadruped"
)]
struct Cli {
    /// Robot description file; omitted, the built-in default robot is used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory that generated files are written into.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Encoding of generated tables and scalar output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mechanism {
    Head,
    Tail,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChartKind {
    Workspace,
    Lci,
}

/// Elbow pair of the two five-bar chains, left then right; `p` bends a
/// chain with positive cross product, `m` negative.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Elbows {
    Pp,
    Pm,
    Mp,
    Mm,
}

impl Elbows {
    fn selector(self) -> BranchSelector {
        let (l, r) = match self {
            Elbows::Pp => (Sign::Plus, Sign::Plus),
            Elbows::Pm => (Sign::Plus, Sign::Minus),
            Elbows::Mp => (Sign::Minus, Sign::Plus),
            Elbows::Mm => (Sign::Minus, Sign::Minus),
        };
        BranchSelector { elbow_left: l, elbow_right: r }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Gait {
    Walk,
    Trot,
    TurnLeft,
    TurnRight,
}

impl Gait {
    fn kind(self) -> GaitKind {
        match self {
            Gait::Walk => GaitKind::Walk,
            Gait::Trot => GaitKind::Trot,
            Gait::TurnLeft => GaitKind::TurnLeft,
            Gait::TurnRight => GaitKind::TurnRight,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print mobility (degree-of-freedom) counts of the robot's mechanisms.
    Dof,

    /// Print the canonical form of the active configuration document.
    Config,

    /// Dimension the symmetric five-bar from non-dimensional parameters.
    Synth {
        /// Non-dimensional crank length.
        #[arg(long, allow_negative_numbers = true)]
        r1: f64,
        /// Non-dimensional coupler length.
        #[arg(long, allow_negative_numbers = true)]
        r2: f64,
        /// Non-dimensional base half-length.
        #[arg(long, allow_negative_numbers = true)]
        r3: f64,
        /// Physical base half-length, mm.
        #[arg(long = "r3-mm", allow_negative_numbers = true)]
        r3_mm: f64,
    },

    /// Sample a performance chart of a five-bar over a planar grid.
    Chart {
        #[arg(long, value_enum)]
        kind: ChartKind,
        #[arg(long, value_enum, default_value_t = Mechanism::Head)]
        mechanism: Mechanism,
        /// Grid as x0:x1:nx,y0:y1:ny in mm; omitted, a window covering
        /// the full reach is used at 200 x 200.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Working-mode elbow pair used for conditioning.
        #[arg(long, value_enum, default_value_t = Elbows::Pm)]
        elbows: Elbows,
        /// Also write an SVG rendering of the chart.
        #[arg(long)]
        svg: bool,
    },

    /// Solve the whole robot pose for four actuator angles.
    Fk {
        /// Actuator angles, degrees.
        #[arg(long, allow_negative_numbers = true)]
        a1: f64,
        #[arg(long, allow_negative_numbers = true)]
        a2: f64,
        #[arg(long, allow_negative_numbers = true)]
        a3: f64,
        #[arg(long, allow_negative_numbers = true)]
        a4: f64,
    },

    /// Solve five-bar crank angles reaching a point (mechanism frame).
    Ik {
        /// Target x, mm, in the five-bar base frame.
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        /// Target y, mm, in the five-bar base frame.
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, value_enum, default_value_t = Mechanism::Head)]
        mechanism: Mechanism,
        #[arg(long, value_enum, default_value_t = Elbows::Pm)]
        elbows: Elbows,
    },

    /// Sweep actuator axes and tabulate singularity indicators.
    SingularityScan {
        /// Axis values in degrees: either a single angle or lo:hi:n.
        #[arg(long, allow_hyphen_values = true, default_value = "90")]
        a1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "90")]
        a2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-90")]
        a3: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-90")]
        a4: String,
    },

    /// Roll out a stock gait and tabulate the resulting trajectory.
    Gait {
        #[arg(long, value_enum)]
        kind: Gait,
        /// Number of gait cycles to roll out.
        #[arg(long, default_value_t = 2.0)]
        cycles: f64,
        /// Sample step, seconds; omitted, 1/200 of the period is used.
        #[arg(long)]
        dt: Option<f64>,
        /// Also write an SVG rendering of the foot paths.
        #[arg(long)]
        svg: bool,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn geometry(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    fn kinematic(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Dof => cmd_dof(cli),
        Command::Config => {
            let (cf, _) = load(cli)?;
            print!("{}", serialize_config(&cf));
            Ok(())
        }
        Command::Synth { r1, r2, r3, r3_mm } => cmd_synth(cli, *r1, *r2, *r3, *r3_mm),
        Command::Chart { kind, mechanism, grid, elbows, svg } => {
            cmd_chart(cli, *kind, *mechanism, grid.as_deref(), *elbows, *svg)
        }
        Command::Fk { a1, a2, a3, a4 } => cmd_fk(cli, [*a1, *a2, *a3, *a4]),
        Command::Ik { x, y, mechanism, elbows } => cmd_ik(cli, *x, *y, *mechanism, *elbows),
        Command::SingularityScan { a1, a2, a3, a4 } => cmd_scan(cli, [a1, a2, a3, a4]),
        Command::Gait { kind, cycles, dt, svg } => cmd_gait(cli, *kind, *cycles, *dt, *svg),
    }
}

fn load(cli: &Cli) -> Result<(ConfigFile, RobotConfig), CliError> {
    let cf = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| CliError::input(e.to_string()))?
        }
        None => ConfigFile::default(),
    };
    let robot = cf.to_robot_config().map_err(|e| CliError::geometry(e.to_string()))?;
    Ok((cf, robot))
}

fn mechanism_geom(robot: &RobotConfig, m: Mechanism) -> lizard_kinematics::fivebar::FiveBarGeometry {
    match m {
        Mechanism::Head => robot.head_geom(),
        Mechanism::Tail => robot.tail_geom(),
    }
}

/// Digest of the canonical config document and the argument vector, so a
/// report identifies its inputs regardless of config file formatting.
fn run_digest(cf: &ConfigFile) -> String {
    let mut h = Sha256::new();
    h.update(serialize_config(cf).as_bytes());
    for arg in std::env::args().skip(1) {
        h.update([0u8]);
        h.update(arg.as_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn print_report(
    command: &str,
    cf: &ConfigFile,
    outputs: &[PathBuf],
    invariants: serde_json::Value,
) {
    let report = serde_json::json!({
        "command": command,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "config_digest": run_digest(cf),
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "invariants": invariants,
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
}

/// Print scalar results as `key = value` lines or one JSON object.
fn emit_scalars(format: Format, pairs: &[(&str, f64)]) {
    match format {
        Format::Csv => {
            for (k, v) in pairs {
                println!("{k} = {}", fmt_sig(*v));
            }
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in pairs {
                map.insert((*k).to_string(), serde_json::json!(v));
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(map)).unwrap());
        }
    }
}

fn table_json(table: &Table) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for (name, values) in &table.columns {
        map.insert(name.clone(), serde_json::json!(values));
    }
    serde_json::Value::Object(map)
}

/// Write a table into the output directory under `stem`, honoring the
/// output format. Returns the path written.
fn write_table(cli: &Cli, stem: &str, table: &Table) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", cli.out.display())))?;
    let (path, content) = match cli.format {
        Format::Csv => (cli.out.join(format!("{stem}.csv")), table.to_csv()),
        Format::Json => (
            cli.out.join(format!("{stem}.json")),
            format!("{}\n", serde_json::to_string_pretty(&table_json(table)).unwrap()),
        ),
    };
    std::fs::write(&path, content)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn write_text(cli: &Cli, name: &str, content: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", cli.out.display())))?;
    let path = cli.out.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_dof(cli: &Cli) -> Result<(), CliError> {
    load(cli)?; // surface config problems even though dof needs no geometry
    let rows = [
        ("chassis-assembly", JointCounts::chassis_assembly()),
        ("leg-four-bar", JointCounts::four_bar()),
    ];
    match cli.format {
        Format::Csv => {
            println!("mechanism,links,joints,dof");
            for (name, c) in &rows {
                println!(
                    "{name},{},{},{}",
                    c.n_links,
                    c.n_joints,
                    lizard_kinematics::linkage::mobility(c)
                );
            }
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (name, c) in &rows {
                map.insert(
                    (*name).to_string(),
                    serde_json::json!({
                        "links": c.n_links,
                        "joints": c.n_joints,
                        "dof": lizard_kinematics::linkage::mobility(c),
                    }),
                );
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(map)).unwrap());
        }
    }
    Ok(())
}

fn cmd_synth(cli: &Cli, r1: f64, r2: f64, r3: f64, r3_mm: f64) -> Result<(), CliError> {
    if r3_mm <= 0.0 || !r3_mm.is_finite() {
        return Err(CliError::input(format!("--r3-mm {r3_mm} must be a positive length")));
    }
    let p = validate_params(r1, r2, r3).map_err(|e| CliError::geometry(e.to_string()))?;
    let (factor, l0, l1, l2) = dimensionalize(&p, r3_mm);
    let unit = mic(&symmetric_geometry(&p, p.r3)).map_err(|e| CliError::geometry(e.to_string()))?;
    let sized = mic(&symmetric_geometry(&p, r3_mm)).map_err(|e| CliError::geometry(e.to_string()))?;
    emit_scalars(
        cli.format,
        &[
            ("r1", p.r1),
            ("r2", p.r2),
            ("r3", p.r3),
            ("d_mm", factor.d),
            ("l0_mm", l0),
            ("l1_mm", l1),
            ("l2_mm", l2),
            ("r_mic_nondim", unit.r_mic),
            ("r_mic_mm", sized.r_mic),
            ("y_mic_mm", sized.y_mic),
        ],
    );
    Ok(())
}

/// Parse `x0:x1:nx,y0:y1:ny` into a grid specification.
fn parse_grid(s: &str) -> Result<GridSpec, CliError> {
    let err = || CliError::input(format!("bad grid spec {s:?}: expected x0:x1:nx,y0:y1:ny"));
    let (xs, ys) = s.split_once(',').ok_or_else(err)?;
    let axis = |part: &str| -> Result<((f64, f64), usize), CliError> {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(err());
        }
        let lo: f64 = fields[0].parse().map_err(|_| err())?;
        let hi: f64 = fields[1].parse().map_err(|_| err())?;
        let n: usize = fields[2].parse().map_err(|_| err())?;
        if !lo.is_finite() || !hi.is_finite() || n == 0 {
            return Err(err());
        }
        Ok(((lo, hi), n))
    };
    let (x_range, nx) = axis(xs)?;
    let (y_range, ny) = axis(ys)?;
    Ok(GridSpec { x_range, y_range, nx, ny })
}

fn chart_table(kind: ChartKind, chart: &ChartGrid) -> Table {
    let mut table = match kind {
        ChartKind::Workspace => Table::new(&["x_mm", "y_mm", "in_workspace"]),
        ChartKind::Lci => Table::new(&["x_mm", "y_mm", "in_workspace", "lci"]),
    };
    let spec = chart.spec;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let (v, m) = chart.at(i, j);
            let mask = if m { 1.0 } else { 0.0 };
            match kind {
                ChartKind::Workspace => table.push_row(&[spec.x_at(i), spec.y_at(j), mask]),
                ChartKind::Lci => table.push_row(&[spec.x_at(i), spec.y_at(j), mask, v]),
            }
        }
    }
    table
}

fn cmd_chart(
    cli: &Cli,
    kind: ChartKind,
    mechanism: Mechanism,
    grid: Option<&str>,
    elbows: Elbows,
    svg: bool,
) -> Result<(), CliError> {
    let (cf, robot) = load(cli)?;
    let geom = mechanism_geom(&robot, mechanism);
    let spec = match grid {
        Some(s) => parse_grid(s)?,
        None => GridSpec::default_for(&geom),
    };
    let chart = match kind {
        ChartKind::Workspace => workspace_chart(&geom, spec),
        ChartKind::Lci => lci_chart(&geom, spec, &elbows.selector()),
    };

    let (kind_name, mech_name) = (
        match kind {
            ChartKind::Workspace => "workspace",
            ChartKind::Lci => "lci",
        },
        match mechanism {
            Mechanism::Head => "head",
            Mechanism::Tail => "tail",
        },
    );
    let stem = format!("chart_{kind_name}_{mech_name}");
    let mut outputs = vec![write_table(cli, &stem, &chart_table(kind, &chart))?];
    if svg {
        let title = format!("{kind_name} {mech_name}");
        outputs.push(write_text(cli, &format!("{stem}.svg"), &chart_svg(&chart, &title))?);
    }

    let mut inv = serde_json::Map::new();
    inv.insert("grid_nx".into(), serde_json::json!(spec.nx));
    inv.insert("grid_ny".into(), serde_json::json!(spec.ny));
    inv.insert("cells_in_workspace".into(), serde_json::json!(chart.masked_count()));
    if kind == ChartKind::Lci {
        if let Some(m) = chart.masked_median() {
            inv.insert("median_lci".into(), serde_json::json!(m));
        }
        if let Ok(m) = mic(&geom) {
            inv.insert("r_mic_mm".into(), serde_json::json!(m.r_mic));
            inv.insert("y_mic_mm".into(), serde_json::json!(m.y_mic));
        }
    }
    print_report("chart", &cf, &outputs, serde_json::Value::Object(inv));
    Ok(())
}

fn map_solve_err(e: SolveError) -> CliError {
    match e {
        SolveError::CommandOutOfRange { .. } => CliError::input(e.to_string()),
        _ => CliError::kinematic(e.to_string()),
    }
}

fn cmd_fk(cli: &Cli, deg: [f64; 4]) -> Result<(), CliError> {
    let (_, robot) = load(cli)?;
    let cmd = ActuatorCommand::from_array(deg.map(f64::to_radians));
    let st = solve(&robot, &cmd).map_err(map_solve_err)?;

    let singular = gain_factors(&st.joints).iter().any(|&g| g < tol::SINGULARITY)
        || (1..=4).any(|k| leg_gain_factor(&st.joints, k) < tol::SINGULARITY);

    let mut pairs: Vec<(String, f64)> = Vec::new();
    for i in 1..=16 {
        pairs.push((format!("t{i}_deg"), st.joints.t(i).to_degrees()));
    }
    pairs.push(("s_left_mm".into(), st.joints.s_left));
    pairs.push(("s_right_mm".into(), st.joints.s_right));
    for (name, p) in [
        ("head", st.head_point),
        ("tail", st.tail_point),
        ("body_left", st.body_points[0]),
        ("body_right", st.body_points[1]),
        ("foot1", st.foot_tips[0]),
        ("foot2", st.foot_tips[1]),
        ("foot3", st.foot_tips[2]),
        ("foot4", st.foot_tips[3]),
    ] {
        pairs.push((format!("{name}_x_mm"), p.x));
        pairs.push((format!("{name}_y_mm"), p.y));
    }
    pairs.push(("singular".into(), if singular { 1.0 } else { 0.0 }));
    let borrowed: Vec<(&str, f64)> = pairs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    emit_scalars(cli.format, &borrowed);
    Ok(())
}

fn cmd_ik(cli: &Cli, x: f64, y: f64, mechanism: Mechanism, elbows: Elbows) -> Result<(), CliError> {
    let (_, robot) = load(cli)?;
    let geom = mechanism_geom(&robot, mechanism);
    let (t1, t4) = lizard_kinematics::fivebar::ik(
        &geom,
        lizard_kinematics::Point2::new(x, y),
        elbows.selector(),
    )
    .map_err(|e| CliError::kinematic(e.to_string()))?;
    emit_scalars(cli.format, &[("t1_deg", t1.to_degrees()), ("t4_deg", t4.to_degrees())]);
    Ok(())
}

/// Parse one scan axis: a single angle or an inclusive lo:hi:n sweep.
fn parse_axis(name: &str, s: &str) -> Result<Vec<f64>, CliError> {
    let err =
        || CliError::input(format!("bad {name} axis {s:?}: expected a degree value or lo:hi:n"));
    if !s.contains(':') {
        let v: f64 = s.trim().parse().map_err(|_| err())?;
        if !v.is_finite() {
            return Err(err());
        }
        return Ok(vec![v]);
    }
    let fields: Vec<&str> = s.split(':').collect();
    if fields.len() != 3 {
        return Err(err());
    }
    let lo: f64 = fields[0].parse().map_err(|_| err())?;
    let hi: f64 = fields[1].parse().map_err(|_| err())?;
    let n: usize = fields[2].parse().map_err(|_| err())?;
    if !lo.is_finite() || !hi.is_finite() || n == 0 {
        return Err(err());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn cmd_scan(cli: &Cli, axes: [&String; 4]) -> Result<(), CliError> {
    let (cf, robot) = load(cli)?;
    let names = ["a1", "a2", "a3", "a4"];
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(4);
    for (name, spec) in names.iter().zip(axes.iter()) {
        values.push(parse_axis(name, spec)?);
    }
    for (i, vs) in values.iter().enumerate() {
        for &deg in vs {
            let dev = normalize_angle(deg.to_radians() - ACTUATOR_NEUTRAL[i]);
            if dev.abs() > robot.joint_range + 1e-12 {
                return Err(CliError::input(format!(
                    "{} = {deg} deg deviates {:.3} deg from neutral, beyond the +-{:.3} deg joint range",
                    names[i],
                    dev.to_degrees().abs(),
                    robot.joint_range.to_degrees()
                )));
            }
        }
    }
    let rows: usize = values.iter().map(Vec::len).product();
    if rows > 5_000_000 {
        return Err(CliError::input(format!("scan of {rows} poses is too large")));
    }

    let l = &robot.links.l;
    let k_scale = l[1] * l[4] * l[6] * l[9] * l[11] * l[14] * l[16] * l[19];
    let ks_scale = l[2] * l[3] * l[7] * l[8] * l[12] * l[13] * l[17] * l[18];
    let mut table = Table::new(&[
        "a1_deg",
        "a2_deg",
        "a3_deg",
        "a4_deg",
        "det_k",
        "det_kstar",
        "flag_head",
        "flag_tail",
        "flag_left",
        "flag_right",
    ]);
    let mut flagged = 0usize;
    for &a1 in &values[0] {
        for &a2 in &values[1] {
            for &a3 in &values[2] {
                for &a4 in &values[3] {
                    let cmd = ActuatorCommand::from_array([
                        a1.to_radians(),
                        a2.to_radians(),
                        a3.to_radians(),
                        a4.to_radians(),
                    ]);
                    let (dk, dks, flags) = match solve(&robot, &cmd) {
                        Ok(st) => {
                            let (k, ks) = assemble_k_matrices(&robot, &st.joints);
                            let g = gain_factors(&st.joints);
                            (
                                k.determinant() / k_scale,
                                ks.determinant() / ks_scale,
                                g.map(|f| if f < tol::SINGULARITY { 1.0 } else { 0.0 }),
                            )
                        }
                        // An unassemblable pose is flagged on the loop that
                        // failed; legs report under the five-bar sharing
                        // their actuator pair.
                        Err(SolveError::NoAssembly { mechanism, .. }) => {
                            let mut f = [0.0; 4];
                            match mechanism {
                                MechanismId::Head | MechanismId::Leg(1) | MechanismId::Leg(2) => {
                                    f[0] = 1.0
                                }
                                MechanismId::Tail | MechanismId::Leg(_) => f[1] = 1.0,
                            }
                            (0.0, 0.0, f)
                        }
                        Err(SolveError::CouplingInfeasible { side, .. }) => {
                            let mut f = [0.0; 4];
                            match side {
                                BodySide::Left => f[2] = 1.0,
                                BodySide::Right => f[3] = 1.0,
                            }
                            (0.0, 0.0, f)
                        }
                        Err(e @ SolveError::CommandOutOfRange { .. }) => {
                            return Err(CliError::input(e.to_string()))
                        }
                    };
                    if flags.iter().any(|&f| f > 0.0) {
                        flagged += 1;
                    }
                    table.push_row(&[
                        a1, a2, a3, a4, dk, dks, flags[0], flags[1], flags[2], flags[3],
                    ]);
                }
            }
        }
    }

    let outputs = vec![write_table(cli, "singularity_scan", &table)?];
    print_report(
        "singularity-scan",
        &cf,
        &outputs,
        serde_json::json!({ "rows": rows, "flagged_rows": flagged }),
    );
    Ok(())
}

fn cmd_gait(cli: &Cli, kind: Gait, cycles: f64, dt: Option<f64>, svg: bool) -> Result<(), CliError> {
    let (cf, robot) = load(cli)?;
    let defaults = cf.gait_defaults();
    let prof = profile(kind.kind(), &defaults).map_err(|e| CliError::input(e.to_string()))?;
    let dt = dt.unwrap_or(prof.period / 200.0);
    let traj = rollout(&robot, &prof, cycles, dt).map_err(|e| match e {
        GaitError::BadParams(_) => CliError::input(e.to_string()),
        GaitError::SolveFailed { .. } => CliError::kinematic(e.to_string()),
    })?;

    let mut table = Table::new(&[
        "t_s",
        "a1_deg",
        "a2_deg",
        "a3_deg",
        "a4_deg",
        "foot1_x_mm",
        "foot1_y_mm",
        "foot2_x_mm",
        "foot2_y_mm",
        "foot3_x_mm",
        "foot3_y_mm",
        "foot4_x_mm",
        "foot4_y_mm",
        "head_x_mm",
        "head_y_mm",
        "tail_x_mm",
        "tail_y_mm",
        "singular",
    ]);
    let mut max_residual = 0.0f64;
    for s in &traj.samples {
        for lp in LoopId::ALL {
            max_residual = max_residual.max(loop_residual(&robot.links, &s.state.joints, lp).max_abs());
        }
        let a = s.cmd.as_array();
        table.push_row(&[
            s.t,
            a[0].to_degrees(),
            a[1].to_degrees(),
            a[2].to_degrees(),
            a[3].to_degrees(),
            s.state.foot_tips[0].x,
            s.state.foot_tips[0].y,
            s.state.foot_tips[1].x,
            s.state.foot_tips[1].y,
            s.state.foot_tips[2].x,
            s.state.foot_tips[2].y,
            s.state.foot_tips[3].x,
            s.state.foot_tips[3].y,
            s.state.head_point.x,
            s.state.head_point.y,
            s.state.tail_point.x,
            s.state.tail_point.y,
            if s.singular { 1.0 } else { 0.0 },
        ]);
    }

    let kind_name = prof.kind.to_string().replace('-', "_");
    let stem = format!("gait_{kind_name}");
    let mut outputs = vec![write_table(cli, &stem, &table)?];
    if svg {
        outputs.push(write_text(cli, &format!("{stem}.svg"), &foot_paths_svg(&traj, &robot))?);
    }
    print_report(
        "gait",
        &cf,
        &outputs,
        serde_json::json!({
            "samples": traj.samples.len(),
            "singular_samples": traj.singular_count(),
            "max_loop_residual_mm": max_residual,
        }),
    );
    Ok(())
}
