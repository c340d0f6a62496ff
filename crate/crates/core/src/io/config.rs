//! INI-style configuration files.
//!
//! Grammar: `[section]` headers, `key = value` pairs, `#`/`;` comments,
//! blank lines ignored. Sections and keys are fixed; unknown or duplicate
//! keys are errors, missing keys fall back to the built-in defaults.
//! Units in the file are mm, degrees, and seconds; conversion to radians
//! happens only in [`ConfigFile::to_robot_config`] and
//! [`ConfigFile::gait_defaults`]. Serialization uses the shortest exact
//! float form, so parse -> serialize -> parse is the identity.

use crate::gait::GaitDefaults;
use crate::linkage::LinkSet;
use crate::robot::{Branches, LegMount, RobotConfig};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key '{key}' in [{section}]")]
    UnknownKey { line: usize, section: &'static str, key: String },
    #[error("line {line}: duplicate key '{key}'")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for '{key}': {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// One leg mount entry in file units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegEntry {
    pub x_mm: f64,
    pub y_mm: f64,
    pub heading_deg: f64,
    pub mirrored: bool,
}

/// Gait parameters in file units.
#[derive(Debug, Clone, PartialEq)]
pub struct GaitSection {
    pub period_s: f64,
    pub walk_amplitude_deg: f64,
    pub walk_duty: f64,
    pub trot_amplitude_deg: f64,
    pub trot_duty: f64,
    pub turn_outer_deg: f64,
    pub turn_inner_deg: f64,
}

/// A configuration document, stored exactly in file units so that
/// serialization is lossless.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    /// l0..l19, mm.
    pub l_mm: [f64; 20],
    pub lg1_mm: f64,
    pub lg10_mm: f64,
    pub lg12_mm: f64,
    pub lg13_mm: f64,
    pub toe_mm: f64,
    pub slider_min_mm: f64,
    pub slider_max_mm: f64,
    /// Crank-to-proximal coupling offsets c1..c4, degrees.
    pub c_deg: [f64; 4],
    pub joint_range_deg: f64,
    pub legs: [LegEntry; 4],
    pub gait: GaitSection,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let robot = RobotConfig::default();
        let gait = GaitDefaults::default();
        let leg = |m: &LegMount| LegEntry {
            x_mm: m.x,
            y_mm: m.y,
            heading_deg: m.heading.to_degrees().round(),
            mirrored: m.mirrored,
        };
        Self {
            l_mm: robot.links.l,
            lg1_mm: robot.links.lg1,
            lg10_mm: robot.links.lg10,
            lg12_mm: robot.links.lg12,
            lg13_mm: robot.links.lg13,
            toe_mm: robot.toe,
            slider_min_mm: robot.slider_range.0,
            slider_max_mm: robot.slider_range.1,
            c_deg: [90.0; 4],
            joint_range_deg: 45.0,
            legs: [
                leg(&robot.leg_mounts[0]),
                leg(&robot.leg_mounts[1]),
                leg(&robot.leg_mounts[2]),
                leg(&robot.leg_mounts[3]),
            ],
            gait: GaitSection {
                period_s: gait.period,
                walk_amplitude_deg: 12.0,
                walk_duty: gait.walk_duty,
                trot_amplitude_deg: 15.0,
                trot_duty: gait.trot_duty,
                turn_outer_deg: 15.0,
                turn_inner_deg: 5.0,
            },
        }
    }
}

impl ConfigFile {
    /// Convert to the native robot configuration (radians), validating
    /// geometry.
    pub fn to_robot_config(&self) -> Result<RobotConfig, ConfigError> {
        let links = LinkSet {
            l: self.l_mm,
            lg1: self.lg1_mm,
            lg10: self.lg10_mm,
            lg12: self.lg12_mm,
            lg13: self.lg13_mm,
            c: self.c_deg.map(f64::to_radians),
        };
        let mounts = self.legs.map(|e| LegMount {
            x: e.x_mm,
            y: e.y_mm,
            heading: e.heading_deg.to_radians(),
            mirrored: e.mirrored,
        });
        let config = RobotConfig {
            links,
            leg_mounts: mounts,
            joint_range: self.joint_range_deg.to_radians(),
            toe: self.toe_mm,
            branches: Branches::default(),
            slider_range: (self.slider_min_mm, self.slider_max_mm),
        };
        config.validate().map_err(ConfigError::Invalid)?;
        Ok(config)
    }

    /// Gait parameters in native units (radians, seconds).
    pub fn gait_defaults(&self) -> GaitDefaults {
        GaitDefaults {
            period: self.gait.period_s,
            walk_amplitude: self.gait.walk_amplitude_deg.to_radians(),
            walk_duty: self.gait.walk_duty,
            trot_amplitude: self.gait.trot_amplitude_deg.to_radians(),
            trot_duty: self.gait.trot_duty,
            turn_outer: self.gait.turn_outer_deg.to_radians(),
            turn_inner: self.gait.turn_inner_deg.to_radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Links,
    Angles,
    Legs,
    Gait,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::Links => "links",
            Section::Angles => "angles",
            Section::Legs => "legs",
            Section::Gait => "gait",
        }
    }
}

fn parse_float(line: usize, key: &str, val: &str) -> Result<f64, ConfigError> {
    let v: f64 = val.parse().map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        msg: format!("'{val}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            msg: "value must be finite".into(),
        });
    }
    Ok(v)
}

fn parse_bool(line: usize, key: &str, val: &str) -> Result<bool, ConfigError> {
    match val {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::BadValue {
            line,
            key: key.to_string(),
            msg: format!("'{val}' is not true/false"),
        }),
    }
}

fn unknown_key(line: usize, section: Section, key: &str) -> ConfigError {
    ConfigError::UnknownKey { line, section: section.name(), key: key.to_string() }
}

fn apply(
    cf: &mut ConfigFile,
    section: Section,
    key: &str,
    val: &str,
    line: usize,
) -> Result<(), ConfigError> {
    match section {
        Section::Links => {
            let slot = match key {
                "lg1" => Some(&mut cf.lg1_mm),
                "lg10" => Some(&mut cf.lg10_mm),
                "lg12" => Some(&mut cf.lg12_mm),
                "lg13" => Some(&mut cf.lg13_mm),
                "toe" => Some(&mut cf.toe_mm),
                "slider_min" => Some(&mut cf.slider_min_mm),
                "slider_max" => Some(&mut cf.slider_max_mm),
                _ => None,
            };
            if let Some(slot) = slot {
                *slot = parse_float(line, key, val)?;
                return Ok(());
            }
            let idx = key
                .strip_prefix('l')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| i < 20)
                .ok_or_else(|| unknown_key(line, section, key))?;
            cf.l_mm[idx] = parse_float(line, key, val)?;
            Ok(())
        }
        Section::Angles => {
            if key == "joint_range" {
                cf.joint_range_deg = parse_float(line, key, val)?;
                return Ok(());
            }
            let idx = key
                .strip_prefix('c')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&i| (1..=4).contains(&i))
                .ok_or_else(|| unknown_key(line, section, key))?;
            cf.c_deg[idx - 1] = parse_float(line, key, val)?;
            Ok(())
        }
        Section::Legs => {
            let rest = key.strip_prefix("leg").ok_or_else(|| unknown_key(line, section, key))?;
            let (digit, field) =
                rest.split_once('_').ok_or_else(|| unknown_key(line, section, key))?;
            let idx = digit
                .parse::<usize>()
                .ok()
                .filter(|&i| (1..=4).contains(&i))
                .ok_or_else(|| unknown_key(line, section, key))?;
            let entry = &mut cf.legs[idx - 1];
            match field {
                "x" => entry.x_mm = parse_float(line, key, val)?,
                "y" => entry.y_mm = parse_float(line, key, val)?,
                "heading" => entry.heading_deg = parse_float(line, key, val)?,
                "mirrored" => entry.mirrored = parse_bool(line, key, val)?,
                _ => return Err(unknown_key(line, section, key)),
            }
            Ok(())
        }
        Section::Gait => {
            let g = &mut cf.gait;
            let slot = match key {
                "period" => &mut g.period_s,
                "walk_amplitude" => &mut g.walk_amplitude_deg,
                "walk_duty" => &mut g.walk_duty,
                "trot_amplitude" => &mut g.trot_amplitude_deg,
                "trot_duty" => &mut g.trot_duty,
                "turn_outer" => &mut g.turn_outer_deg,
                "turn_inner" => &mut g.turn_inner_deg,
                _ => return Err(unknown_key(line, section, key)),
            };
            *slot = parse_float(line, key, val)?;
            Ok(())
        }
    }
}

/// Parse a configuration document. Missing keys keep their defaults.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let mut cf = ConfigFile::default();
    let mut section: Option<Section> = None;
    let mut seen: BTreeSet<(Section, String)> = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with(';') {
            continue;
        }
        if let Some(inner) = t.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("malformed section header '{t}'"),
            })?;
            section = Some(match name {
                "links" => Section::Links,
                "angles" => Section::Angles,
                "legs" => Section::Legs,
                "gait" => Section::Gait,
                _ => return Err(ConfigError::UnknownSection { line, name: name.to_string() }),
            });
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("expected 'key = value', got '{t}'"),
        })?;
        let key = k.trim();
        let val = v.trim();
        let sec = section.ok_or_else(|| ConfigError::Syntax {
            line,
            msg: format!("key '{key}' appears before any [section]"),
        })?;
        if !seen.insert((sec, key.to_string())) {
            return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
        }
        apply(&mut cf, sec, key, val, line)?;
    }
    Ok(cf)
}

fn push_kv(out: &mut String, key: &str, v: f64) {
    let _ = writeln!(out, "{key} = {v}");
}

/// Canonical serialization: fixed section and key order, shortest exact
/// float form. `parse_config(serialize_config(cf))` reproduces `cf`
/// exactly, and serializing again is byte-identical.
pub fn serialize_config(cf: &ConfigFile) -> String {
    let mut out = String::new();
    out.push_str("# Lengths in mm, angles in degrees, times in seconds.\n\n[links]\n");
    for (i, v) in cf.l_mm.iter().enumerate() {
        push_kv(&mut out, &format!("l{i}"), *v);
    }
    push_kv(&mut out, "lg1", cf.lg1_mm);
    push_kv(&mut out, "lg10", cf.lg10_mm);
    push_kv(&mut out, "lg12", cf.lg12_mm);
    push_kv(&mut out, "lg13", cf.lg13_mm);
    push_kv(&mut out, "toe", cf.toe_mm);
    push_kv(&mut out, "slider_min", cf.slider_min_mm);
    push_kv(&mut out, "slider_max", cf.slider_max_mm);
    out.push_str("\n[angles]\n");
    for (i, v) in cf.c_deg.iter().enumerate() {
        push_kv(&mut out, &format!("c{}", i + 1), *v);
    }
    push_kv(&mut out, "joint_range", cf.joint_range_deg);
    out.push_str("\n[legs]\n");
    for (i, leg) in cf.legs.iter().enumerate() {
        let n = i + 1;
        push_kv(&mut out, &format!("leg{n}_x"), leg.x_mm);
        push_kv(&mut out, &format!("leg{n}_y"), leg.y_mm);
        push_kv(&mut out, &format!("leg{n}_heading"), leg.heading_deg);
        let _ = writeln!(out, "leg{n}_mirrored = {}", leg.mirrored);
    }
    out.push_str("\n[gait]\n");
    push_kv(&mut out, "period", cf.gait.period_s);
    push_kv(&mut out, "walk_amplitude", cf.gait.walk_amplitude_deg);
    push_kv(&mut out, "walk_duty", cf.gait.walk_duty);
    push_kv(&mut out, "trot_amplitude", cf.gait.trot_amplitude_deg);
    push_kv(&mut out, "trot_duty", cf.gait.trot_duty);
    push_kv(&mut out, "turn_outer", cf.gait.turn_outer_deg);
    push_kv(&mut out, "turn_inner", cf.gait.turn_inner_deg);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn defaults_round_trip_bytewise() {
        let cf = ConfigFile::default();
        let text = serialize_config(&cf);
        let reparsed = parse_config(&text).unwrap();
        assert_eq!(cf, reparsed);
        assert_eq!(text, serialize_config(&reparsed));
    }

    #[test]
    fn empty_input_yields_defaults() {
        let cf = parse_config("").unwrap();
        assert_eq!(cf, ConfigFile::default());
        assert_eq!(cf.l_mm[10], 135.0);
        assert_eq!(cf.gait.walk_duty, 0.75);
    }

    #[test]
    fn overrides_apply_and_comments_are_ignored() {
        let text = "# comment\n[links]\nl0 = 25 \n; another\nlg1 = 40\n[angles]\nc2 = 85\n[gait]\nperiod = 1.5\n";
        let cf = parse_config(text).unwrap();
        assert_eq!(cf.l_mm[0], 25.0);
        assert_eq!(cf.lg1_mm, 40.0);
        assert_eq!(cf.c_deg, [90.0, 85.0, 90.0, 90.0]);
        assert_eq!(cf.gait.period_s, 1.5);
        // Untouched keys keep defaults.
        assert_eq!(cf.l_mm[1], 30.0);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(matches!(
            parse_config("[links]\nl99 = 3\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            parse_config("[links]\nbogus = 3\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            parse_config("[bogus]\n"),
            Err(ConfigError::UnknownSection { .. })
        ));
        assert!(matches!(
            parse_config("[links]\nl0 = 20\nl0 = 21\n"),
            Err(ConfigError::DuplicateKey { line: 3, .. })
        ));
        assert!(matches!(
            parse_config("l0 = 20\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("[links]\nl0 twenty\n"),
            Err(ConfigError::Syntax { .. })
        ));
        assert!(matches!(
            parse_config("[links]\nl0 = twenty\n"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            parse_config("[links]\nl0 = inf\n"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            parse_config("[legs]\nleg5_x = 0\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
    }

    #[test]
    fn conversion_produces_the_default_robot() {
        let cf = ConfigFile::default();
        let robot = cf.to_robot_config().unwrap();
        let want = RobotConfig::default();
        assert_eq!(robot.links.l, want.links.l);
        assert_relative_eq!(robot.links.c[0], FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(robot.joint_range, want.joint_range, epsilon = 1e-15);
        assert_eq!(robot.slider_range, want.slider_range);
        assert_relative_eq!(robot.leg_mounts[0].heading, FRAC_PI_2, epsilon = 1e-15);
        let g = cf.gait_defaults();
        assert_relative_eq!(g.walk_amplitude, 12f64.to_radians(), epsilon = 1e-15);
    }

    #[test]
    fn bad_geometry_is_rejected_on_conversion() {
        let cf = parse_config("[links]\nl1 = -5\n").unwrap();
        assert!(matches!(cf.to_robot_config(), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn arbitrary_floats_survive_the_round_trip() {
        let text = "[links]\nl0 = 20.125000000001\nl7 = 49.33333333333333\n[gait]\nwalk_duty = 0.7499999999999999\n";
        let cf = parse_config(text).unwrap();
        let re = parse_config(&serialize_config(&cf)).unwrap();
        assert_eq!(cf, re);
        assert_eq!(re.l_mm[0], 20.125000000001);
        assert_eq!(re.gait.walk_duty, 0.7499999999999999);
    }
}
