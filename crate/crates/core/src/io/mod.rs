//! Plain-text boundaries of the library: config files (mm / degrees /
//! seconds at rest, converted to radians and native structs on load),
//! CSV/column-table emission with fixed 9-significant-digit formatting,
//! and self-contained deterministic SVG plots.

pub mod config;
pub mod csv;
pub mod svg;

pub use config::{parse_config, serialize_config, ConfigError, ConfigFile};
pub use csv::{fmt_sig, Table};
