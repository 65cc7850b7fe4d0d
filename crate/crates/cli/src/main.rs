use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Output};

/// Link groups, Dehn surgery and the icosahedral group.
///
/// Input files that do not exist on disk are looked up by file name among
/// the bundled data (unknot.pd, unlink3.pd, hopf.pd, borromean.pd,
/// puzzle.pres, poincare.pres, ...).
#[derive(Parser, Debug)]
#[command(name = "borromean", version)]
pub struct RunConfig {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Wirtinger presentation of a PD diagram.
    Wirtinger {
        pd: String,
        /// Eliminate generators defined by a single relator.
        #[arg(long)]
        simplify: bool,
    },
    /// First homology of a diagram complement or a presentation.
    H1 { input: String },
    /// Group of the manifold obtained by integral surgery on a diagram.
    ///
    /// Framing `f` adds the relator `meridian^f * longitude` for each
    /// component. Framing -1 on the Borromean rings gives the Poincaré
    /// homology sphere.
    Surgery {
        pd: String,
        /// Comma-separated framings, one per component.
        #[arg(
            short,
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        framings: Vec<i64>,
        /// Keep every Wirtinger generator instead of simplifying.
        #[arg(long)]
        raw: bool,
    },
    /// Order by coset enumeration, plus a surjection onto A5 when one exists.
    Decide {
        input: String,
        #[arg(long, default_value_t = borromean::DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
        strategy: StrategyArg,
    },
    /// Compare the surgered groups of two diagrams. Prints DIFFERENT or
    /// INCONCLUSIVE, never SAME.
    Distinguish {
        pd_a: String,
        pd_b: String,
        #[arg(
            short,
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        framings: Vec<i64>,
        #[arg(long, default_value_t = borromean::DEFAULT_MAX_COSETS)]
        max_cosets: usize,
    },
    /// Icosahedron, its rotations and the five octahedra.
    Icosa {
        #[command(subcommand)]
        what: IcosaCommand,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum IcosaCommand {
    /// Vertex, edge and face counts.
    Counts,
    /// The 60 rotations, one per line: index, axis type, order and twice
    /// the rotation matrix (entries in Z[φ]).
    Rotations,
    /// The five octahedra on the edge midpoints.
    Octahedra,
    /// Check that the action on octahedra is an isomorphism onto A5.
    Certify,
    /// Geometry export.
    Export {
        #[arg(long, value_enum, default_value_t = ExportFormat::Off)]
        format: ExportFormat,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Off,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyArg {
    Hlt,
    Felsch,
}

/// Reads a file, falling back to the bundled copy with the same name.
pub fn read_input(path: &str) -> Result<String, CliError> {
    match std::fs::read_to_string(path) {
        Ok(s) => Ok(s),
        Err(e) => {
            let name = Path::new(path)
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or(path);
            borromean::corpus::file(name)
                .map(str::to_string)
                .ok_or_else(|| CliError::Input(format!("{path}: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match commands::run(&config) {
        Ok(Output { text, json, code }) => {
            let out = if config.json {
                serde_json::to_string_pretty(&json).expect("serializable") + "\n"
            } else {
                text
            };
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = std::io::stdout().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            if config.json {
                let v = serde_json::json!({ "error": e.to_string(), "exit_code": e.code() });
                println!("{v}");
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
