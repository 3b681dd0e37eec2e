//! JSON documents, deterministic reports and the `cartanwb` command line.
//!
//! Exit codes: 0 every check passed, 1 a mathematical check is false,
//! 2 malformed input, 3 undetermined at the requested truncation.

mod document;
mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

pub use document::{
    ComplexDoc, ConeDoc, EntryDoc, GeneratorDoc, ProductDoc, QuantumDoc, SetupDoc, WorkbenchDocument, Z2Doc, SCHEMA_VERSION,
};
pub use run::{execute, DEFAULT_ORDER, ORDER_ENV};

/// The JSON Schema of [`WorkbenchDocument`], as shipped in `schema/`.
pub const SCHEMA: &str = include_str!("../../schema/workbench.schema.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Malformed,
    Undetermined,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Malformed => 2,
            Status::Undetermined => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Malformed => "malformed",
            Status::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub body: Value,
}

impl Outcome {
    /// Pretty-printed report with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.body).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Parser, Debug)]
#[command(name = "cartanwb", version, about = "Chain-level Cartan homotopy and connection checks")]
pub struct Cli {
    /// Print the input document schema and exit.
    #[arg(long)]
    pub schema: bool,
    /// Truncation order in u; defaults to the document's, then $CARTANWB_ORDER, then 4.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate every block of a document.
    Validate { doc: PathBuf },
    /// Cohomology of the complex over the Novikov field.
    Cohomology { doc: PathBuf },
    /// u-module structure of equivariant cohomology and the long exact sequence check.
    UDecompose { doc: PathBuf },
    #[command(subcommand)]
    Cartan(CartanCommand),
    #[command(subcommand)]
    Quantum(QuantumCommand),
    #[command(subcommand)]
    Finite2(FiniteCommand),
    #[command(subcommand)]
    Morse(MorseCommand),
    /// Mapping cone of the chain map in the `cone` block.
    Cone { doc: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum CartanCommand {
    /// Check the Cartan relations and the connection self-tests.
    Verify { doc: PathBuf },
    /// Solve for iota_eq order by order.
    SolveIota { doc: PathBuf },
    /// The induced connection on equivariant cohomology.
    Connection {
        doc: PathBuf,
        #[arg(long, value_enum)]
        which: WhichArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum WhichArg {
    Q,
    U,
}

#[derive(Subcommand, Debug)]
pub enum QuantumCommand {
    /// Ring axioms and, with |q| = 2, the uq identity.
    Check {
        doc: PathBuf,
        /// Lattice indices a of the test vectors q^a u^j e_i.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,0,1,2")]
        exponents: Vec<i64>,
    },
    /// Whether a (u - lambda)-torsion summand of length d is excluded.
    Obstruction {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        d: u64,
        /// `Z` or `F<p>`.
        #[arg(long, default_value = "Z")]
        ring: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum FiniteCommand {
    /// Check the relations of the Z/2 operator system.
    Verify { doc: PathBuf },
    /// Assemble d_eq and Gamma_q and certify both identities mod h^3.
    Assemble { doc: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum MorseCommand {
    /// Degree of r -> alpha_1(v_r).
    Alpha1 {
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Additivity of alpha under breaking at c_1.
    Additivity {
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4")]
        delta: Vec<f64>,
    },
    /// Integer weight computations behind the boundary maps.
    Weights,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Cohomology { .. } => "cohomology",
            Command::UDecompose { .. } => "u-decompose",
            Command::Cartan(CartanCommand::Verify { .. }) => "cartan verify",
            Command::Cartan(CartanCommand::SolveIota { .. }) => "cartan solve-iota",
            Command::Cartan(CartanCommand::Connection { .. }) => "cartan connection",
            Command::Quantum(QuantumCommand::Check { .. }) => "quantum check",
            Command::Quantum(QuantumCommand::Obstruction { .. }) => "quantum obstruction",
            Command::Finite2(FiniteCommand::Verify { .. }) => "finite2 verify",
            Command::Finite2(FiniteCommand::Assemble { .. }) => "finite2 assemble",
            Command::Morse(MorseCommand::Alpha1 { .. }) => "morse alpha1",
            Command::Morse(MorseCommand::Additivity { .. }) => "morse additivity",
            Command::Morse(MorseCommand::Weights) => "morse weights",
            Command::Cone { .. } => "cone",
        }
    }
}

/// Parses arguments and runs; returns the exit code and standard output.
pub fn run_cli<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    if cli.schema {
        return (0, SCHEMA.to_string());
    }
    match &cli.command {
        Some(cmd) => {
            let out = execute(cmd, cli.order);
            (out.status.code(), out.render())
        }
        None => (2, "no command given; see --help\n".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_doc(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("cartanwb-unit-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn schema_is_json() {
        let v: Value = serde_json::from_str(SCHEMA).unwrap();
        assert_eq!(v["properties"]["schema_version"]["const"], 1);
    }

    #[test]
    fn unknown_field_is_malformed() {
        let p = temp_doc("unknown.json", r#"{"schema_version":1,"setup":{"ring":"Q"},"extra":0}"#);
        let (code, out) = run_cli(["cartanwb", "validate", p.to_str().unwrap()]);
        assert_eq!(code, 2);
        assert!(out.contains("extra"));
    }

    #[test]
    fn unknown_generator_is_malformed() {
        let p = temp_doc(
            "gen.json",
            r#"{"schema_version":1,"setup":{"ring":"Q"},
               "complex":{"grading":"int_graded","generators":[{"name":"x","index":0}],
                          "differential":[{"row":"y","col":"x","value":"1"}]}}"#,
        );
        assert_eq!(run_cli(["cartanwb", "validate", p.to_str().unwrap()]).0, 2);
    }

    #[test]
    fn obstruction_exit_codes() {
        let (code, out) = run_cli(["cartanwb", "quantum", "obstruction", "--lambda", "1", "--d", "1", "--ring", "Z"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"forbidden\""), "{out}");
        assert_eq!(run_cli(["cartanwb", "quantum", "obstruction", "--lambda", "1", "--d", "1", "--ring", "F2"]).0, 3);
        assert_eq!(run_cli(["cartanwb", "quantum", "obstruction", "--lambda", "x", "--d", "1"]).0, 2);
    }

    #[test]
    fn squared_differential_nonzero_fails() {
        let p = temp_doc(
            "sq.json",
            r#"{"schema_version":1,"setup":{"ring":"Q"},
               "complex":{"grading":"int_graded","generators":[{"name":"a","index":0},{"name":"b","index":1},{"name":"c","index":2}],
                          "differential":[{"row":"b","col":"a","value":"1"},{"row":"c","col":"b","value":"1"}]}}"#,
        );
        assert_eq!(run_cli(["cartanwb", "cohomology", p.to_str().unwrap()]).0, 1);
    }
}
