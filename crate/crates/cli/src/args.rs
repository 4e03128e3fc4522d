use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "grover-decomp", version, about = "Exact phase-matched Grover search: parameters, simulation and verification")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,

    /// Absolute tolerance for consistency and verification checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the iteration count and phases of a target fraction.
    Params(ParamsArgs),
    /// Run a search and report the final amplitudes.
    Simulate(SimulateArgs),
    /// Run the seeded verification suites.
    Verify(VerifyArgs),
    /// Reproduce the eight-state reference matrices.
    Golden,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    /// Target fraction M/N, as a decimal or a fraction such as 1/8.
    #[arg(long, value_parser = parse_fraction, allow_hyphen_values = true)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Iterative,
    DecomposedI,
    DecomposedIi,
    Shortcut,
    Parallel,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Iterative => "iterative",
            Mode::DecomposedI => "decomposed-i",
            Mode::DecomposedIi => "decomposed-ii",
            Mode::Shortcut => "shortcut",
            Mode::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Number of qubits; the register has N = 2^n states.
    #[arg(long)]
    pub n: u32,

    /// Comma-separated target indices.
    #[arg(long, value_delimiter = ',', conflicts_with = "target_count")]
    pub targets: Option<Vec<usize>>,

    /// Mark the first M states instead of listing them. Default: target 0 only.
    #[arg(long)]
    pub target_count: Option<usize>,

    #[arg(long, value_enum, default_value_t = Mode::Iterative)]
    pub mode: Mode,

    /// Iteration count; without --alpha the matching phase for this k is used.
    #[arg(long)]
    pub k: Option<u32>,

    /// Oracle/diffusion phase in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,

    /// Rotation phase in radians; derived from lambda and alpha when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Print every amplitude.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identity,
    Spectral,
    Unitarity,
    Exactness,
    Shortcut,
    Parallel,
    Golden,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    ThetaOffset,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Suites to run (repeatable). Default: all.
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,

    /// Random cases in the identity suite; the other suites scale from it.
    #[arg(long, default_value_t = 200)]
    pub cases: usize,

    /// Corrupt the computation on purpose to check that the suites notice.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultArg>,
}

/// Parse `0.125`, `1/8` or `1`.
pub fn parse_fraction(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            num / den
        }
        None => s.trim().parse().map_err(|e| format!("not a number: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s} is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/8").unwrap(), 0.125);
        assert_eq!(parse_fraction("0.25").unwrap(), 0.25);
        assert_eq!(parse_fraction(" 1 ").unwrap(), 1.0);
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("x").is_err());
    }

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_target_list() {
        let cli = Cli::try_parse_from(["grover-decomp", "simulate", "--n", "3", "--targets", "0,5", "--mode", "decomposed-ii"]).unwrap();
        match cli.command {
            Command::Simulate(a) => {
                assert_eq!(a.targets, Some(vec![0, 5]));
                assert_eq!(a.mode, Mode::DecomposedIi);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["grover-decomp", "simulate", "--n", "3", "--targets", "0", "--target-count", "2"]).is_err());
    }
}
