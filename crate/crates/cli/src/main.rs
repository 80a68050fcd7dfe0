mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Format, Report};

/// Exact line-bundle cohomology and intersection theory on toric varieties.
#[derive(Debug, Parser)]
#[command(name = "toricoh", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct FanArgs {
    /// `pn:<n>`, `delpezzo:<n>`, or a path to a fan JSON file.
    #[arg(long)]
    pub fan: String,

    /// Load fans that fail validation; cohomology commands are then refused.
    #[arg(long)]
    pub allow_unverified: bool,
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    /// Coefficients of Σ r_i E_i in ray order, e.g. `-2,0`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "named")]
    pub divisor: Option<String>,

    /// Nonzero coefficients by 1-based divisor name, e.g. `E1=2,E4=-1`.
    #[arg(long, allow_hyphen_values = true)]
    pub named: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CoefficientArg {
    Rationals,
    Integers,
    Mod2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rays, cones and Picard rank of a fan.
    Info {
        #[command(flatten)]
        fan: FanArgs,
    },
    /// Smoothness and completeness verdicts; exits 2 when the fan fails.
    Validate {
        #[command(flatten)]
        fan: FanArgs,
    },
    /// Antipodal ray pairs against the dimension of their span.
    Symmetry {
        #[command(flatten)]
        fan: FanArgs,
    },
    /// h^p of a line bundle with the per-pattern audit.
    Cohomology {
        #[command(flatten)]
        fan: FanArgs,
        #[command(flatten)]
        divisor: DivisorArgs,
    },
    /// Dimension h^1(l1 − l2) of the extension space of O(l2) by O(l1).
    Ext {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, allow_hyphen_values = true)]
        l1: String,
        #[arg(long, allow_hyphen_values = true)]
        l2: String,
    },
    /// Classes with nonzero h^1 among divisors with entries in [−B, B].
    SearchH1 {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long = "box", default_value_t = 1)]
        bound: u32,
    },
    /// Reduced homology of the support complex of a sign pattern.
    PatternHomology {
        #[command(flatten)]
        fan: FanArgs,
        /// 1-based rays with negative coefficient; empty for the all-nonneg pattern.
        #[arg(long, default_value = "")]
        pattern_neg: String,
        #[arg(long, value_enum, default_value_t = CoefficientArg::Integers)]
        coefficients: CoefficientArg,
    },
    /// The pseudocycle criterion on a support complex.
    CycleCheck {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, default_value = "")]
        pattern_neg: String,
        #[arg(long)]
        dim: usize,
    },
    /// Product of two divisors in the Chow ring of V^n.
    ChowMult {
        #[command(flatten)]
        fan: FanArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Classes x2 whose extension data match the Chern classes of (d1, −d1).
    ChowSplit {
        #[command(flatten)]
        fan: FanArgs,
        /// Divisor vector; defaults to the sum of all E_j except E_1 and E_{n+2}.
        #[arg(long, allow_hyphen_values = true)]
        d1: Option<String>,
        #[arg(long = "box", default_value_t = 2)]
        bound: u32,
    },
    /// Cohomology of Σ_{j ≠ i, n+1+i} c_j E_j on V^n, checked three ways.
    Prop43 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        /// One coefficient used for every position.
        #[arg(long, conflicts_with = "coeffs")]
        coeff: Option<i64>,
        /// One coefficient per remaining position, in ray order.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
    },
    /// χ(O(d)) on a surface from the Chow ring, against the engine.
    RrChi {
        #[command(flatten)]
        fan: FanArgs,
        #[command(flatten)]
        divisor: DivisorArgs,
    },
}

pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let name = commands::name(&cli.command);
    let mut report = Report::new(name, argv);
    let code = match commands::run(&cli.command, &mut report) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("toricoh: {}", e.message());
            if matches!(e, CliError::Usage(_)) {
                return ExitCode::from(e.code());
            }
            report.fail(e.message());
            e.code()
        }
    };
    report.exit_code = code;
    print!("{}", report.render(cli.format));
    ExitCode::from(code)
}
