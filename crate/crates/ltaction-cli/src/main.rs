use clap::{Args, Parser, Subcommand, ValueEnum};

use ltaction_cli::run::{ActConfig, Format, MethodOpt, TargetOpt, TreesConfig};
use ltaction_cli::verify::{run_suite, Suite};
use ltaction_cli::{exit_code, tree_ceiling};

/// Exact computation of the height-2 Morava stabilizer group action on
/// Lubin-Tate deformation rings.
///
/// Elements are entered as integer polynomials in the Teichmüller generator
/// z of W(F_{q^2}), e.g. "1+2*z" or "z^2". The generator is the root of the
/// Hensel-lifted Conway polynomial, so output is bit-reproducible; choosing
/// a different generator would relabel results by a Galois conjugate.
#[derive(Parser)]
#[command(name = "ltaction", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute (α0 + α1·S).u1 or (α0 + α1·S).u as a coefficient table.
    Act(ActArgs),
    /// Enumerate labelled or alternating trees of a given weight.
    Trees(TreesArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ActArgs {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// Residue degree f (q = p^f).
    #[arg(long, default_value_t = 1)]
    f: u32,
    /// Output precision exponent: coefficients mod p^M.
    #[arg(long, default_value_t = 32)]
    m: u32,
    /// Truncation order: series mod u1^W.
    #[arg(long, default_value_t = 24)]
    w: usize,
    /// α0 expression (with --alpha1).
    #[arg(long, conflicts_with = "alpha")]
    alpha0: Option<String>,
    /// α1 expression.
    #[arg(long, default_value = "0", conflicts_with = "alpha")]
    alpha1: String,
    /// Witt-subgroup element α (acts as α + 0·S).
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum, default_value_t = TargetArg::U1)]
    target: TargetArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Args)]
struct TreesArgs {
    /// Prime power q.
    #[arg(long)]
    q: u64,
    /// Tree weight to enumerate.
    #[arg(long)]
    weight: u64,
    /// Restrict to alternating labellings.
    #[arg(long, default_value_t = false)]
    alternating: bool,
    /// Output precision exponent for indices.
    #[arg(long, default_value_t = 24)]
    m: u32,
    /// Evaluate (α0, α1)-indices.
    #[arg(long, conflicts_with = "alpha")]
    alpha0: Option<String>,
    #[arg(long, conflicts_with = "alpha")]
    alpha1: Option<String>,
    /// Evaluate α-indices of a Witt-subgroup element.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: paper-p2, paper-p3, cross-oracle, witt-low-degree,
    /// trees-census, axioms.
    #[arg(long)]
    suite: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    U1,
    U,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Recursive,
    Trees,
    Functional,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

impl From<FormatArg> for Format {
    fn from(v: FormatArg) -> Format {
        match v {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Act(args) => {
            let cfg = ActConfig {
                p: args.p,
                f: args.f,
                m_exp: args.m,
                wmax: args.w,
                alpha0: args.alpha0,
                alpha1: args.alpha1,
                alpha: args.alpha,
                target: match args.target {
                    TargetArg::U1 => TargetOpt::U1,
                    TargetArg::U => TargetOpt::U,
                },
                method: match args.method {
                    MethodArg::Auto => MethodOpt::Auto,
                    MethodArg::Recursive => MethodOpt::Recursive,
                    MethodArg::Trees => MethodOpt::Trees,
                    MethodArg::Functional => MethodOpt::Functional,
                },
                format: args.format.into(),
            };
            match ltaction_cli::run::run_act(&cfg) {
                Ok(out) => {
                    print!("{out}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
        Command::Trees(args) => {
            let cfg = TreesConfig {
                q: args.q,
                weight: args.weight,
                alternating: args.alternating,
                m_exp: args.m,
                alpha0: args.alpha0,
                alpha1: args.alpha1,
                alpha: args.alpha,
                format: args.format.into(),
                ceiling: tree_ceiling(),
            };
            match ltaction_cli::run::run_trees(&cfg) {
                Ok(out) => {
                    print!("{out}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
        Command::Verify(args) => match Suite::parse(&args.suite) {
            Some(suite) => {
                let report = run_suite(suite);
                match args.format {
                    FormatArg::Table => print!("{}", report.render_table()),
                    FormatArg::Json => println!("{}", report.render_json()),
                }
                if report.passed() {
                    0
                } else {
                    1
                }
            }
            None => {
                eprintln!(
                    "error: unknown suite '{}'; expected one of paper-p2, paper-p3, \
                     cross-oracle, witt-low-degree, trees-census, axioms",
                    args.suite
                );
                2
            }
        },
    };
    std::process::exit(code);
}
