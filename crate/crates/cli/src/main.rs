use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use partition_topology::combinatorics::{beta, Permutation, PointedComposition, PointedIntegerPartition};
use partition_topology::complex::{build_delta_c, build_lambda, reduced_homology, HomologyProfile};
use partition_topology::poset::{build_filter_pi_lambda_m, build_subposet_pi_c};
use partition_topology::verify::{run_suite, Suite, VerificationReport, VerifyOptions};
use partition_topology::{Caps, Error};

#[derive(Parser)]
#[command(name = "partition-topology", version, about = "Pointed partition posets, their complexes and top homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of permutations with a given descent composition.
    Beta {
        /// Comma-separated parts, e.g. 1,2,1; the last part may be 0.
        #[arg(long)]
        composition: String,
        /// Also print the permutations.
        #[arg(long)]
        list: bool,
    },
    /// Run verification suites over every instance up to --max-n.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Seed for sampled claims.
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Reduced integer homology of one complex.
    Homology {
        #[arg(long, value_enum)]
        complex: ComplexArg,
        /// For delta, or for the order complex of Π•_c.
        #[arg(long)]
        composition: Option<String>,
        /// Parts of λ for lambda, or for the order complex of Π•_{λ,m̲}.
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<usize>>,
        /// The pointed part.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Mobius,
    Homology,
    Morse,
    Cycles,
    Specht,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Mobius => Suite::Mobius,
            SuiteArg::Homology => Suite::Homology,
            SuiteArg::Morse => Suite::Morse,
            SuiteArg::Cycles => Suite::Cycles,
            SuiteArg::Specht => Suite::Specht,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComplexArg {
    Delta,
    Lambda,
    OrderComplex,
}

/// Errors in the input, reported with exit code 2.
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Usage> {
    let caps = Caps::from_env()?;
    match cli.command {
        Command::Beta { composition, list } => {
            let c: PointedComposition = composition.parse()?;
            println!("{}", beta(&c, &caps)?);
            if list {
                for a in Permutation::with_descent_composition(&c) {
                    println!("{a}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, max_n, format, rng_seed, jobs } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(|e| Usage(e.to_string()))?;
            }
            let opts = VerifyOptions { max_n, seed: rng_seed, caps };
            let report = run_suite(suite.into(), &opts)?;
            print!("{}", render_report(&report, format).map_err(Usage)?);
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Homology { complex, composition, lambda, m, format } => {
            let composition = composition.map(|s| s.parse::<PointedComposition>()).transpose()?;
            let pointed = match (lambda, m) {
                (l, Some(m)) => Some(PointedIntegerPartition::new(l.unwrap_or_default(), m)),
                (Some(_), None) => return Err(Usage("--lambda needs --m".into())),
                (None, None) => None,
            };
            let h = match (complex, composition, pointed) {
                (ComplexArg::Delta, Some(c), None) => reduced_homology(&build_delta_c(&c, &caps)?),
                (ComplexArg::Lambda, None, Some(p)) => reduced_homology(&build_lambda(&p, &caps)?),
                (ComplexArg::OrderComplex, Some(c), None) => open_order_complex(build_subposet_pi_c(&c, &caps)?.poset),
                (ComplexArg::OrderComplex, None, Some(p)) => {
                    open_order_complex(build_filter_pi_lambda_m(&p, &caps, false)?.poset)
                }
                (ComplexArg::Delta, ..) => return Err(Usage("delta needs --composition only".into())),
                (ComplexArg::Lambda, ..) => return Err(Usage("lambda needs --lambda and --m only".into())),
                (ComplexArg::OrderComplex, ..) => {
                    return Err(Usage("order-complex needs either --composition or --lambda/--m".into()))
                }
            };
            print!("{}", render_homology(&h, format));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn open_order_complex(p: partition_topology::poset::FinitePoset) -> HomologyProfile {
    let top = p.maximum().expect("Π• has a top element");
    reduced_homology(&p.without(top).order_complex())
}

fn render_homology(h: &HomologyProfile, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(h).expect("serializable")),
        Format::Csv => {
            let mut out = String::from("dimension,rank,torsion\n");
            out.push_str(&format!("-1,{},\n", h.betti_minus_one));
            for (d, b) in h.betti.iter().enumerate() {
                let t: Vec<String> = h.torsion[d].iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("{d},{b},{}\n", t.join(" ")));
            }
            out
        }
        Format::Table => {
            let betti: Vec<String> = h.betti.iter().map(|b| b.to_string()).collect();
            let mut out = format!("betti [{}]\n", betti.join(","));
            if h.betti_minus_one > 0 {
                out.push_str(&format!("betti_-1 {}\n", h.betti_minus_one));
            }
            for (d, t) in h.torsion.iter().enumerate().filter(|(_, t)| !t.is_empty()) {
                let t: Vec<String> = t.iter().map(|x| format!("Z/{x}")).collect();
                out.push_str(&format!("torsion {d}: {}\n", t.join(" + ")));
            }
            out
        }
    }
}

fn render_report(report: &VerificationReport, format: Format) -> Result<String, String> {
    match format {
        Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(report).map_err(|e| e.to_string())?)),
        Format::Table => Ok(report.to_table()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["claim_id", "anchor", "status", "wall_time", "witness"]).map_err(|e| e.to_string())?;
            for c in &report.claims {
                w.write_record([
                    c.claim_id.as_str(),
                    c.anchor.as_str(),
                    &c.status.to_string(),
                    &format!("{:.6}", c.wall_time),
                    &c.witness.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
    }
}
