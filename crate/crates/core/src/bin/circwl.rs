use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use circwl::cyclotomy::{
    check_order3_identities, cyclotomic_constants_bruteforce, cyclotomic_numbers_bruteforce,
    order2_closed_form, primitive_root, prime_form_test, structure_constants_from_table,
};
use circwl::families::{family_graph, FamilyLabel, FamilySpec};
use circwl::group::{parse_residue_list, GroupSubset};
use circwl::par::{with_threads, Exec};
use circwl::survey::{
    analyze, match_family, run_survey, theorem_violations, verify_rank_four, verify_strict,
    Filters, SurveyConfig,
};
use circwl::tables::{regenerate_tables, render_tables};

#[derive(Parser)]
#[command(name = "circwl", version, about = "WL closures and Deza structure of circulant graphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one circulant as JSON.
    Analyze {
        #[arg(long)]
        n: usize,
        /// Connection set, e.g. 1,2,6,7 (may be empty).
        #[arg(long, default_value = "")]
        set: String,
    },
    /// Connection set of a family instance.
    Family {
        label: FamilyLabel,
        #[command(flatten)]
        params: FamilyArgs,
    },
    /// Exhaustive survey of symmetric circulant Deza graphs.
    Search {
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        rank: Option<usize>,
        /// Write records here instead of stdout.
        #[arg(long)]
        jsonl: Option<String>,
        /// Skip the multiplier reduction (slower, same classes).
        #[arg(long)]
        no_reduce: bool,
        /// Allow orders above the default guard.
        #[arg(long)]
        force: bool,
    },
    /// Regenerate the family tables.
    Tables,
    /// Cyclotomic numbers of order m modulo p.
    Cyclotomic {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        m: usize,
        /// Primitive root (default: the smallest).
        #[arg(long)]
        l: Option<usize>,
    },
    /// Rank-4 Deza circulants against the rank-4 families.
    #[command(name = "verify-thm1")]
    VerifyRankFour {
        #[arg(long, default_value_t = 30)]
        max_n: usize,
    },
    /// WL-rank and dimension bounds of strictly Deza circulants.
    #[command(name = "verify-thm3")]
    VerifyStrict {
        #[arg(long, default_value_t = 40)]
        max_n: usize,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

type Outcome = Result<bool, Box<dyn std::error::Error + Send + Sync>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match with_threads(threads, || run(cli.command, exec)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means a theorem-level violation was found.
fn run(command: Command, exec: Exec) -> Outcome {
    match command {
        Command::Analyze { n, set } => {
            let s = GroupSubset::new(n, parse_residue_list(&set)?)?;
            let family = match_family(n, &s).ok().flatten();
            let a = analyze(n, &s, family)?;
            let violations = theorem_violations(&a);
            let mut json = a.to_json();
            json["violations"] = violations
                .iter()
                .map(|(kind, detail)| format!("{kind}: {detail}"))
                .collect();
            println!("{}", serde_json::to_string_pretty(&json)?);
            Ok(violations.is_empty())
        }
        Command::Family { label, params } => {
            let spec = FamilySpec::from_parts(label, params.m, params.l, params.p, params.q, params.k)?;
            let (_, s) = family_graph(&spec)?;
            println!("{s}");
            Ok(true)
        }
        Command::Search {
            min,
            max,
            strict,
            rank,
            jsonl,
            no_reduce,
            force,
        } => {
            let mut cfg = SurveyConfig::new(min, max);
            cfg.exec = exec;
            cfg.filters = Filters { strict, rank };
            cfg.multiplier_reduction = !no_reduce;
            cfg.force = force;
            let out = run_survey(&cfg)?;
            let mut sink: Box<dyn Write> = match &jsonl {
                Some(path) => Box::new(BufWriter::new(File::create(path)?)),
                None => Box::new(BufWriter::new(io::stdout().lock())),
            };
            sink.write_all(out.to_jsonl().as_bytes())?;
            sink.flush()?;
            for s in &out.stats {
                eprintln!(
                    "n={}: {} sets, {} Deza, {} representatives, {} classes",
                    s.n, s.raw, s.deza, s.representatives, s.classes
                );
            }
            eprintln!("{} records", out.records.len());
            for v in &out.violations {
                eprintln!("violation {v}");
            }
            Ok(out.is_clean())
        }
        Command::Tables => {
            print!("{}", render_tables(&regenerate_tables(exec)?));
            Ok(true)
        }
        Command::Cyclotomic { p, m, l } => {
            let l = match l {
                Some(l) => l,
                None => primitive_root(p).ok_or_else(|| format!("{p} is not prime"))?,
            };
            let table = cyclotomic_numbers_bruteforce(p, m, l)?;
            print!("{table}");
            if let Ok(c) = structure_constants_from_table(&table) {
                if m == 2 && p % 4 == 1 {
                    let closed = order2_closed_form(p)?;
                    let agrees = (1..=2).all(|i| (1..=2).all(|j| c.get(i, j, 1) == closed[i - 1][j - 1]));
                    println!("order-2 closed form: {}", if agrees { "agrees" } else { "DISAGREES" });
                    return Ok(agrees);
                }
            }
            if m == 3 {
                let d = check_order3_identities(&cyclotomic_constants_bruteforce(p, 3, l)?)?;
                println!("4p = x^2 + 27y^2 with x = {}, |y| = {}", d.x, d.y_abs());
                for i in 1..=2 {
                    println!("p - 3*{i}^2 square: {}", prime_form_test(p, i)?);
                }
            }
            Ok(true)
        }
        Command::VerifyRankFour { max_n } => {
            let report = verify_rank_four(max_n, exec)?;
            print!("{report}");
            Ok(report.holds())
        }
        Command::VerifyStrict { max_n } => {
            let report = verify_strict(max_n, exec)?;
            print!("{report}");
            Ok(report.holds())
        }
    }
}
