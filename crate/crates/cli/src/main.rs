use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hypersack::automata::{acyclic_membership, parikh_image, ParikhNFA, WordNFA};
use hypersack::groups::{ConstantsConfig, Group};
use hypersack::knapsack::{ExponentExpression, KnapsackExpression, Route, Solver};
use hypersack::oracle::{brute_solve_with_cap, DEFAULT_CAP};
use hypersack_cli::bench;
use hypersack_cli::corpus::{self, DEFAULT_SEED};
use hypersack_cli::report::{Answer, RunReport};

/// Knapsack and exponent equations over hyperbolic groups, free products
/// and direct products with Z.
///
/// Exit status: 0 = yes / solutions exist, 1 = no, 2 = error.
#[derive(Parser)]
#[command(name = "hypersack", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    /// Emptiness of the computed semilinear solution set.
    A,
    /// Identity membership in the bounded grid automaton.
    B,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Is there a solution? Prints a verified witness if so.
    Decide {
        group: String,
        expr: String,
        #[arg(long, value_enum, default_value = "auto")]
        route: RouteArg,
        /// Exponent bound for the grid route.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Computes the full solution set as a semilinear set.
    Solve {
        group: String,
        expr: String,
        /// File for the solution set (default: printed to stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also list the solutions in [0, B]^k.
        #[arg(long = "box")]
        box_bound: Option<u64>,
    },
    /// Solves a system of exponent equations; variables may repeat.
    System {
        group: String,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Lists all solutions in [0, B]^k by brute force.
    Oracle {
        group: String,
        expr: String,
        #[arg(long = "box")]
        box_bound: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Does an acyclic automaton (JSON) accept a word equal to 1?
    NfaMember { group: String, nfa: PathBuf },
    /// Semilinear Parikh image of a counting automaton (JSON).
    Parikh {
        nfa: PathBuf,
        /// Comma-separated variable names, one per label coordinate.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        #[arg(long = "box")]
        box_bound: Option<u64>,
    },
    /// Prints the hyperbolicity constants in use for a group.
    Constants { group: String },
    /// Runs a corpus against brute force and the grid route.
    Bench {
        /// Directory of corpus files.
        #[arg(default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long = "box", default_value_t = 8)]
        box_bound: u64,
        /// Adds this many seeded random instances per generator group.
        #[arg(long, default_value_t = 0)]
        generate: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Size of the timed membership automaton (0 to skip).
        #[arg(long, default_value_t = 1000)]
        membership_states: usize,
        /// Searches for the cheapest constants that pass the corpus.
        #[arg(long)]
        calibrate: bool,
    },
}

fn load_group(text: &str) -> Result<Group> {
    let config = ConstantsConfig::from_env().context("loading constants")?;
    Group::parse(text, Path::new("."), config).with_context(|| format!("group `{text}`"))
}

fn parse_input(group: &str, expr: &str) -> Result<(Group, KnapsackExpression)> {
    let g = load_group(group)?;
    let e = KnapsackExpression::parse(&g, expr).with_context(|| format!("expression `{expr}`"))?;
    Ok((g, e))
}

fn emit(cli_json: bool, report: &RunReport) {
    if cli_json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
}

fn status(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json = cli.json;
    match cli.command {
        Command::Decide { group, expr, route, bound } => {
            let mut report = RunReport::new("decide", &group, &expr);
            let (g, e) = report.time("parse", || parse_input(&group, &expr))?;
            let solver = Solver::new(g);
            let route = match route {
                RouteArg::A => Route::Semilinear,
                RouteArg::B => Route::Grid,
                RouteArg::Auto => Route::Auto,
            };
            let d = report.time("decide", || solver.decide(&e, route, bound))?;
            report.answer = Some(Answer::Decided(d.answer));
            report.witness = d.witness;
            report.magnitude = d.magnitude;
            report.route = Some(format!("{:?}", d.route).to_lowercase());
            report.bound = d.bound;
            report.absorb_stats(solver.stats());
            emit(json, &report);
            Ok(status(d.answer))
        }
        Command::Solve { group, expr, out, box_bound } => {
            let mut report = RunReport::new("solve", &group, &expr);
            let (g, e) = report.time("parse", || parse_input(&group, &expr))?;
            let solver = Solver::new(g);
            let set = report.time("solve", || solver.solve(&e))?;
            report.magnitude = Some(set.magnitude());
            report.components = Some(set.num_components());
            report.witness = set.smallest_offset();
            report.absorb_stats(solver.stats());
            match &out {
                Some(path) => {
                    fs::write(path, set.to_text()).with_context(|| format!("writing {}", path.display()))?;
                    report.answer = Some(Answer::File(path.display().to_string()));
                }
                None => {
                    report.answer = Some(Answer::Decided(!set.is_empty()));
                    if !json {
                        print!("{}", set.to_text());
                    }
                }
            }
            emit(json, &report);
            if let Some(b) = box_bound {
                let points = set.enumerate_box(b);
                if !json {
                    println!("{} solutions in [0, {b}]^{}:", points.len(), e.depth());
                }
                for p in &points {
                    println!("{p}");
                }
            }
            Ok(status(!set.is_empty()))
        }
        Command::System { group, exprs } => {
            let mut report = RunReport::new("system", &group, &exprs.join(" ; "));
            let g = report.time("parse", || load_group(&group))?;
            let parsed = exprs
                .iter()
                .map(|t| ExponentExpression::parse(&g, t))
                .collect::<Result<Vec<_>, _>>()?;
            let solver = Solver::new(g);
            let sol = report.time("solve", || solver.solve_system(&parsed))?;
            report.answer = Some(Answer::Decided(sol.witness.is_some()));
            report.magnitude = Some(sol.set.magnitude());
            report.components = Some(sol.set.num_components());
            report.witness = sol.witness.clone();
            report.absorb_stats(solver.stats());
            emit(json, &report);
            Ok(status(sol.witness.is_some()))
        }
        Command::Oracle { group, expr, box_bound, cap } => {
            let g = load_group(&group)?;
            let e = ExponentExpression::parse(&g, &expr)?;
            let sols = brute_solve_with_cap(&g, &e, box_bound, cap)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&sols)?);
            } else {
                for s in &sols {
                    println!("{s}");
                }
                println!("{} solutions in [0, {box_bound}]^{}", sols.len(), e.variables().len());
            }
            Ok(status(!sols.is_empty()))
        }
        Command::NfaMember { group, nfa } => {
            let g = load_group(&group)?;
            let text = fs::read_to_string(&nfa).with_context(|| format!("reading {}", nfa.display()))?;
            let a = WordNFA::from_json(&g, &text)?;
            let hit = acyclic_membership(&g, &a)?;
            if json {
                let w = hit.as_ref().map(|h| serde_json::json!({
                    "word": g.format_word(&h.word),
                    "transitions": h.transitions,
                }));
                println!("{}", serde_json::json!({ "accepted": hit.is_some(), "witness": w }));
            } else {
                match &hit {
                    Some(h) => println!("yes\nword: {}\ntransitions: {:?}", g.format_word(&h.word), h.transitions),
                    None => println!("no"),
                }
            }
            Ok(status(hit.is_some()))
        }
        Command::Parikh { nfa, vars, box_bound } => {
            let text = fs::read_to_string(&nfa).with_context(|| format!("reading {}", nfa.display()))?;
            let a: ParikhNFA = serde_json::from_str(&text).context("parsing counting automaton")?;
            let vars = if vars.is_empty() {
                (1..=a.dim).map(|i| format!("x{i}")).collect()
            } else {
                vars
            };
            let set = parikh_image(&a, &vars)?;
            print!("{}", set.to_text());
            if let Some(b) = box_bound {
                for p in set.enumerate_box(b) {
                    println!("{p}");
                }
            }
            Ok(status(!set.is_empty()))
        }
        Command::Constants { group } => {
            let g = load_group(&group)?;
            let target = match g.direct_z_parts() {
                Some((inner, _)) => inner,
                None => g,
            };
            let c = target.constants()?;
            println!("delta={} N={} L={} lambda={} epsilon={} K={} kappa={} gamma={} xi={}",
                c.delta, c.n, c.l, c.lambda, c.epsilon, c.k_eh, c.kappa, c.gamma, c.xi);
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { corpus: dir, box_bound, generate, seed, membership_states, calibrate } => {
            let corpus = corpus::load(&dir)?;
            let mut extra = Vec::new();
            if generate > 0 {
                for (i, g) in ["Z", "F2", "(F2) x Z"].iter().enumerate() {
                    extra.extend(corpus::generate(g, generate, seed.wrapping_add(i as u64), 4, 14)?);
                }
            }
            if corpus.instances.is_empty() && extra.is_empty() {
                bail!("no instances in {}", dir.display());
            }
            if calibrate {
                let cals = bench::calibrate(&corpus, &extra, box_bound)?;
                if json {
                    println!("{}", serde_json::to_string_pretty(&cals)?);
                } else {
                    print!("{}", bench::calibration_table(&cals));
                }
                return Ok(status(cals.iter().all(|c| c.chosen.is_some())));
            }
            let config = ConstantsConfig::from_env()?;
            let membership = (membership_states > 0).then_some(membership_states);
            let report = bench::run(&corpus, &extra, config, box_bound, membership)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{}", report.table());
            }
            Ok(status(report.all_ok()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
