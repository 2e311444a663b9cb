use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use outerlip::format::{parse_graph, parse_path, parse_point, parse_tangent, write_point};
use outerlip::harness::report::SuiteReport;
use outerlip::harness::sampling::sample_pair;
use outerlip::harness::suites::{run_suite, SuiteConfig, SUITES};
use outerlip::homology::all_class_reports;
use outerlip::lipschitz::{lipschitz_norm, stretch};
use outerlip::paths::len_n;
use outerlip::potential::{covers_of, k_constant, norm_triple, psi, Convention, RealizerTable};
use outerlip::rational::to_f64;
use outerlip::{enumerate_candidates, Graph, MarkedPoint};

#[derive(Parser)]
#[command(name = "outerlip", version, about = "Lipschitz metric, corrected norm and potential on Outer space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Max,
    Min,
}

#[derive(Subcommand)]
enum Command {
    /// Stretch factor and distance d(x, y) with the maximizing candidate.
    Distance { x: PathBuf, y: PathBuf },
    /// Lipschitz norm of a tangent vector.
    Norm { point: PathBuf, tau: PathBuf },
    /// Lipschitz norm, correction N and corrected norm.
    Nnorm {
        point: PathBuf,
        tau: PathBuf,
        #[arg(long, value_enum, default_value = "max")]
        convention: Conv,
    },
    /// The potential Ψ of a marked point.
    Psi {
        point: PathBuf,
        /// Print every (cover, class) term.
        #[arg(long)]
        terms: bool,
    },
    /// Candidate loops of a graph (a graph file or a point file).
    Candidates { file: PathBuf },
    /// Double covers of a graph, with class lengths when given a point.
    Covers { file: PathBuf },
    /// len_L, len_N and the potential identity for a path.
    Pathlen { path: PathBuf },
    /// A random witnessed point pair, printed in the point format.
    Sample {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 3)]
        moves: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write x.txt and y.txt here instead of printing.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run verification suites; exit status 0 iff every check passes.
    Verify {
        /// Suites to run (default: all).
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: Vec<String>,
        /// Restrict random samples to one rank (2, 3 or 4).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Override every sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Write every check as a CSV row.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn point(path: &Path) -> Result<MarkedPoint> {
    parse_point(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn graph_or_point(path: &Path) -> Result<(Graph, Option<MarkedPoint>)> {
    let text = read(path)?;
    if let Ok(x) = parse_point(&text) {
        return Ok(((**x.graph()).clone(), Some(x)));
    }
    let g = parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((g, None))
}

fn write_csv(path: &Path, reports: &[SuiteReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["scenario", "rank", "seed", "lhs", "rhs", "margin", "witness"])?;
    for rep in reports {
        for r in &rep.rows {
            w.write_record([
                r.scenario.as_str(),
                &r.rank.to_string(),
                &r.seed.to_string(),
                &r.lhs,
                &r.rhs,
                &format!("{:e}", r.margin),
                &r.witness,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Distance { x, y } => {
            let (x, y) = (point(&x)?, point(&y)?);
            let phi = x.difference_to(&y)?;
            let s = stretch(&x, &y, &phi)?;
            println!("stretch {}", s.value);
            println!("distance {:.15}", s.distance());
            println!("witness {} ({})", s.witness.lp.display(x.graph()), s.witness.kind);
        }
        Command::Norm { point: p, tau } => {
            let x = point(&p)?;
            let tau = parse_tangent(&read(&tau)?, x.graph())?;
            let n = lipschitz_norm(x.graph(), x.metric(), &tau);
            println!("lipschitz {} ({:.15})", n.value, to_f64(&n.value));
            println!("witness {}", n.witness.lp.display(x.graph()));
        }
        Command::Nnorm { point: p, tau, convention } => {
            let x = point(&p)?;
            let tau = parse_tangent(&read(&tau)?, x.graph())?;
            let table = RealizerTable::new(x.graph(), x.metric())?;
            let conv = match convention {
                Conv::Max => Convention::Max,
                Conv::Min => Convention::Min,
            };
            let t = norm_triple(x.graph(), x.metric(), &table, &tau, conv);
            println!("lipschitz {} ({:.15})", t.lipschitz, to_f64(&t.lipschitz));
            println!("correction {} ({:.15})", t.correction, to_f64(&t.correction));
            println!("corrected {} ({:.15})", t.corrected, to_f64(&t.corrected));
            if let Some(tie) = table.first_tie() {
                println!("note: non-generic metric (cover {:#b}, class {:#b} has {} realizer profiles)", tie.cover, tie.class, tie.profiles.len());
            }
        }
        Command::Psi { point: p, terms } => {
            let x = point(&p)?;
            let v = psi(&x);
            println!("psi {:.15}", v.value);
            println!("terms {} (K = {})", v.terms.len(), k_constant(x.rank()));
            if terms {
                println!("cover\trose_functional\tclass\tlength");
                for t in &v.terms {
                    println!("{:#b}\t{:#b}\t{:#b}\t{}", t.cover, t.rose_functional.unwrap_or(0), t.class, t.length);
                }
            }
        }
        Command::Candidates { file } => {
            let (g, x) = graph_or_point(&file)?;
            for c in enumerate_candidates(&g) {
                match &x {
                    Some(x) => println!("{}\t{}\t{}", c.kind, c.lp.display(&g), x.metric().loop_length(&c.lp)),
                    None => println!("{}\t{}", c.kind, c.lp.display(&g)),
                }
            }
        }
        Command::Covers { file } => {
            let (g, x) = graph_or_point(&file)?;
            for cover in covers_of(&g).iter() {
                let t = cover.total();
                println!("cover {:#b}: {} vertices, {} edges", cover.functional(), t.num_vertices(), t.num_edges());
                if let Some(x) = &x {
                    for rep in all_class_reports(t, &cover.lift_metric(x.metric()))? {
                        let loops: Vec<String> = rep.realizers.iter().map(|lp| lp.display(t).to_string()).collect();
                        println!("  class {:#b}\t{}\t{}", rep.class, rep.length, loops.join(" | "));
                    }
                }
            }
        }
        Command::Pathlen { path } => {
            let p = parse_path(&read(&path)?).with_context(|| format!("parsing {}", path.display()))?;
            let r = len_n(&p);
            println!("len_L {:.15}", r.len_l);
            println!("len_N {:.15}", r.len_n);
            println!("delta_psi {:.15}", r.psi_end - r.psi_start);
            println!("residual {:e}", r.residual);
            println!("exact {}", r.exact);
            return Ok(r.exact);
        }
        Command::Sample { rank, moves, seed, out_dir } => {
            let w = sample_pair(rank, moves, seed)?;
            let (x, y) = (write_point(&w.x), write_point(&w.y));
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    fs::write(dir.join("x.txt"), x)?;
                    fs::write(dir.join("y.txt"), y)?;
                }
                None => print!("# x\n{x}\n# y\n{y}"),
            }
        }
        Command::Verify { suite, rank, seed, samples, csv } => {
            let mut cfg = SuiteConfig { seed, ..SuiteConfig::default() };
            if let Some(r) = rank {
                if !(2..=4).contains(&r) {
                    bail!("rank must be 2, 3 or 4");
                }
                cfg.ranks = vec![r];
            }
            if let Some(n) = samples {
                cfg = cfg.with_samples(n);
            }
            let names: Vec<String> = if suite.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { suite };
            let mut reports = Vec::new();
            for name in &names {
                let start = std::time::Instant::now();
                let rep = run_suite(name, &cfg).expect("suite names are validated by clap");
                print!("{rep}");
                println!("  time {:.2}s", start.elapsed().as_secs_f64());
                reports.push(rep);
            }
            if let Some(path) = csv {
                write_csv(&path, &reports)?;
            }
            let ok = reports.iter().all(|r| r.passed());
            println!("{}", if ok { "all checks passed" } else { "some checks FAILED" });
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
