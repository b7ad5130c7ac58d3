use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use abductor::harness::bench::{bench, BenchAlgo, BenchFamily};
use abductor::harness::verify::{minimize_failure, reproduces};
use abductor::harness::{
    generate, parse, verify, write_string, Family, GenParams, ResultRecord, Suite, VerifyOptions,
};
use abductor::reductions::{
    abd2cnf_to_cnfsat, abd_to_pabd_4cnf, abd_to_simplesat, eliminate_constants, kcnf_to_nae,
    negimp_to_pos, REDUCTION_NAMES,
};
use abductor::solvers::{solve, Algorithm, Mode};

#[derive(Parser)]
#[command(
    name = "abductor",
    version,
    about = "Exact solvers and reductions for propositional abduction"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance and print a JSON result record.
    Solve {
        file: PathBuf,
        #[arg(long, default_value = "baseline")]
        algo: String,
        #[arg(long, default_value = "abd")]
        mode: Mode,
        /// Report the witness as found instead of shrinking it.
        #[arg(long)]
        no_minimize: bool,
    },
    /// Generate an instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long, short = 'n', default_value_t = 8)]
        n: usize,
        #[arg(long, short = 'k')]
        k: Option<usize>,
        #[arg(long, short = 'm')]
        m: Option<usize>,
        #[arg(long, env = "ABD_SEED", default_value_t = abductor::harness::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Apply a reduction; the report goes to standard error.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        reduction: String,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
    /// Check solver agreement and reduction answer preservation.
    Verify {
        #[arg(long, default_value = "random")]
        suite: Suite,
        #[arg(long, default_value_t = 500)]
        per_family: usize,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, env = "ABD_SEED", default_value_t = abductor::harness::DEFAULT_SEED)]
        seed: u64,
        /// Where minimized failing instances are written.
        #[arg(long, default_value = "verify-failures")]
        dump_dir: PathBuf,
        /// Deliberately corrupt the baseline answers.
        #[arg(long, hide = true)]
        inject_bug: bool,
    },
    /// Fit the exponential base of a solver on a family.
    Bench {
        #[arg(long)]
        family: BenchFamily,
        #[arg(long)]
        algo: BenchAlgo,
        /// `a..b` or `a..b:step`, inclusive.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long, env = "ABD_SEED", default_value_t = abductor::harness::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn parse_grid(s: &str) -> Result<Vec<usize>> {
    let (range, step) = s.split_once(':').unwrap_or((s, "1"));
    let (a, b) = range
        .split_once("..")
        .context("grid must look like a..b or a..b:step")?;
    let (a, b, step): (usize, usize, usize) =
        (a.trim().parse()?, b.trim().parse()?, step.trim().parse()?);
    if step == 0 || a > b {
        bail!("empty grid {s}");
    }
    Ok((a..=b).step_by(step).collect())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_solve(file: &Path, algo: &str, mode: Mode, minimize: bool) -> Result<ExitCode> {
    let t0 = Instant::now();
    let ms = |t: Instant| t.elapsed().as_secs_f64() * 1e3;
    let run = || -> Result<_> {
        let inst = parse(file)?;
        let a = Algorithm::from_tag(algo).with_context(|| format!("unknown algorithm {algo:?}"))?;
        Ok(solve(&inst, a, mode, minimize)?)
    };
    match run() {
        Ok(out) => {
            let rec = ResultRecord::from_outcome(algo, mode, &out, ms(t0));
            println!("{}", serde_json::to_string(&rec)?);
            Ok(if out.result.answer {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Err(e) => {
            let rec = ResultRecord::failure(algo, mode, format!("{e:#}"), ms(t0));
            println!("{}", serde_json::to_string(&rec)?);
            eprintln!("error: {e:#}");
            Ok(ExitCode::from(2))
        }
    }
}

fn cmd_reduce(file: &Path, name: &str, out: Option<&Path>) -> Result<()> {
    let inst = parse(file)?;
    let (text, report) = match name {
        "negimp-to-pos" => negimp_to_pos(&inst).map(|r| (write_string(&r.instance), r.report))?,
        "abd-to-pabd-4cnf" => {
            abd_to_pabd_4cnf(&inst).map(|r| (write_string(&r.instance), r.report))?
        }
        "eliminate-constants" => {
            eliminate_constants(&inst).map(|r| (write_string(&r.instance), r.report))?
        }
        "kcnf-to-nae" => kcnf_to_nae(&inst).map(|r| (write_string(&r.instance), r.report))?,
        "abd-to-simplesat" => {
            let (si, report) = abd_to_simplesat(&inst)?;
            let idx = |v: &Vec<abductor::Var>| v.iter().map(|x| x.index()).collect::<Vec<_>>();
            let doc = json!({
                "num_vars": si.num_vars,
                "p": si.p,
                "positive_clauses": si.positive_clauses.iter().map(idx).collect::<Vec<_>>(),
                "negative_dnfs": si.negative_dnfs.iter().map(|d| d.iter().map(idx).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            (format!("{}\n", serde_json::to_string_pretty(&doc)?), report)
        }
        "abd2cnf-to-cnfsat" => {
            let (cnf, report) = abd2cnf_to_cnfsat(&inst)?;
            let mut text = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
            for c in &cnf.clauses {
                for l in c.lits() {
                    text.push_str(&format!("{} ", l.to_dimacs()));
                }
                text.push_str("0\n");
            }
            (text, report)
        }
        "cnfsat-to-abd-lb" => bail!("cnfsat-to-abd-lb takes a CNF; use `gen --family cnfsat-lb`"),
        _ => bail!(
            "unknown reduction {name:?}, expected one of {}",
            REDUCTION_NAMES.join(", ")
        ),
    };
    emit(&text, out)?;
    eprintln!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn cmd_verify(suite: Suite, opts: &VerifyOptions, dump_dir: &Path) -> Result<ExitCode> {
    let t0 = Instant::now();
    let tally = verify(suite, opts);
    if tally.instances == 0 {
        bail!("empty suite");
    }
    let mut dumped = Vec::new();
    if tally.failed() > 0 {
        std::fs::create_dir_all(dump_dir)?;
        for (i, f) in tally.failures.iter().enumerate().take(5) {
            let small = minimize_failure(&f.instance, |c| reproduces(&f.check, c, opts));
            let path = dump_dir.join(format!("failure-{i}.abd"));
            let text = format!(
                "# check {}: {}\n{}",
                f.check,
                f.detail.replace('\n', " "),
                write_string(&small)
            );
            std::fs::write(&path, text)?;
            dumped.push(path.display().to_string());
        }
    }
    let checks: serde_json::Map<String, serde_json::Value> = tally
        .checks
        .iter()
        .map(|(k, (p, f))| (k.clone(), json!({"passed": p, "failed": f})))
        .collect();
    let logged: serde_json::Map<String, serde_json::Value> = tally
        .logged
        .iter()
        .map(|(k, (p, f))| (k.clone(), json!({"agree": p, "disagree": f})))
        .collect();
    let doc = json!({
        "suite": suite,
        "instances": tally.instances,
        "passed": tally.passed(),
        "failed": tally.failed(),
        "checks": checks,
        "logged": logged,
        "failures": tally.failures.iter().map(|f| json!({"check": f.check, "detail": f.detail})).collect::<Vec<_>>(),
        "dumped": dumped,
        "wall_ms": t0.elapsed().as_secs_f64() * 1e3,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if tally.failed() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Solve {
            file,
            algo,
            mode,
            no_minimize,
        } => cmd_solve(&file, &algo, mode, !no_minimize),
        Cmd::Gen {
            family,
            n,
            k,
            m,
            seed,
            out,
        } => {
            let mut p = GenParams::new(family, n, seed);
            if let Some(k) = k {
                p.k = k;
            }
            p.m = m;
            emit(&write_string(&generate(&p)), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce {
            file,
            reduction,
            out,
        } => {
            cmd_reduce(&file, &reduction, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            suite,
            per_family,
            max_n,
            seed,
            dump_dir,
            inject_bug,
        } => {
            let opts = VerifyOptions {
                per_family,
                max_n,
                seed,
                inject_bug,
                ..VerifyOptions::default()
            };
            cmd_verify(suite, &opts, &dump_dir)
        }
        Cmd::Bench {
            family,
            algo,
            grid,
            seeds,
            seed,
            csv,
        } => {
            let sweep = bench(family, algo, &parse_grid(&grid)?, seeds, seed)?;
            if let Some(p) = csv {
                std::fs::write(&p, sweep.to_csv())
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            println!("{}", serde_json::to_string_pretty(&sweep)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
