//! Exponent fitting: log₂(median branch nodes) ≈ n·log₂(b) + c.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::{full_h_negative, random_xsat, rng, simplesat_adversarial, xsat_chain};
use crate::langlib::{aff, branching_closure, xsat_family, ConstraintLanguage};
use crate::model::Formula;
use crate::satenum::{enumerate, solve_simple_sat, sparse_enumerate, EnumStats};
use crate::solvers::baseline_abd;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("a fit needs at least 5 grid points, got {0}")]
    GridTooSmall(usize),
    #[error("algorithm {algo} does not run on family {family}")]
    Unsupported {
        family: &'static str,
        algo: &'static str,
    },
    #[error("{0}")]
    Run(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchFamily {
    /// Random exactly-one formulas over n variables.
    Xsat,
    /// The inequality chain on n = 2m variables.
    XsatChain,
    /// Random parity systems of arity ≤ 3 with about n/2 equations.
    Aff,
    /// The (1, 2)-branching SimpleSAT family.
    SimplesatP2,
    /// Negative instances with H covering all variables but one.
    FullH,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchAlgo {
    Sparse,
    Dpll,
    #[serde(rename = "simplesat")]
    SimpleSat,
    Baseline,
}

macro_rules! tags {
    ($t:ty, $($v:path => $s:literal),*) => {
        impl $t {
            pub fn tag(self) -> &'static str {
                match self { $($v => $s),* }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.tag())
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($s => Ok($v),)*
                    _ => Err(format!("unknown value {s:?}, expected one of {}", [$($s),*].join(", "))),
                }
            }
        }
    };
}

tags!(BenchFamily, BenchFamily::Xsat => "xsat", BenchFamily::XsatChain => "xsat-chain", BenchFamily::Aff => "aff",
    BenchFamily::SimplesatP2 => "simplesat-p2", BenchFamily::FullH => "full-h");
tags!(BenchAlgo, BenchAlgo::Sparse => "sparse", BenchAlgo::Dpll => "dpll", BenchAlgo::SimpleSat => "simplesat",
    BenchAlgo::Baseline => "baseline");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub n: usize,
    pub seeds: usize,
    pub median_branch_nodes: f64,
    pub median_leaves: f64,
    pub median_models: f64,
    pub median_wall_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSweep {
    pub family: BenchFamily,
    pub algo: BenchAlgo,
    pub grid: Vec<usize>,
    pub points: Vec<BenchPoint>,
    /// Fitted base b of median branch nodes ≈ C · bⁿ.
    pub base: f64,
    /// Root mean square residual of the fit in log₂ units.
    pub residual: f64,
}

impl BenchSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,seeds,median_branch_nodes,median_leaves,median_models,median_wall_ms\n",
        );
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{:.3}\n",
                p.n,
                p.seeds,
                p.median_branch_nodes,
                p.median_leaves,
                p.median_models,
                p.median_wall_ms
            ));
        }
        out
    }
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Least squares of log₂(y) against n. Returns (base, rms residual).
pub fn fit_base(points: &[(f64, f64)]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, y)| (n, y.max(1.0).log2()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - (icpt + slope * p.0)).powi(2))
        .sum();
    (slope.exp2(), (rss / k).sqrt())
}

fn xsat_closure() -> ConstraintLanguage {
    branching_closure(&xsat_family(3))
}

fn sparse_stats(f: &Formula, closure: &ConstraintLanguage) -> Result<EnumStats, BenchError> {
    let mut s = sparse_enumerate(f, closure, 1).map_err(|e| BenchError::Run(e.to_string()))?;
    for _ in s.by_ref() {}
    Ok(s.stats())
}

fn random_aff(seed: u64, n: usize) -> Formula {
    use rand::Rng;
    let mut r = rng(seed);
    let mut kb = Formula::empty(n as u32);
    for _ in 0..n.div_ceil(2) {
        let a = r.gen_range(1..=3.min(n));
        let mut vars: Vec<u32> = (1..=n as u32).collect();
        rand::seq::SliceRandom::shuffle(&mut vars[..], &mut r);
        kb.add(crate::langlib::aff_relation(a, r.gen_bool(0.5)), &vars[..a])
            .expect("in range");
    }
    kb
}

/// One run. For xsat-chain the grid value is the variable count n = 2m.
pub fn run_one(
    family: BenchFamily,
    algo: BenchAlgo,
    n: usize,
    seed: u64,
) -> Result<EnumStats, BenchError> {
    let unsupported = || BenchError::Unsupported {
        family: family.tag(),
        algo: algo.tag(),
    };
    match (family, algo) {
        (BenchFamily::SimplesatP2, BenchAlgo::SimpleSat) => {
            Ok(solve_simple_sat(&simplesat_adversarial(n)).1)
        }
        (BenchFamily::FullH, BenchAlgo::Baseline) => {
            let inst = full_h_negative(&mut rng(seed), n);
            baseline_abd(&inst, &crate::satenum::Dpll)
                .map(|r| r.stats)
                .map_err(|e| BenchError::Run(e.to_string()))
        }
        (
            BenchFamily::Xsat | BenchFamily::XsatChain | BenchFamily::Aff,
            BenchAlgo::Sparse | BenchAlgo::Dpll,
        ) => {
            let (f, closure) = match family {
                BenchFamily::Xsat => (random_xsat(&mut rng(seed), n, 3, None), xsat_closure()),
                BenchFamily::XsatChain => (xsat_chain(n / 2).kb, xsat_closure()),
                _ => (random_aff(seed, n), branching_closure(&aff(3))),
            };
            if algo == BenchAlgo::Sparse {
                sparse_stats(&f, &closure)
            } else {
                let mut s = enumerate(&f);
                for _ in s.by_ref() {}
                Ok(s.stats())
            }
        }
        _ => Err(unsupported()),
    }
}

pub fn bench(
    family: BenchFamily,
    algo: BenchAlgo,
    grid: &[usize],
    seeds: usize,
    seed: u64,
) -> Result<BenchSweep, BenchError> {
    if grid.len() < 5 {
        return Err(BenchError::GridTooSmall(grid.len()));
    }
    let seeds = seeds.max(5);
    let mut points = Vec::new();
    for &n in grid {
        let mut nodes = Vec::new();
        let mut leaves = Vec::new();
        let mut models = Vec::new();
        let mut wall = Vec::new();
        for s in 0..seeds {
            let t0 = Instant::now();
            let st = run_one(family, algo, n, seed ^ ((n as u64) << 32) ^ s as u64)?;
            wall.push(t0.elapsed().as_secs_f64() * 1e3);
            nodes.push(st.branch_nodes as f64);
            leaves.push(st.leaves as f64);
            models.push(st.models_emitted as f64);
        }
        points.push(BenchPoint {
            n,
            seeds,
            median_branch_nodes: median(&mut nodes),
            median_leaves: median(&mut leaves),
            median_models: median(&mut models),
            median_wall_ms: median(&mut wall),
        });
    }
    let (base, residual) = fit_base(
        &points
            .iter()
            .map(|p| (p.n as f64, p.median_branch_nodes))
            .collect::<Vec<_>>(),
    );
    Ok(BenchSweep {
        family,
        algo,
        grid: grid.to_vec(),
        points,
        base,
        residual,
    })
}
