use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use tait_core::alpharep::{tait0_alpha_with, AlphaError, AlphaOptions, WeightClass, DEFAULT_MAX_FACES};
use tait_core::oracles::{heawood_count_with_limit, tait_brute_with_limit, OracleError, BRUTE_MAX_VERTICES};
use tait_core::triangulation::Triangulation;

use crate::graph::{GraphArgs, GraphDescriptor};
use crate::{Failure, Method, EXIT_BUDGET, EXIT_DISAGREEMENT};

#[derive(Debug, clap::Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "alpha")]
    pub method: Method,
    #[command(flatten)]
    pub budgets: Budgets,
    /// Enumerate half the α vectors and double (same result)
    #[arg(long)]
    pub sign_symmetry: bool,
    /// JSON output (the default for this command)
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Budgets {
    /// Worker threads for the α enumeration
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Face cap for the alpha and heawood enumerations
    #[arg(long, default_value_t = DEFAULT_MAX_FACES)]
    pub max_faces: usize,
    /// Vertex cap for the brute-force coloring count
    #[arg(long, default_value_t = BRUTE_MAX_VERTICES)]
    pub max_vertices: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodResult {
    pub method: &'static str,
    pub tait0: u64,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_histogram: Option<BTreeMap<usize, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<WeightClass>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaitReport {
    pub graph: GraphDescriptor,
    pub method: &'static str,
    pub tait0: u64,
    pub threads: usize,
    pub agreement: bool,
    pub results: Vec<MethodResult>,
}

fn budget_failure(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_BUDGET, e.to_string())
}

pub fn run_method(
    g: &Triangulation,
    method: Method,
    budgets: &Budgets,
    threads: usize,
    sign_symmetry: bool,
) -> Result<MethodResult, Failure> {
    let start = Instant::now();
    let mut result = MethodResult {
        method: method.name(),
        tait0: 0,
        seconds: 0.0,
        rank_histogram: None,
        contributions: None,
        terms: None,
    };
    match method {
        Method::Alpha => {
            let opts = AlphaOptions {
                threads,
                max_faces: budgets.max_faces,
                sign_symmetry,
            };
            let out = tait0_alpha_with(g, &opts).map_err(|e| match e {
                AlphaError::BudgetExceeded { .. } => budget_failure(e),
                _ => Failure::new(EXIT_DISAGREEMENT, e.to_string()),
            })?;
            result.tait0 = out.tait0;
            result.terms = Some(out.terms);
            result.rank_histogram = Some(out.rank_histogram);
            result.contributions = Some(out.contributions);
        }
        Method::Brute => {
            let count = tait_brute_with_limit(g, budgets.max_vertices).map_err(oracle_failure)?;
            if count % 3 != 0 {
                return Err(Failure::new(
                    EXIT_DISAGREEMENT,
                    format!("brute-force count {count} is not divisible by 3"),
                ));
            }
            result.tait0 = count / 3;
        }
        Method::Heawood => {
            result.tait0 = heawood_count_with_limit(g, budgets.max_faces).map_err(oracle_failure)?;
            result.terms = Some(1 << g.face_count());
        }
        Method::All => unreachable!("expanded by caller"),
    }
    result.seconds = start.elapsed().as_secs_f64();
    Ok(result)
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::BudgetExceeded { .. } => budget_failure(e),
        _ => Failure::new(EXIT_DISAGREEMENT, e.to_string()),
    }
}

pub fn count(g: &Triangulation, desc: GraphDescriptor, args: &CountArgs) -> Result<TaitReport, Failure> {
    let results = args
        .method
        .expand()
        .into_iter()
        .map(|m| run_method(g, m, &args.budgets, args.budgets.threads, args.sign_symmetry))
        .collect::<Result<Vec<_>, _>>()?;
    let tait0 = results[0].tait0;
    let agreement = results.iter().all(|r| r.tait0 == tait0);
    Ok(TaitReport {
        graph: desc,
        method: args.method.name(),
        tait0,
        threads: args.budgets.threads,
        agreement,
        results,
    })
}

pub fn run(args: &CountArgs) -> Result<(), Failure> {
    let (g, desc) = args.graph.load()?;
    let report = count(&g, desc, args)?;
    crate::emit(format_args!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")));
    if !report.agreement {
        let values: Vec<String> = report.results.iter().map(|r| format!("{}={}", r.method, r.tait0)).collect();
        return Err(Failure::new(
            EXIT_DISAGREEMENT,
            format!("methods disagree on {}: {}", report.graph.source, values.join(", ")),
        ));
    }
    Ok(())
}
