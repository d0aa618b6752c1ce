use clap::ValueEnum;
use tait_core::alpharep::{AlphaOptions, DEFAULT_MAX_FACES};
use tait_core::oracles::BRUTE_MAX_VERTICES;
use tait_core::triangulation::{Family, Triangulation};
use tait_core::verify::{self as checks, CheckReport, VerifyError};

use crate::graph::{build, GraphArgs};
use crate::{Failure, EXIT_BUDGET, EXIT_DISAGREEMENT, EXIT_USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    /// Gaussian-sum closed form against direct enumeration
    Gauss,
    /// Certificate rank against row reduction
    Rank,
    /// Congruent matrices have equal Gaussian sums
    Congruence,
    /// All maximal nonsingular principal minors share a Legendre symbol
    MinorChoice,
    /// Odd-rank terms cancel in ±α pairs
    OddRank,
    /// Principal minor on V \ W equals the tree sum of G/W
    MinorTree,
    /// Spin count times three equals the Tait count
    Heawood,
    /// Σ_α Gau(L(x(α))) / 3^|V| equals the spin count
    GauIdentity,
    /// No contraction larger than G/W* has a nonzero tree sum
    Witness,
    /// α-sum against the spin count and brute force
    Theorem,
    All,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub lemma: Lemma,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Matrix order for the matrix checks
    #[arg(long, default_value_t = 3)]
    pub order: usize,
    /// Sweep every symmetric matrix up to --order instead of sampling
    #[arg(long)]
    pub exhaustive: bool,
    /// Random samples per order
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_FACES)]
    pub max_faces: usize,
    /// JSON lines instead of text
    #[arg(long)]
    pub json: bool,
}

fn lift(e: VerifyError) -> Failure {
    let message = e.to_string();
    let budget = matches!(
        &e,
        VerifyError::Oracle(tait_core::oracles::OracleError::BudgetExceeded { .. })
            | VerifyError::Alpha(tait_core::alpharep::AlphaError::BudgetExceeded { .. })
    );
    Failure::new(if budget { EXIT_BUDGET } else { EXIT_DISAGREEMENT }, message)
}

const MATRIX_LEMMAS: [Lemma; 4] = [Lemma::Gauss, Lemma::Rank, Lemma::Congruence, Lemma::MinorChoice];
const GRAPH_LEMMAS: [Lemma; 6] = [
    Lemma::OddRank,
    Lemma::MinorTree,
    Lemma::Heawood,
    Lemma::GauIdentity,
    Lemma::Witness,
    Lemma::Theorem,
];

pub fn run_lemma(
    lemma: Lemma,
    args: &VerifyArgs,
    graph: Option<&(Triangulation, String)>,
) -> Result<CheckReport, Failure> {
    let order = args.order;
    if MATRIX_LEMMAS.contains(&lemma) && order == 0 {
        return Err(Failure::new(EXIT_USAGE, "--order must be at least 1"));
    }
    let graph = || graph.ok_or_else(|| Failure::new(EXIT_USAGE, "this check needs --graph or --family"));
    match lemma {
        Lemma::Gauss if args.exhaustive => checks::gauss_exhaustive(order).map_err(lift),
        Lemma::Gauss => checks::gauss_random(&[order], args.samples, args.seed).map_err(lift),
        Lemma::Rank => Ok(checks::rank_oracle(order, args.samples, args.seed)),
        Lemma::Congruence => checks::congruence(&[order], args.samples, args.seed).map_err(lift),
        Lemma::MinorChoice => {
            if order > 5 {
                return Err(Failure::new(EXIT_BUDGET, "minor-choice sweep is exhaustive; --order must be <= 5"));
            }
            Ok(checks::minor_choice(order))
        }
        Lemma::OddRank => {
            let (g, name) = graph()?;
            checks::odd_rank_cancellation(g, name).map_err(lift)
        }
        Lemma::MinorTree => {
            let (g, name) = graph()?;
            checks::minor_tree(g, name).map_err(lift)
        }
        Lemma::Heawood => {
            let (g, name) = graph()?;
            checks::heawood(g, name).map_err(lift)
        }
        Lemma::GauIdentity => {
            let (g, name) = graph()?;
            checks::gau_identity(g, name).map_err(lift)
        }
        Lemma::Witness => {
            let (g, name) = graph()?;
            checks::witness_minimality(g, name).map_err(lift)
        }
        Lemma::Theorem => {
            let (g, name) = graph()?;
            let opts = AlphaOptions {
                threads: args.threads,
                max_faces: args.max_faces,
                sign_symmetry: false,
            };
            checks::theorem(g, name, &opts, g.vertex_count() <= BRUTE_MAX_VERTICES).map_err(lift)
        }
        Lemma::All => unreachable!("expanded by caller"),
    }
}

pub fn run(args: &VerifyArgs) -> Result<(), Failure> {
    let graph = if args.graph.is_set() {
        let (g, desc) = args.graph.load()?;
        Some((g, desc.source))
    } else if args.lemma == Lemma::All || GRAPH_LEMMAS.contains(&args.lemma) {
        Some((build(Family::K4)?, Family::K4.name()))
    } else {
        None
    };
    let lemmas: Vec<Lemma> = match args.lemma {
        Lemma::All => MATRIX_LEMMAS.iter().chain(&GRAPH_LEMMAS).copied().collect(),
        l => vec![l],
    };
    let mut failed = Vec::new();
    for lemma in lemmas {
        let report = run_lemma(lemma, args, graph.as_ref())?;
        if args.json {
            crate::emit(format_args!("{}\n", serde_json::to_string(&report).expect("report serializes")));
        } else {
            crate::emit(format_args!("{report}\n"));
        }
        if !report.passed() {
            failed.push(report.check.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_DISAGREEMENT, format!("failed checks: {}", failed.join(", "))))
    }
}
