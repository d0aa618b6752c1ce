use serde::Serialize;
use tait_core::alpharep::DEFAULT_MAX_FACES;
use tait_core::oracles::BRUTE_MAX_VERTICES;
use tait_core::triangulation::Family;

use crate::count::{run_method, Budgets};
use crate::graph::{build, parse_family};
use crate::{Failure, Method, EXIT_DISAGREEMENT, EXIT_USAGE};

#[derive(Debug, clap::Args)]
pub struct BenchArgs {
    /// Graph family, optionally with a parameter range: `k4`, `bipyramid:3..6`,
    /// `apollonian:0..1`, `bipyramid:5`. Repeatable.
    #[arg(long, required = true)]
    pub family: Vec<String>,
    #[arg(long, value_enum, default_value = "all")]
    pub method: Method,
    /// Thread counts for the alpha rows, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub threads: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_FACES)]
    pub max_faces: usize,
    #[arg(long, default_value_t = BRUTE_MAX_VERTICES)]
    pub max_vertices: usize,
    #[arg(long)]
    pub sign_symmetry: bool,
    /// CSV output (the default for this command)
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    /// JSON lines instead of CSV
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub graph: String,
    pub method: &'static str,
    pub n: usize,
    pub faces: usize,
    pub terms: Option<u64>,
    pub seconds: Option<f64>,
    pub threads: usize,
    pub tait0: Option<u64>,
    pub status: &'static str,
    pub rank_summary: String,
}

/// Expands `name[:lo[..hi]]` into concrete families.
pub fn parse_family_spec(spec: &str) -> Result<Vec<Family>, Failure> {
    let bad = || Failure::new(EXIT_USAGE, format!("bad family spec {spec:?}"));
    let (name, range) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let Some(range) = range else {
        return Ok(vec![parse_family(name, None, None)?]);
    };
    let (lo, hi) = match range.split_once("..") {
        Some((a, b)) => (a.parse::<usize>().map_err(|_| bad())?, b.trim_start_matches('=').parse::<usize>().map_err(|_| bad())?),
        None => {
            let v = range.parse::<usize>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    (lo..=hi).map(|k| parse_family(name, Some(k), Some(k as u32))).collect()
}

pub fn sweep(args: &BenchArgs) -> Result<(Vec<BenchRow>, Vec<String>), Failure> {
    let mut families = Vec::new();
    for spec in &args.family {
        families.extend(parse_family_spec(spec)?);
    }
    let mut rows = Vec::new();
    let mut disagreements = Vec::new();
    for family in families {
        let g = build(family)?;
        let (n, faces) = (g.vertex_count(), g.face_count());
        let mut values = Vec::new();
        for method in args.method.expand() {
            let thread_counts: Vec<usize> = if method == Method::Alpha { args.threads.clone() } else { vec![1] };
            for threads in thread_counts {
                let skipped = match method {
                    Method::Brute => n > args.max_vertices,
                    _ => faces > args.max_faces,
                };
                let mut row = BenchRow {
                    graph: family.name(),
                    method: method.name(),
                    n,
                    faces,
                    terms: None,
                    seconds: None,
                    threads,
                    tait0: None,
                    status: "skipped",
                    rank_summary: String::new(),
                };
                if !skipped {
                    let budgets = Budgets {
                        threads,
                        max_faces: args.max_faces,
                        max_vertices: args.max_vertices,
                    };
                    let r = run_method(&g, method, &budgets, threads, args.sign_symmetry)?;
                    row.terms = r.terms;
                    row.seconds = Some(r.seconds);
                    row.tait0 = Some(r.tait0);
                    row.status = "ok";
                    if let Some(h) = &r.rank_histogram {
                        row.rank_summary = h.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(";");
                    }
                    values.push((method.name(), r.tait0));
                }
                rows.push(row);
            }
        }
        if values.iter().any(|&(_, v)| v != values[0].1) {
            let detail: Vec<String> = values.iter().map(|(m, v)| format!("{m}={v}")).collect();
            disagreements.push(format!("{}: {}", family.name(), detail.join(", ")));
        }
    }
    Ok((rows, disagreements))
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    let (rows, disagreements) = sweep(args)?;
    if args.json {
        for row in &rows {
            crate::emit(format_args!("{}\n", serde_json::to_string(row).expect("row serializes")));
        }
    } else {
        let mut out = csv::Writer::from_writer(std::io::stdout());
        // rows always serialize; the only failure left is a closed pipe
        for row in &rows {
            if out.serialize(row).is_err() {
                break;
            }
        }
        let _ = out.flush();
    }
    if disagreements.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_DISAGREEMENT,
            format!("methods disagree: {}", disagreements.join("; ")),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_specs() {
        assert_eq!(parse_family_spec("k4").unwrap(), vec![Family::K4]);
        assert_eq!(
            parse_family_spec("apollonian:0..1").unwrap(),
            vec![Family::Apollonian(0), Family::Apollonian(1)]
        );
        assert_eq!(
            parse_family_spec("bipyramid:3..=5").unwrap(),
            vec![Family::Bipyramid(3), Family::Bipyramid(4), Family::Bipyramid(5)]
        );
        assert_eq!(parse_family_spec("bipyramid:6").unwrap(), vec![Family::Bipyramid(6)]);
        assert!(parse_family_spec("bipyramid").is_err());
        assert!(parse_family_spec("bipyramid:5..3").is_err());
        assert!(parse_family_spec("dodecahedron").is_err());
    }
}
