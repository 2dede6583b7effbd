//! Hermetic smoke checks behind `commrep selftest`.

use serde::Serialize;

use commrep_core::certificate::{build_certificate, pairs_from_assignment, verify_certificate};
use commrep_core::commgraph::{matching_graph, realizes};
use commrep_core::json::{self, AssignmentDoc};
use commrep_core::search::{min_realization_dim, ExclusionMethod, SearchOptions, Status};
use commrep_core::witness::sharp_witness;
use commrep_core::{FieldSpec, Matrix};

#[derive(Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub passed: bool,
    pub checks: Vec<Check>,
}

type Outcome = Result<String, String>;

fn witness_round_trips() -> Outcome {
    let q = FieldSpec::Rationals;
    let lambda = q.from_i64(2);
    for n in 1..=10 {
        let w = sharp_witness(n, &lambda, q).map_err(|e| e.to_string())?;
        let text = json::render(&AssignmentDoc::from(&w));
        let back = json::parse::<AssignmentDoc>(&text)
            .and_then(|d| d.to_assignment())
            .map_err(|e| format!("n = {n}: {e}"))?;
        if back != w || json::render(&AssignmentDoc::from(&back)) != text {
            return Err(format!("n = {n}: document does not round-trip"));
        }
        let g = matching_graph(n).map_err(|e| e.to_string())?;
        if !realizes(&w, &g).map_err(|e| e.to_string())?.realizes() {
            return Err(format!("n = {n}: witness does not realize the matching graph"));
        }
    }
    Ok("n = 1..10".into())
}

fn certificate_trace() -> Outcome {
    let q = FieldSpec::Rationals;
    let w = sharp_witness(1, &q.from_i64(2), q).map_err(|e| e.to_string())?;
    let pairs = pairs_from_assignment(&w).ok_or("witness is not a list of pairs")?;
    let cert = build_certificate(&pairs).map_err(|e| e.to_string())?;
    let m = |rows: &[&[i64]]| Matrix::from_ints(q, rows).expect("literal matrix");
    let expected = [
        ("z_1", cert.z == vec![m(&[&[0, -2], &[0, 0]])]),
        ("v", cert.v == vec![q.from_i64(0), q.from_i64(1)]),
        ("alpha", cert.alpha == vec![q.from_i64(1), q.from_i64(1)]),
        ("gram", cert.gram == m(&[&[0, -2], &[2, 0]])),
        ("image_rank", cert.image_rank == 2),
        ("bound", cert.concluded_bound == 2),
    ];
    if let Some((what, _)) = expected.iter().find(|(_, ok)| !ok) {
        return Err(format!("unexpected {what}"));
    }
    let verdict = verify_certificate(&cert, &pairs);
    if !verdict.valid {
        return Err(format!("verifier rejected: {:?}", verdict.reasons));
    }
    Ok("bound 2".into())
}

fn matching_search() -> Outcome {
    let f2 = FieldSpec::prime(2).map_err(|e| e.to_string())?;
    let g = matching_graph(2).map_err(|e| e.to_string())?;
    let hint = sharp_witness(2, &f2.one(), f2).map_err(|e| e.to_string())?;
    let opts = SearchOptions {
        budget: 100_000_000,
        ..SearchOptions::default()
    };
    let report = min_realization_dim(&g, f2, 3, &opts, Some(&hint)).map_err(|e| e.to_string())?;
    let exhaustive = report
        .exclusions
        .iter()
        .all(|e| e.method == ExclusionMethod::Exhaustive);
    if report.status != Status::Exact || report.lower != 3 || report.upper != Some(3) || !exhaustive {
        return Err(format!("got {report}"));
    }
    Ok(format!("exact 3 after {} nodes", report.nodes_explored))
}

pub fn run() -> Report {
    let checks: Vec<Check> = [
        ("witness_round_trips", witness_round_trips as fn() -> Outcome),
        ("certificate_trace_n1", certificate_trace),
        ("search_matching_2_f2", matching_search),
    ]
    .into_iter()
    .map(|(name, f)| {
        let outcome = f();
        Check {
            name,
            passed: outcome.is_ok(),
            detail: outcome.unwrap_or_else(|e| e),
        }
    })
    .collect();
    Report {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
