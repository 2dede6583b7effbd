use commrep_core::certificate::{build_certificate, pairs_from_assignment, verify_certificate, CertificateError};
use commrep_core::commgraph::{matching_graph, realizes, Assignment};
use commrep_core::json::{self, AssignmentDoc, CertificateDoc, SearchReportDoc};
use commrep_core::search::{min_realization_dim, Mode, SearchOptions, Status};
use commrep_core::witness::sharp_witness;
use commrep_core::{FieldSpec, Matrix};

#[test]
fn witness_certificate_json_round_trip() {
    let q = FieldSpec::Rationals;
    for n in [1, 3, 7] {
        let w = sharp_witness(n, &q.parse_scalar("-5/3").unwrap(), q).unwrap();
        let w_text = json::render(&AssignmentDoc::from(&w));
        let w_back = json::parse::<AssignmentDoc>(&w_text).unwrap().to_assignment().unwrap();
        let pairs = pairs_from_assignment(&w_back).unwrap();
        let cert = build_certificate(&pairs).unwrap();
        let c_text = json::render(&CertificateDoc::from(&cert));
        let c_back = json::parse::<CertificateDoc>(&c_text).unwrap().to_certificate().unwrap();
        assert!(verify_certificate(&c_back, &pairs).valid);
        assert_eq!(c_back.concluded_bound, n + 1);
    }
}

#[test]
fn certificates_over_prime_fields() {
    let f7 = FieldSpec::prime(7).unwrap();
    let w = sharp_witness(2, &f7.from_i64(3), f7).unwrap();
    let pairs = pairs_from_assignment(&w).unwrap();
    let cert = build_certificate(&pairs).unwrap();
    assert!(verify_certificate(&cert, &pairs).valid);

    // p = 5 is not above 2n + 1 = 5.
    let f5 = FieldSpec::prime(5).unwrap();
    let w = sharp_witness(2, &f5.from_i64(3), f5).unwrap();
    assert!(matches!(
        build_certificate(&pairs_from_assignment(&w).unwrap()),
        Err(CertificateError::FieldTooSmall { p: 5, .. })
    ));
}

#[test]
fn search_witness_realizes_and_certifies() {
    let f2 = FieldSpec::prime(2).unwrap();
    let g = matching_graph(1).unwrap();
    let report = min_realization_dim(&g, f2, 3, &SearchOptions::default(), None).unwrap();
    assert_eq!(report.status, Status::Exact);
    let w = report.witness.clone().unwrap();
    assert!(realizes(&w, &g).unwrap().realizes());
    assert_eq!(w.dim(), 2);

    let text = json::render(&SearchReportDoc::from(&report));
    assert_eq!(text, json::render(&SearchReportDoc::from(&report)));
    assert!(text.contains("\"status\": \"exact\""));
}

#[test]
fn invertible_mode_respects_the_hint_check() {
    let f3 = FieldSpec::prime(3).unwrap();
    let g = matching_graph(1).unwrap();
    let opts = SearchOptions {
        mode: Mode::InvertibleOnly,
        ..SearchOptions::default()
    };
    // λ = 1 makes b_1 singular, so the hint is refused in invertible mode.
    let singular = sharp_witness(1, &f3.one(), f3).unwrap();
    assert!(min_realization_dim(&g, f3, 1, &opts, Some(&singular)).is_err());
    let hint = sharp_witness(1, &f3.from_i64(2), f3).unwrap();
    let report = min_realization_dim(&g, f3, 3, &opts, Some(&hint)).unwrap();
    assert_eq!((report.lower, report.upper), (2, Some(2)));
    for m in report.witness.unwrap().matrices() {
        assert!(m.is_invertible());
    }
}

#[test]
fn pattern_violations_are_refused() {
    let q = FieldSpec::Rationals;
    let a = Matrix::from_ints(q, &[&[1, 1], &[0, 1]]).unwrap();
    let assignment = Assignment::new(vec![a.clone(), a]).unwrap();
    let pairs = pairs_from_assignment(&assignment).unwrap();
    match build_certificate(&pairs) {
        Err(CertificateError::PatternViolation(v)) => assert_eq!((v[0].u, v[0].v), (1, 2)),
        other => panic!("{other:?}"),
    }
}
