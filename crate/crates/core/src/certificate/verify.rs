//! Certificate checking. Recomputes everything from the raw pairs with its own matrix-vector
//! products and its own (plain Gaussian) rank routine, so a defect in the builder's
//! elimination path cannot vouch for itself.

use std::fmt;

use crate::exactla::{FieldSpec, Matrix, Scalar};

use super::LowerBoundCertificate;

/// One reason a certificate was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    PairCount { claimed: usize, actual: usize },
    Shape(String),
    FieldMismatch { certificate: FieldSpec, pairs: FieldSpec },
    PatternViolation { u: usize, v: usize },
    CommutatorMismatch { index: usize },
    TrivialCommutator { index: usize },
    CommutatorKillsV { index: usize },
    AlphaVZero,
    AlphaZvZero { index: usize },
    GramMismatch { row: usize, col: usize },
    GramNotAlternating { row: usize, col: usize },
    GramDegenerate { rank: usize, expected: usize },
    ImageRankMismatch { claimed: usize, actual: usize },
    ImageRankBelowBound { image_rank: usize, bound: usize },
    BoundMismatch { claimed: usize, expected: usize },
    BoundExceedsDimension { bound: usize, r: usize },
}

impl Rejection {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::PairCount { .. } => "pair_count",
            Rejection::Shape(_) => "shape",
            Rejection::FieldMismatch { .. } => "field_mismatch",
            Rejection::PatternViolation { .. } => "pattern_violation",
            Rejection::CommutatorMismatch { .. } => "z_mismatch",
            Rejection::TrivialCommutator { .. } => "z_zero",
            Rejection::CommutatorKillsV { .. } => "z_v_zero",
            Rejection::AlphaVZero => "alpha_v_zero",
            Rejection::AlphaZvZero { .. } => "alpha_z_v_zero",
            Rejection::GramMismatch { .. } => "gram_mismatch",
            Rejection::GramNotAlternating { .. } => "gram_not_alternating",
            Rejection::GramDegenerate { .. } => "gram_degenerate",
            Rejection::ImageRankMismatch { .. } => "image_rank_mismatch",
            Rejection::ImageRankBelowBound { .. } => "image_rank_below_bound",
            Rejection::BoundMismatch { .. } => "bound_mismatch",
            Rejection::BoundExceedsDimension { .. } => "bound_exceeds_dimension",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::PairCount { claimed, actual } => {
                write!(f, "certificate claims n = {claimed} but {actual} pairs were given")
            }
            Rejection::Shape(msg) => write!(f, "malformed certificate: {msg}"),
            Rejection::FieldMismatch { certificate, pairs } => {
                write!(f, "certificate over {certificate}, pairs over {pairs}")
            }
            Rejection::PatternViolation { u, v } => {
                write!(f, "pairs violate the matching pattern at {{{u}, {v}}}")
            }
            Rejection::CommutatorMismatch { index } => write!(f, "z_{index} != [a_{index}, b_{index}]"),
            Rejection::TrivialCommutator { index } => write!(f, "z_{index} = 0"),
            Rejection::CommutatorKillsV { index } => write!(f, "z_{index} v = 0"),
            Rejection::AlphaVZero => write!(f, "alpha(v) = 0"),
            Rejection::AlphaZvZero { index } => write!(f, "alpha(z_{index} v) = 0"),
            Rejection::GramMismatch { row, col } => write!(f, "gram mismatch at ({row}, {col})"),
            Rejection::GramNotAlternating { row, col } => {
                write!(f, "gram not alternating at ({row}, {col})")
            }
            Rejection::GramDegenerate { rank, expected } => {
                write!(f, "alternating form has rank {rank}, expected {expected}")
            }
            Rejection::ImageRankMismatch { claimed, actual } => {
                write!(f, "image rank claimed {claimed}, recomputed {actual}")
            }
            Rejection::ImageRankBelowBound { image_rank, bound } => {
                write!(f, "image rank {image_rank} below bound {bound}")
            }
            Rejection::BoundMismatch { claimed, expected } => {
                write!(f, "bound {claimed} differs from n + 1 = {expected}")
            }
            Rejection::BoundExceedsDimension { bound, r } => {
                write!(f, "bound {bound} exceeds matrix dimension {r}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub reasons: Vec<Rejection>,
}

impl Verdict {
    fn from_reasons(reasons: Vec<Rejection>) -> Self {
        Verdict {
            valid: reasons.is_empty(),
            reasons,
        }
    }

    pub fn has(&self, code: &str) -> bool {
        self.reasons.iter().any(|r| r.code() == code)
    }
}

fn apply(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    (0..m.rows())
        .map(|i| {
            let mut acc = m.field().zero();
            for (j, x) in v.iter().enumerate() {
                acc = &acc + &(&m[(i, j)] * x);
            }
            acc
        })
        .collect()
}

fn product(a: &Matrix, b: &Matrix) -> Vec<Scalar> {
    let n = a.rows();
    let mut out = vec![a.field().zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[(k, j)];
                if !y.is_zero() {
                    out[i * n + j] = &out[i * n + j] + &(x * y);
                }
            }
        }
    }
    out
}

fn pairing(alpha: &[Scalar], w: &[Scalar]) -> Scalar {
    let mut acc = alpha[0].field().zero();
    for (a, x) in alpha.iter().zip(w) {
        acc = &acc + &(a * x);
    }
    acc
}

/// Rank by straightforward Gaussian elimination with field division.
fn plain_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv().expect("nonzero pivot");
        for i in rank + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &inv;
            for j in c..cols {
                let t = &f * &rows[rank][j];
                rows[i][j] = &rows[i][j] - &t;
            }
        }
        rank += 1;
    }
    rank
}

fn structural_checks(cert: &LowerBoundCertificate, pairs: &[(Matrix, Matrix)]) -> Vec<Rejection> {
    let mut out = Vec::new();
    let n = pairs.len();
    if cert.n != n {
        out.push(Rejection::PairCount {
            claimed: cert.n,
            actual: n,
        });
    }
    if n == 0 {
        out.push(Rejection::Shape("no pairs".into()));
        return out;
    }
    for (i, (a, b)) in pairs.iter().enumerate() {
        for m in [a, b] {
            if m.field() != cert.field {
                out.push(Rejection::FieldMismatch {
                    certificate: cert.field,
                    pairs: m.field(),
                });
                return out;
            }
            if !m.is_square() || m.rows() != cert.r {
                out.push(Rejection::Shape(format!(
                    "pair {} has a {}x{} matrix, certificate claims r = {}",
                    i + 1,
                    m.rows(),
                    m.cols(),
                    cert.r
                )));
                return out;
            }
        }
    }
    let field_ok = |xs: &[Scalar]| xs.iter().all(|s| s.field() == cert.field);
    if cert.v.len() != cert.r || !field_ok(&cert.v) {
        out.push(Rejection::Shape(format!("v must have {} entries over {}", cert.r, cert.field)));
    }
    if cert.alpha.len() != cert.r || !field_ok(&cert.alpha) {
        out.push(Rejection::Shape(format!("alpha must have {} entries over {}", cert.r, cert.field)));
    }
    if cert.z.len() != n {
        out.push(Rejection::Shape(format!("expected {n} commutators, found {}", cert.z.len())));
    } else if cert
        .z
        .iter()
        .any(|z| z.field() != cert.field || z.rows() != cert.r || z.cols() != cert.r)
    {
        out.push(Rejection::Shape("commutator of wrong shape or field".into()));
    }
    if cert.gram.field() != cert.field || cert.gram.rows() != 2 * n || cert.gram.cols() != 2 * n {
        out.push(Rejection::Shape(format!("gram must be {0}x{0} over {1}", 2 * n, cert.field)));
    }
    out
}

/// Re-derives every certificate claim from `pairs` and reports each failure found.
pub fn verify_certificate(cert: &LowerBoundCertificate, pairs: &[(Matrix, Matrix)]) -> Verdict {
    let mut reasons = structural_checks(cert, pairs);
    if !reasons.is_empty() {
        return Verdict::from_reasons(reasons);
    }
    let n = pairs.len();
    let basis: Vec<&Matrix> = pairs.iter().map(|(a, _)| a).chain(pairs.iter().map(|(_, b)| b)).collect();

    // Commutation pattern: only (a_i, b_i) may fail to commute, and those must.
    for u in 0..2 * n {
        for w in u + 1..2 * n {
            let commute = product(basis[u], basis[w]) == product(basis[w], basis[u]);
            let edge = w == u + n && u < n;
            if commute == edge {
                reasons.push(Rejection::PatternViolation { u: u + 1, v: w + 1 });
            }
        }
    }

    let zv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let (a, b) = &pairs[i];
            let ab = product(a, b);
            let ba = product(b, a);
            let z: Vec<Scalar> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
            if z.as_slice() != cert.z[i].entries() {
                reasons.push(Rejection::CommutatorMismatch { index: i + 1 });
            }
            if z.iter().all(Scalar::is_zero) {
                reasons.push(Rejection::TrivialCommutator { index: i + 1 });
            }
            // z_i v from the pairs, not from the stored z_i.
            let bv = apply(b, &cert.v);
            let av = apply(a, &cert.v);
            let abv = apply(a, &bv);
            let bav = apply(b, &av);
            abv.iter().zip(&bav).map(|(x, y)| x - y).collect()
        })
        .collect();

    for (i, w) in zv.iter().enumerate() {
        if w.iter().all(Scalar::is_zero) {
            reasons.push(Rejection::CommutatorKillsV { index: i + 1 });
        }
    }
    if pairing(&cert.alpha, &cert.v).is_zero() {
        reasons.push(Rejection::AlphaVZero);
    }
    for (i, w) in zv.iter().enumerate() {
        if pairing(&cert.alpha, w).is_zero() {
            reasons.push(Rejection::AlphaZvZero { index: i + 1 });
        }
    }

    let images: Vec<Vec<Scalar>> = basis.iter().map(|x| apply(x, &cert.v)).collect();
    let mut gram = Vec::with_capacity(2 * n);
    for i in 0..2 * n {
        let row: Vec<Scalar> = (0..2 * n)
            .map(|j| {
                let xy = apply(basis[i], &images[j]);
                let yx = apply(basis[j], &images[i]);
                &pairing(&cert.alpha, &xy) - &pairing(&cert.alpha, &yx)
            })
            .collect();
        gram.push(row);
    }
    let mismatch = (0..2 * n)
        .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
        .find(|&(i, j)| cert.gram[(i, j)] != gram[i][j]);
    if let Some((i, j)) = mismatch {
        reasons.push(Rejection::GramMismatch { row: i + 1, col: j + 1 });
    }
    let not_alternating = (0..2 * n)
        .flat_map(|i| (i..2 * n).map(move |j| (i, j)))
        .find(|&(i, j)| {
            let g = &cert.gram;
            if i == j {
                !g[(i, i)].is_zero()
            } else {
                g[(i, j)] != -&g[(j, i)]
            }
        });
    if let Some((i, j)) = not_alternating {
        reasons.push(Rejection::GramNotAlternating { row: i + 1, col: j + 1 });
    }
    let gram_rank = plain_rank(gram);
    if gram_rank != 2 * n {
        reasons.push(Rejection::GramDegenerate {
            rank: gram_rank,
            expected: 2 * n,
        });
    }

    let mut image_vectors = vec![cert.v.clone()];
    image_vectors.extend(images);
    let image_rank = plain_rank(image_vectors);
    if image_rank != cert.image_rank {
        reasons.push(Rejection::ImageRankMismatch {
            claimed: cert.image_rank,
            actual: image_rank,
        });
    }
    if image_rank < n + 1 {
        reasons.push(Rejection::ImageRankBelowBound {
            image_rank,
            bound: n + 1,
        });
    }
    if cert.concluded_bound != n + 1 {
        reasons.push(Rejection::BoundMismatch {
            claimed: cert.concluded_bound,
            expected: n + 1,
        });
    }
    if cert.concluded_bound > cert.r {
        reasons.push(Rejection::BoundExceedsDimension {
            bound: cert.concluded_bound,
            r: cert.r,
        });
    }
    Verdict::from_reasons(reasons)
}
