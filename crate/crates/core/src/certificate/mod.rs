//! Lower-bound certificates for matrix tuples with the matching-graph commutation pattern.
//!
//! Given pairs `(a_i, b_i)` in `M_r(k)` where only `a_i` and `b_i` fail to commute, the
//! builder finds a vector `v` with `[a_i, b_i] v ≠ 0` for all `i`, a covector `α` with
//! `α(v) ≠ 0` and `α([a_i, b_i] v) ≠ 0`, and records the Gram matrix of the alternating form
//! `β(x, y) = α([x, y] v)` on `a_1..a_n, b_1..b_n`. The form has rank `2n`, the set
//! `{X : Xv = 0}` together with `I` is isotropic, and so `span{v, a_i v, b_i v}` has dimension
//! at least `n + 1`, forcing `r ≥ n + 1`.
//!
//! [`verify_certificate`] recomputes every claim from the raw pairs.

mod verify;

use thiserror::Error;

use crate::commgraph::{matching_graph, realizes, Assignment, GraphError, Violation};
use crate::exactla::{commutator, dot, span_rank, FieldSpec, LinalgError, Matrix, Scalar, Vector};

pub use verify::{verify_certificate, Rejection, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("no pairs given")]
    NoPairs,
    #[error("input does not realize the matching graph: {} violating pair(s), first {{{}, {}}}", .0.len(), .0[0].u, .0[0].v)]
    PatternViolation(Vec<Violation>),
    #[error("field F_{p} too small: need p > {bound}")]
    FieldTooSmall { p: u64, bound: usize },
    #[error("constraint {0} is the zero matrix")]
    ZeroConstraint(usize),
    #[error("constraint {index} has {cols} columns, expected {dim}")]
    ConstraintShape { index: usize, cols: usize, dim: usize },
    #[error("proof step failed: {0}")]
    ProofStepFailed(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Witness bundle forcing `r ≥ n + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundCertificate {
    pub field: FieldSpec,
    pub n: usize,
    pub r: usize,
    pub v: Vector,
    pub alpha: Vector,
    /// `z_i = [a_i, b_i]`.
    pub z: Vec<Matrix>,
    /// `gram[i][j] = α([x_i, x_j] v)` on the basis `(a_1..a_n, b_1..b_n)`.
    pub gram: Matrix,
    /// `dim span{v, a_1 v, …, a_n v, b_1 v, …, b_n v}`.
    pub image_rank: usize,
    pub concluded_bound: usize,
}

/// Deterministic choice of a vector `v ∈ k^dim` with `M v ≠ 0` for every constraint `M`.
///
/// Returns the lexicographically first point of the grid `{0, 1, …, c}^dim` (last coordinate
/// varying fastest) that works, where `c` is the number of constraints. A nonzero `M` vanishes
/// on at most `(c+1)^(dim-1)` grid points, so `c` constraints cannot cover the whole grid.
/// Over `F_p` the grid values must be distinct, which needs `p > c`.
///
/// The search fixes coordinates left to right and takes the smallest value that still admits a
/// completion; a prefix admits one iff every constraint either has a nonzero column beyond the
/// prefix or is already nonzero on the prefix. No backtracking is needed.
pub fn find_avoiding_vector(
    constraints: &[Matrix],
    dim: usize,
    field: FieldSpec,
) -> Result<Vector, CertificateError> {
    let c = constraints.len();
    if let Some(p) = field.characteristic() {
        if p as usize <= c {
            return Err(CertificateError::FieldTooSmall { p, bound: c });
        }
    }
    // Column index past which each constraint is identically zero.
    let mut reach = Vec::with_capacity(c);
    for (index, m) in constraints.iter().enumerate() {
        if m.field() != field {
            return Err(LinalgError::FieldMismatch(field, m.field()).into());
        }
        if m.cols() != dim {
            return Err(CertificateError::ConstraintShape {
                index: index + 1,
                cols: m.cols(),
                dim,
            });
        }
        let last = (0..dim)
            .rev()
            .find(|&j| (0..m.rows()).any(|i| !m[(i, j)].is_zero()))
            .ok_or(CertificateError::ZeroConstraint(index + 1))?;
        reach.push(last + 1);
    }

    let grid: Vec<Scalar> = (0..=c as i64).map(|t| field.from_i64(t)).collect();
    let mut partial: Vec<Vector> = constraints
        .iter()
        .map(|m| vec![field.zero(); m.rows()])
        .collect();
    let mut v = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut chosen = None;
        for t in &grid {
            let trial: Vec<Vector> = constraints
                .iter()
                .zip(&partial)
                .map(|(m, s)| {
                    if t.is_zero() {
                        s.clone()
                    } else {
                        s.iter()
                            .enumerate()
                            .map(|(i, x)| x + &(&m[(i, k)] * t))
                            .collect()
                    }
                })
                .collect();
            let feasible = reach
                .iter()
                .zip(&trial)
                .all(|(&reach, s)| reach > k + 1 || s.iter().any(|x| !x.is_zero()));
            if feasible {
                chosen = Some((t.clone(), trial));
                break;
            }
        }
        let (t, trial) = chosen.ok_or_else(|| {
            CertificateError::ProofStepFailed(format!("no admissible value for coordinate {}", k + 1))
        })?;
        v.push(t);
        partial = trial;
    }
    Ok(v)
}

/// Runs the constructive lower-bound argument on `pairs = [(a_1, b_1), …, (a_n, b_n)]`.
pub fn build_certificate(pairs: &[(Matrix, Matrix)]) -> Result<LowerBoundCertificate, CertificateError> {
    let n = pairs.len();
    if n == 0 {
        return Err(CertificateError::NoPairs);
    }
    let basis: Vec<Matrix> = pairs
        .iter()
        .map(|(a, _)| a.clone())
        .chain(pairs.iter().map(|(_, b)| b.clone()))
        .collect();
    let assignment = Assignment::new(basis)?;
    let check = realizes(&assignment, &matching_graph(n)?)?;
    if !check.realizes() {
        return Err(CertificateError::PatternViolation(check.violations));
    }
    let field = assignment.field();
    let r = assignment.dim();
    if let Some(p) = field.characteristic() {
        if p as usize <= 2 * n + 1 {
            return Err(CertificateError::FieldTooSmall { p, bound: 2 * n + 1 });
        }
    }
    let basis = assignment.matrices();

    let z = pairs
        .iter()
        .map(|(a, b)| commutator(a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let v = find_avoiding_vector(&z, r, field)?;

    let mut dual = vec![v.clone()];
    for zi in &z {
        dual.push(zi.mul_vec(&v)?);
    }
    let dual_constraints = dual
        .iter()
        .map(|w| Matrix::from_rows(field, vec![w.clone()]))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = find_avoiding_vector(&dual_constraints, r, field)?;

    let images = basis
        .iter()
        .map(|x| x.mul_vec(&v))
        .collect::<Result<Vec<_>, _>>()?;
    let mut gram_rows = Vec::with_capacity(2 * n);
    for (i, xi) in basis.iter().enumerate() {
        let mut row = Vec::with_capacity(2 * n);
        for (j, xj) in basis.iter().enumerate() {
            // [x_i, x_j] v = x_i (x_j v) − x_j (x_i v)
            let ij = xi.mul_vec(&images[j])?;
            let ji = xj.mul_vec(&images[i])?;
            row.push(&dot(&alpha, &ij)? - &dot(&alpha, &ji)?);
        }
        gram_rows.push(row);
    }
    let gram = Matrix::from_rows(field, gram_rows)?;
    if gram.rank() != 2 * n {
        return Err(CertificateError::ProofStepFailed(format!(
            "alternating form has rank {} < {}",
            gram.rank(),
            2 * n
        )));
    }

    let mut image_vectors = vec![v.clone()];
    image_vectors.extend(images);
    let image_rank = span_rank(&image_vectors)?;
    if image_rank < n + 1 {
        return Err(CertificateError::ProofStepFailed(format!(
            "image rank {image_rank} below n + 1 = {}",
            n + 1
        )));
    }

    Ok(LowerBoundCertificate {
        field,
        n,
        r,
        v,
        alpha,
        z,
        gram,
        image_rank,
        concluded_bound: n + 1,
    })
}

/// Splits `a_1..a_n, b_1..b_n` into pairs. Fails on an odd count.
pub fn pairs_from_assignment(assignment: &Assignment) -> Option<Vec<(Matrix, Matrix)>> {
    let m = assignment.matrices();
    if m.len() % 2 != 0 {
        return None;
    }
    let n = m.len() / 2;
    Some((0..n).map(|i| (m[i].clone(), m[n + i].clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{identity, kernel_basis};
    use crate::witness::sharp_witness;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn ints(field: FieldSpec, v: &[i64]) -> Vector {
        v.iter().map(|&x| field.from_i64(x)).collect()
    }

    fn witness_pairs(n: usize, lambda: i64, field: FieldSpec) -> Vec<(Matrix, Matrix)> {
        pairs_from_assignment(&sharp_witness(n, &field.from_i64(lambda), field).unwrap()).unwrap()
    }

    #[test]
    fn avoiding_vector_examples() {
        let m = Matrix::from_ints(q(), &[&[0, -2], &[0, 0]]).unwrap();
        assert_eq!(find_avoiding_vector(&[m], 2, q()).unwrap(), ints(q(), &[0, 1]));
        assert_eq!(
            find_avoiding_vector(&[identity(2, q())], 2, q()).unwrap(),
            ints(q(), &[0, 1])
        );
        assert_eq!(
            find_avoiding_vector(&[identity(4, q())], 4, q()).unwrap(),
            ints(q(), &[0, 0, 0, 1])
        );
        let f2 = FieldSpec::prime(2).unwrap();
        let id = identity(2, f2);
        assert_eq!(
            find_avoiding_vector(&[id.clone(), id.clone(), id], 2, f2),
            Err(CertificateError::FieldTooSmall { p: 2, bound: 3 })
        );
        assert_eq!(
            find_avoiding_vector(&[Matrix::zeros(q(), 2, 2)], 2, q()),
            Err(CertificateError::ZeroConstraint(1))
        );
    }

    /// Brute-force lex-first search over the grid, for cross-checking the greedy search.
    fn brute_force(constraints: &[Matrix], dim: usize, field: FieldSpec) -> Vector {
        let c = constraints.len() as u64;
        let total = (c + 1).pow(dim as u32);
        for idx in 0..total {
            let mut digits = vec![0i64; dim];
            let mut x = idx;
            for d in digits.iter_mut().rev() {
                *d = (x % (c + 1)) as i64;
                x /= c + 1;
            }
            let v = ints(field, &digits);
            if constraints
                .iter()
                .all(|m| m.mul_vec(&v).unwrap().iter().any(|s| !s.is_zero()))
            {
                return v;
            }
        }
        panic!("grid exhausted");
    }

    #[test]
    fn greedy_matches_brute_force_on_small_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f7 = FieldSpec::prime(7).unwrap();
        for trial in 0..300 {
            let field = if trial % 2 == 0 { q() } else { f7 };
            let dim = rng.gen_range(1..=3);
            let count = rng.gen_range(1..=4);
            let mut cons = Vec::new();
            while cons.len() < count {
                let rows = rng.gen_range(1..=2);
                let m = Matrix::from_fn(field, rows, dim, |_, _| {
                    // sparse entries so that kernels are large
                    if rng.gen_bool(0.6) {
                        field.zero()
                    } else {
                        field.from_i64(rng.gen_range(-2..=2))
                    }
                });
                if !m.is_zero() {
                    cons.push(m);
                }
            }
            assert_eq!(
                find_avoiding_vector(&cons, dim, field).unwrap(),
                brute_force(&cons, dim, field),
                "constraints {cons:?}"
            );
        }
    }

    #[test]
    fn n1_trace() {
        let cert = build_certificate(&witness_pairs(1, 2, q())).unwrap();
        assert_eq!(cert.z, vec![Matrix::from_ints(q(), &[&[0, -2], &[0, 0]]).unwrap()]);
        assert_eq!(cert.v, ints(q(), &[0, 1]));
        assert_eq!(cert.alpha, ints(q(), &[1, 1]));
        assert_eq!(cert.gram, Matrix::from_ints(q(), &[&[0, -2], &[2, 0]]).unwrap());
        assert_eq!(cert.image_rank, 2);
        assert_eq!(cert.concluded_bound, 2);
        assert_eq!(cert.r, 2);
    }

    #[test]
    fn sharp_for_small_n() {
        for n in 1..=6 {
            let cert = build_certificate(&witness_pairs(n, 2, q())).unwrap();
            assert_eq!(cert.concluded_bound, n + 1);
            assert_eq!(cert.r, n + 1);
            assert_eq!(cert.image_rank, n + 1);
        }
    }

    #[test]
    fn gram_has_checkerboard_form() {
        let n = 4;
        let pairs = witness_pairs(n, 3, q());
        let cert = build_certificate(&pairs).unwrap();
        for i in 0..2 * n {
            for j in 0..2 * n {
                let g = &cert.gram[(i, j)];
                if j == i + n && i < n {
                    let zv = cert.z[i].mul_vec(&cert.v).unwrap();
                    let expect = dot(&cert.alpha, &zv).unwrap();
                    assert!(!expect.is_zero());
                    assert_eq!(g, &expect);
                    assert_eq!(cert.gram[(j, i)], -&expect);
                } else if !(i == j + n && j < n) {
                    assert!(g.is_zero(), "gram[{i}][{j}] = {g}");
                }
            }
        }
    }

    #[test]
    fn kernel_of_evaluation_is_isotropic() {
        // Elements X, Y of span{I, a_i, b_i} with Xv = Yv = 0 satisfy α([X, Y] v) = 0.
        let n = 3;
        let pairs = witness_pairs(n, 2, q());
        let cert = build_certificate(&pairs).unwrap();
        let mut basis = vec![identity(n + 1, q())];
        basis.extend(pairs.iter().map(|(a, _)| a.clone()));
        basis.extend(pairs.iter().map(|(_, b)| b.clone()));
        let columns: Vec<Vector> = basis.iter().map(|x| x.mul_vec(&cert.v).unwrap()).collect();
        let eval = Matrix::from_columns(q(), &columns).unwrap();
        let kernel = kernel_basis(&eval);
        assert_eq!(kernel.len(), 2 * n + 1 - cert.image_rank);
        let combine = |coeffs: &Vector| {
            basis
                .iter()
                .zip(coeffs)
                .fold(Matrix::zeros(q(), n + 1, n + 1), |acc, (x, c)| {
                    acc.add(&x.scale(c).unwrap()).unwrap()
                })
        };
        let elems: Vec<Matrix> = kernel.iter().map(combine).collect();
        for x in &elems {
            assert!(x.mul_vec(&cert.v).unwrap().iter().all(Scalar::is_zero));
            for y in &elems {
                let w = commutator(x, y).unwrap().mul_vec(&cert.v).unwrap();
                assert!(dot(&cert.alpha, &w).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn deterministic() {
        let pairs = witness_pairs(5, 2, q());
        assert_eq!(build_certificate(&pairs).unwrap(), build_certificate(&pairs).unwrap());
    }

    #[test]
    fn identity_pair_violates_pattern() {
        let id = identity(2, q());
        match build_certificate(&[(id.clone(), id)]) {
            Err(CertificateError::PatternViolation(v)) => assert_eq!((v[0].u, v[0].v), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_prime_fields_refused() {
        let f5 = FieldSpec::prime(5).unwrap();
        // p = 5 needs p > 2n + 1, so n = 2 is refused and n = 1 accepted.
        assert_eq!(
            build_certificate(&witness_pairs(2, 2, f5)),
            Err(CertificateError::FieldTooSmall { p: 5, bound: 5 })
        );
        let cert = build_certificate(&witness_pairs(1, 2, f5)).unwrap();
        assert_eq!(cert.concluded_bound, 2);
        let f7 = FieldSpec::prime(7).unwrap();
        assert_eq!(build_certificate(&witness_pairs(2, 3, f7)).unwrap().concluded_bound, 3);
    }

    #[test]
    fn works_on_conjugated_and_padded_witnesses() {
        // Conjugating by a dense invertible matrix changes v and α but not the bound; padding
        // with a zero block raises r without changing the bound.
        let n = 2;
        let pairs = witness_pairs(n, 2, q());
        let g = Matrix::from_ints(q(), &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]).unwrap();
        let conj: Vec<_> = pairs
            .iter()
            .map(|(a, b)| (a.conjugate_by(&g).unwrap(), b.conjugate_by(&g).unwrap()))
            .collect();
        let cert = build_certificate(&conj).unwrap();
        assert_eq!(cert.concluded_bound, 3);
        assert!(verify_certificate(&cert, &conj).valid);

        let pad = |m: &Matrix| {
            crate::exactla::block_diagonal(&[m.clone(), Matrix::zeros(q(), 2, 2)]).unwrap()
        };
        let padded: Vec<_> = pairs.iter().map(|(a, b)| (pad(a), pad(b))).collect();
        let cert = build_certificate(&padded).unwrap();
        assert_eq!((cert.r, cert.concluded_bound), (5, 3));
        assert!(cert.image_rank >= 3);
        assert!(verify_certificate(&cert, &padded).valid);
    }
}
