//! Composition series of small modules over `F_p`, the triangularizability test that goes
//! with it, and the dimension-counting inequality for direct products of non-solvable groups.
//!
//! Minimal submodules are found by spinning every nonzero vector, which is exhaustive and
//! deterministic but only practical for `p^dim ≤ 81` (dimension 6 over `F_2`, 4 over `F_3`).
//! Everything is computed over the base field: a module irreducible over `F_p` may still split
//! over an extension, and reports carry `base_field_only = true` to say so.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::exactla::{
    block_diagonal, identity, row_space_basis, span_rank, FieldSpec, LinalgError, Matrix, Vector,
};

/// Largest `p^dim` for which subspace enumeration is attempted.
pub const ENUMERATION_LIMIT: u64 = 81;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("module splitting needs a prime field, got {0}")]
    NotPrimeField(FieldSpec),
    #[error("a module needs at least one generator")]
    NoGenerators,
    #[error("generator {index} is {rows}x{cols}, expected {dim}x{dim}")]
    Shape {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("generator {0} is not invertible")]
    Singular(usize),
    #[error("p^dim = {p}^{dim} exceeds the enumeration limit {limit}", limit = ENUMERATION_LIMIT)]
    Guard { p: u64, dim: usize },
    #[error("cannot spin the zero vector")]
    ZeroVector,
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A module `F_p^dim` presented by invertible generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    field: FieldSpec,
    dim: usize,
    generators: Vec<Matrix>,
}

impl ModuleSpec {
    pub fn new(generators: Vec<Matrix>) -> Result<Self, ModuleError> {
        let first = generators.first().ok_or(ModuleError::NoGenerators)?;
        let field = first.field();
        if field.characteristic().is_none() {
            return Err(ModuleError::NotPrimeField(field));
        }
        let dim = first.rows();
        for (i, g) in generators.iter().enumerate() {
            if g.field() != field {
                return Err(LinalgError::FieldMismatch(field, g.field()).into());
            }
            if g.rows() != dim || g.cols() != dim {
                return Err(ModuleError::Shape {
                    index: i + 1,
                    rows: g.rows(),
                    cols: g.cols(),
                    dim,
                });
            }
            if !g.is_invertible() {
                return Err(ModuleError::Singular(i + 1));
            }
        }
        Ok(ModuleSpec {
            field,
            dim,
            generators,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    fn p(&self) -> u64 {
        self.field.characteristic().expect("prime field")
    }

    fn check_guard(&self) -> Result<(), ModuleError> {
        let p = self.p();
        match p.checked_pow(self.dim as u32) {
            Some(size) if size <= ENUMERATION_LIMIT => Ok(()),
            _ => Err(ModuleError::Guard { p, dim: self.dim }),
        }
    }

    /// The same module in the basis given by the columns of `basis`.
    pub fn conjugate_by(&self, basis: &Matrix) -> Result<Self, ModuleError> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.conjugate_by(basis))
            .collect::<Result<Vec<_>, _>>()?;
        ModuleSpec::new(gens)
    }
}

/// Reduced echelon basis of the smallest generator-stable subspace containing `vector`.
pub fn spin(vector: &[crate::exactla::Scalar], spec: &ModuleSpec) -> Result<Vec<Vector>, ModuleError> {
    if vector.len() != spec.dim {
        return Err(LinalgError::LengthMismatch {
            expected: spec.dim,
            found: vector.len(),
        }
        .into());
    }
    if vector.iter().all(|s| s.is_zero()) {
        return Err(ModuleError::ZeroVector);
    }
    let mut basis: Vec<Vector> = vec![vector.to_vec()];
    let mut queue: VecDeque<Vector> = VecDeque::from([vector.to_vec()]);
    while let Some(w) = queue.pop_front() {
        if basis.len() == spec.dim {
            break;
        }
        for g in &spec.generators {
            let image = g.mul_vec(&w)?;
            basis.push(image.clone());
            if span_rank(&basis)? == basis.len() {
                queue.push_back(image);
            } else {
                basis.pop();
            }
        }
    }
    Ok(row_space_basis(&basis)?)
}

/// Nonzero vectors with leading entry 1, in base-`p` counter order.
fn normalized_vectors(field: FieldSpec, dim: usize) -> impl Iterator<Item = Vector> {
    let p = field.characteristic().expect("prime field");
    let total = p.pow(dim as u32);
    (1..total).filter_map(move |t| {
        let mut digits = vec![0u64; dim];
        let mut x = t;
        for d in digits.iter_mut().rev() {
            *d = x % p;
            x /= p;
        }
        let lead = digits.iter().find(|&&d| d != 0)?;
        (*lead == 1).then(|| digits.iter().map(|&d| field.from_i64(d as i64)).collect())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalSubspace {
    /// A proper nonzero invariant subspace of least dimension (reduced echelon basis).
    Proper(Vec<Vector>),
    Irreducible,
}

/// Spins every normalized nonzero vector and keeps the smallest proper result; ties go to the
/// first seed in counter order.
pub fn minimal_invariant_subspace(spec: &ModuleSpec) -> Result<MinimalSubspace, ModuleError> {
    spec.check_guard()?;
    let mut best: Option<Vec<Vector>> = None;
    for seed in normalized_vectors(spec.field, spec.dim) {
        let sub = spin(&seed, spec)?;
        if sub.len() < spec.dim && best.as_ref().is_none_or(|b| sub.len() < b.len()) {
            let done = sub.len() == 1;
            best = Some(sub);
            if done {
                break;
            }
        }
    }
    Ok(best.map_or(MinimalSubspace::Irreducible, MinimalSubspace::Proper))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub field: FieldSpec,
    pub dim: usize,
    /// Dimensions of the composition factors, bottom of the series first.
    pub factor_dims: Vec<usize>,
    /// Columns are a basis adapted to the series: the first `series[j]` columns span the
    /// `j`-th submodule.
    pub flag_basis: Matrix,
    /// `0 = d_0 < d_1 < … < d_s = dim`.
    pub series: Vec<usize>,
    /// Factors are irreducible over the base field only.
    pub base_field_only: bool,
}

impl CompositionReport {
    pub fn is_triangularizable(&self) -> bool {
        self.factor_dims.iter().all(|&d| d == 1)
    }

    /// Whether conjugating each generator by `flag_basis` gives block-upper-triangular
    /// matrices with diagonal blocks of sizes `factor_dims`.
    pub fn flag_is_valid(&self, spec: &ModuleSpec) -> Result<bool, ModuleError> {
        for g in spec.generators() {
            let c = g.conjugate_by(&self.flag_basis)?;
            if !is_block_upper_triangular(&c, &self.factor_dims) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// True iff every entry below the diagonal blocks of the given sizes is zero.
pub fn is_block_upper_triangular(m: &Matrix, block_sizes: &[usize]) -> bool {
    if !m.is_square() || block_sizes.iter().sum::<usize>() != m.rows() {
        return false;
    }
    let mut block_of = Vec::with_capacity(m.rows());
    for (b, &size) in block_sizes.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| block_of[i] <= block_of[j] || m[(i, j)].is_zero()))
}

fn split(spec: &ModuleSpec) -> Result<(Vec<usize>, Matrix), ModuleError> {
    let d = spec.dim;
    let sub = match minimal_invariant_subspace(spec)? {
        MinimalSubspace::Irreducible => return Ok((vec![d], identity(d, spec.field))),
        MinimalSubspace::Proper(sub) => sub,
    };
    let k = sub.len();
    // Extend the echelon basis by the standard vectors at its non-pivot columns.
    let pivots: Vec<usize> = sub
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let mut columns = sub.clone();
    for j in (0..d).filter(|j| !pivots.contains(j)) {
        let mut e = vec![spec.field.zero(); d];
        e[j] = spec.field.one();
        columns.push(e);
    }
    let basis = Matrix::from_columns(spec.field, &columns)?;

    let mut quotient = Vec::with_capacity(spec.generators.len());
    for g in &spec.generators {
        let c = g.conjugate_by(&basis)?;
        if !c.submatrix(k, 0, d - k, k).is_zero() {
            return Err(ModuleError::Internal("spun subspace is not invariant".into()));
        }
        quotient.push(c.submatrix(k, k, d - k, d - k));
    }
    let (rest, rest_flag) = split(&ModuleSpec::new(quotient)?)?;
    let flag = basis.mul(&block_diagonal(&[identity(k, spec.field), rest_flag])?)?;
    let mut dims = vec![k];
    dims.extend(rest);
    Ok((dims, flag))
}

/// Composition factor dimensions by repeatedly splitting off a minimal submodule and passing
/// to the quotient.
pub fn composition_factor_dims(spec: &ModuleSpec) -> Result<CompositionReport, ModuleError> {
    spec.check_guard()?;
    let (factor_dims, flag_basis) = split(spec)?;
    let mut series = vec![0];
    for d in &factor_dims {
        series.push(series.last().unwrap() + d);
    }
    Ok(CompositionReport {
        field: spec.field,
        dim: spec.dim,
        factor_dims,
        flag_basis,
        series,
        base_field_only: true,
    })
}

/// True iff all composition factors over the base field are one-dimensional, i.e. some basis
/// makes every generator upper triangular.
pub fn is_triangularizable(spec: &ModuleSpec) -> Result<bool, ModuleError> {
    Ok(composition_factor_dims(spec)?.is_triangularizable())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("the table has no rows")]
    Empty,
    #[error("row {0} has no entries")]
    EmptyRow(usize),
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) is not positive")]
    NonPositive { row: usize, col: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountVerdict {
    Satisfied,
    PreconditionFailed,
}

/// Values of `Σ_j Π_i d_ji ≥ Σ_j 2^|S_j| ≥ Σ_j 2|S_j| ≥ 2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCheck {
    pub verdict: CountVerdict,
    /// `S_j = {i : d_ji ≥ 2}`, 1-based column indices.
    pub sets: Vec<Vec<usize>>,
    /// Columns in no `S_j`; nonempty iff the precondition failed.
    pub uncovered: Vec<usize>,
    pub sum_of_products: BigUint,
    pub sum_of_powers: BigUint,
    pub sum_of_doubled_sizes: BigUint,
    pub two_n: BigUint,
    /// The three inequalities of the chain, left to right.
    pub holds: [bool; 3],
}

/// Checks the counting chain on a `t × n` table whose entry `(j, i)` is the dimension of the
/// `i`-th factor's constituent in the `j`-th composition factor.
pub fn theorem3_count_check(dims: &[Vec<u64>]) -> Result<CountCheck, CountError> {
    let n = dims.first().ok_or(CountError::Empty)?.len();
    for (j, row) in dims.iter().enumerate() {
        if row.is_empty() {
            return Err(CountError::EmptyRow(j + 1));
        }
        if row.len() != n {
            return Err(CountError::Ragged {
                row: j + 1,
                expected: n,
                found: row.len(),
            });
        }
        if let Some(i) = row.iter().position(|&d| d == 0) {
            return Err(CountError::NonPositive { row: j + 1, col: i + 1 });
        }
    }
    let sets: Vec<Vec<usize>> = dims
        .iter()
        .map(|row| (0..n).filter(|&i| row[i] >= 2).map(|i| i + 1).collect())
        .collect();
    let uncovered: Vec<usize> = (1..=n)
        .filter(|i| !sets.iter().any(|s| s.contains(i)))
        .collect();
    let sum_of_products: BigUint = dims
        .iter()
        .map(|row| row.iter().fold(BigUint::one(), |acc, &d| acc * d))
        .sum();
    let sum_of_powers: BigUint = sets.iter().map(|s| BigUint::one() << s.len()).sum();
    let sum_of_doubled_sizes: BigUint = sets.iter().map(|s| BigUint::from(2 * s.len())).sum();
    let two_n = BigUint::from(2 * n);
    let holds = [
        sum_of_products >= sum_of_powers,
        sum_of_powers >= sum_of_doubled_sizes,
        sum_of_doubled_sizes >= two_n,
    ];
    let verdict = if uncovered.is_empty() {
        CountVerdict::Satisfied
    } else {
        CountVerdict::PreconditionFailed
    };
    Ok(CountCheck {
        verdict,
        sets,
        uncovered,
        sum_of_products,
        sum_of_powers,
        sum_of_doubled_sizes,
        two_n,
        holds,
    })
}
