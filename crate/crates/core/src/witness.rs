//! Explicit constructions meeting the lower bounds: the `(n+1)`-dimensional realization of
//! the matching graph, and block-diagonal embeddings of direct products.

use thiserror::Error;

use crate::commgraph::{Assignment, GraphError};
use crate::exactla::{block_diagonal, elementary_matrix, identity, FieldSpec, LinalgError, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("n must be at least 1")]
    ZeroPairs,
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("lambda lives in {found}, expected {expected}")]
    LambdaField { expected: FieldSpec, found: FieldSpec },
    #[error("factor {0} has no generators")]
    EmptyFactor(usize),
    #[error("factor {factor}: generator {index} is not a square matrix of the factor's dimension")]
    FactorDimension { factor: usize, index: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_lambda(n: usize, lambda: &Scalar, field: FieldSpec) -> Result<(), WitnessError> {
    if n == 0 {
        return Err(WitnessError::ZeroPairs);
    }
    if lambda.field() != field {
        return Err(WitnessError::LambdaField {
            expected: field,
            found: lambda.field(),
        });
    }
    if lambda.is_zero() {
        return Err(WitnessError::ZeroLambda);
    }
    Ok(())
}

/// `a_i = I + E_{1,i+1}` and `b_i = I − λ E_{i+1,i+1}` in `M_{n+1}(k)`, returned in the order
/// `a_1..a_n, b_1..b_n` to line up with [`crate::commgraph::matching_graph`].
///
/// Every `[a_i, b_i] = −λ E_{1,i+1}` is nonzero and all other pairs commute.
pub fn sharp_witness(n: usize, lambda: &Scalar, field: FieldSpec) -> Result<Assignment, WitnessError> {
    check_lambda(n, lambda, field)?;
    let r = n + 1;
    let id = identity(r, field);
    let mut mats = Vec::with_capacity(2 * n);
    for i in 1..=n {
        mats.push(id.add(&elementary_matrix(r, 1, i + 1, field)?)?);
    }
    for i in 1..=n {
        let e = elementary_matrix(r, i + 1, i + 1, field)?;
        mats.push(id.sub(&e.scale(lambda)?)?);
    }
    let labels = (1..=n)
        .map(|i| format!("a_{i}"))
        .chain((1..=n).map(|i| format!("b_{i}")))
        .collect();
    Ok(Assignment::new(mats)?.with_labels(labels)?)
}

/// Whether every matrix of [`sharp_witness`] is invertible, decided by determinants.
/// The answer is `λ ≠ 1`: `det a_i = 1` and `det b_i = 1 − λ`.
pub fn witness_invertibility(n: usize, lambda: &Scalar, field: FieldSpec) -> Result<bool, WitnessError> {
    let w = sharp_witness(n, lambda, field)?;
    for m in w.matrices() {
        if m.determinant()?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Embeds each factor's generators into block-diagonal matrices of size `Σ d_i`: generator `g`
/// of factor `i` goes to `diag(I_{d_1}, …, g, …, I_{d_n})` with `g` in slot `i`. Images of
/// different factors commute. Output is grouped per factor, in input order.
pub fn product_block_embedding(factors: &[Vec<Matrix>]) -> Result<Vec<Vec<Matrix>>, WitnessError> {
    let mut dims = Vec::with_capacity(factors.len());
    let mut field = None;
    for (fi, gens) in factors.iter().enumerate() {
        let first = gens.first().ok_or(WitnessError::EmptyFactor(fi + 1))?;
        let d = first.rows();
        for (gi, g) in gens.iter().enumerate() {
            if !g.is_square() || g.rows() != d {
                return Err(WitnessError::FactorDimension {
                    factor: fi + 1,
                    index: gi + 1,
                });
            }
            match field {
                None => field = Some(g.field()),
                Some(f) if f != g.field() => {
                    return Err(LinalgError::FieldMismatch(f, g.field()).into());
                }
                Some(_) => {}
            }
        }
        dims.push(d);
    }
    let Some(field) = field else {
        return Err(LinalgError::Empty("product_block_embedding").into());
    };
    let mut out = Vec::with_capacity(factors.len());
    for (slot, gens) in factors.iter().enumerate() {
        let images = gens
            .iter()
            .map(|g| {
                let blocks: Vec<Matrix> = dims
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| if i == slot { g.clone() } else { identity(d, field) })
                    .collect();
                block_diagonal(&blocks)
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(images);
    }
    Ok(out)
}

/// The image of a tuple `(g_1, …, g_n)` of the direct product, `diag(g_1, …, g_n)`.
pub fn embed_product_element(components: &[Matrix]) -> Result<Matrix, WitnessError> {
    Ok(block_diagonal(components)?)
}
