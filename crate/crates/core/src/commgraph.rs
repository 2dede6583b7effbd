//! Simple graphs whose edges mean "these two matrices do not commute", and the check that a
//! matrix assignment realizes one.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exactla::{sparse_commute, FieldSpec, LinalgError, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {vertex} outside 1..={vertex_count}")]
    EndpointOutOfRange { vertex: usize, vertex_count: usize },
    #[error("assignment has {found} matrices but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("assignment is empty")]
    EmptyAssignment,
    #[error("assignment matrix {index} is {rows}x{cols}, expected {dim}x{dim}")]
    NonUniformDimension {
        index: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("assignment matrix {index} is over {found}, expected {expected}")]
    NonUniformField {
        index: usize,
        expected: FieldSpec,
        found: FieldSpec,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A simple graph on vertices `1..=m`. Edges are stored as ordered pairs `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CommGraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > vertex_count {
                    return Err(GraphError::EndpointOutOfRange {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(CommGraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Result<Self, GraphError> {
        CommGraph::new(vertex_count, [])
    }

    /// The path `1 – 2 – … – m`.
    pub fn path(vertex_count: usize) -> Result<Self, GraphError> {
        CommGraph::new(vertex_count, (1..vertex_count).map(|i| (i, i + 1)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Edges as `(u, v)` with `u < v`, 1-based, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adjacency test on 1-based vertices.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// `Some(n)` when every vertex has degree exactly one, so the graph is a perfect matching
    /// with `n` edges.
    pub fn perfect_matching_size(&self) -> Option<usize> {
        let mut degree = vec![0usize; self.vertex_count + 1];
        for &(u, v) in &self.edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        degree[1..]
            .iter()
            .all(|&d| d == 1)
            .then_some(self.edges.len())
    }

    /// Applies the vertex relabelling `v ↦ perm[v - 1]` (1-based images).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        if perm.len() != self.vertex_count {
            return Err(GraphError::LengthMismatch {
                expected: self.vertex_count,
                found: perm.len(),
            });
        }
        CommGraph::new(
            self.vertex_count,
            self.edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }
}

/// The graph on `2n` vertices `a_1..a_n, b_1..b_n` (vertex `a_i` is `i`, vertex `b_i` is
/// `n + i`) whose only edges are `{a_i, b_i}`.
pub fn matching_graph(n: usize) -> Result<CommGraph, GraphError> {
    CommGraph::new(2 * n, (1..=n).map(|i| (i, n + i)))
}

/// One matrix per vertex, all square of the same dimension over the same field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    matrices: Vec<Matrix>,
    labels: Option<Vec<String>>,
}

impl Assignment {
    pub fn new(matrices: Vec<Matrix>) -> Result<Self, GraphError> {
        let first = matrices.first().ok_or(GraphError::EmptyAssignment)?;
        let (dim, field) = (first.rows(), first.field());
        for (index, m) in matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(GraphError::NonUniformDimension {
                    index: index + 1,
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
            if m.field() != field {
                return Err(GraphError::NonUniformField {
                    index: index + 1,
                    expected: field,
                    found: m.field(),
                });
            }
        }
        Ok(Assignment {
            matrices,
            labels: None,
        })
    }

    /// Attaches human-readable vertex names, one per matrix.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.matrices.len() {
            return Err(GraphError::LengthMismatch {
                expected: self.matrices.len(),
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn graph_dim(&self) -> usize {
        self.matrices.len()
    }

    /// Common matrix dimension `r`.
    pub fn dim(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrices[0].field()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn into_matrices(self) -> Vec<Matrix> {
        self.matrices
    }

    /// Reorders so that new vertex `perm[v - 1]` receives the matrix of old vertex `v`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        if perm.len() != self.matrices.len() {
            return Err(GraphError::LengthMismatch {
                expected: self.matrices.len(),
                found: perm.len(),
            });
        }
        let mut out = self.matrices.clone();
        for (old, &new) in perm.iter().enumerate() {
            out[new - 1] = self.matrices[old].clone();
        }
        Assignment::new(out)
    }
}

/// Whether a pair of vertices should commute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Commute,
    NonCommute,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Commute => "commute",
            Relation::NonCommute => "non_commute",
        }
    }
}

/// A vertex pair whose commutator contradicts the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub expected: Relation,
    pub observed: Relation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub violations: Vec<Violation>,
}

impl Realization {
    pub fn realizes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every pair `u < v`: the commutator must be nonzero exactly on edges. All violating
/// pairs are reported, in lexicographic order.
pub fn realizes(assignment: &Assignment, graph: &CommGraph) -> Result<Realization, GraphError> {
    let m = graph.vertex_count();
    if assignment.graph_dim() != m {
        return Err(GraphError::LengthMismatch {
            expected: m,
            found: assignment.graph_dim(),
        });
    }
    let field = assignment.field();
    let sparse: Vec<_> = assignment.matrices().iter().map(Matrix::sparse_rows).collect();
    let mut violations = Vec::new();
    for u in 1..=m {
        for v in u + 1..=m {
            let observed = if sparse_commute(field, &sparse[u - 1], &sparse[v - 1]) {
                Relation::Commute
            } else {
                Relation::NonCommute
            };
            let expected = if graph.has_edge(u, v) {
                Relation::NonCommute
            } else {
                Relation::Commute
            };
            if observed != expected {
                violations.push(Violation {
                    u,
                    v,
                    expected,
                    observed,
                });
            }
        }
    }
    Ok(Realization { violations })
}
