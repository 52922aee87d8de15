//! Exactness of long sequences of (co)homology groups, by rank counting.

use serde::Serialize;

use crate::linalg::{induced_rank, Matrix};

/// A homology group `Z / B` inside some coordinate space.
#[derive(Clone, Debug)]
pub struct Node {
    pub label: String,
    /// Columns spanning the cycles.
    pub cycles: Matrix,
    /// Columns spanning the boundaries.
    pub boundaries: Matrix,
}

impl Node {
    pub fn new(label: impl Into<String>, cycles: Matrix, boundaries: Matrix) -> Self {
        Self { label: label.into(), cycles, boundaries }
    }

    pub fn dim(&self) -> usize {
        self.cycles.rank() - self.boundaries.rank()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeVerdict {
    pub label: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: Option<usize>,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceVerdict {
    pub nodes: Vec<NodeVerdict>,
}

impl SequenceVerdict {
    pub fn exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.dim).collect()
    }
}

/// Checks exactness of `H_0 -> H_1 -> ... -> H_k`, where `maps[i]` is a
/// chain-level map from the ambient of node `i` to that of node `i + 1`.
///
/// The first node is preceded by `0`. The last node has no outgoing map and
/// gets no verdict beyond its incoming rank, so it is reported as exact.
pub fn check_sequence(nodes: &[Node], maps: &[Matrix]) -> SequenceVerdict {
    assert_eq!(maps.len() + 1, nodes.len(), "one map between consecutive nodes");
    let ranks: Vec<usize> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| induced_rank(f, &nodes[i].cycles, &nodes[i + 1].boundaries))
        .collect();
    let out = nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let dim = node.dim();
            let rank_in = if i == 0 { 0 } else { ranks[i - 1] };
            let rank_out = ranks.get(i).copied();
            let composite_zero = if i == 0 || i + 1 >= nodes.len() {
                true
            } else {
                let through = &(&maps[i] * &maps[i - 1]) * &nodes[i - 1].cycles;
                nodes[i + 1].boundaries.spans(&through)
            };
            let exact = match rank_out {
                Some(r) => composite_zero && rank_in + r == dim,
                None => true,
            };
            NodeVerdict { label: node.label.clone(), dim, rank_in, rank_out, composite_zero, exact }
        })
        .collect();
    SequenceVerdict { nodes: out }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimeField;

    #[test]
    fn short_exact_sequence_of_spaces() {
        let f = PrimeField::new(3).unwrap();
        let whole = |n| Matrix::identity(f, n);
        let none = |n| Matrix::zeros(f, n, 0);
        let nodes = vec![
            Node::new("a", whole(1), none(1)),
            Node::new("b", whole(2), none(2)),
            Node::new("c", whole(1), none(1)),
            Node::new("end", whole(0), none(0)),
        ];
        let inc = Matrix::from_rows(f, &[vec![1], vec![0]]).unwrap();
        let proj = Matrix::from_rows(f, &[vec![0, 1]]).unwrap();
        let v = check_sequence(&nodes, &[inc.clone(), proj.clone(), Matrix::zeros(f, 0, 1)]);
        assert!(v.exact(), "{v:?}");
        let bad = check_sequence(&nodes, &[inc, Matrix::zeros(f, 1, 2), Matrix::zeros(f, 0, 1)]);
        assert!(!bad.exact());
    }
}
