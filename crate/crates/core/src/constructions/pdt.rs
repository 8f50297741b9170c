use crate::circuit::TruthTable;
use crate::constructions::AndreevLayout;
use crate::{Error, Result};

/// A node of a [`ParityDecisionTree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PdtNode {
    /// Query the parity of `subset`; continue at `zero` or `one`.
    Query {
        subset: Vec<usize>,
        zero: usize,
        one: usize,
    },
    Leaf(bool),
}

/// A decision tree whose internal nodes query parities of input subsets.
/// Node 0 is the root; children always have larger indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityDecisionTree {
    num_inputs: usize,
    nodes: Vec<PdtNode>,
}

impl ParityDecisionTree {
    pub fn new(num_inputs: usize, nodes: Vec<PdtNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::structural("decision tree without nodes"));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let PdtNode::Query { subset, zero, one } = node {
                if subset.is_empty() {
                    return Err(Error::structural(format!("node {i} queries the empty set")));
                }
                if let Some(j) = subset.iter().find(|&&j| j >= num_inputs) {
                    return Err(Error::structural(format!("node {i} queries x{j} of {num_inputs}")));
                }
                if *zero <= i || *one <= i || *zero >= nodes.len() || *one >= nodes.len() {
                    return Err(Error::structural(format!("node {i} has an invalid child")));
                }
            }
        }
        Ok(ParityDecisionTree { num_inputs, nodes })
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn nodes(&self) -> &[PdtNode] {
        &self.nodes
    }

    /// Longest number of queries on a root-to-leaf path.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            if let PdtNode::Query { zero, one, .. } = &self.nodes[i] {
                depth[i] = 1 + depth[*zero].max(depth[*one]);
            }
        }
        depth[0]
    }

    /// Indices of the nodes visited on `input`, ending at a leaf.
    pub fn path(&self, input: &[bool]) -> Vec<usize> {
        let mut at = 0;
        let mut path = vec![0];
        while let PdtNode::Query { subset, zero, one } = &self.nodes[at] {
            let p = subset.iter().filter(|&&j| input[j]).count() % 2 == 1;
            at = if p { *one } else { *zero };
            path.push(at);
        }
        path
    }

    pub fn eval(&self, input: &[bool]) -> Result<bool> {
        if input.len() != self.num_inputs {
            return Err(Error::Dimension {
                what: "decision tree input length",
                expected: self.num_inputs,
                found: input.len(),
            });
        }
        match &self.nodes[*self.path(input).last().unwrap()] {
            PdtNode::Leaf(b) => Ok(*b),
            PdtNode::Query { .. } => unreachable!(),
        }
    }

    /// Evaluates on row index `row` (bit `j` is `x_j`); `n <= 64`.
    pub fn eval_row(&self, row: u64) -> bool {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                PdtNode::Leaf(b) => return *b,
                PdtNode::Query { subset, zero, one } => {
                    let p = subset.iter().filter(|&&j| (row >> j) & 1 == 1).count() % 2 == 1;
                    at = if p { *one } else { *zero };
                }
            }
        }
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.num_inputs, |row| self.eval_row(row))
    }
}

/// Parity decision tree of depth `k + 1` for `A_n`: the block parities
/// are queried one by one (most significant first), then the selected
/// data bit as a singleton.
pub fn andreev_pdt(n: usize) -> Result<ParityDecisionTree> {
    let layout = AndreevLayout::new(n)?;
    let mut nodes = Vec::new();
    build(&layout, 0, 0, &mut nodes);
    ParityDecisionTree::new(n, nodes)
}

fn build(layout: &AndreevLayout, level: usize, prefix: usize, nodes: &mut Vec<PdtNode>) -> usize {
    let here = nodes.len();
    if level == layout.k() {
        nodes.push(PdtNode::Query {
            subset: vec![prefix],
            zero: here + 1,
            one: here + 2,
        });
        nodes.push(PdtNode::Leaf(false));
        nodes.push(PdtNode::Leaf(true));
        return here;
    }
    nodes.push(PdtNode::Leaf(false));
    let subset: Vec<usize> = layout.blocks()[level].clone().collect();
    let zero = build(layout, level + 1, prefix << 1, nodes);
    let one = build(layout, level + 1, (prefix << 1) | 1, nodes);
    nodes[here] = PdtNode::Query { subset, zero, one };
    here
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_and_equivalence() {
        for n in [4usize, 8, 16] {
            let t = andreev_pdt(n).unwrap();
            let k = n.trailing_zeros() as usize - 1;
            assert_eq!(t.depth(), k + 1);
            assert!(t.depth() <= n.trailing_zeros() as usize);
            let layout = AndreevLayout::new(n).unwrap();
            for row in 0..1u64 << n {
                assert_eq!(t.eval_row(row), layout.eval_row(row));
            }
        }
    }

    #[test]
    fn zero_address_queries_first_data_bit() {
        let t = andreev_pdt(8).unwrap();
        let path = t.path(&[false; 8]);
        assert_eq!(path.len(), 4);
        match &t.nodes()[path[2]] {
            PdtNode::Query { subset, .. } => assert_eq!(subset, &vec![0]),
            other => panic!("expected a query, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_trees() {
        assert!(ParityDecisionTree::new(2, vec![]).is_err());
        let q = |subset: Vec<usize>| PdtNode::Query { subset, zero: 1, one: 2 };
        let leaves = [PdtNode::Leaf(false), PdtNode::Leaf(true)];
        assert!(ParityDecisionTree::new(2, [vec![q(vec![])], leaves.to_vec()].concat()).is_err());
        assert!(ParityDecisionTree::new(2, [vec![q(vec![5])], leaves.to_vec()].concat()).is_err());
        assert!(ParityDecisionTree::new(2, [vec![q(vec![0, 1])], leaves.to_vec()].concat()).is_ok());
    }
}
