use crate::circuit::TruthTable;
use crate::constructions::ParityDecisionTree;
use crate::{Circuit, Result};

/// A Boolean function on a fixed number of inputs.
pub trait BoolFunction: Sync {
    fn arity(&self) -> usize;

    fn eval(&self, x: &[bool]) -> bool;

    /// Full table; implementors with a faster route override this.
    fn truth_table(&self) -> Result<TruthTable> {
        let n = self.arity();
        TruthTable::from_fn(n, |row| self.eval(&row_bits(row, n)))
    }
}

/// Input `row` as bits, `x_j` being bit `j`.
pub fn row_bits(row: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (row >> j) & 1 == 1).collect()
}

impl BoolFunction for Circuit {
    fn arity(&self) -> usize {
        self.num_inputs()
    }

    fn eval(&self, x: &[bool]) -> bool {
        self.eval_all(x)[self.output()]
    }

    fn truth_table(&self) -> Result<TruthTable> {
        Circuit::truth_table(self)
    }
}

impl BoolFunction for TruthTable {
    fn arity(&self) -> usize {
        self.num_inputs()
    }

    fn eval(&self, x: &[bool]) -> bool {
        let row = x.iter().rev().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        self.get(row)
    }

    fn truth_table(&self) -> Result<TruthTable> {
        Ok(self.clone())
    }
}

/// A closure viewed as a Boolean function of `n` inputs.
pub struct FnFunction<F> {
    n: usize,
    f: F,
}

impl<F: Fn(&[bool]) -> bool + Sync> FnFunction<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnFunction { n, f }
    }
}

impl<F: Fn(&[bool]) -> bool + Sync> BoolFunction for FnFunction<F> {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[bool]) -> bool {
        (self.f)(x)
    }
}

impl BoolFunction for ParityDecisionTree {
    fn arity(&self) -> usize {
        self.num_inputs()
    }

    fn eval(&self, x: &[bool]) -> bool {
        ParityDecisionTree::eval(self, x).expect("arity checked by caller")
    }

    fn truth_table(&self) -> Result<TruthTable> {
        ParityDecisionTree::truth_table(self)
    }
}
