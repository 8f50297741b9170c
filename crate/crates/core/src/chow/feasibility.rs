use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// One inequality `coefs . v >= rhs`, with the nonnegative multipliers of
/// the original system that produce it.
#[derive(Debug, Clone)]
struct Row {
    coefs: Vec<BigRational>,
    rhs: BigRational,
    mult: Vec<BigRational>,
}

impl Row {
    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalize(mut self) -> Row {
        if let Some(lead) = self.coefs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) {
            for c in self.coefs.iter_mut() {
                *c /= &lead;
            }
            self.rhs /= &lead;
            for m in self.mult.iter_mut() {
                *m /= &lead;
            }
        }
        self
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub(crate) enum Feasibility {
    /// A rational point satisfying every inequality.
    Point(Vec<BigRational>),
    /// Multipliers `y >= 0` with `y^T A = 0` and `y^T b > 0`.
    Infeasible(Vec<BigRational>),
}

/// Decides `A v >= b` over the rationals by Fourier-Motzkin elimination.
pub(crate) fn solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Feasibility {
    let m = a.len();
    let vars = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Row> = (0..m)
        .map(|i| {
            let mut mult = vec![BigRational::zero(); m];
            mult[i] = BigRational::one();
            Row {
                coefs: a[i].iter().map(|c| BigRational::from_integer(c.clone())).collect(),
                rhs: BigRational::from_integer(b[i].clone()),
                mult,
            }
            .normalize()
        })
        .collect();
    rows = dedupe(rows);
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(vars + 1);
    for k in 0..vars {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for r in &rows {
            if r.coefs[k].is_positive() {
                pos.push(r);
            } else if r.coefs[k].is_negative() {
                neg.push(r);
            } else {
                keep.push(r.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                let (lp, lq) = (-&q.coefs[k], p.coefs[k].clone());
                let combine = |x: &BigRational, y: &BigRational| x * &lp + y * &lq;
                let mut coefs: Vec<BigRational> =
                    p.coefs.iter().zip(&q.coefs).map(|(x, y)| combine(x, y)).collect();
                coefs[k] = BigRational::zero();
                keep.push(
                    Row {
                        coefs,
                        rhs: combine(&p.rhs, &q.rhs),
                        mult: p.mult.iter().zip(&q.mult).map(|(x, y)| combine(x, y)).collect(),
                    }
                    .normalize(),
                );
            }
        }
        stages.push(std::mem::replace(&mut rows, dedupe(keep)));
    }
    if let Some(bad) = rows.iter().find(|r| r.rhs.is_positive()) {
        return Feasibility::Infeasible(bad.mult.clone());
    }
    let mut point = vec![BigRational::zero(); vars];
    for k in (0..vars).rev() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for r in &stages[k] {
            let c = &r.coefs[k];
            if c.is_zero() {
                continue;
            }
            let rest: BigRational = (k + 1..vars).map(|j| &r.coefs[j] * &point[j]).sum();
            let bound = (&r.rhs - rest) / c;
            if c.is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        point[k] = pick(lo, hi);
    }
    Feasibility::Point(point)
}

/// Keeps one row per coefficient vector, the one with the largest rhs.
fn dedupe(rows: Vec<Row>) -> Vec<Row> {
    let mut best: HashMap<Vec<BigRational>, Row> = HashMap::new();
    let mut order = Vec::new();
    for r in rows {
        if r.coefs.iter().all(Zero::is_zero) && !r.rhs.is_positive() {
            continue;
        }
        match best.get_mut(&r.coefs) {
            Some(old) => {
                if r.rhs > old.rhs {
                    *old = r;
                }
            }
            None => {
                order.push(r.coefs.clone());
                best.insert(r.coefs.clone(), r);
            }
        }
    }
    order.into_iter().map(|k| best.remove(&k).unwrap()).collect()
}

/// A value in `[lo, hi]`, preferring the integer of least magnitude.
fn pick(lo: Option<BigRational>, hi: Option<BigRational>) -> BigRational {
    let int = |x: BigInt| BigRational::from_integer(x);
    match (lo, hi) {
        (None, None) => BigRational::zero(),
        (Some(l), None) => {
            if l.is_negative() {
                BigRational::zero()
            } else {
                int(l.ceil().to_integer())
            }
        }
        (None, Some(h)) => {
            if h.is_positive() {
                BigRational::zero()
            } else {
                int(h.floor().to_integer())
            }
        }
        (Some(l), Some(h)) => {
            if !l.is_positive() && !h.is_negative() {
                return BigRational::zero();
            }
            let c = if l.is_positive() { l.ceil() } else { h.floor() };
            if c >= l && c <= h {
                c
            } else {
                (l + h) / BigRational::from_integer(BigInt::from(2))
            }
        }
    }
}

/// Clears denominators and divides out the common factor.
pub(crate) fn to_integers(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn feasible_box() {
        // x >= 1, -x >= -3, y - x >= 0
        let a = vec![ints(&[1, 0]), ints(&[-1, 0]), ints(&[-1, 1])];
        match solve(&a, &ints(&[1, -3, 0])) {
            Feasibility::Point(p) => {
                assert!(p[0] >= BigRational::from_integer(1.into()));
                assert!(p[1] >= p[0]);
            }
            Feasibility::Infeasible(_) => panic!("feasible system"),
        }
    }

    #[test]
    fn infeasible_pair() {
        // x >= 2, -x >= -1
        let a = vec![ints(&[1]), ints(&[-1])];
        match solve(&a, &ints(&[2, -1])) {
            Feasibility::Infeasible(y) => {
                assert!(y.iter().all(|v| !v.is_negative()));
                assert_eq!(&y[0], &y[1]);
            }
            Feasibility::Point(_) => panic!("infeasible system"),
        }
    }
}
