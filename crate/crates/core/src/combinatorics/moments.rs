//! Exact moment formulas for the house-of-cards family and site percolation.
//!
//! Every `f64` parameter is a dyadic rational, so all formulas are evaluated
//! in exact rational arithmetic and only rounded when reported.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::tnk::{factorial, TnkTable};
use crate::error::{invalid, Result};

/// An exact non-negative moment value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MomentValue(BigRational);

impl MomentValue {
    pub fn zero() -> Self {
        MomentValue(BigRational::zero())
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<BigRational> for MomentValue {
    fn from(x: BigRational) -> Self {
        MomentValue(x)
    }
}

impl std::ops::Add for MomentValue {
    type Output = MomentValue;
    fn add(self, rhs: Self) -> Self {
        MomentValue(self.0 + rhs.0)
    }
}

impl std::iter::Sum for MomentValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(MomentValue::zero(), |a, b| a + b)
    }
}

impl fmt::Display for MomentValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Serialize for MomentValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite parameter")
}

fn probability(name: &str, x: f64) -> Result<BigRational> {
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("{name} = {x} outside [0, 1]"));
    }
    Ok(exact(x))
}

fn int(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn central_binomial(m: u32) -> BigUint {
    let fm = factorial(m);
    factorial(2 * m) / (&fm * &fm)
}

/// Expected number of accessible paths in alpha-HoC: `n (1 - alpha)^(n - 1)`.
pub fn expected_paths(n: u32, alpha: f64) -> Result<MomentValue> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    let survive = BigRational::one() - probability("alpha", alpha)?;
    Ok(MomentValue(int(BigUint::from(n)) * survive.pow(n as i32 - 1)))
}

/// `E[X_i X_j]` for two paths sharing `k - 1` interior vertices and diverging once:
/// `C(2n - 2k, n - k) (1 - alpha)^(2n - k - 1) / (2n - k - 1)!`.
pub fn pair_term(n: u32, k: u32, alpha: f64) -> Result<MomentValue> {
    if k < 1 || k > n {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    let survive = BigRational::one() - probability("alpha", alpha)?;
    let interior = 2 * n - k - 1;
    let orders = int(central_binomial(n - k));
    Ok(MomentValue(
        orders * survive.pow(interior as i32) / int(factorial(interior)),
    ))
}

/// The summands `n! T(n, k) pair_term(n, k, alpha)` for `k = 1..=n`.
pub fn second_moment_terms(n: u32, alpha: f64, tnk: &TnkTable) -> Result<Vec<MomentValue>> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    if !tnk.covers(n) {
        return invalid(format!("T table stops at n = {}, need {n}", tnk.n_max()));
    }
    let n_fact = factorial(n);
    (1..=n)
        .map(|k| {
            let weight = int(&n_fact * tnk.get_ref(n, k));
            Ok(MomentValue(weight * pair_term(n, k, alpha)?.0))
        })
        .collect()
}

/// Upper bound on `E[X^2]` in alpha-HoC.
pub fn second_moment_bound(n: u32, alpha: f64, tnk: &TnkTable) -> Result<MomentValue> {
    Ok(second_moment_terms(n, alpha, tnk)?.into_iter().sum())
}

/// The second-moment bound split at `k = (1 - delta) n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSplit {
    /// Terms with `k <= (1 - delta) n`.
    pub s1: MomentValue,
    /// Terms with `k > (1 - delta) n`.
    pub s2: MomentValue,
}

pub fn s1_s2_split(n: u32, alpha: f64, delta: f64, tnk: &TnkTable) -> Result<MomentSplit> {
    if !(delta > 0.0 && delta < 1.0) {
        return invalid(format!("delta = {delta} must lie in (0, 1)"));
    }
    let cut = (BigRational::one() - exact(delta)) * int(BigUint::from(n));
    let (mut s1, mut s2) = (MomentValue::zero(), MomentValue::zero());
    for (i, term) in second_moment_terms(n, alpha, tnk)?.into_iter().enumerate() {
        let k = int(BigUint::from(i + 1));
        if k <= cut {
            s1 = s1 + term;
        } else {
            s2 = s2 + term;
        }
    }
    Ok(MomentSplit { s1, s2 })
}

/// Expected number of intact paths under site percolation: `n! epsilon^(n - 1)`.
pub fn percolation_expected(n: u32, epsilon: f64) -> Result<MomentValue> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    let eps = probability("epsilon", epsilon)?;
    Ok(MomentValue(int(factorial(n)) * eps.pow(n as i32 - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::t_table;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn expected_path_examples() {
        for n in 1..=20 {
            assert_eq!(expected_paths(n, 0.0).unwrap().to_f64(), n as f64);
            let zero = expected_paths(n, 1.0).unwrap();
            if n > 1 {
                assert!(zero.is_zero());
            }
        }
        assert_eq!(expected_paths(3, 0.5).unwrap().ratio(), &rat(3, 4));
        assert!(expected_paths(3, 1.5).is_err());
    }

    #[test]
    fn pair_term_examples() {
        // k = n: a single path, (1-alpha)^(n-1)/(n-1)!
        assert_eq!(pair_term(4, 4, 0.5).unwrap().ratio(), &rat(1, 8 * 6));
        assert_eq!(pair_term(3, 1, 0.0).unwrap().ratio(), &rat(6, 24));
        assert_eq!(pair_term(3, 1, 0.0).unwrap().to_f64(), 0.25);
        for k in 1..=5 {
            assert!(pair_term(5, k, 1.0).unwrap().is_zero());
        }
        assert!(pair_term(3, 0, 0.1).is_err());
        assert!(pair_term(3, 4, 0.1).is_err());
    }

    #[test]
    fn bound_edges() {
        let table = t_table(14).unwrap();
        assert!(second_moment_bound(6, 1.0, &table).unwrap().is_zero());
        assert!(second_moment_bound(15, 0.1, &table).is_err());
    }

    #[test]
    fn split_partitions_the_sum() {
        let table = t_table(14).unwrap();
        for n in 1..=14 {
            for (alpha, delta) in [(0.0, 0.5), (0.1, 0.25), (0.37, 0.9)] {
                let split = s1_s2_split(n, alpha, delta, &table).unwrap();
                let total = second_moment_bound(n, alpha, &table).unwrap();
                assert_eq!(split.s1.clone() + split.s2.clone(), total);
            }
        }
        assert!(s1_s2_split(5, 0.1, 0.0, &table).is_err());
        assert!(s1_s2_split(5, 0.1, 1.0, &table).is_err());
    }

    #[test]
    fn split_boundary_at_half() {
        let table = t_table(10).unwrap();
        let split = s1_s2_split(10, 0.0, 0.5, &table).unwrap();
        let terms = second_moment_terms(10, 0.0, &table).unwrap();
        let s1: MomentValue = terms[..5].iter().cloned().sum();
        assert_eq!(split.s1, s1);
    }

    #[test]
    fn percolation_examples() {
        assert_eq!(percolation_expected(3, 1.0).unwrap().to_f64(), 6.0);
        assert!(percolation_expected(4, 0.0).unwrap().is_zero());
        assert_eq!(percolation_expected(4, 0.5).unwrap().to_f64(), 3.0);
        assert!((percolation_expected(10, 0.5).unwrap().to_f64() - 7087.5).abs() < 1e-9);
    }
}
