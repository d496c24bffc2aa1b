//! `T(n, k)`: permutations of `1..=n` with exactly `k` components.
//!
//! Fixing one bottom-to-top path (the identity coordinate order), `T(n, k)`
//! also counts the paths meeting it in exactly `k - 1` interior vertices.

use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `T(n, 1)` for `1..=n_max`, index 0 unused.
fn first_column(n_max: u32) -> Vec<BigUint> {
    let facts: Vec<BigUint> = (0..=n_max).map(factorial).collect();
    let mut t1 = vec![BigUint::zero(); n_max as usize + 1];
    for n in 1..=n_max as usize {
        // n! = sum_{k=1}^{n} T(k,1) (n-k)!
        let shadow: BigUint = (1..n).map(|k| &t1[k] * &facts[n - k]).sum();
        t1[n] = &facts[n] - shadow;
    }
    t1
}

/// Number of indecomposable permutations of size `n`.
pub fn t_n1(n: u32) -> Result<BigUint> {
    if n < 1 {
        return invalid("T(n, 1) needs n >= 1");
    }
    Ok(first_column(n).swap_remove(n as usize))
}

/// Triangle of `T(n, k)` for `1 <= k <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TnkTable {
    n_max: u32,
    // rows[n][k], with rows[0] = [1] standing for the empty permutation
    rows: Vec<Vec<BigUint>>,
}

impl TnkTable {
    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `T(n, k)`; zero outside the triangle.
    pub fn get(&self, n: u32, k: u32) -> BigUint {
        if n > self.n_max || k > n {
            return BigUint::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }

    pub fn get_ref(&self, n: u32, k: u32) -> &BigUint {
        &self.rows[n as usize][k as usize]
    }

    pub fn row(&self, n: u32) -> &[BigUint] {
        &self.rows[n as usize][1..]
    }

    pub fn covers(&self, n: u32) -> bool {
        n <= self.n_max
    }

    /// CSV with header `n,k,T` and one row per entry, `n` then `k` ascending.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,k,T")?;
        for n in 1..=self.n_max {
            for k in 1..=n {
                writeln!(out, "{n},{k},{}", self.get_ref(n, k))?;
            }
        }
        Ok(())
    }
}

/// Build the triangle with `T(n, k) = sum_{s=1}^{n-k+1} T(s, 1) T(n - s, k - 1)`.
pub fn t_table(n_max: u32) -> Result<TnkTable> {
    if n_max < 1 {
        return invalid("table needs n_max >= 1");
    }
    let t1 = first_column(n_max);
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max as usize + 1);
    rows.push(vec![BigUint::one()]);
    for n in 1..=n_max as usize {
        let mut row = vec![BigUint::zero(); n + 1];
        row[1] = t1[n].clone();
        for k in 2..=n {
            row[k] = (1..=n - k + 1).map(|s| &t1[s] * &rows[n - s][k - 1]).sum();
        }
        rows.push(row);
    }
    Ok(TnkTable { n_max, rows })
}

/// `T(n, k)` as the sum over compositions `s_1 + ... + s_k = n` of `prod T(s_i, 1)`.
///
/// Exponential in `n`; used to cross-check the recursion.
pub fn t_convolution(n: u32, k: u32) -> Result<BigUint> {
    if k < 1 || k > n {
        return invalid(format!("T({n}, {k}) is outside the triangle"));
    }
    if n > 24 {
        return invalid("composition enumeration is limited to n <= 24");
    }
    let t1 = first_column(n);
    // a composition of n into k parts <-> a (k-1)-subset of the n-1 cut points
    let mut total = BigUint::zero();
    for cuts in 0u32..(1u32 << (n - 1)) {
        if cuts.count_ones() != k - 1 {
            continue;
        }
        let mut product = BigUint::one();
        let mut last = 0;
        for pos in 1..=n {
            if pos == n || cuts >> (pos - 1) & 1 == 1 {
                product *= &t1[(pos - last) as usize];
                last = pos;
            }
        }
        total += product;
    }
    Ok(total)
}

fn check_permutation(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    if n == 0 {
        return invalid("empty permutation");
    }
    let mut seen = vec![false; n + 1];
    for &p in perm {
        if p < 1 || p > n || seen[p] {
            return invalid(format!("{perm:?} is not a permutation of 1..={n}"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Number of prefixes `p_1..p_s` that are a permutation of `1..=s`.
pub fn components(perm: &[usize]) -> Result<usize> {
    check_permutation(perm)?;
    let mut max = 0;
    Ok(perm
        .iter()
        .enumerate()
        .filter(|&(i, &p)| {
            max = max.max(p);
            max == i + 1
        })
        .count())
}

/// Number of cut points `t` with every entry before `t` larger than every entry after.
pub fn global_descents(perm: &[usize]) -> Result<usize> {
    check_permutation(perm)?;
    let n = perm.len();
    let mut min = usize::MAX;
    Ok(perm[..n - 1]
        .iter()
        .enumerate()
        .filter(|&(i, &p)| {
            min = min.min(p);
            // prefix of length t = i + 1 is exactly {n - t + 1, ..., n}
            min == n - i
        })
        .count())
}
