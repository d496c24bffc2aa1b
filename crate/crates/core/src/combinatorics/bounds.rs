//! Empirical constants for the upper bounds on `T(n, k)`.
//!
//! Each bound has the shape `T(n, k) <= g(n, k, c)` with an unspecified
//! constant `c`; the report gives the smallest `c` that makes the bound hold
//! on every entry of a finite table.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::tnk::{factorial, TnkTable};
use crate::error::{invalid, Result};

/// Natural logarithm of a big integer, accurate to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_factorial(m: u32) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// Smallest constants found on the table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n_max: u32,
    /// `T(n, 1) <= n!` on every row.
    pub first_column_below_factorial: bool,
    /// Min `c` with `T(n, k) <= k (n-k+1)! exp(c (k-1)/(n-k+1))` for `k >= 2`.
    pub small_k_constant: f64,
    /// Min `C_l` with `T(n, n-l) <= C_l n^l`, for `l = 1, 2, 3`.
    pub fixed_l_constants: Vec<(u32, f64)>,
    /// Min `c` with `T(n, n-l) <= c (l+1) ((n+2l)/5)^l`.
    pub large_k_constant: f64,
    /// Min `c'` with `n! (1 - c'/n) <= T(n, 1)`.
    pub first_column_deficit: f64,
}

pub fn bound_diagnostics(table: &TnkTable) -> Result<BoundReport> {
    bound_diagnostics_to(table, table.n_max())
}

/// Constants fitted to rows `1..=n_max` of `table` only.
pub fn bound_diagnostics_to(table: &TnkTable, n_max: u32) -> Result<BoundReport> {
    if n_max < 2 {
        return invalid("bound diagnostics need n_max >= 2");
    }
    if !table.covers(n_max) {
        return invalid(format!("T table stops at n = {}, need {n_max}", table.n_max()));
    }
    let mut first_ok = true;
    let mut small_k = f64::NEG_INFINITY;
    let mut large_k = f64::NEG_INFINITY;
    let mut deficit = f64::NEG_INFINITY;
    let mut fixed_l = vec![f64::NEG_INFINITY; 3];

    for n in 1..=n_max {
        let n_fact = factorial(n);
        let t1 = table.get_ref(n, 1);
        first_ok &= *t1 <= n_fact;
        // c' >= n (n! - T(n,1)) / n!
        let gap = BigRational::new((&n_fact - t1).into(), n_fact.clone().into());
        let c_prime = gap * BigRational::from_integer(n.into());
        deficit = deficit.max(c_prime.to_f64().unwrap_or(f64::INFINITY));

        for k in 1..=n {
            let ln_t = ln_big(table.get_ref(n, k));
            let free = n - k + 1;
            if k >= 2 {
                let slack = ln_t - (k as f64).ln() - ln_factorial(free);
                small_k = small_k.max(slack * free as f64 / (k - 1) as f64);
            }
            let l = n - k;
            let shape = ((l + 1) as f64).ln() + l as f64 * ((n + 2 * l) as f64 / 5.0).ln();
            large_k = large_k.max((ln_t - shape).exp());
            if (1..=3).contains(&l) {
                let c = (ln_t - l as f64 * (n as f64).ln()).exp();
                let slot = &mut fixed_l[l as usize - 1];
                *slot = slot.max(c);
            }
        }
    }
    Ok(BoundReport {
        n_max,
        first_column_below_factorial: first_ok,
        small_k_constant: small_k,
        fixed_l_constants: fixed_l
            .into_iter()
            .enumerate()
            .filter(|(_, c)| c.is_finite())
            .map(|(i, c)| (i as u32 + 1, c))
            .collect(),
        large_k_constant: large_k,
        first_column_deficit: deficit.max(0.0),
    })
}

/// Exact check of `T(n, 1) <= n!` for every row; the `k = 1` case of the small-k bound.
pub fn first_column_bounded(table: &TnkTable) -> bool {
    (1..=table.n_max()).all(|n| *table.get_ref(n, 1) <= factorial(n) && *table.get_ref(n, 1) >= BigUint::one())
}
