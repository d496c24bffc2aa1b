//! Counting accessible paths from the bottom to the top vertex.
//!
//! A path `v0 -> v1 -> ... -> vn` is accessible when every vertex on it is
//! present and fitness strictly increases at each step. The counter is a
//! dynamic program over vertices in a topological order:
//! `c(v0) = 1`, `c(v) = sum of c(u)` over present predecessors `u` with
//! `f(u) < f(v)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::hypercube::{layer_iter, BitIter};
use crate::landscape::{is_absent, Landscape, ModelSpec};
use crate::par::{map_indexed, ExecMode};

/// Largest dimension accepted by the permutation-enumerating oracle.
pub const BRUTEFORCE_MAX_DIMENSION: u32 = 8;

/// Exact number of paths. Values that fit in 128 bits are always stored inline.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathCount {
    Small(u128),
    Big(BigUint),
}

impl PathCount {
    pub const ZERO: PathCount = PathCount::Small(0);

    pub fn is_zero(&self) -> bool {
        matches!(self, PathCount::Small(0))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            PathCount::Small(x) => *x as f64,
            PathCount::Big(x) => x.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            PathCount::Small(x) => BigUint::from(*x),
            PathCount::Big(x) => x.clone(),
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self {
            PathCount::Small(x) => Some(*x),
            PathCount::Big(_) => None,
        }
    }
}

impl From<u128> for PathCount {
    fn from(x: u128) -> Self {
        PathCount::Small(x)
    }
}

impl From<u64> for PathCount {
    fn from(x: u64) -> Self {
        PathCount::Small(x.into())
    }
}

impl From<BigUint> for PathCount {
    fn from(x: BigUint) -> Self {
        match x.to_u128() {
            Some(small) => PathCount::Small(small),
            None => PathCount::Big(x),
        }
    }
}

impl Ord for PathCount {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PathCount::Small(a), PathCount::Small(b)) => a.cmp(b),
            (PathCount::Small(_), PathCount::Big(_)) => Ordering::Less,
            (PathCount::Big(_), PathCount::Small(_)) => Ordering::Greater,
            (PathCount::Big(a), PathCount::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PathCount {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PathCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathCount::Small(x) => write!(f, "{x}"),
            PathCount::Big(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for PathCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accumulator used by the dynamic program.
trait Tally: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&mut self, other: &Self);
    fn into_count(self) -> PathCount;
}

impl Tally for u64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn add(&mut self, other: &Self) {
        *self += *other;
    }
    fn into_count(self) -> PathCount {
        self.into()
    }
}

impl Tally for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    #[inline]
    fn add(&mut self, other: &Self) {
        *self += *other;
    }
    fn into_count(self) -> PathCount {
        self.into()
    }
}

impl Tally for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigUint::from(1u8)
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn into_count(self) -> PathCount {
        self.into()
    }
}

/// `n!` fits in 64 bits up to here.
const U64_DIMENSION: u32 = 20;
/// `n!` fits in 128 bits up to here.
const U128_DIMENSION: u32 = 34;

fn check_endpoints(land: &Landscape) -> Result<()> {
    if is_absent(land.bottom()) || is_absent(land.top()) {
        return invalid("the bottom and top vertices must be present");
    }
    Ok(())
}

/// Counts paths through vertices accepted by `keep` along edges accepted by `step`.
fn count_paths<T, K, S>(n: u32, keep: K, step: S, mode: ExecMode) -> PathCount
where
    T: Tally,
    K: Fn(u64) -> bool + Sync + Send,
    S: Fn(u64, u64) -> bool + Sync + Send,
{
    let size = 1usize << n;
    let mut counts: Vec<T> = vec![T::zero(); size];
    counts[0] = T::one();
    let pull = |counts: &[T], v: u64| -> T {
        let mut acc = T::zero();
        if keep(v) {
            for bit in BitIter(v) {
                let u = v ^ bit;
                if (u == 0 || keep(u)) && step(u, v) {
                    acc.add(&counts[u as usize]);
                }
            }
        }
        acc
    };
    if mode.is_parallel() {
        for k in 1..=n {
            let nodes: Vec<u64> = layer_iter(n, k).expect("valid layer").map(|v| v.0).collect();
            let values = map_indexed(mode, nodes.len(), |i| pull(&counts, nodes[i]));
            for (v, value) in nodes.into_iter().zip(values) {
                counts[v as usize] = value;
            }
        }
    } else {
        // numeric order visits every predecessor first
        for v in 1..size as u64 {
            counts[v as usize] = pull(&counts, v);
        }
    }
    counts.pop().expect("non-empty").into_count()
}

fn count_with_width<K, S>(n: u32, keep: K, step: S, mode: ExecMode) -> PathCount
where
    K: Fn(u64) -> bool + Sync + Send,
    S: Fn(u64, u64) -> bool + Sync + Send,
{
    if n <= U64_DIMENSION {
        count_paths::<u64, _, _>(n, keep, step, mode)
    } else if n <= U128_DIMENSION {
        count_paths::<u128, _, _>(n, keep, step, mode)
    } else {
        count_paths::<BigUint, _, _>(n, keep, step, mode)
    }
}

/// Exact number of accessible paths from the bottom to the top vertex.
pub fn count_accessible(land: &Landscape) -> Result<PathCount> {
    count_accessible_with(land, ExecMode::Sequential)
}

/// As [`count_accessible`], optionally splitting each layer across threads.
pub fn count_accessible_with(land: &Landscape, mode: ExecMode) -> Result<PathCount> {
    check_endpoints(land)?;
    let f = land.fitness();
    Ok(count_with_width(
        land.n(),
        |v| !is_absent(f[v as usize]),
        |u, v| f[u as usize] < f[v as usize],
        mode,
    ))
}

/// Whether at least one accessible path exists; depth-first search with early exit.
pub fn exists_accessible(land: &Landscape) -> Result<bool> {
    check_endpoints(land)?;
    let n = land.n();
    let f = land.fitness();
    let top = land.top_index();
    if n == 0 {
        return Ok(true);
    }
    let mut seen = vec![0u64; (1usize << n).div_ceil(64)];
    let mut stack = vec![0u64];
    while let Some(u) = stack.pop() {
        let fu = f[u as usize];
        for bit in BitIter(!u & top) {
            let w = u | bit;
            let fw = f[w as usize];
            if is_absent(fw) || fw <= fu {
                continue;
            }
            if w == top {
                return Ok(true);
            }
            let (word, mask) = ((w >> 6) as usize, 1u64 << (w & 63));
            if seen[word] & mask == 0 {
                seen[word] |= mask;
                stack.push(w);
            }
        }
    }
    Ok(false)
}

/// Reference counter that walks all `n!` coordinate orders.
pub fn count_accessible_bruteforce(land: &Landscape) -> Result<PathCount> {
    let n = land.n();
    if n > BRUTEFORCE_MAX_DIMENSION {
        return Err(Error::ResourceLimit(format!(
            "brute-force enumeration is capped at n = {BRUTEFORCE_MAX_DIMENSION}"
        )));
    }
    check_endpoints(land)?;
    let f = land.fitness();
    let mut order: Vec<u32> = (0..n).collect();
    let mut total = 0u64;
    let mut visit = |order: &[u32]| {
        let mut v = 0u64;
        for &coord in order {
            let w = v | 1 << coord;
            let (fv, fw) = (f[v as usize], f[w as usize]);
            if is_absent(fw) || fw <= fv {
                return;
            }
            v = w;
        }
        total += 1;
    };
    // Heap's algorithm
    let mut c = vec![0usize; n as usize];
    visit(&order);
    let mut i = 0;
    while i < n as usize {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            order.swap(j, i);
            visit(&order);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total.into())
}

/// A closed real interval; `lo > hi` denotes the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Certified lower bound on the RMF path count.
///
/// Counts paths whose `i`-th interior vertex has noise in `intervals[i - 1]`.
/// The chain conditions below make every such path accessible:
/// `eta(v0) - theta < lo_1`, `lo_{i+1} > hi_i - theta` and
/// `eta(v1) > hi_{n-1} - theta`. Noise is recovered as `f(v) - theta * layer(v)`.
pub fn layer_interval_count(land: &Landscape, intervals: &[Interval]) -> Result<PathCount> {
    let ModelSpec::Rmf { theta, .. } = *land.spec() else {
        return invalid("layer intervals apply to rough Mount Fuji landscapes");
    };
    check_endpoints(land)?;
    let n = land.n();
    if intervals.len() != n as usize - 1 {
        return invalid(format!("expected {} intervals, got {}", n - 1, intervals.len()));
    }
    if intervals.iter().any(|i| i.lo.is_nan() || i.hi.is_nan()) {
        return invalid("interval bounds must not be NaN");
    }
    let f = land.fitness();
    let noise = |v: u64| f[v as usize] - theta * v.count_ones() as f64;
    let (eta_bottom, eta_top) = (noise(0), noise(land.top_index()));

    if intervals.iter().any(Interval::is_empty) {
        return Ok(PathCount::ZERO);
    }
    // chain conditions, with the endpoints as degenerate intervals
    let mut prev_hi = eta_bottom;
    for (i, iv) in intervals.iter().enumerate() {
        if !(iv.lo > prev_hi - theta) {
            return invalid(format!("chain condition fails entering layer {}", i + 1));
        }
        prev_hi = iv.hi;
    }
    if !(eta_top > prev_hi - theta) {
        return invalid("chain condition fails entering the top vertex");
    }

    let top = land.top_index();
    Ok(count_with_width(
        n,
        |v| {
            v == top || {
                let fv = f[v as usize];
                !is_absent(fv) && intervals[v.count_ones() as usize - 1].contains(noise(v))
            }
        },
        |_, _| true,
        ExecMode::Sequential,
    ))
}

/// Largest bottom fitness at which an accessible path still exists.
///
/// Only the bottom vertex's fitness is ignored; a path exists with bottom
/// fitness `alpha` exactly when this returns `Some(a)` with `a > alpha`.
/// Evaluating one landscape at a grid of `alpha` values through this threshold
/// is the coupled sweep.
pub fn critical_bottom_fitness(land: &Landscape) -> Result<Option<f64>> {
    if is_absent(land.top()) {
        return invalid("the top vertex must be present");
    }
    let f = land.fitness();
    let top = land.top_index();
    let size = top as usize + 1;
    let mut reaches = vec![false; size];
    reaches[top as usize] = true;
    for v in (1..top).rev() {
        let fv = f[v as usize];
        if is_absent(fv) {
            continue;
        }
        reaches[v as usize] = BitIter(!v & top).any(|bit| {
            let w = v | bit;
            reaches[w as usize] && f[w as usize] > fv
        });
    }
    if land.n() == 1 {
        return Ok(Some(land.top()));
    }
    Ok(BitIter(top)
        .filter(|&u| reaches[u as usize])
        .map(|u| f[u as usize])
        .fold(None, |best: Option<f64>, x| Some(best.map_or(x, |b| b.max(x)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{generate, generate_rmf, thin, EtaSpec, GenOptions, ABSENT};
    use proptest::prelude::*;

    fn factorial(n: u32) -> u128 {
        (1..=n as u128).product()
    }

    #[test]
    fn layered_counts_all_orders() {
        for n in 1..=12 {
            let land = Landscape::layered(n).unwrap();
            assert_eq!(count_accessible(&land).unwrap(), factorial(n).into());
            assert!(exists_accessible(&land).unwrap());
        }
        assert_eq!(
            count_accessible_bruteforce(&Landscape::layered(4).unwrap()).unwrap(),
            24u64.into()
        );
    }

    #[test]
    fn wide_counts_switch_representation() {
        let land = Landscape::layered(22).unwrap();
        let count = count_accessible(&land).unwrap();
        assert_eq!(count, factorial(22).into());
        assert!(factorial(22) > u64::MAX as u128);
    }

    #[test]
    fn blocked_bottom() {
        let land = generate(ModelSpec::AlphaHoc { alpha: 0.0 }, 6, 3)
            .unwrap()
            .with_fitness(0, 1.0);
        assert_eq!(count_accessible(&land).unwrap(), PathCount::ZERO);
        assert!(!exists_accessible(&land).unwrap());
        assert_eq!(count_accessible_bruteforce(&land).unwrap(), PathCount::ZERO);
    }

    #[test]
    fn two_dimensional_example() {
        // f(00)=0.1, f(01)=0.5, f(10)=0.05, f(11)=1
        let land = Landscape::from_fitness(2, vec![0.1, 0.5, 0.05, 1.0], ModelSpec::Hoc, 0).unwrap();
        assert_eq!(count_accessible(&land).unwrap(), 1u64.into());
        assert_eq!(count_accessible_bruteforce(&land).unwrap(), 1u64.into());
    }

    #[test]
    fn absent_endpoint_is_rejected() {
        let land = Landscape::layered(3).unwrap().with_fitness(7, ABSENT);
        assert!(matches!(count_accessible(&land), Err(Error::InvalidArgument(_))));
        assert!(exists_accessible(&land).is_err());
    }

    #[test]
    fn bruteforce_cap() {
        let land = Landscape::layered(9).unwrap();
        assert!(matches!(
            count_accessible_bruteforce(&land),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn oracle_agreement_alpha_hoc() {
        for seed in 0..1000 {
            let land = generate(ModelSpec::AlphaHoc { alpha: 0.2 }, 5, seed).unwrap();
            let dp = count_accessible(&land).unwrap();
            assert_eq!(dp, count_accessible_bruteforce(&land).unwrap(), "seed {seed}");
            assert_eq!(exists_accessible(&land).unwrap(), !dp.is_zero());
        }
    }

    #[test]
    fn parallel_layers_match() {
        for seed in 0..20 {
            let land = generate(ModelSpec::Percolation { epsilon: 0.7 }, 12, seed).unwrap();
            assert_eq!(
                count_accessible(&land).unwrap(),
                count_accessible_with(&land, ExecMode::Parallel).unwrap()
            );
        }
    }

    #[test]
    fn thinning_never_adds_paths() {
        for seed in 0..50 {
            let land = generate(ModelSpec::CHOC, 8, seed).unwrap();
            let thinned = thin(&land, 0.3, seed + 1000).unwrap();
            assert!(count_accessible(&thinned).unwrap() <= count_accessible(&land).unwrap());
        }
    }

    fn rmf(theta: f64, n: u32, seed: u64) -> Landscape {
        generate(
            ModelSpec::Rmf {
                theta,
                eta: EtaSpec::Uniform { lo: 0.0, hi: 1.0 },
            },
            n,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn interval_count_degenerate_cases() {
        let land = rmf(10.0, 5, 1);
        let far = vec![Interval::new(5.0, 5.0); 4];
        assert_eq!(layer_interval_count(&land, &far).unwrap(), PathCount::ZERO);
        let mut with_empty = vec![Interval::new(0.0, 1.0); 4];
        with_empty[2] = Interval::EMPTY;
        assert_eq!(layer_interval_count(&land, &with_empty).unwrap(), PathCount::ZERO);

        let land = rmf(1.5, 6, 2);
        let whole = vec![Interval::new(0.0, 1.0); 5];
        assert_eq!(layer_interval_count(&land, &whole).unwrap(), 720u64.into());
        assert_eq!(count_accessible(&land).unwrap(), 720u64.into());
    }

    #[test]
    fn interval_chain_violations() {
        let land = rmf(0.2, 4, 3);
        let bad_gap = vec![
            Interval::new(0.0, 1.0),
            Interval::new(0.5, 1.0),
            Interval::new(0.9, 1.0),
        ];
        assert!(matches!(
            layer_interval_count(&land, &bad_gap),
            Err(Error::InvalidArgument(_))
        ));
        assert!(layer_interval_count(&land, &[Interval::new(0.0, 1.0)]).is_err());
        assert!(layer_interval_count(&generate(ModelSpec::Hoc, 3, 1).unwrap(), &[]).is_err());
    }

    #[test]
    fn critical_fitness_matches_direct_evaluation() {
        for seed in 0..300 {
            let land = generate(ModelSpec::CHOC, 7, seed).unwrap();
            let crit = critical_bottom_fitness(&land).unwrap();
            for alpha in [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.9] {
                let direct = exists_accessible(&land.clone().with_fitness(0, alpha)).unwrap();
                assert_eq!(direct, crit.is_some_and(|c| c > alpha), "seed {seed} alpha {alpha}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn counts_agree_with_oracle(seed in any::<u64>(), n in 1u32..=7, which in 0usize..4) {
            let spec = [
                ModelSpec::Hoc,
                ModelSpec::AlphaHoc { alpha: 0.2 },
                ModelSpec::Rmf { theta: 0.3, eta: EtaSpec::Normal { mean: 0.0, sd: 1.0 } },
                ModelSpec::Percolation { epsilon: 0.6 },
            ][which];
            let land = generate(spec, n, seed).unwrap();
            let dp = count_accessible(&land).unwrap();
            prop_assert_eq!(&dp, &count_accessible_bruteforce(&land).unwrap());
            prop_assert!(dp <= factorial(n).into());
            prop_assert_eq!(exists_accessible(&land).unwrap(), !dp.is_zero());
        }

        #[test]
        fn drift_coupling_is_monotone(seed in any::<u64>(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let eta = EtaSpec::Normal { mean: 0.0, sd: 1.0 };
            let opts = GenOptions::default();
            let x_lo = count_accessible(&generate_rmf(lo, eta, 8, seed, opts).unwrap()).unwrap();
            let x_hi = count_accessible(&generate_rmf(hi, eta, 8, seed, opts).unwrap()).unwrap();
            prop_assert!(x_lo <= x_hi);
        }
    }
}
