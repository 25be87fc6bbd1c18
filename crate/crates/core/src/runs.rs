//! Triangular numbers, consecutive runs and their enumeration via odd divisors.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An inclusive run `a, a+1, ..., b` of positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ConsecutiveRun {
    a: u64,
    b: u64,
}

impl ConsecutiveRun {
    /// Rejects `a == 0`, `a > b`, and runs whose sum does not fit in a `u64`.
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a == 0 || a > b {
            return Err(Error::InvalidRun { a, b });
        }
        let sum = (a as u128 + b as u128) * (b as u128 - a as u128 + 1) / 2;
        if sum > u64::MAX as u128 {
            return Err(Error::Overflow("run sum"));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn len(&self) -> u64 {
        self.b - self.a + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> u64 {
        ((self.a as u128 + self.b as u128) * self.len() as u128 / 2) as u64
    }

    pub fn contains(&self, t: u64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.a..=self.b
    }
}

impl fmt::Display for ConsecutiveRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]", self.a, self.b)
    }
}

/// A prefix `{1..n}` together with a run whose sum equals `1 + ... + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Instance {
    n: u64,
    run: ConsecutiveRun,
}

impl Instance {
    pub fn new(n: u64, run: ConsecutiveRun) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract(
                "instance prefix length must be >= 1".into(),
            ));
        }
        let left = triangular(n)?;
        let right = run.sum();
        if left != right {
            return Err(Error::InvalidInstance {
                n,
                a: run.a,
                b: run.b,
                left,
                right,
            });
        }
        Ok(Self { n, run })
    }

    pub fn from_parts(n: u64, a: u64, b: u64) -> Result<Self> {
        Self::new(n, ConsecutiveRun::new(a, b)?)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn run(&self) -> ConsecutiveRun {
        self.run
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, run={})", self.n, self.run)
    }
}

/// `n(n+1)/2`, failing instead of wrapping.
pub fn triangular(n: u64) -> Result<u64> {
    let t = n as u128 * (n as u128 + 1) / 2;
    u64::try_from(t).map_err(|_| Error::Overflow("triangular number"))
}

/// The `n` with `triangular(n) == total`, if there is one.
pub fn is_triangular(total: u64) -> Option<u64> {
    if total == 0 {
        return Some(0);
    }
    // 8N+1 must be an odd square (2n+1)^2
    let disc = 8 * total as u128 + 1;
    let root = disc.isqrt();
    if root * root != disc {
        return None;
    }
    Some(((root - 1) / 2) as u64)
}

/// Odd divisors of `n` in ascending order.
pub fn odd_divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let odd = n >> n.trailing_zeros();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= odd) {
        if odd.is_multiple_of(d) {
            small.push(d);
            if d != odd / d {
                large.push(odd / d);
            }
        }
        d += 2;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Every run of positive integers summing to `total`, ascending by first term.
///
/// Each odd divisor `d` splits `2 * total` into an odd factor `d` and an even
/// factor `2 * total / d`; the smaller one is the run length and the larger the
/// sum of the end points.
pub fn enumerate_runs(total: u64) -> Vec<ConsecutiveRun> {
    let twice = 2 * total as u128;
    let mut runs: Vec<ConsecutiveRun> = odd_divisors(total)
        .into_iter()
        .map(|d| {
            let d = d as u128;
            let e = twice / d;
            let (len, ends) = if d < e { (d, e) } else { (e, d) };
            let a = (ends - len).div_ceil(2);
            let b = (ends + len - 1) / 2;
            ConsecutiveRun {
                a: a as u64,
                b: b as u64,
            }
        })
        .collect();
    runs.sort();
    runs
}

/// Whether `n >= 2 * run.len()`. Only defined for instances where every run term
/// exceeds `n`, and then always true.
pub fn check_lemma1(inst: &Instance) -> Result<bool> {
    if inst.run.a <= inst.n {
        return Err(Error::Contract(format!(
            "length bound needs a > n, got {inst}"
        )));
    }
    Ok(inst.n >= 2 * inst.run.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(a: u64, b: u64) -> ConsecutiveRun {
        ConsecutiveRun::new(a, b).unwrap()
    }

    #[test]
    fn triangular_values() {
        assert_eq!(triangular(0).unwrap(), 0);
        assert_eq!(triangular(5).unwrap(), 15);
        assert_eq!(triangular(14).unwrap(), 105);
        assert_eq!(triangular(14).unwrap(), (1..=14).sum::<u64>());
    }

    #[test]
    fn triangular_overflow_is_an_error() {
        assert!(matches!(triangular(u64::MAX), Err(Error::Overflow(_))));
        // largest n with T(n) < 2^64
        assert!(triangular(6_074_000_999).is_ok());
        assert!(triangular(6_074_001_000).is_err());
    }

    #[test]
    fn inverse_triangular() {
        assert_eq!(is_triangular(15), Some(5));
        assert_eq!(is_triangular(14), None);
        assert_eq!(is_triangular(1), Some(1));
        let big = triangular(6_074_000_999).unwrap();
        assert_eq!(is_triangular(big), Some(6_074_000_999));
        assert_eq!(is_triangular(big - 1), None);
    }

    #[test]
    fn odd_divisor_lists() {
        assert_eq!(odd_divisors(15), vec![1, 3, 5, 15]);
        assert_eq!(odd_divisors(1), vec![1]);
        assert_eq!(odd_divisors(8), vec![1]);
        assert_eq!(odd_divisors(105), vec![1, 3, 5, 7, 15, 21, 35, 105]);
        assert_eq!(odd_divisors(9), vec![1, 3, 9]);
    }

    #[test]
    fn runs_of_small_numbers() {
        assert_eq!(
            enumerate_runs(15),
            vec![run(1, 5), run(4, 6), run(7, 8), run(15, 15)]
        );
        assert_eq!(enumerate_runs(1), vec![run(1, 1)]);
        assert_eq!(enumerate_runs(8), vec![run(8, 8)]);
    }

    #[test]
    fn run_validation() {
        assert!(ConsecutiveRun::new(0, 3).is_err());
        assert!(ConsecutiveRun::new(4, 3).is_err());
        assert!(matches!(
            ConsecutiveRun::new(1, u64::MAX),
            Err(Error::Overflow(_))
        ));
        let r = run(15, 20);
        assert_eq!(r.len(), 6);
        assert_eq!(r.sum(), 105);
    }

    #[test]
    fn instance_requires_equal_sums() {
        assert!(Instance::from_parts(14, 15, 20).is_ok());
        assert!(matches!(
            Instance::from_parts(3, 2, 3),
            Err(Error::InvalidInstance {
                left: 6,
                right: 5,
                ..
            })
        ));
        assert!(Instance::from_parts(0, 1, 1).is_err());
    }

    #[test]
    fn lemma1_examples() {
        assert!(check_lemma1(&Instance::from_parts(14, 15, 20).unwrap()).unwrap());
        assert!(check_lemma1(&Instance::from_parts(5, 7, 8).unwrap()).unwrap());
        assert!(check_lemma1(&Instance::from_parts(2, 3, 3).unwrap()).unwrap());
        assert!(matches!(
            check_lemma1(&Instance::from_parts(5, 1, 5).unwrap()),
            Err(Error::Contract(_))
        ));
    }
}
