//! Batch property sweeps used by the `selftest` command.

use serde::Serialize;

use crate::constructor::{lemma2_pairs, solve};
use crate::oracle::{count_runs_bruteforce, enumerate_all, verify, EnumerateOptions};
use crate::runs::{check_lemma1, enumerate_runs, odd_divisors, triangular, Instance};

/// Sylvester cross-check stops here; the brute-force counter is linear in N.
pub const BRUTEFORCE_CEILING: u64 = 10_000;
/// Exhaustive enumeration is only attempted up to this prefix length.
pub const MEMBERSHIP_CEILING: u64 = 12;
pub const LEMMA2_ANCHORS: [u64; 3] = [1, 7, 1_000_000];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub max_n: u64,
    pub sylvester_checked: u64,
    pub instances_solved: u64,
    pub lemma1_checked: u64,
    pub lemma2_checked: u64,
    pub membership_checked: u64,
    /// First failing check, in sweep order.
    pub failure: Option<SelftestFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestFailure {
    pub check: &'static str,
    pub detail: String,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn run_selftest(max_n: u64) -> SelftestReport {
    let mut report = SelftestReport {
        max_n,
        ..Default::default()
    };
    if let Err(failure) = sweep(max_n, &mut report) {
        report.failure = Some(failure);
    }
    report
}

fn fail(check: &'static str, detail: String) -> Result<(), SelftestFailure> {
    Err(SelftestFailure { check, detail })
}

fn sweep(max_n: u64, report: &mut SelftestReport) -> Result<(), SelftestFailure> {
    let top = triangular(max_n)
        .unwrap_or(u64::MAX)
        .min(BRUTEFORCE_CEILING);
    for total in 1..=top {
        let runs = enumerate_runs(total).len() as u64;
        let divisors = odd_divisors(total).len() as u64;
        let brute = count_runs_bruteforce(total);
        if runs != divisors || runs != brute {
            return fail(
                "sylvester",
                format!("N={total}: runs={runs} odd_divisors={divisors} bruteforce={brute}"),
            );
        }
        report.sylvester_checked += 1;
    }

    for n in 1..=max_n {
        let Ok(total) = triangular(n) else {
            return fail("solve", format!("T({n}) overflows"));
        };
        for run in enumerate_runs(total) {
            let inst = Instance::new(n, run).expect("enumerated run matches T(n)");
            if run.a() > n {
                if !check_lemma1(&inst).unwrap_or(false) {
                    return fail("lemma1", format!("{inst}"));
                }
                report.lemma1_checked += 1;
            }
            let (partition, _) = solve(&inst, false);
            let verdict = verify(n, run, &partition);
            if !verdict.ok {
                return fail("solve", format!("{inst}: {:?}", verdict.violations));
            }
            report.instances_solved += 1;

            if n <= MEMBERSHIP_CEILING {
                let all = enumerate_all(&inst, &EnumerateOptions::default())
                    .expect("within the default limit");
                if !all.partitions.contains(&partition) {
                    return fail("membership", format!("{inst}"));
                }
                report.membership_checked += 1;
            }
        }
    }

    for m in 1..=max_n {
        for l in LEMMA2_ANCHORS {
            let pairs = lemma2_pairs(m, l).expect("m, l >= 1");
            if let Some(problem) = difference_pair_problem(m, l, &pairs.pairs) {
                return fail("lemma2", format!("m={m} l={l}: {problem}"));
            }
            report.lemma2_checked += 1;
        }
    }
    Ok(())
}

fn difference_pair_problem(m: u64, l: u64, pairs: &[(u64, u64)]) -> Option<String> {
    if pairs.len() as u64 != m {
        return Some(format!("{} pairs", pairs.len()));
    }
    for (i, &(x, y)) in pairs.iter().enumerate() {
        if y.checked_sub(x) != Some(i as u64 + 1) {
            return Some(format!("pair {} = ({x}, {y})", i + 1));
        }
    }
    let mut values: Vec<u64> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
    values.sort_unstable();
    values.dedup();
    if values.len() as u64 != 2 * m {
        return Some("repeated values".into());
    }
    if values[0] != l || *values.last().unwrap() > 2 * m + l {
        return Some(format!("range {}..{}", values[0], values.last().unwrap()));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_selftest() {
        let r = run_selftest(1);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.instances_solved, 1);
        assert_eq!(r.sylvester_checked, 1);
    }

    #[test]
    fn small_selftest() {
        let r = run_selftest(20);
        assert!(r.passed(), "{r:?}");
        assert!(r.instances_solved > 20);
        assert_eq!(r.lemma2_checked, 60);
    }

    #[test]
    fn detects_bad_pairs() {
        assert!(difference_pair_problem(2, 1, &[(1, 2), (3, 4)]).is_some());
        assert!(difference_pair_problem(2, 1, &[(1, 2), (3, 5)]).is_none());
        assert!(difference_pair_problem(1, 2, &[(1, 2)]).is_some());
    }
}
