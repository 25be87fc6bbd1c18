//! Independent checks for the constructor: a partition verifier, an exhaustive
//! backtracking enumerator and a brute-force run counter.
//!
//! Nothing here calls into [`crate::constructor`].

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::runs::{ConsecutiveRun, Instance};

pub const DEFAULT_HARD_LIMIT: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// An element of `1..=n` that no block contains.
    MissingElement {
        element: u64,
    },
    /// An element that appears more than once across all blocks.
    DuplicateElement {
        element: u64,
    },
    /// An element outside `1..=n`.
    ForeignElement {
        element: u64,
    },
    WrongSum {
        target: u64,
        actual: u64,
    },
    /// Block keys differ from the run's terms.
    WrongTargetSet {
        missing: Vec<u64>,
        extra: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

pub fn verify(n: u64, run: ConsecutiveRun, partition: &Partition) -> VerifyReport {
    let mut violations = Vec::new();

    let missing_targets: Vec<u64> = (run.a()..=run.b())
        .filter(|t| !partition.blocks.contains_key(t))
        .collect();
    let extra_targets: Vec<u64> = partition
        .blocks
        .keys()
        .copied()
        .filter(|&t| t < run.a() || t > run.b())
        .collect();
    if !missing_targets.is_empty() || !extra_targets.is_empty() {
        violations.push(Violation::WrongTargetSet {
            missing: missing_targets,
            extra: extra_targets,
        });
    }

    let mut seen = vec![0u32; n as usize + 1];
    let mut foreign = BTreeMap::new();
    for (&target, block) in &partition.blocks {
        let mut actual = 0u64;
        for &e in block {
            actual = actual.saturating_add(e);
            if e == 0 || e > n {
                *foreign.entry(e).or_insert(0u32) += 1;
            } else {
                seen[e as usize] += 1;
            }
        }
        if actual != target {
            violations.push(Violation::WrongSum { target, actual });
        }
    }
    for e in foreign.into_keys() {
        violations.push(Violation::ForeignElement { element: e });
    }
    for (e, &count) in seen.iter().enumerate().skip(1) {
        let element = e as u64;
        match count {
            0 => violations.push(Violation::MissingElement { element }),
            1 => {}
            _ => violations.push(Violation::DuplicateElement { element }),
        }
    }

    VerifyReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Stop materializing partitions after this many; counting continues.
    pub cap: Option<usize>,
    pub hard_limit: u64,
    /// Ignore `hard_limit`.
    pub force: bool,
    /// Split the first branching level across threads.
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            cap: None,
            hard_limit: DEFAULT_HARD_LIMIT,
            force: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub count: u64,
    pub partitions: Vec<Partition>,
}

/// Count every partition of `{1..n}` into blocks keyed by the run's terms with
/// each block summing to its key.
///
/// Elements are placed from `n` down to `1`; each goes to a target, in
/// ascending order, whose remaining deficit can absorb it. Results come out in
/// that depth-first order whether or not the search runs in parallel.
pub fn enumerate_all(inst: &Instance, opts: &EnumerateOptions) -> Result<Enumeration> {
    let n = inst.n();
    if n > opts.hard_limit && !opts.force {
        return Err(Error::LimitExceeded {
            n,
            limit: opts.hard_limit,
        });
    }
    let run = inst.run();
    let deficits: Vec<u64> = run.iter().collect();
    let cap = opts.cap.unwrap_or(usize::MAX);

    let first_choices: Vec<usize> = (0..deficits.len()).filter(|&i| deficits[i] >= n).collect();
    let branch = |i: usize| {
        let mut search = Search::new(run, deficits.clone(), n, cap);
        search.place(n, i);
        search.descend(n - 1);
        (search.count, search.found)
    };
    let branches: Vec<(u64, Vec<Partition>)> = if opts.parallel {
        first_choices.par_iter().map(|&i| branch(i)).collect()
    } else {
        first_choices.iter().map(|&i| branch(i)).collect()
    };

    let mut count = 0u64;
    let mut partitions = Vec::new();
    for (c, found) in branches {
        count += c;
        let room = cap.saturating_sub(partitions.len());
        partitions.extend(found.into_iter().take(room));
    }
    Ok(Enumeration { count, partitions })
}

struct Search {
    run: ConsecutiveRun,
    remaining: Vec<u64>,
    owner: Vec<usize>,
    cap: usize,
    count: u64,
    found: Vec<Partition>,
}

impl Search {
    fn new(run: ConsecutiveRun, remaining: Vec<u64>, n: u64, cap: usize) -> Self {
        Self {
            run,
            remaining,
            owner: vec![usize::MAX; n as usize + 1],
            cap,
            count: 0,
            found: Vec::new(),
        }
    }

    fn place(&mut self, e: u64, target: usize) {
        self.remaining[target] -= e;
        self.owner[e as usize] = target;
    }

    fn unplace(&mut self, e: u64, target: usize) {
        self.remaining[target] += e;
        self.owner[e as usize] = usize::MAX;
    }

    fn descend(&mut self, e: u64) {
        if e == 0 {
            self.count += 1;
            if self.found.len() < self.cap {
                self.found.push(self.materialize());
            }
            return;
        }
        // the remaining deficits always sum to 1+..+e, so only the largest
        // element needs a fit check
        if self.remaining.iter().all(|&r| r < e) {
            return;
        }
        for i in 0..self.remaining.len() {
            if self.remaining[i] >= e {
                self.place(e, i);
                self.descend(e - 1);
                self.unplace(e, i);
            }
        }
    }

    fn materialize(&self) -> Partition {
        let mut blocks: BTreeMap<u64, Vec<u64>> =
            self.run.iter().map(|t| (t, Vec::new())).collect();
        for (e, &i) in self.owner.iter().enumerate().skip(1) {
            blocks
                .get_mut(&(self.run.a() + i as u64))
                .unwrap()
                .push(e as u64);
        }
        Partition::new(self.owner.len() as u64 - 1, self.run, blocks)
    }
}

/// Number of runs `a..=b` of positive integers summing to `total`, by sliding
/// a window over `1..=total`.
pub fn count_runs_bruteforce(total: u64) -> u64 {
    let (mut lo, mut hi, mut sum, mut count) = (1u64, 1u64, 1u64, 0u64);
    while lo <= total {
        if sum == total {
            count += 1;
        }
        if sum < total {
            hi += 1;
            sum += hi;
        } else {
            sum -= lo;
            lo += 1;
        }
    }
    count
}
