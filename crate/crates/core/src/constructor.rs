//! Splits `{1..n}` into blocks realizing every term of a consecutive run.
//!
//! The solver alternates two reductions until nothing is left:
//!
//! * **peel** (`a <= n`): each target `t` in `a..=n` takes the singleton `{t}`;
//!   what remains is `{1..a-1}` against the run `n+1..=b`.
//! * **layer** (`a > n`): with `s` targets, the top `2s` elements pair up as
//!   `(p, q)` with `p + q = c = 2n - 2s + 1`. Targets below `c` are met by
//!   swapping partners between two pairs whose `q` values differ by the
//!   deficit, which also meets the mirrored target above `c`. A target equal to
//!   `c` takes one untouched pair. Every other target takes an untouched pair
//!   and stays open with remaining amount `t - c`, to be filled from
//!   `{1..n-2s}` by the next rounds.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::runs::{triangular, ConsecutiveRun, Instance};

/// `m` disjoint pairs `(x_i, x_i')` with `x_i' - x_i = i`, all values inside
/// `l..=l + 2m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferencePairs {
    pub m: u64,
    pub l: u64,
    /// `pairs[i - 1]` is the pair with difference `i`.
    pub pairs: Vec<(u64, u64)>,
}

impl DifferencePairs {
    /// The pair with difference `i` (1-based).
    pub fn pair(&self, i: u64) -> (u64, u64) {
        self.pairs[(i - 1) as usize]
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().flat_map(|&(x, y)| [x, y])
    }
}

/// Nested difference pairs anchored at `l`.
///
/// Odd differences nest outward from `(h, h+1)` with `h = ceil(m/2)`, even
/// differences from `(h + m, 2m + 2 - floor(m/2))`; each step moves the lower
/// value down by one and the upper value up by one. The base layout lives in
/// `1..=2m+1` and is shifted by `l - 1`.
pub fn lemma2_pairs(m: u64, l: u64) -> Result<DifferencePairs> {
    if m == 0 || l == 0 {
        return Err(Error::Contract(format!(
            "difference pairs need m >= 1 and l >= 1, got m={m}, l={l}"
        )));
    }
    let shift = l - 1;
    if m.checked_mul(2)
        .and_then(|w| w.checked_add(1))
        .and_then(|w| w.checked_add(shift))
        .is_none()
    {
        return Err(Error::Overflow("difference pair window"));
    }
    let ceil_half = m.div_ceil(2);
    let floor_half = m / 2;
    let pairs = (1..=m)
        .map(|i| {
            let (lo, hi) = if i % 2 == 1 {
                let k = (i - 1) / 2;
                (ceil_half - k, ceil_half + 1 + k)
            } else {
                let k = i / 2 - 1;
                (ceil_half + m - k, 2 * m + 2 - floor_half + k)
            };
            (lo + shift, hi + shift)
        })
        .collect();
    Ok(DifferencePairs { m, l, pairs })
}

/// Role of a pair within a layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssignmentKind {
    /// Target `c - d`, met exactly after the swap.
    MirrorLow,
    /// Target `c + d`, met exactly after the swap.
    MirrorHigh,
    /// Target equal to `c`.
    Exact,
    /// Target above `c + m`; still short by `target - c`.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub target: u64,
    /// Element from the lower half `n-2s+1..=n-s`.
    pub p: u64,
    /// Element from the upper half `n-s+1..=n`.
    pub q: u64,
    pub kind: AssignmentKind,
}

/// Intermediate state of one layer round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerTrace {
    pub n: u64,
    pub run: ConsecutiveRun,
    pub s: u64,
    pub c: u64,
    pub p_range: (u64, u64),
    pub q_range: (u64, u64),
    /// Largest deficit `c - t` over the targets, or 0 if none is positive.
    pub m: u64,
    /// Lower end of the difference-pair window, present iff `m >= 1`.
    pub l: Option<u64>,
    pub pairs: Option<DifferencePairs>,
    /// Sorted by target.
    pub assignments: Vec<Assignment>,
}

impl LayerTrace {
    /// `(target, c - target)` for every target in the layer.
    pub fn deficits(&self) -> Vec<(u64, i64)> {
        self.run
            .iter()
            .map(|t| (t, self.c as i64 - t as i64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    /// Targets `a..=n`, each met by the singleton of itself.
    pub singletons: Vec<u64>,
    /// `{1..a-1}` against `n+1..=b`; absent when `a == 1`.
    pub reduced: Option<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStep {
    pub trace: LayerTrace,
    /// Targets met exactly in this layer, with their blocks.
    pub closed: Vec<(u64, Vec<u64>)>,
    /// Targets that received a pair but still fall short.
    pub open: Vec<(u64, (u64, u64))>,
    /// `{1..n-2s}` against the open targets' remaining amounts.
    pub reduced: Option<Instance>,
}

pub fn peel(inst: &Instance) -> Result<PeelStep> {
    let (n, run) = (inst.n(), inst.run());
    if run.a() > n {
        return Err(Error::Contract(format!("peel needs a <= n, got {inst}")));
    }
    let singletons: Vec<u64> = (run.a()..=n).collect();
    let reduced = if run.a() == 1 {
        debug_assert_eq!(run.b(), n);
        None
    } else {
        let reduced = Instance::from_parts(run.a() - 1, n + 1, run.b())
            .expect("peeled remainder must be a valid instance");
        debug_assert!(reduced.run().a() > reduced.n());
        Some(reduced)
    };
    Ok(PeelStep {
        singletons,
        reduced,
    })
}

pub fn layer(inst: &Instance) -> Result<LayerStep> {
    let (n, run) = (inst.n(), inst.run());
    let (a, b) = (run.a(), run.b());
    if a <= n {
        return Err(Error::Contract(format!("layer needs a > n, got {inst}")));
    }
    let s = run.len();
    assert!(n >= 2 * s, "length bound violated for {inst}");
    let c = 2 * n - 2 * s + 1;
    let p_range = (n - 2 * s + 1, n - s);
    let q_range = (n - s + 1, n);
    let m = c.saturating_sub(a);

    let mut assignments = Vec::with_capacity(s as usize);
    let mut used_q = vec![false; s as usize];
    let mut mark = |q: u64| {
        let slot = &mut used_q[(q - q_range.0) as usize];
        assert!(!*slot, "element {q} used twice in layer {inst}");
        *slot = true;
    };

    let (l, pairs) = if m >= 1 {
        // topmost window of 2m+1 values in the upper half
        let l = n - 2 * m;
        assert!(
            l >= q_range.0,
            "difference window [{l}..{n}] leaves the upper half in layer {inst}"
        );
        let pairs = lemma2_pairs(m, l)?;
        for d in 1..=m {
            let (x, x_hi) = pairs.pair(d);
            assert!(
                c + d <= b,
                "mirror target {} missing in layer {inst}",
                c + d
            );
            mark(x);
            mark(x_hi);
            assignments.push(Assignment {
                target: c - d,
                p: c - x_hi,
                q: x,
                kind: AssignmentKind::MirrorLow,
            });
            assignments.push(Assignment {
                target: c + d,
                p: c - x,
                q: x_hi,
                kind: AssignmentKind::MirrorHigh,
            });
        }
        (Some(l), Some(pairs))
    } else {
        (None, None)
    };

    // untouched pairs go to the remaining targets, both ascending
    let first_open = c + m + 1;
    let remaining_targets = (c..=b).filter(|&t| t >= a && (t == c || t >= first_open));
    let free_q = (q_range.0..=q_range.1).filter(|q| !used_q[(q - q_range.0) as usize]);
    let mut leftovers = 0u64;
    for (t, q) in remaining_targets.zip(free_q) {
        leftovers += 1;
        let kind = if t == c {
            AssignmentKind::Exact
        } else {
            AssignmentKind::Open
        };
        assignments.push(Assignment {
            target: t,
            p: c - q,
            q,
            kind,
        });
    }
    assert_eq!(
        2 * m + leftovers,
        s,
        "layer {inst} did not consume every pair"
    );
    assignments.sort_by_key(|asg| asg.target);

    let mut closed = Vec::new();
    let mut open = Vec::new();
    for asg in &assignments {
        match asg.kind {
            AssignmentKind::Open => open.push((asg.target, (asg.p, asg.q))),
            _ => {
                debug_assert_eq!(asg.p + asg.q, asg.target);
                closed.push((asg.target, vec![asg.p, asg.q]));
            }
        }
    }

    let rest = n - 2 * s;
    let reduced = match (open.first(), open.last()) {
        (Some(&(lo, _)), Some(&(hi, _))) => {
            assert!(
                rest > 0,
                "open targets left with nothing to fill them in {inst}"
            );
            Some(
                Instance::from_parts(rest, lo - c, hi - c)
                    .expect("open remainder must be a valid instance"),
            )
        }
        _ => {
            assert_eq!(
                rest, 0,
                "elements 1..={rest} left unassigned in layer {inst}"
            );
            None
        }
    };

    let trace = LayerTrace {
        n,
        run,
        s,
        c,
        p_range,
        q_range,
        m,
        l,
        pairs,
        assignments,
    };
    Ok(LayerStep {
        trace,
        closed,
        open,
        reduced,
    })
}

/// Partition `{1..n}` into blocks, one per target of the instance's run.
///
/// Panics if an internal invariant breaks; for a valid instance that cannot
/// happen.
pub fn solve(inst: &Instance, want_trace: bool) -> (Partition, Option<Vec<LayerTrace>>) {
    let run = inst.run();
    let mut blocks: BTreeMap<u64, Vec<u64>> = run.iter().map(|t| (t, Vec::new())).collect();
    // remaining amount -> original target; amounts stay distinct and consecutive
    let mut pending: BTreeMap<u64, u64> = run.iter().map(|t| (t, t)).collect();
    let mut traces = want_trace.then(Vec::new);
    let mut current = Some(*inst);

    while let Some(step) = current {
        check_pending(&pending, &step);
        let block_of = |pending: &BTreeMap<u64, u64>, amount: u64| {
            *pending
                .get(&amount)
                .unwrap_or_else(|| panic!("no pending target with remaining amount {amount}"))
        };
        if step.run().a() <= step.n() {
            let peeled = peel(&step).expect("precondition checked");
            for t in peeled.singletons {
                let target = block_of(&pending, t);
                blocks.get_mut(&target).unwrap().push(t);
                pending.remove(&t);
            }
            current = peeled.reduced;
        } else {
            let layered = layer(&step).expect("precondition checked");
            for (t, elems) in &layered.closed {
                let target = block_of(&pending, *t);
                blocks.get_mut(&target).unwrap().extend(elems);
                pending.remove(t);
            }
            let c = layered.trace.c;
            let mut next = BTreeMap::new();
            for &(t, (p, q)) in &layered.open {
                let target = block_of(&pending, t);
                blocks.get_mut(&target).unwrap().extend([p, q]);
                next.insert(t - c, target);
            }
            pending = next;
            current = layered.reduced;
            if let Some(traces) = traces.as_mut() {
                traces.push(layered.trace);
            }
        }
    }
    assert!(
        pending.is_empty(),
        "ran out of elements with targets {:?} unfilled",
        pending.values().collect::<Vec<_>>()
    );

    (Partition::new(inst.n(), run, blocks), traces)
}

fn check_pending(pending: &BTreeMap<u64, u64>, step: &Instance) {
    if cfg!(debug_assertions) {
        let amounts: Vec<u64> = pending.keys().copied().collect();
        assert_eq!(
            amounts,
            step.run().iter().collect::<Vec<_>>(),
            "pending amounts diverged from {step}"
        );
        assert_eq!(
            amounts.iter().sum::<u64>(),
            triangular(step.n()).unwrap(),
            "pending amounts do not sum to T({})",
            step.n()
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: u64, a: u64, b: u64) -> Instance {
        Instance::from_parts(n, a, b).unwrap()
    }

    fn blocks(p: &Partition) -> Vec<(u64, Vec<u64>)> {
        p.blocks.clone().into_iter().collect()
    }

    #[test]
    fn lemma2_small_cases() {
        assert_eq!(lemma2_pairs(1, 1).unwrap().pairs, vec![(1, 2)]);
        assert_eq!(lemma2_pairs(2, 10).unwrap().pairs, vec![(10, 11), (12, 14)]);
        assert_eq!(
            lemma2_pairs(3, 1).unwrap().pairs,
            vec![(2, 3), (5, 7), (1, 4)]
        );
    }

    #[test]
    fn lemma2_rejects_zero() {
        assert!(matches!(lemma2_pairs(0, 1), Err(Error::Contract(_))));
        assert!(matches!(lemma2_pairs(1, 0), Err(Error::Contract(_))));
        assert!(matches!(lemma2_pairs(2, u64::MAX), Err(Error::Overflow(_))));
    }

    #[test]
    fn peel_examples() {
        let p = peel(&inst(5, 1, 5)).unwrap();
        assert_eq!(p.singletons, vec![1, 2, 3, 4, 5]);
        assert_eq!(p.reduced, None);

        let p = peel(&inst(5, 4, 6)).unwrap();
        assert_eq!(p.singletons, vec![4, 5]);
        assert_eq!(p.reduced, Some(inst(3, 6, 6)));

        let p = peel(&inst(9, 5, 10)).unwrap();
        assert_eq!(p.singletons, vec![5, 6, 7, 8, 9]);
        assert_eq!(p.reduced, Some(inst(4, 10, 10)));

        assert!(matches!(peel(&inst(14, 15, 20)), Err(Error::Contract(_))));
    }

    #[test]
    fn layer_worked_example() {
        let step = layer(&inst(14, 15, 20)).unwrap();
        let t = &step.trace;
        assert_eq!((t.s, t.c, t.m, t.l), (6, 17, 2, Some(10)));
        assert_eq!(t.p_range, (3, 8));
        assert_eq!(t.q_range, (9, 14));
        assert_eq!(
            step.closed,
            vec![
                (15, vec![3, 12]),
                (16, vec![6, 10]),
                (17, vec![8, 9]),
                (18, vec![7, 11]),
                (19, vec![5, 14]),
            ]
        );
        assert_eq!(step.open, vec![(20, (4, 13))]);
        assert_eq!(step.reduced, Some(inst(2, 3, 3)));
        let kinds: Vec<_> = t.assignments.iter().map(|a| a.kind).collect();
        use AssignmentKind::*;
        assert_eq!(
            kinds,
            vec![MirrorLow, MirrorLow, Exact, MirrorHigh, MirrorHigh, Open]
        );
    }

    #[test]
    fn layer_without_deficits() {
        let step = layer(&inst(5, 7, 8)).unwrap();
        assert_eq!((step.trace.s, step.trace.c, step.trace.m), (2, 7, 0));
        assert_eq!(step.trace.l, None);
        assert_eq!(step.closed, vec![(7, vec![3, 4])]);
        assert_eq!(step.open, vec![(8, (2, 5))]);
        assert_eq!(step.reduced, Some(inst(1, 1, 1)));

        let step = layer(&inst(2, 3, 3)).unwrap();
        assert_eq!((step.trace.s, step.trace.c, step.trace.m), (1, 3, 0));
        assert_eq!(step.closed, vec![(3, vec![1, 2])]);
        assert!(step.open.is_empty());
        assert_eq!(step.reduced, None);
    }

    #[test]
    fn layer_with_all_targets_above_c_plus_one() {
        // s=1, c=5, a=6: the open amount is 1, not m+1..
        let step = layer(&inst(3, 6, 6)).unwrap();
        assert_eq!(step.trace.c, 5);
        assert!(step.closed.is_empty());
        assert_eq!(step.open, vec![(6, (2, 3))]);
        assert_eq!(step.reduced, Some(inst(1, 1, 1)));

        // T(9) = 45 = 22 + 23: s=2, c=15, open amounts 7..8
        let step = layer(&inst(9, 22, 23)).unwrap();
        assert_eq!(step.trace.c, 15);
        assert_eq!(step.reduced, Some(inst(5, 7, 8)));
    }

    #[test]
    fn layer_rejects_peelable() {
        assert!(matches!(layer(&inst(5, 1, 5)), Err(Error::Contract(_))));
    }

    #[test]
    fn solve_examples() {
        let (p, trace) = solve(&inst(14, 15, 20), true);
        assert_eq!(
            blocks(&p),
            vec![
                (15, vec![3, 12]),
                (16, vec![6, 10]),
                (17, vec![8, 9]),
                (18, vec![7, 11]),
                (19, vec![5, 14]),
                (20, vec![1, 2, 4, 13]),
            ]
        );
        let trace = trace.unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!((trace[1].n, trace[1].c, trace[1].m), (2, 3, 0));

        let (p, trace) = solve(&inst(5, 1, 5), false);
        assert!(trace.is_none());
        assert!(p.blocks.iter().all(|(t, b)| b == &vec![*t]));

        let (p, _) = solve(&inst(5, 7, 8), false);
        assert_eq!(blocks(&p), vec![(7, vec![3, 4]), (8, vec![1, 2, 5])]);

        let (p, _) = solve(&inst(5, 4, 6), false);
        assert_eq!(
            blocks(&p),
            vec![(4, vec![4]), (5, vec![5]), (6, vec![1, 2, 3])]
        );
    }
}
