use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use serde_json::{json, Value};
use staircase_core::constructor::LayerTrace;
use staircase_core::oracle::{self, Enumeration, DEFAULT_HARD_LIMIT};
use staircase_core::render::{TableauLayout, DEFAULT_MAX_WIDTH};
use staircase_core::runs::{enumerate_runs, odd_divisors};
use staircase_core::selftest::run_selftest;
use staircase_core::{solve, verify, EnumerateOptions, Error, Instance, Partition};

use crate::envelope::{Failure, Output};
use crate::Command;

pub const ENUM_HARD_LIMIT_VAR: &str = "ENUM_HARD_LIMIT";
pub const RENDER_MAX_WIDTH_VAR: &str = "RENDER_MAX_WIDTH";

pub fn dispatch(command: &Command) -> Result<Output, Failure> {
    match *command {
        Command::Runs { total } => runs(total),
        Command::Partition { n, a, b, trace } => partition(n, a, b, trace),
        Command::Count {
            n,
            a,
            b,
            list,
            limit,
            force,
            parallel,
        } => count(n, a, b, list, limit, force, parallel),
        Command::Render { n, a, b } => render(n, a.zip(b)),
        Command::Selftest { max_n } => selftest(max_n),
    }
}

fn env_u64(name: &str, default: u64) -> Result<u64, Failure> {
    match std::env::var(name) {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Failure::usage(format!(
                "{name} must be a non-negative integer, got {raw:?}"
            ))
        }),
        Err(_) => Ok(default),
    }
}

fn instance(n: u64, a: u64, b: u64) -> Result<Instance, Failure> {
    Instance::from_parts(n, a, b).map_err(|e| match e {
        Error::InvalidInstance { .. } => Failure::usage(e.to_string()),
        other => Failure::usage(format!("not a valid instance: {other}")),
    })
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Run the solver, turning an internal panic into a defect.
fn solve_checked(
    inst: &Instance,
    want_trace: bool,
) -> Result<(Partition, Option<Vec<LayerTrace>>), Failure> {
    panic::catch_unwind(AssertUnwindSafe(|| solve(inst, want_trace)))
        .map_err(|_| Failure::defect(format!("solver aborted on {inst}")))
}

fn format_block(block: &[u64]) -> String {
    let elems: Vec<String> = block.iter().map(u64::to_string).collect();
    format!("{{{}}}", elems.join(", "))
}

fn runs(total: u64) -> Result<Output, Failure> {
    let start = Instant::now();
    let divisors = odd_divisors(total);
    let runs = enumerate_runs(total);
    let elapsed_ms = elapsed_ms(start);

    let mut text = String::new();
    let listed: Vec<String> = divisors.iter().map(u64::to_string).collect();
    writeln!(
        text,
        "{total} has {} odd divisors: {}",
        divisors.len(),
        listed.join(" ")
    )
    .unwrap();
    for run in &runs {
        writeln!(text, "{run}  length {}", run.len()).unwrap();
    }
    let result = json!({
        "total": total,
        "odd_divisor_count": divisors.len(),
        "odd_divisors": divisors,
        "runs": runs
            .iter()
            .map(|r| json!({ "a": r.a(), "b": r.b(), "length": r.len() }))
            .collect::<Vec<_>>(),
    });
    Ok(Output {
        command: "runs",
        input: json!({ "total": total }),
        result,
        text,
        elapsed_ms,
        defect: None,
    })
}

fn partition(n: u64, a: u64, b: u64, want_trace: bool) -> Result<Output, Failure> {
    let inst = instance(n, a, b)?;
    let start = Instant::now();
    let (partition, trace) = solve_checked(&inst, want_trace)?;
    let report = verify(n, inst.run(), &partition);
    let elapsed_ms = elapsed_ms(start);

    let mut text = String::new();
    if let Some(layers) = &trace {
        for (i, layer) in layers.iter().enumerate() {
            write_layer(&mut text, i + 1, layer);
        }
    }
    text.push_str(&partition.to_string());
    let defect = (!report.ok).then(|| format!("verification failed: {:?}", report.violations));

    let mut result = json!({
        "blocks": partition.blocks,
        "verified": report.ok,
    });
    if !report.ok {
        result["violations"] = serde_json::to_value(&report.violations).unwrap();
    }
    if let Some(layers) = &trace {
        result["trace"] = layers.iter().map(layer_json).collect::<Vec<_>>().into();
    }
    Ok(Output {
        command: "partition",
        input: json!({ "n": n, "a": a, "b": b, "trace": want_trace }),
        result,
        text,
        elapsed_ms,
        defect,
    })
}

fn write_layer(text: &mut String, index: usize, layer: &LayerTrace) {
    writeln!(
        text,
        "layer {index}: n={} targets={} s={} c={}",
        layer.n, layer.run, layer.s, layer.c
    )
    .unwrap();
    writeln!(
        text,
        "  P=[{}..{}] Q=[{}..{}]",
        layer.p_range.0, layer.p_range.1, layer.q_range.0, layer.q_range.1
    )
    .unwrap();
    let deficits: Vec<String> = layer
        .deficits()
        .iter()
        .map(|(t, d)| format!("{t}:{d}"))
        .collect();
    writeln!(text, "  deficits c-t: {}", deficits.join(" ")).unwrap();
    match (&layer.l, &layer.pairs) {
        (Some(l), Some(pairs)) => {
            let listed: Vec<String> = pairs
                .pairs
                .iter()
                .map(|(x, y)| format!("({x},{y})"))
                .collect();
            writeln!(
                text,
                "  m={} l={l} difference pairs: {}",
                layer.m,
                listed.join(" ")
            )
            .unwrap();
        }
        _ => writeln!(text, "  m={} (no swaps)", layer.m).unwrap(),
    }
    for asg in &layer.assignments {
        let kind = serde_json::to_value(asg.kind).unwrap();
        writeln!(
            text,
            "  {} <- {{{}, {}}} {}",
            asg.target,
            asg.p,
            asg.q,
            kind.as_str().unwrap()
        )
        .unwrap();
    }
}

fn layer_json(layer: &LayerTrace) -> Value {
    json!({
        "n": layer.n,
        "a": layer.run.a(),
        "b": layer.run.b(),
        "s": layer.s,
        "c": layer.c,
        "p_range": [layer.p_range.0, layer.p_range.1],
        "q_range": [layer.q_range.0, layer.q_range.1],
        "deficits": layer
            .deficits()
            .iter()
            .map(|(t, d)| json!({ "target": t, "deficit": d }))
            .collect::<Vec<_>>(),
        "m": layer.m,
        "l": layer.l,
        "difference_pairs": layer.pairs.as_ref().map(|p| &p.pairs),
        "assignments": layer.assignments,
    })
}

fn count(
    n: u64,
    a: u64,
    b: u64,
    list: bool,
    limit: Option<usize>,
    force: bool,
    parallel: bool,
) -> Result<Output, Failure> {
    let inst = instance(n, a, b)?;
    let hard_limit = env_u64(ENUM_HARD_LIMIT_VAR, DEFAULT_HARD_LIMIT)?;
    let opts = EnumerateOptions {
        cap: if list { limit } else { Some(0) },
        hard_limit,
        force,
        parallel,
    };
    let start = Instant::now();
    let Enumeration { count, partitions } = oracle::enumerate_all(&inst, &opts).map_err(|e| {
        Failure::usage(format!(
            "{e} (the search is exponential in n; raise {ENUM_HARD_LIMIT_VAR} or pass --force)"
        ))
    })?;
    let elapsed_ms = elapsed_ms(start);

    let mut text = format!("count: {count}\n");
    for (i, p) in partitions.iter().enumerate() {
        let blocks: Vec<String> = p
            .blocks
            .iter()
            .map(|(t, block)| format!("U_{t}={}", format_block(block)))
            .collect();
        writeln!(text, "#{}: {}", i + 1, blocks.join(" ")).unwrap();
    }
    let mut result = json!({ "count": count });
    if list {
        result["partitions"] = partitions
            .iter()
            .map(|p| json!(p.blocks))
            .collect::<Vec<_>>()
            .into();
    }
    Ok(Output {
        command: "count",
        input: json!({
            "n": n, "a": a, "b": b,
            "list": list, "limit": limit, "force": force, "parallel": parallel,
        }),
        result,
        text,
        elapsed_ms,
        defect: None,
    })
}

fn render(n: u64, targets: Option<(u64, u64)>) -> Result<Output, Failure> {
    let max_width = env_u64(RENDER_MAX_WIDTH_VAR, DEFAULT_MAX_WIDTH)?;
    if n == 0 || n > max_width {
        return Err(Failure::usage(format!(
            "n must be in 1..={max_width} ({RENDER_MAX_WIDTH_VAR}), got {n}"
        )));
    }
    let inst = targets.map(|(a, b)| instance(n, a, b)).transpose()?;
    if let Some(inst) = &inst {
        if inst.run().b() > max_width {
            return Err(Failure::usage(format!(
                "longest row {} exceeds {max_width} ({RENDER_MAX_WIDTH_VAR})",
                inst.run().b()
            )));
        }
    }

    let start = Instant::now();
    let staircase = TableauLayout::staircase(n);
    let mut text = staircase.to_text();
    let mut result = json!({ "staircase": layout_json(&staircase) });
    let mut defect = None;
    if let Some(inst) = &inst {
        let (partition, _) = solve_checked(inst, false)?;
        let report = verify(n, inst.run(), &partition);
        if !report.ok {
            defect = Some(format!("verification failed: {:?}", report.violations));
        }
        let rebuilt = TableauLayout::rebuilt(&partition);
        text.push('\n');
        text.push_str(&rebuilt.to_text());
        result["rebuilt"] = layout_json(&rebuilt);
        result["blocks"] = json!(partition.blocks);
    }
    let elapsed_ms = elapsed_ms(start);

    let (a, b) = targets.unzip();
    Ok(Output {
        command: "render",
        input: json!({ "n": n, "a": a, "b": b }),
        result,
        text,
        elapsed_ms,
        defect,
    })
}

fn layout_json(layout: &TableauLayout) -> Value {
    json!({
        "cells": layout.cell_count(),
        "rows": layout.rows,
        "text": layout.to_text(),
    })
}

fn selftest(max_n: u64) -> Result<Output, Failure> {
    let start = Instant::now();
    let report = run_selftest(max_n);
    let elapsed_ms = elapsed_ms(start);

    let mut text = String::new();
    writeln!(text, "sylvester checks:   {}", report.sylvester_checked).unwrap();
    writeln!(text, "instances solved:   {}", report.instances_solved).unwrap();
    writeln!(text, "length bounds:      {}", report.lemma1_checked).unwrap();
    writeln!(text, "difference pairs:   {}", report.lemma2_checked).unwrap();
    writeln!(text, "oracle memberships: {}", report.membership_checked).unwrap();
    let defect = report.failure.as_ref().map(|f| {
        writeln!(text, "FAILED {}: {}", f.check, f.detail).unwrap();
        format!("selftest failed in {} at {}", f.check, f.detail)
    });
    if defect.is_none() {
        text.push_str("all checks passed\n");
    }
    Ok(Output {
        command: "selftest",
        input: json!({ "max_n": max_n }),
        result: json!({
            "passed": report.passed(),
            "sylvester_checked": report.sylvester_checked,
            "instances_solved": report.instances_solved,
            "lemma1_checked": report.lemma1_checked,
            "lemma2_checked": report.lemma2_checked,
            "membership_checked": report.membership_checked,
            "failure": report.failure,
        }),
        text,
        elapsed_ms,
        defect,
    })
}
