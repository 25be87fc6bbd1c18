//! Text tableaux: the staircase with rows `1..n`, and the rebuilt tableau with
//! rows `a..b` assembled from whole staircase rows.
//!
//! Each cell prints as `[%2d]` holding the length of the staircase row it came
//! from. Shorter rows are printed above longer ones.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;

pub const DEFAULT_MAX_WIDTH: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableauRow {
    pub length: u64,
    pub labels: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableauLayout {
    /// Top to bottom.
    pub rows: Vec<TableauRow>,
}

impl TableauLayout {
    pub fn staircase(n: u64) -> Self {
        let rows = (1..=n)
            .map(|k| TableauRow {
                length: k,
                labels: vec![k; k as usize],
            })
            .collect();
        Self { rows }
    }

    /// One row per target; within a row, element `e` contributes `e` cells
    /// labelled `e`, largest element first.
    pub fn rebuilt(partition: &Partition) -> Self {
        let rows = partition
            .blocks
            .iter()
            .map(|(&t, block)| {
                let mut elems = block.clone();
                elems.sort_unstable_by(|x, y| y.cmp(x));
                let labels = elems
                    .into_iter()
                    .flat_map(|e| std::iter::repeat_n(e, e as usize))
                    .collect();
                TableauRow { length: t, labels }
            })
            .collect();
        Self { rows }
    }

    pub fn cell_count(&self) -> u64 {
        self.rows.iter().map(|r| r.labels.len() as u64).sum()
    }

    pub fn width(&self) -> u64 {
        self.rows
            .iter()
            .map(|r| r.labels.len() as u64)
            .max()
            .unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for label in &row.labels {
                out.push_str(&format!("[{label:>2}]"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn render_staircase(n: u64, max_width: u64) -> Result<String> {
    if n == 0 {
        return Err(Error::Contract("staircase needs at least one row".into()));
    }
    if n > max_width {
        return Err(Error::TooWide {
            width: n,
            limit: max_width,
        });
    }
    Ok(TableauLayout::staircase(n).to_text())
}

pub fn render_rebuilt(partition: &Partition, max_width: u64) -> Result<String> {
    let layout = TableauLayout::rebuilt(partition);
    let width = layout.width().max(partition.run.b());
    if width > max_width {
        return Err(Error::TooWide {
            width,
            limit: max_width,
        });
    }
    Ok(layout.to_text())
}
