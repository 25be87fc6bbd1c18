use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::runs::ConsecutiveRun;

/// Blocks of `{1..n}` keyed by target value.
///
/// This is plain data: nothing here checks that the blocks are disjoint or
/// sum to their keys. Use [`crate::oracle::verify`] for that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    pub n: u64,
    pub run: ConsecutiveRun,
    /// Elements of each block in ascending order.
    pub blocks: BTreeMap<u64, Vec<u64>>,
}

impl Partition {
    pub fn new(n: u64, run: ConsecutiveRun, blocks: BTreeMap<u64, Vec<u64>>) -> Self {
        let mut p = Self { n, run, blocks };
        p.normalize();
        p
    }

    pub fn normalize(&mut self) {
        for block in self.blocks.values_mut() {
            block.sort_unstable();
        }
    }

    pub fn block(&self, target: u64) -> Option<&[u64]> {
        self.blocks.get(&target).map(Vec::as_slice)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, block) in &self.blocks {
            let elems: Vec<String> = block.iter().map(u64::to_string).collect();
            writeln!(f, "U_{t} = {{{}}}", elems.join(", "))?;
        }
        Ok(())
    }
}
