//! Do different full cycle-sets of one graph lead to the same verdict?

use serde::{Deserialize, Serialize};

use crate::cycles::{find_full_cycle_sets, Budget};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reduction::eliminate_unusable_edges;
use crate::verdict::{decide, PipelineConfig, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyResult {
    /// Full cycle-sets of the reduced graph found within budget, at most k.
    pub sets_available: usize,
    /// Verdict with each set driving the removal stage, by set index.
    pub verdicts: Vec<Verdict>,
    pub consistent: bool,
    /// How often each verdict occurred.
    pub multiset: Vec<(Verdict, usize)>,
}

/// Runs the pipeline once per full cycle-set (up to `k`) and compares.
///
/// Needs a bridgeless graph that the reduction accepts and that stays
/// bridgeless after it; otherwise there are no cycle-sets to compare.
pub fn cycle_set_consistency(g: &Graph, k: usize, cfg: &PipelineConfig) -> Result<ConsistencyResult> {
    if k < 2 {
        return Err(Error::input(format!("consistency needs k >= 2, got {k}")));
    }
    if g.n() < 3 || !g.is_connected() {
        return Err(Error::input("consistency needs a connected graph with n >= 3"));
    }
    if !g.bridges().is_empty() {
        return Err(Error::Precondition("graph has a bridge".into()));
    }
    let reduction = eliminate_unusable_edges(g)?;
    if let Some(rejection) = reduction.rejected {
        return Err(Error::Precondition(format!("reduction rejected: {}", rejection.reason)));
    }
    if !reduction.reduced.bridges().is_empty() {
        return Err(Error::Precondition("reduced graph has a bridge".into()));
    }
    let budget = Budget {
        sets: k,
        ..cfg.budget
    };
    let available = find_full_cycle_sets(&reduction.reduced, &budget, cfg.seed)?.len();
    let verdicts = (0..available)
        .map(|i| {
            let run = PipelineConfig {
                set_index: i,
                ..*cfg
            };
            decide(g, &run).map(|r| r.verdict)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut multiset: Vec<(Verdict, usize)> = Vec::new();
    let mut sorted = verdicts.clone();
    sorted.sort();
    for v in sorted {
        match multiset.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => multiset.push((v, 1)),
        }
    }
    Ok(ConsistencyResult {
        sets_available: available,
        consistent: multiset.len() <= 1,
        verdicts,
        multiset,
    })
}

pub(crate) fn is_inconsistent(g: &Graph, k: usize, cfg: &PipelineConfig) -> bool {
    matches!(cycle_set_consistency(g, k, cfg), Ok(r) if !r.consistent)
}
