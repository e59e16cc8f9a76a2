//! The end-to-end decision pipeline with a replayable stage trace.
//!
//! Order of stages:
//!
//! 1. bridge check;
//! 2. degree-forcing reduction (N3 / low degree / disconnection rejects);
//! 3. full cycle-set of the reduced graph (bridges re-checked first);
//! 4. removable members deleted one at a time, skipping those the Cx mode flags;
//! 5. spanning cycle-set Fs of the reduced graph;
//! 6. Cx: the first flagged removable member left after stage 4, if any;
//! 7. Fs + Cx recombination, or Fs alone when there is no Cx;
//! 8. F: R = 2 edges deleted, then reduced to a fixpoint;
//! 9. Hamiltonian iff F is connected over every vertex.
//!
//! Budget exhaustion anywhere yields [`Verdict::Undecided`] naming the stage.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cycles::{
    detect_cx, enumerate_cycles, flags_as_cx, induce_free_subgraph, recombine_fs_cx,
    removable_cycles, spanning_from_cycles, BoundaryRule, Budget, CxMode, CxStatus, CycleSet,
    CycleSetTrace,
};
use crate::error::{Error, Result};
use crate::graph::{emit_graph6, Graph, Vertex, GRAPH6_MAX_VERTICES};
use crate::reduction::{eliminate_unusable_edges, Edge, RejectReason, Rejection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub mode: CxMode,
    pub boundary: BoundaryRule,
    pub budget: Budget,
    pub seed: u64,
    /// Which full cycle-set, in search order, drives the removal stage.
    pub set_index: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            mode: CxMode::Oracle,
            boundary: BoundaryRule::Relaxed,
            budget: Budget::default(),
            seed: 0,
            set_index: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Hamiltonian,
    NonHamiltonian,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Hamiltonian => "Hamiltonian",
            Verdict::NonHamiltonian => "NonHamiltonian",
            Verdict::Undecided => "Undecided",
        })
    }
}

/// Which R values occur in the set that F is induced from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeCase {
    #[serde(rename = "R1-only")]
    R1Only,
    #[serde(rename = "R1R2")]
    R1R2,
    #[serde(rename = "R1R3plus")]
    R1R3Plus,
    #[serde(rename = "R1R2R3plus")]
    R1R2R3Plus,
}

impl fmt::Display for EdgeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeCase::R1Only => "R1-only",
            EdgeCase::R1R2 => "R1R2",
            EdgeCase::R1R3Plus => "R1R3plus",
            EdgeCase::R1R2R3Plus => "R1R2R3plus",
        })
    }
}

/// Classifies a cycle-set by the R values on its union edges. A set without
/// any R = 1 edge is a structural anomaly.
pub fn classify_edge_case(cs: &CycleSet) -> Result<EdgeCase> {
    let present: BTreeSet<u32> = cs.labels().iter().copied().filter(|&r| r > 0).collect();
    if !present.contains(&1) {
        return Err(Error::Structural(format!(
            "cycle-set has no R = 1 edge (labels present: {present:?})"
        )));
    }
    let two = present.contains(&2);
    let three = present.iter().any(|&r| r >= 3);
    Ok(match (two, three) {
        (false, false) => EdgeCase::R1Only,
        (true, false) => EdgeCase::R1R2,
        (false, true) => EdgeCase::R1R3Plus,
        (true, true) => EdgeCase::R1R2R3Plus,
    })
}

/// Why the pipeline stopped where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Bridge,
    Rejected(RejectReason),
    FConnected,
    FDisconnected,
    BudgetExhausted(&'static str),
}

fn seqs(cycles: &[crate::cycles::Cycle]) -> Vec<Vec<Vertex>> {
    cycles.iter().map(|c| c.vertices().to_vec()).collect()
}

/// One trace entry. Serialised as one JSON object per line, tagged by `stage`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Stage {
    Input {
        n: usize,
        edges: usize,
        graph6: Option<String>,
    },
    Bridges {
        bridges: Vec<Edge>,
    },
    Reduction {
        eliminated: Vec<Edge>,
        forced: Vec<Edge>,
        rejected: Option<Rejection>,
        reduced_edges: Vec<Edge>,
    },
    ReducedBridges {
        bridges: Vec<Edge>,
    },
    FullCycleSet {
        cycles_enumerated: usize,
        sets_found: usize,
        index: usize,
        set: CycleSetTrace,
    },
    Removal {
        removed: Vec<Vec<Vertex>>,
        flagged_cx: Vec<Vec<Vertex>>,
        remaining: CycleSetTrace,
    },
    Spanning {
        set: CycleSetTrace,
    },
    Cx {
        mode: CxMode,
        cx: Option<Vec<Vertex>>,
        status: CxStatus,
    },
    Combined {
        recombined: bool,
        edge_case: Option<EdgeCase>,
        set: CycleSetTrace,
    },
    FreeSubgraph {
        deleted_r2: Vec<Edge>,
        eliminated: Vec<Edge>,
        edges: Vec<Edge>,
        rejected: Option<Rejection>,
        connected: bool,
        spanning_cycle: bool,
    },
    Budget {
        exhausted: &'static str,
        limit: usize,
        partial: usize,
    },
    Verdict {
        verdict: Verdict,
        reason: Termination,
    },
}

#[derive(Serialize)]
struct ConfigLine<'a> {
    stage: &'static str,
    #[serde(flatten)]
    config: &'a PipelineConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub reason: Termination,
    pub stages: Vec<Stage>,
    pub config: PipelineConfig,
    /// Case of the set F was induced from, when the pipeline got that far.
    pub edge_case: Option<EdgeCase>,
    /// Whether F is a single cycle through every vertex, when computed.
    pub f_spanning_cycle: Option<bool>,
    /// Full cycle-sets available to `set_index`, when computed.
    pub sets_found: Option<usize>,
}

impl VerdictReport {
    /// The trace as JSON lines: the config echo first, then every stage.
    pub fn to_trace_lines(&self) -> String {
        let mut out = serde_json::to_string(&ConfigLine {
            stage: "config",
            config: &self.config,
        })
        .expect("config serialises");
        out.push('\n');
        for stage in &self.stages {
            out.push_str(&serde_json::to_string(stage).expect("stage serialises"));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the trace text, hex encoded.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_trace_lines().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

struct Run {
    config: PipelineConfig,
    stages: Vec<Stage>,
    edge_case: Option<EdgeCase>,
    f_spanning_cycle: Option<bool>,
    sets_found: Option<usize>,
}

impl Run {
    fn finish(mut self, verdict: Verdict, reason: Termination) -> VerdictReport {
        self.stages.push(Stage::Verdict { verdict, reason });
        VerdictReport {
            verdict,
            reason,
            stages: self.stages,
            config: self.config,
            edge_case: self.edge_case,
            f_spanning_cycle: self.f_spanning_cycle,
            sets_found: self.sets_found,
        }
    }

    /// Turns a budget error into an `Undecided` report; other errors pass through.
    fn budget(mut self, err: Error) -> Result<VerdictReport> {
        match err {
            Error::Budget {
                stage,
                limit,
                partial,
            } => {
                self.stages.push(Stage::Budget {
                    exhausted: stage,
                    limit,
                    partial,
                });
                Ok(self.finish(Verdict::Undecided, Termination::BudgetExhausted(stage)))
            }
            other => Err(other),
        }
    }
}

fn bridge_pairs(g: &Graph) -> Vec<Edge> {
    g.bridges().into_iter().map(|id| g.edge(id)).collect()
}

/// Runs the pipeline on a connected graph with at least 3 vertices.
pub fn decide(g: &Graph, cfg: &PipelineConfig) -> Result<VerdictReport> {
    if g.n() < 3 {
        return Err(Error::input(format!("decide needs n >= 3, got {}", g.n())));
    }
    if !g.is_connected() {
        return Err(Error::input("decide needs a connected graph"));
    }
    let mut run = Run {
        config: *cfg,
        stages: Vec::new(),
        edge_case: None,
        f_spanning_cycle: None,
        sets_found: None,
    };
    run.stages.push(Stage::Input {
        n: g.n(),
        edges: g.edge_count(),
        graph6: (g.n() <= GRAPH6_MAX_VERTICES).then(|| emit_graph6(g).expect("size checked")),
    });

    let bridges = bridge_pairs(g);
    let bridged = !bridges.is_empty();
    run.stages.push(Stage::Bridges { bridges });
    if bridged {
        return Ok(run.finish(Verdict::NonHamiltonian, Termination::Bridge));
    }

    let reduction = eliminate_unusable_edges(g)?;
    let reduced = reduction.reduced;
    run.stages.push(Stage::Reduction {
        eliminated: reduction.eliminated,
        forced: reduction.forced,
        rejected: reduction.rejected,
        reduced_edges: reduced.edges().to_vec(),
    });
    if let Some(rejection) = reduction.rejected {
        return Ok(run.finish(Verdict::NonHamiltonian, Termination::Rejected(rejection.reason)));
    }

    // Elimination can strand an edge on no cycle.
    let bridges = bridge_pairs(&reduced);
    if !bridges.is_empty() {
        run.stages.push(Stage::ReducedBridges { bridges });
        return Ok(run.finish(Verdict::NonHamiltonian, Termination::Bridge));
    }

    let cycles = match enumerate_cycles(&reduced, cfg.budget.cycles) {
        Ok(c) => c,
        Err(e) => return run.budget(e),
    };
    let wanted = Budget {
        sets: cfg.set_index + 1,
        ..cfg.budget
    };
    let sets = match crate::cycles::full_sets_from_cycles(&reduced, &cycles, &wanted, cfg.seed) {
        Ok(s) => s,
        Err(e) => return run.budget(e),
    };
    run.sets_found = Some(sets.len());
    let Some(full) = sets.into_iter().nth(cfg.set_index) else {
        return Err(Error::input(format!(
            "full cycle-set index {} not available ({} found)",
            cfg.set_index,
            run.sets_found.unwrap_or(0)
        )));
    };
    run.stages.push(Stage::FullCycleSet {
        cycles_enumerated: cycles.len(),
        sets_found: run.sets_found.unwrap_or(0),
        index: cfg.set_index,
        set: (&full).into(),
    });

    let mut set = full.with_boundary_rule(cfg.boundary);
    let mut removed = Vec::new();
    let mut flagged: Vec<crate::cycles::Cycle> = Vec::new();
    loop {
        let mut next = None;
        for candidate in removable_cycles(&set) {
            if flags_as_cx(&set, candidate.index, cfg.mode) {
                if !flagged.contains(&candidate.cycle) {
                    flagged.push(candidate.cycle);
                }
                continue;
            }
            next = Some(candidate);
            break;
        }
        let Some(candidate) = next else { break };
        set = set.without_member(candidate.index);
        removed.push(candidate.cycle);
    }
    run.stages.push(Stage::Removal {
        removed: seqs(&removed),
        flagged_cx: seqs(&flagged),
        remaining: (&set).into(),
    });

    let fs = match spanning_from_cycles(&reduced, &cycles, &cfg.budget) {
        Ok(fs) => fs.with_boundary_rule(cfg.boundary),
        Err(e) => return run.budget(e),
    };
    run.stages.push(Stage::Spanning { set: (&fs).into() });

    let cx = if removable_cycles(&set).is_empty() {
        None
    } else {
        detect_cx(&set, cfg.mode)?
    };
    run.stages.push(Stage::Cx {
        mode: cfg.mode,
        cx: cx.as_ref().map(|c| c.cycle.vertices().to_vec()),
        status: cx.as_ref().map_or(CxStatus::NotCx, |c| c.cx_status),
    });

    let combined = match &cx {
        Some(info) => recombine_fs_cx(&fs, &info.cycle)?,
        None => fs,
    };
    run.edge_case = classify_edge_case(&combined).ok();
    run.stages.push(Stage::Combined {
        recombined: cx.is_some(),
        edge_case: run.edge_case,
        set: (&combined).into(),
    });

    let f = induce_free_subgraph(&combined);
    let connected = f.is_connected();
    run.f_spanning_cycle = Some(f.is_spanning_cycle());
    run.stages.push(Stage::FreeSubgraph {
        deleted_r2: f.deleted_r2,
        eliminated: f.eliminated,
        edges: f.graph.edges().to_vec(),
        rejected: f.rejected,
        connected,
        spanning_cycle: run.f_spanning_cycle.unwrap_or(false),
    });
    Ok(if connected {
        run.finish(Verdict::Hamiltonian, Termination::FConnected)
    } else {
        run.finish(Verdict::NonHamiltonian, Termination::FDisconnected)
    })
}
