//! Exhaustive sweeps: the pipeline against the exact oracle on every
//! connected graph in a range of orders.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::consistency::{cycle_set_consistency, is_inconsistent};
use super::enumerate::{connected_graphs_from_corpus, enumerate_connected_graphs, INTERNAL_ENUMERATION_MAX};
use super::minimize::{is_discrepancy, minimize_while};
use crate::error::{Error, Result};
use crate::graph::{emit_graph6, parse_graph6, Graph};
use crate::oracle::is_hamiltonian;
use crate::verdict::{decide, EdgeCase, PipelineConfig, Stage, Termination, Verdict, VerdictReport};

/// Graphs evaluated between two appends to the record file.
const CHUNK: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    /// The pipeline's decided verdict differs from the oracle.
    Discrepancy,
    /// Different full cycle-sets of one graph led to different verdicts.
    Inconsistency,
}

/// One persisted counterexample, replayable from its own fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub kind: RecordKind,
    pub n: usize,
    pub graph6: String,
    pub pipeline_verdict: Verdict,
    pub oracle_verdict: bool,
    pub class: String,
    pub config: PipelineConfig,
    pub trace_digest: String,
    /// A locally minimal graph with the same defect, when minimisation ran.
    pub minimized: Option<String>,
    /// Verdict per full cycle-set index; only for inconsistencies.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
}

impl DiscrepancyRecord {
    fn new(kind: RecordKind, g: &Graph, report: &VerdictReport, oracle: bool) -> Self {
        DiscrepancyRecord {
            kind,
            n: g.n(),
            graph6: emit_graph6(g).expect("harness orders fit graph6"),
            pipeline_verdict: report.verdict,
            oracle_verdict: oracle,
            class: outcome_class(report).to_string(),
            config: report.config,
            trace_digest: report.digest(),
            minimized: None,
            verdicts: Vec::new(),
        }
    }

    /// Re-runs the pipeline from the echoed config; true when both the
    /// verdict and the trace digest are reproduced.
    pub fn replay(&self) -> Result<bool> {
        let g = parse_graph6(&self.graph6)?;
        let report = decide(&g, &self.config)?;
        Ok(report.verdict == self.pipeline_verdict && report.digest() == self.trace_digest)
    }
}

/// Where the pipeline settled: a short-circuit stage, the edge case of the
/// set F came from, or a failure.
pub fn outcome_class(report: &VerdictReport) -> &'static str {
    match report.reason {
        Termination::Bridge => "bridge",
        Termination::Rejected(_) => "reduction",
        Termination::BudgetExhausted(_) => "undecided",
        Termination::FConnected | Termination::FDisconnected => match report.edge_case {
            Some(EdgeCase::R1Only) => "R1-only",
            Some(EdgeCase::R1R2) => "R1R2",
            Some(EdgeCase::R1R3Plus) => "R1R3plus",
            Some(EdgeCase::R1R2R3Plus) => "R1R2R3plus",
            None => "anomaly",
        },
    }
}

/// Pipeline verdict against oracle verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub hamiltonian_agree: usize,
    pub hamiltonian_but_oracle_non: usize,
    pub non_but_oracle_hamiltonian: usize,
    pub non_agree: usize,
    pub undecided_oracle_hamiltonian: usize,
    pub undecided_oracle_non: usize,
}

impl Tally {
    fn add(&mut self, pipeline: Verdict, oracle: bool) {
        let cell = match (pipeline, oracle) {
            (Verdict::Hamiltonian, true) => &mut self.hamiltonian_agree,
            (Verdict::Hamiltonian, false) => &mut self.hamiltonian_but_oracle_non,
            (Verdict::NonHamiltonian, true) => &mut self.non_but_oracle_hamiltonian,
            (Verdict::NonHamiltonian, false) => &mut self.non_agree,
            (Verdict::Undecided, true) => &mut self.undecided_oracle_hamiltonian,
            (Verdict::Undecided, false) => &mut self.undecided_oracle_non,
        };
        *cell += 1;
    }

    fn merge(&mut self, other: &Tally) {
        self.hamiltonian_agree += other.hamiltonian_agree;
        self.hamiltonian_but_oracle_non += other.hamiltonian_but_oracle_non;
        self.non_but_oracle_hamiltonian += other.non_but_oracle_hamiltonian;
        self.non_agree += other.non_agree;
        self.undecided_oracle_hamiltonian += other.undecided_oracle_hamiltonian;
        self.undecided_oracle_non += other.undecided_oracle_non;
    }

    pub fn agreements(&self) -> usize {
        self.hamiltonian_agree + self.non_agree
    }

    pub fn disagreements(&self) -> usize {
        self.hamiltonian_but_oracle_non + self.non_but_oracle_hamiltonian
    }

    pub fn undecided(&self) -> usize {
        self.undecided_oracle_hamiltonian + self.undecided_oracle_non
    }

    pub fn total(&self) -> usize {
        self.agreements() + self.disagreements() + self.undecided()
    }

    pub fn oracle_hamiltonian(&self) -> usize {
        self.hamiltonian_agree + self.non_but_oracle_hamiltonian + self.undecided_oracle_hamiltonian
    }

    /// Agreements over all processed graphs; 1 for an empty tally.
    pub fn agreement_rate(&self) -> f64 {
        if self.total() == 0 {
            1.0
        } else {
            self.agreements() as f64 / self.total() as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderCounts {
    pub n: usize,
    pub processed: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub undecided: usize,
    /// Pipeline calls that failed outright; counted under `undecided`.
    pub errors: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub checked: usize,
    pub passed: usize,
}

impl Checks {
    fn add(&mut self, outcome: Option<bool>) {
        if let Some(ok) = outcome {
            self.checked += 1;
            self.passed += usize::from(ok);
        }
    }
}

/// Agreement of verdicts across full cycle-sets, per order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyCounts {
    pub n: usize,
    /// Bridged or rejected by the reduction before cycle-sets exist.
    pub ineligible: usize,
    pub single_set: usize,
    pub multiple_sets: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub budget_exhausted: usize,
}

impl ConsistencyCounts {
    /// Consistent share of graphs with at least two full cycle-sets.
    pub fn consistent_fraction(&self) -> f64 {
        if self.multiple_sets == 0 {
            1.0
        } else {
            self.consistent as f64 / self.multiple_sets as f64
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordCounts {
    pub discrepancies: usize,
    pub inconsistencies: usize,
    pub replay_checked: usize,
    pub replay_reproduced: usize,
}

/// Everything that determines a sweep's results. Worker count is not part
/// of it: results never depend on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub n_min: usize,
    pub n_max: usize,
    pub pipeline: PipelineConfig,
    /// Minimise every persisted counterexample.
    pub minimize: bool,
    /// Also compare verdicts across up to this many full cycle-sets.
    pub consistency_sets: Option<usize>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            n_min: 3,
            n_max: 6,
            pipeline: PipelineConfig::default(),
            minimize: true,
            consistency_sets: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub settings: SweepSettings,
    pub per_n: Vec<OrderCounts>,
    pub matrix: Tally,
    /// The matrix split by where the pipeline settled.
    pub by_class: BTreeMap<String, Tally>,
    /// Independent re-check of every full cycle-set the pipeline used.
    pub full_sets: Checks,
    /// F is a spanning cycle iff the verdict is Hamiltonian, on R1-only sets.
    pub r1_only_consistency: Checks,
    pub consistency: Vec<ConsistencyCounts>,
    pub records: RecordCounts,
}

impl SweepReport {
    pub fn processed(&self) -> usize {
        self.per_n.iter().map(|c| c.processed).sum()
    }

    pub fn consistency_total(&self) -> ConsistencyCounts {
        let mut total = ConsistencyCounts::default();
        for c in &self.consistency {
            total.ineligible += c.ineligible;
            total.single_set += c.single_set;
            total.multiple_sets += c.multiple_sets;
            total.consistent += c.consistent;
            total.inconsistent += c.inconsistent;
            total.budget_exhausted += c.budget_exhausted;
        }
        total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

pub struct SweepOutcome {
    pub report: SweepReport,
    pub records: Vec<DiscrepancyRecord>,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SetsOutcome {
    Ineligible,
    Single,
    Consistent,
    Inconsistent,
    Budget,
}

struct GraphOutcome {
    class: &'static str,
    pipeline: Verdict,
    oracle: bool,
    error: bool,
    full_set: Option<bool>,
    r1_only: Option<bool>,
    sets: Option<SetsOutcome>,
    records: Vec<DiscrepancyRecord>,
}

/// Re-checks the full cycle-set in a trace using only plain edge lists:
/// size E - V + 1, full coverage, and R labels that count memberships and
/// sum to the total cycle length.
pub fn full_set_trace_valid(report: &VerdictReport) -> Option<bool> {
    let mut n = None;
    let mut edges = None;
    let mut set = None;
    for stage in &report.stages {
        match stage {
            Stage::Input { n: order, .. } => n = Some(*order),
            Stage::Reduction { reduced_edges, .. } => edges = Some(reduced_edges),
            Stage::FullCycleSet { set: s, .. } => set = Some(s),
            _ => {}
        }
    }
    let (n, edges, set) = (n?, edges?, set?);
    let edge_set: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut vertices = BTreeSet::new();
    let mut total_len = 0;
    for cycle in &set.cycles {
        let distinct: BTreeSet<_> = cycle.iter().collect();
        if cycle.len() < 3 || distinct.len() != cycle.len() {
            return Some(false);
        }
        for i in 0..cycle.len() {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            let e = (a.min(b), a.max(b));
            if !edge_set.contains(&e) {
                return Some(false);
            }
            *counts.entry(e).or_default() += 1;
            vertices.insert(a);
        }
        total_len += cycle.len() as u32;
    }
    let labels: BTreeMap<(usize, usize), u32> =
        set.labels.iter().map(|&(a, b, r)| ((a, b), r)).collect();
    Some(
        set.cycles.len() + n == edges.len() + 1
            && vertices.len() == n
            && counts.len() == edge_set.len()
            && labels == counts
            && labels.values().sum::<u32>() == total_len,
    )
}

fn r1_only_check(report: &VerdictReport) -> Option<bool> {
    if report.edge_case != Some(EdgeCase::R1Only) {
        return None;
    }
    let spanning = report.f_spanning_cycle?;
    Some(spanning == (report.verdict == Verdict::Hamiltonian))
}

fn evaluate(g: &Graph, settings: &SweepSettings) -> GraphOutcome {
    let cfg = &settings.pipeline;
    let oracle = is_hamiltonian(g);
    let mut outcome = match decide(g, cfg) {
        Ok(report) => {
            let mut records = Vec::new();
            let decided = report.verdict != Verdict::Undecided;
            if decided && (report.verdict == Verdict::Hamiltonian) != oracle {
                let mut record = DiscrepancyRecord::new(RecordKind::Discrepancy, g, &report, oracle);
                if settings.minimize {
                    let small = minimize_while(g, |h| is_discrepancy(h, cfg));
                    record.minimized = Some(emit_graph6(&small).expect("smaller graph"));
                }
                records.push(record);
            }
            GraphOutcome {
                class: outcome_class(&report),
                pipeline: report.verdict,
                oracle,
                error: false,
                full_set: full_set_trace_valid(&report),
                r1_only: r1_only_check(&report),
                sets: None,
                records,
            }
        }
        Err(_) => GraphOutcome {
            class: "error",
            pipeline: Verdict::Undecided,
            oracle,
            error: true,
            full_set: None,
            r1_only: None,
            sets: None,
            records: Vec::new(),
        },
    };
    if let Some(k) = settings.consistency_sets {
        outcome.sets = Some(match cycle_set_consistency(g, k, cfg) {
            Err(Error::Budget { .. }) => SetsOutcome::Budget,
            Err(_) => SetsOutcome::Ineligible,
            Ok(c) if c.sets_available < 2 => SetsOutcome::Single,
            Ok(c) if c.consistent => SetsOutcome::Consistent,
            Ok(c) => {
                let first = decide(g, cfg).expect("ran above");
                let mut record = DiscrepancyRecord::new(RecordKind::Inconsistency, g, &first, oracle);
                record.verdicts = c.verdicts;
                if settings.minimize {
                    let small = minimize_while(g, |h| is_inconsistent(h, k, cfg));
                    record.minimized = Some(emit_graph6(&small).expect("smaller graph"));
                }
                outcome.records.push(record);
                SetsOutcome::Inconsistent
            }
        });
    }
    outcome
}

/// Connected graphs of order `n`, internally or from a graph6 corpus.
pub fn graphs_of_order(n: usize, corpus: Option<&str>) -> Result<Vec<Graph>> {
    match corpus {
        Some(text) if n > INTERNAL_ENUMERATION_MAX => connected_graphs_from_corpus(text, n),
        _ => enumerate_connected_graphs(n),
    }
}

/// Runs the pipeline and the oracle on every connected graph with
/// `n_min..=n_max` vertices.
///
/// Records are appended to `out` chunk by chunk in enumeration order, so
/// the file is identical for any worker count. A tenth of the records
/// (every tenth, starting with the first) are replayed afterwards.
pub fn sweep(
    settings: &SweepSettings,
    jobs: usize,
    corpus: Option<&str>,
    out: Option<&Path>,
) -> Result<SweepOutcome> {
    let mut sink = match out {
        Some(path) => Some(BufWriter::new(File::create(path)?)),
        None => None,
    };
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::input(format!("thread pool: {e}")))?;

    let mut report = SweepReport {
        settings: settings.clone(),
        per_n: Vec::new(),
        matrix: Tally::default(),
        by_class: BTreeMap::new(),
        full_sets: Checks::default(),
        r1_only_consistency: Checks::default(),
        consistency: Vec::new(),
        records: RecordCounts::default(),
    };
    let mut records = Vec::new();
    for n in settings.n_min.max(3)..=settings.n_max {
        let graphs = graphs_of_order(n, corpus)?;
        let mut counts = OrderCounts {
            n,
            ..OrderCounts::default()
        };
        let mut sets = ConsistencyCounts {
            n,
            ..ConsistencyCounts::default()
        };
        for chunk in graphs.chunks(CHUNK) {
            let outcomes: Vec<GraphOutcome> =
                pool.install(|| chunk.par_iter().map(|g| evaluate(g, settings)).collect());
            for o in outcomes {
                let mut single = Tally::default();
                single.add(o.pipeline, o.oracle);
                report.matrix.merge(&single);
                report.by_class.entry(o.class.to_string()).or_default().merge(&single);
                counts.processed += 1;
                counts.agreements += single.agreements();
                counts.disagreements += single.disagreements();
                counts.undecided += single.undecided();
                counts.errors += usize::from(o.error);
                report.full_sets.add(o.full_set);
                report.r1_only_consistency.add(o.r1_only);
                match o.sets {
                    None => {}
                    Some(SetsOutcome::Ineligible) => sets.ineligible += 1,
                    Some(SetsOutcome::Single) => sets.single_set += 1,
                    Some(SetsOutcome::Budget) => sets.budget_exhausted += 1,
                    Some(SetsOutcome::Consistent) => {
                        sets.multiple_sets += 1;
                        sets.consistent += 1;
                    }
                    Some(SetsOutcome::Inconsistent) => {
                        sets.multiple_sets += 1;
                        sets.inconsistent += 1;
                    }
                }
                for record in o.records {
                    if let Some(w) = sink.as_mut() {
                        serde_json::to_writer(&mut *w, &record)?;
                        w.write_all(b"\n")?;
                    }
                    match record.kind {
                        RecordKind::Discrepancy => report.records.discrepancies += 1,
                        RecordKind::Inconsistency => report.records.inconsistencies += 1,
                    }
                    records.push(record);
                }
            }
            if let Some(w) = sink.as_mut() {
                w.flush()?;
            }
        }
        report.per_n.push(counts);
        if settings.consistency_sets.is_some() {
            report.consistency.push(sets);
        }
    }

    for record in records.iter().step_by(10) {
        report.records.replay_checked += 1;
        report.records.replay_reproduced += usize::from(record.replay()?);
    }
    Ok(SweepOutcome {
        report,
        records,
        elapsed: start.elapsed(),
    })
}

/// Reads records back from a JSON-lines file.
pub fn read_records(text: &str) -> Result<Vec<DiscrepancyRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::input_at(i + 1, e.to_string())))
        .collect()
}
