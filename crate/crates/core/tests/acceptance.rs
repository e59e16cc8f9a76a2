//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hamcycle_core::cycles::{find_full_cycle_sets, BoundaryRule, Budget, CxMode, CycleSet};
use hamcycle_core::graph::parse_graph6;
use hamcycle_core::harness::{
    enumerate_connected_graphs, is_discrepancy, read_records, sweep, DiscrepancyRecord,
    RecordKind, SweepOutcome, SweepSettings,
};
use hamcycle_core::oracle::{enumerate_hamilton_cycles, hamiltonian_backtrack, hamiltonian_dp};
use hamcycle_core::reduction::{eliminate_unusable_edges, has_n3};
use hamcycle_core::verdict::Stage;
use hamcycle_core::{decide, EdgeId, Graph, PipelineConfig};

const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
const SWEEP_TIME_LIMIT: Duration = Duration::from_secs(30 * 60);
const SWEEP_WORKERS: usize = 8;
const CONSISTENCY_SETS: usize = 8;
const SEED: u64 = 0;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn modes() -> Vec<(String, PipelineConfig)> {
    let mut out = Vec::new();
    for (mname, mode) in [("oracle", CxMode::Oracle), ("procedural", CxMode::Procedural)] {
        for (bname, boundary) in [("default", BoundaryRule::Relaxed), ("strict", BoundaryRule::Strict)] {
            out.push((
                format!("{mname}/{bname}"),
                PipelineConfig {
                    mode,
                    boundary,
                    seed: SEED,
                    ..PipelineConfig::default()
                },
            ));
        }
    }
    out
}

fn graphs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max)
        .flat_map(|n| enumerate_connected_graphs(n).expect("internal enumeration"))
        .collect()
}

fn oracle_exactness() -> Outcome {
    let start = Instant::now();
    let graphs = enumerate_connected_graphs(7).map_err(|e| e.to_string())?;
    ensure(graphs.len() == 853, || format!("expected 853 graphs on 7 vertices, got {}", graphs.len()))?;
    let mut hamiltonian = 0;
    for g in &graphs {
        let witness = hamiltonian_backtrack(g);
        let dp = hamiltonian_dp(g).map_err(|e| e.to_string())?;
        ensure(witness.is_some() == dp, || format!("methods disagree on {g:?}"))?;
        if let Some(c) = witness {
            ensure(c.is_valid_for(g), || format!("invalid witness on {g:?}"))?;
            hamiltonian += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "853/853 agree ({hamiltonian} Hamiltonian), {:.2}s single worker",
        elapsed.as_secs_f64()
    ))
}

fn named_graphs() -> Outcome {
    let both = |g: &Graph| -> Result<bool, String> {
        let bt = hamiltonian_backtrack(g).is_some();
        let dp = hamiltonian_dp(g).map_err(|e| e.to_string())?;
        ensure(bt == dp, || format!("methods disagree on {g:?}"))?;
        Ok(bt)
    };
    for n in 3..=12 {
        let c = Graph::cycle(n).map_err(|e| e.to_string())?;
        ensure(both(&c)?, || format!("C{n} reported non-Hamiltonian"))?;
    }
    let k23 = Graph::complete_bipartite(2, 3).map_err(|e| e.to_string())?;
    ensure(!both(&k23)?, || "K2,3 reported Hamiltonian".into())?;
    ensure(!both(&Graph::petersen())?, || "Petersen reported Hamiltonian".into())?;
    Ok("C3..C12 Hamiltonian; K2,3 and Petersen non-Hamiltonian".into())
}

fn n3_soundness() -> Outcome {
    let mut with_n3 = 0;
    let mut total = 0;
    for g in graphs_up_to(8) {
        total += 1;
        if has_n3(&g) {
            with_n3 += 1;
            ensure(hamiltonian_backtrack(&g).is_none(), || format!("N3 graph is Hamiltonian: {g:?}"))?;
        }
    }
    Ok(format!("{with_n3}/{total} graphs have an N3 vertex; all non-Hamiltonian"))
}

fn elimination_soundness() -> Outcome {
    let mut eliminated_total = 0;
    let mut graphs = 0;
    for g in graphs_up_to(7).into_iter().filter(|g| g.n() >= 3) {
        graphs += 1;
        let result = eliminate_unusable_edges(&g).map_err(|e| e.to_string())?;
        let cycles = enumerate_hamilton_cycles(&g, usize::MAX).map_err(|e| e.to_string())?;
        let used: BTreeSet<(usize, usize)> = cycles.iter().flat_map(|c| c.edges().collect::<Vec<_>>()).collect();
        for e in &result.eliminated {
            eliminated_total += 1;
            ensure(!used.contains(e), || format!("eliminated {e:?} lies on a Hamilton cycle of {g:?}"))?;
        }
    }
    Ok(format!("{eliminated_total} eliminated edges over {graphs} graphs; none on a Hamilton cycle"))
}

/// Plain re-check of a full cycle-set from its vertex sequences only.
fn full_set_ok(parent: &Graph, cycles: &[Vec<usize>], labels: &BTreeMap<(usize, usize), u32>) -> bool {
    let edges: BTreeSet<(usize, usize)> = parent.edges().iter().copied().collect();
    let mut counts: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    let mut total = 0u32;
    for c in cycles {
        if c.len() < 3 || c.iter().collect::<BTreeSet<_>>().len() != c.len() {
            return false;
        }
        for i in 0..c.len() {
            let (a, b) = (c[i], c[(i + 1) % c.len()]);
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                return false;
            }
            *counts.entry(e).or_default() += 1;
            seen.insert(a);
        }
        total += c.len() as u32;
    }
    cycles.len() + parent.n() == parent.edge_count() + 1
        && seen.len() == parent.n()
        && counts.len() == edges.len()
        && &counts == labels
        && labels.values().sum::<u32>() == total
}

fn set_ok(cs: &CycleSet) -> bool {
    let cycles: Vec<Vec<usize>> = cs.cycles().iter().map(|c| c.vertices().to_vec()).collect();
    let labels: BTreeMap<(usize, usize), u32> = cs
        .parent()
        .edges()
        .iter()
        .zip(cs.labels())
        .map(|(&e, &r)| (e, r))
        .collect();
    full_set_ok(cs.parent(), &cycles, &labels)
}

fn full_set_validity(sweeps: &[(String, SweepOutcome)]) -> Outcome {
    let mut checked = 0;
    // Every set the sweeps' consistency stage can build: up to the set budget.
    for g in graphs_up_to(7).into_iter().filter(|g| g.n() >= 3 && g.bridges().is_empty()) {
        let reduced = eliminate_unusable_edges(&g).map_err(|e| e.to_string())?;
        if reduced.rejected.is_some() || !reduced.reduced.bridges().is_empty() {
            continue;
        }
        let budget = Budget {
            sets: CONSISTENCY_SETS,
            ..Budget::default()
        };
        for cs in find_full_cycle_sets(&reduced.reduced, &budget, SEED).map_err(|e| e.to_string())? {
            checked += 1;
            ensure(set_ok(&cs), || format!("invalid full set {cs:?}"))?;
        }
        // And the set the pipeline itself used, read back from its trace.
        let report = decide(&g, &PipelineConfig::default()).map_err(|e| e.to_string())?;
        let traced = report.stages.iter().find_map(|s| match s {
            Stage::FullCycleSet { set, .. } => Some(set.clone()),
            _ => None,
        });
        let set = traced.ok_or("no full set in trace")?;
        let labels = set.labels.iter().map(|&(a, b, r)| ((a, b), r)).collect();
        checked += 1;
        ensure(full_set_ok(&reduced.reduced, &set.cycles, &labels), || format!("traced set invalid for {g:?}"))?;
    }
    for (name, s) in sweeps {
        let fs = s.report.full_sets;
        ensure(fs.checked > 0 && fs.checked == fs.passed, || format!("{name}: sweep full-set checks {fs:?}"))?;
    }
    Ok(format!("{checked} constructed sets valid (size, coverage, label sums)"))
}

fn check_records(records: &[DiscrepancyRecord], cfg: &PipelineConfig) -> Result<(), String> {
    for r in records {
        ensure(r.replay().map_err(|e| e.to_string())?, || format!("record does not replay: {}", r.graph6))?;
        let small = r.minimized.as_ref().ok_or("record without minimized graph")?;
        let small = parse_graph6(small).map_err(|e| e.to_string())?;
        if r.kind == RecordKind::Discrepancy {
            ensure(is_discrepancy(&small, cfg), || format!("minimized graph is no discrepancy: {}", r.graph6))?;
            for id in 0..small.edge_count() {
                let h = small.without_edges(&[EdgeId(id)]);
                ensure(!is_discrepancy(&h, cfg), || format!("minimized {} not edge-minimal", r.graph6))?;
            }
            for v in 0..small.n() {
                let h = small.without_vertex(v).map_err(|e| e.to_string())?;
                ensure(!is_discrepancy(&h, cfg), || format!("minimized {} not vertex-minimal", r.graph6))?;
            }
        }
    }
    Ok(())
}

fn claim_evaluation(sweeps: &[(String, SweepOutcome)], files: &[(String, String)]) -> Outcome {
    let mut summary = Vec::new();
    for ((name, s), (_, text)) in sweeps.iter().zip(files) {
        let r = &s.report;
        ensure(s.elapsed < SWEEP_TIME_LIMIT, || format!("{name}: sweep took {:?}", s.elapsed))?;
        ensure(r.per_n.iter().map(|c| c.n).collect::<Vec<_>>() == (3..=8).collect::<Vec<_>>(), || {
            format!("{name}: orders {:?}", r.per_n)
        })?;
        let expected = [2, 6, 21, 112, 853, 11117];
        ensure(r.per_n.iter().map(|c| c.processed).eq(expected), || format!("{name}: counts {:?}", r.per_n))?;
        for c in &r.per_n {
            ensure(c.processed == c.agreements + c.disagreements + c.undecided, || format!("{name}: {c:?}"))?;
        }
        ensure(r.by_class.values().map(|t| t.total()).sum::<usize>() == r.processed(), || {
            format!("{name}: class partition does not cover the sweep")
        })?;
        let persisted = read_records(text).map_err(|e| e.to_string())?;
        ensure(persisted == s.records, || format!("{name}: record file differs from returned records"))?;
        ensure(r.records.discrepancies == r.matrix.disagreements(), || {
            format!("{name}: {} records for {} disagreements", r.records.discrepancies, r.matrix.disagreements())
        })?;
        check_records(&s.records, &r.settings.pipeline)?;
        summary.push(format!(
            "{name} {:.2}% ({}/{}, {:.1}s)",
            100.0 * r.matrix.agreement_rate(),
            r.matrix.agreements(),
            r.processed(),
            s.elapsed.as_secs_f64()
        ));
    }
    Ok(format!("agreement n=3..8: {}", summary.join("; ")))
}

fn consistency(sweeps: &[(String, SweepOutcome)]) -> Outcome {
    let mut summary = Vec::new();
    for (name, s) in sweeps {
        let r = &s.report;
        let total = r.consistency_total();
        ensure(total.multiple_sets == total.consistent + total.inconsistent, || format!("{name}: {total:?}"))?;
        let inconsistent: Vec<_> = s.records.iter().filter(|x| x.kind == RecordKind::Inconsistency).collect();
        ensure(inconsistent.len() == total.inconsistent, || {
            format!("{name}: {} records for {} inconsistent graphs", inconsistent.len(), total.inconsistent)
        })?;
        for rec in inconsistent {
            ensure(rec.replay().map_err(|e| e.to_string())?, || format!("{name}: {} does not replay", rec.graph6))?;
            ensure(rec.verdicts.iter().collect::<BTreeSet<_>>().len() > 1, || "record verdicts agree".into())?;
        }
        summary.push(format!(
            "{name} {}/{} ({:.1}%)",
            total.consistent,
            total.multiple_sets,
            100.0 * total.consistent_fraction()
        ));
    }
    Ok(format!("consistent among graphs with >= 2 sets, n <= 6: {}", summary.join("; ")))
}

fn run_sweep(cfg: PipelineConfig, n_max: usize, sets: Option<usize>, jobs: usize, out: &Path) -> (SweepOutcome, String) {
    let settings = SweepSettings {
        n_min: 3,
        n_max,
        pipeline: cfg,
        minimize: true,
        consistency_sets: sets,
    };
    let outcome = sweep(&settings, jobs, None, Some(out)).expect("sweep runs");
    let text = fs::read_to_string(out).expect("record file");
    (outcome, text)
}

fn determinism(dir: &Path, first: &[(String, SweepOutcome)], first_files: &[(String, String)], first_c: &[(String, SweepOutcome)], first_cfiles: &[(String, String)]) -> Outcome {
    for (i, (name, cfg)) in modes().into_iter().enumerate() {
        // Different worker count on the repeat: results must not depend on it.
        let (again, text) = run_sweep(cfg, 8, None, 1, &dir.join(format!("repeat-{i}.jsonl")));
        ensure(again.report.to_json() == first[i].1.report.to_json(), || format!("{name}: sweep report differs"))?;
        ensure(text == first_files[i].1, || format!("{name}: sweep record file differs"))?;
        let (again, text) = run_sweep(cfg, 6, Some(CONSISTENCY_SETS), 3, &dir.join(format!("repeat-c{i}.jsonl")));
        ensure(again.report.to_json() == first_c[i].1.report.to_json(), || format!("{name}: consistency report differs"))?;
        ensure(text == first_cfiles[i].1, || format!("{name}: consistency record file differs"))?;
    }
    Ok("repeated sweeps (different worker counts) give byte-identical reports and record files".into())
}

fn report(id: usize, name: &str, outcome: std::thread::Result<Outcome>) -> bool {
    let outcome = outcome.unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(detail) => {
            println!("[PASS] {id} {name}: {detail}");
            true
        }
        Err(why) => {
            println!("[FAIL] {id} {name}: {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut ok = true;
    ok &= report(1, "oracle exactness", catch_unwind(oracle_exactness));
    ok &= report(2, "named-graph ground truth", catch_unwind(named_graphs));
    ok &= report(3, "N3 soundness", catch_unwind(n3_soundness));
    ok &= report(4, "elimination soundness", catch_unwind(elimination_soundness));

    let mut sweeps = Vec::new();
    let mut files = Vec::new();
    let mut csweeps = Vec::new();
    let mut cfiles = Vec::new();
    for (i, (name, cfg)) in modes().into_iter().enumerate() {
        let (s, text) = run_sweep(cfg, 8, None, SWEEP_WORKERS, &dir.path().join(format!("sweep-{i}.jsonl")));
        sweeps.push((name.clone(), s));
        files.push((name.clone(), text));
        let (s, text) = run_sweep(cfg, 6, Some(CONSISTENCY_SETS), SWEEP_WORKERS, &dir.path().join(format!("cons-{i}.jsonl")));
        csweeps.push((name.clone(), s));
        cfiles.push((name, text));
    }

    ok &= report(5, "full cycle-set validity", catch_unwind(AssertUnwindSafe(|| full_set_validity(&csweeps))));
    ok &= report(6, "claim evaluation", catch_unwind(AssertUnwindSafe(|| claim_evaluation(&sweeps, &files))));
    ok &= report(7, "cycle-set consistency", catch_unwind(AssertUnwindSafe(|| consistency(&csweeps))));
    ok &= report(
        8,
        "determinism",
        catch_unwind(AssertUnwindSafe(|| determinism(dir.path(), &sweeps, &files, &csweeps, &cfiles))),
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
