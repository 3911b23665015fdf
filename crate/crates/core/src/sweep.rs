//! Batch cross-checks over many diagrams: engine vs oracle, reactive walks
//! vs queries, label tables vs queries, and the size-calculus
//! correspondence.
//!
//! Trials are independent, so with the `parallel` feature they fan out over
//! rayon; without it the same API runs sequentially. `ExecMode` picks the
//! strategy at runtime so benchmarks can compare both.

use crate::engine::{self, PolicyConfig};
use crate::net::{Diagram, PathKind, Verdict};
use crate::oracle;
use crate::reactive;
use crate::setsem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl ExecMode {
    /// Parallel when compiled in, sequential otherwise.
    pub fn auto() -> ExecMode {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
fn map_nets<T, F>(mode: ExecMode, nets: &[Diagram], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Diagram) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Sequential => nets.iter().map(f).collect(),
        ExecMode::Parallel => nets.par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_nets<T, F>(_mode: ExecMode, nets: &[Diagram], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&Diagram) -> T + Sync + Send,
{
    nets.iter().map(f).collect()
}

/// Outcome of one sweep: how many individual checks ran and which failed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub checks: usize,
    pub mismatches: Vec<String>,
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn merge(parts: Vec<SweepReport>) -> SweepReport {
        let mut out = SweepReport::default();
        for p in parts {
            out.checks += p.checks;
            out.mismatches.extend(p.mismatches);
        }
        out
    }
}

/// For every pair and every policy: the memoized engine and the naive
/// recursive evaluator must agree on each potential path, and the induced
/// verdicts must match.
pub fn oracle_agreement(
    nets: &[Diagram],
    policies: &[PolicyConfig],
    mode: ExecMode,
) -> SweepReport {
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        for cfg in policies {
            let analysis = engine::Analysis::new(gamma, *cfg).expect("direct policy");
            for x in gamma.nodes() {
                for y in gamma.nodes() {
                    if x == y {
                        continue;
                    }
                    let candidates = oracle::enumerate_paths(gamma, x, y, PathKind::Potential)
                        .expect("small diagram");
                    let mut oracle_verdict = Verdict::None;
                    for p in &candidates.paths {
                        let fast = analysis.is_valid(p).expect("path over diagram");
                        let slow = oracle::naive_is_valid(gamma, p, cfg).expect("small diagram");
                        report.checks += 1;
                        if fast != slow {
                            report
                                .mismatches
                                .push(format!("{cfg:?}: path {p}: engine={fast} oracle={slow}"));
                        }
                        if slow && oracle_verdict == Verdict::None {
                            oracle_verdict = Verdict::from_polarity(p.polarity());
                        }
                    }
                    report.checks += 1;
                    let fast_verdict = analysis.verdict(x, y);
                    if fast_verdict != oracle_verdict {
                        report.mismatches.push(format!(
                            "{cfg:?}: verdict({x}, {y}): engine={fast_verdict} oracle={oracle_verdict}"
                        ));
                    }
                }
            }
        }
        report
    });
    SweepReport::merge(parts)
}

/// Walking the compiled reactive net must reproduce the engine verdict for
/// every origin/target pair.
pub fn walk_equivalence(nets: &[Diagram], cfg: &PolicyConfig, mode: ExecMode) -> SweepReport {
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        let analysis = engine::Analysis::new(gamma, *cfg).expect("direct policy");
        for x in gamma.nodes() {
            let rn = reactive::compile(gamma, x, cfg).expect("origin in diagram");
            for y in gamma.nodes() {
                if x == y {
                    continue;
                }
                report.checks += 1;
                let walked = reactive::walk(&rn, y).expect("target in diagram");
                let queried = analysis.verdict(x, y);
                if walked != queried {
                    report
                        .mismatches
                        .push(format!("walk({x}, {y}) = {walked}, query = {queried}"));
                }
            }
        }
        report
    });
    SweepReport::merge(parts)
}

/// Recompiling a compiled net must add no double arrows and lose none.
pub fn compile_idempotence(nets: &[Diagram], cfg: &PolicyConfig, mode: ExecMode) -> SweepReport {
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        for x in gamma.nodes() {
            report.checks += 1;
            let rn = reactive::compile(gamma, x, cfg).expect("origin in diagram");
            let again = reactive::recompile(&rn);
            if again != rn.double_arrows {
                report.mismatches.push(format!(
                    "origin {x}: recompilation changed the double-arrow set ({} vs {})",
                    again.len(),
                    rn.double_arrows.len()
                ));
            }
        }
        report
    });
    SweepReport::merge(parts)
}

/// Final pair labels must mirror query verdicts: v+ for positive, v- for
/// negative, star for no conclusion.
pub fn label_agreement(nets: &[Diagram], mode: ExecMode) -> SweepReport {
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        let analysis =
            engine::Analysis::new(gamma, PolicyConfig::default()).expect("direct policy");
        for x in gamma.nodes() {
            let table = reactive::label_all(gamma, x).expect("origin in diagram");
            for y in gamma.nodes() {
                if x == y {
                    continue;
                }
                report.checks += 1;
                let label = table.label(x, y);
                let verdict = analysis.verdict(x, y);
                let expected = match verdict {
                    Verdict::Positive => reactive::PairLabel::VPos,
                    Verdict::Negative => reactive::PairLabel::VNeg,
                    Verdict::None => reactive::PairLabel::Star,
                };
                if label != expected {
                    report.mismatches.push(format!(
                        "label({x}, {y}) = {label:?}, query verdict = {verdict}"
                    ));
                }
            }
        }
        report
    });
    SweepReport::merge(parts)
}

/// The size-calculus derivations must coincide with the engine on every
/// ordered pair.
pub fn correspondence(nets: &[Diagram], mode: ExecMode) -> SweepReport {
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        let cr = setsem::check_correspondence(gamma).expect("valid diagram");
        report.checks += cr.pairs_checked;
        report
            .mismatches
            .extend(cr.mismatches.iter().map(|m| m.to_string()));
        report
    });
    SweepReport::merge(parts)
}

/// Checks that every conclusion of the directly sceptical engine appears in
/// every extension of the same diagram.
pub fn extensions_refine_direct(nets: &[Diagram], mode: ExecMode) -> SweepReport {
    let cfg = PolicyConfig::default();
    let parts = map_nets(mode, nets, |gamma| {
        let mut report = SweepReport::default();
        let analysis = engine::Analysis::new(gamma, cfg).expect("direct policy");
        let out = engine::compute_extensions(gamma, &cfg).expect("valid diagram");
        for x in gamma.nodes() {
            for y in gamma.nodes() {
                if x == y {
                    continue;
                }
                let verdict = analysis.verdict(x, y);
                if verdict == Verdict::None {
                    continue;
                }
                report.checks += 1;
                let everywhere = out.extensions.iter().all(|ext| {
                    ext.conclusions
                        .iter()
                        .any(|c| &c.subject == x && &c.predicate == y && c.verdict == verdict)
                });
                if !everywhere {
                    report.mismatches.push(format!(
                        "direct conclusion ({x}, {y}) = {verdict} missing from some extension"
                    ));
                }
            }
        }
        report
    });
    SweepReport::merge(parts)
}
