//! Reactive view of a diagram: a pair-label table computed by seeding,
//! propagation and scheduled resolution, and a per-origin compilation into
//! double arrows. A double arrow connects a trigger link to a blocked link;
//! traversing the trigger switches the blocked link off for the rest of
//! that walk, so impossible continuations simply disappear and a plain
//! depth-first walk reproduces the engine's verdicts.
//!
//! Compilations are origin-specific. Changing the starting point means
//! erasing all double arrows and compiling again; the base diagram is never
//! modified.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::engine::{Analysis, EngineError, PolicyConfig};
use crate::net::{Diagram, Link, NodeId, Path, Polarity, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReactiveError {
    #[error("unknown node: {0}")]
    UnknownNode(NodeId),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// State of one ordered pair: nothing known, a potential positive path, a
/// potential negative one, both, or a settled valid path. `Star` doubles as
/// the final state for pairs whose candidates all cancelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairLabel {
    Star,
    PPos,
    PNeg,
    PBoth,
    VPos,
    VNeg,
}

impl PairLabel {
    /// Legal label movements. V-labels are terminal; P-labels may merge to
    /// `PBoth`, settle to a V-label, or fall back to a final `Star`.
    pub fn may_become(self, next: PairLabel) -> bool {
        use PairLabel::*;
        match self {
            Star => matches!(next, PPos | PNeg | PBoth | VPos | VNeg),
            PPos => matches!(next, PBoth | VPos | VNeg | Star),
            PNeg => matches!(next, PBoth | VPos | VNeg | Star),
            PBoth => matches!(next, VPos | VNeg | Star),
            VPos | VNeg => false,
        }
    }
}

/// Pair labels for one origin, with the predecessor lists the resolution
/// step works from and the observed label transitions.
#[derive(Debug, Clone)]
pub struct LabelTable {
    origin: NodeId,
    labels: BTreeMap<(NodeId, NodeId), PairLabel>,
    predecessors: BTreeMap<NodeId, BTreeSet<NodeId>>,
    transitions: Vec<(NodeId, NodeId, PairLabel, PairLabel)>,
}

impl LabelTable {
    pub fn origin(&self) -> &NodeId {
        &self.origin
    }

    /// Current label of `(x, y)`; untouched pairs are `Star`.
    pub fn label(&self, x: &NodeId, y: &NodeId) -> PairLabel {
        self.labels
            .get(&(x.clone(), y.clone()))
            .copied()
            .unwrap_or(PairLabel::Star)
    }

    pub fn predecessors(&self, node: &NodeId) -> Option<&BTreeSet<NodeId>> {
        self.predecessors.get(node)
    }

    /// Every recorded transition, in order.
    pub fn transitions(&self) -> &[(NodeId, NodeId, PairLabel, PairLabel)] {
        &self.transitions
    }

    /// True when all observed transitions follow the label order.
    pub fn transitions_respect_order(&self) -> bool {
        self.transitions
            .iter()
            .all(|(_, _, from, to)| from.may_become(*to))
    }

    /// True when no pair is left in a P-state.
    pub fn is_complete(&self) -> bool {
        !self
            .labels
            .values()
            .any(|l| matches!(l, PairLabel::PPos | PairLabel::PNeg | PairLabel::PBoth))
    }
}

/// Working table over all origins at once; rows are independent, so they
/// are computed together and restricted afterwards.
struct GlobalLabels {
    labels: BTreeMap<(NodeId, NodeId), PairLabel>,
    transitions: Vec<(NodeId, NodeId, PairLabel, PairLabel)>,
}

impl GlobalLabels {
    fn get(&self, x: &NodeId, y: &NodeId) -> PairLabel {
        self.labels
            .get(&(x.clone(), y.clone()))
            .copied()
            .unwrap_or(PairLabel::Star)
    }

    fn set(&mut self, x: &NodeId, y: &NodeId, next: PairLabel) {
        let current = self.get(x, y);
        if current == next {
            return;
        }
        assert!(
            current.may_become(next),
            "illegal label transition {current:?} -> {next:?} at ({x}, {y})"
        );
        self.transitions.push((x.clone(), y.clone(), current, next));
        self.labels.insert((x.clone(), y.clone()), next);
    }
}

/// Computes the pair-label table and returns the rows for `origin`.
///
/// Phases: (i) direct links seed `v+`/`v-`; (ii) potential labels propagate
/// along links, `p+`/`p-` merging to `p+-`; (iii) pairs resolve in
/// increasing degree order (the scheduling that replaces waiting): keep the
/// predecessors reached by a settled `v+`, drop those dominated by a `v+`
/// pair whose arrow contradicts theirs, then settle on agreement and fall
/// back to a final star otherwise.
pub fn label_all(gamma: &Diagram, origin: &NodeId) -> Result<LabelTable, ReactiveError> {
    if !gamma.contains(origin) {
        return Err(ReactiveError::UnknownNode(origin.clone()));
    }

    let mut table = GlobalLabels {
        labels: BTreeMap::new(),
        transitions: Vec::new(),
    };

    // Seed direct links.
    for l in gamma.links() {
        let v = match l.polarity {
            Polarity::Positive => PairLabel::VPos,
            Polarity::Negative => PairLabel::VNeg,
        };
        table.set(&l.source, &l.target, v);
    }

    // Propagate potential labels. One pass per origin in topological order
    // settles the fixpoint: a pair's p-label depends only on pairs ending
    // strictly earlier in the order.
    for x in gamma.nodes() {
        for y in gamma.topo_order() {
            if y == x {
                continue;
            }
            for pred in gamma.incoming(y) {
                let through = &pred.source;
                if through == x {
                    continue;
                }
                let upstream = table.get(x, through);
                if !matches!(
                    upstream,
                    PairLabel::PPos | PairLabel::PBoth | PairLabel::VPos
                ) {
                    continue;
                }
                let current = table.get(x, y);
                if matches!(current, PairLabel::VPos | PairLabel::VNeg) {
                    continue;
                }
                let next = match (current, pred.polarity) {
                    (PairLabel::Star, Polarity::Positive) => PairLabel::PPos,
                    (PairLabel::Star, Polarity::Negative) => PairLabel::PNeg,
                    (PairLabel::PPos, Polarity::Negative) => PairLabel::PBoth,
                    (PairLabel::PNeg, Polarity::Positive) => PairLabel::PBoth,
                    (same, _) => same,
                };
                table.set(x, y, next);
            }
        }
    }

    // Resolve pairs in increasing degree order.
    let mut pairs: Vec<(usize, NodeId, NodeId)> = Vec::new();
    for x in gamma.nodes() {
        for (y, d) in gamma.longest_path_lengths(x) {
            pairs.push((d, x.clone(), y));
        }
    }
    pairs.sort();

    for (_, x, y) in pairs {
        let current = table.get(&x, &y);
        if !matches!(
            current,
            PairLabel::PPos | PairLabel::PNeg | PairLabel::PBoth
        ) {
            continue;
        }
        // Predecessors of y settled as v+ from x.
        let reached: Vec<&Link> = gamma
            .incoming(&y)
            .iter()
            .filter(|l| l.source != x && table.get(&x, &l.source) == PairLabel::VPos)
            .collect();
        let surviving: Vec<&Link> = reached
            .iter()
            .filter(|c| {
                !reached.iter().any(|d| {
                    d.source != c.source
                        && d.polarity != c.polarity
                        && table.get(&d.source, &c.source) == PairLabel::VPos
                })
            })
            .copied()
            .collect();
        let positive = surviving.iter().any(|l| l.polarity == Polarity::Positive);
        let negative = surviving.iter().any(|l| l.polarity == Polarity::Negative);
        let settled = match (positive, negative) {
            (true, false) => PairLabel::VPos,
            (false, true) => PairLabel::VNeg,
            _ => PairLabel::Star,
        };
        table.set(&x, &y, settled);
    }

    let labels: BTreeMap<(NodeId, NodeId), PairLabel> = table
        .labels
        .iter()
        .filter(|((x, _), _)| x == origin)
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    let transitions = table
        .transitions
        .into_iter()
        .filter(|(x, _, _, _)| x == origin)
        .collect();
    let predecessors = gamma
        .nodes()
        .iter()
        .map(|n| {
            let preds = gamma.incoming(n).iter().map(|l| l.source.clone()).collect();
            (n.clone(), preds)
        })
        .collect();

    Ok(LabelTable {
        origin: origin.clone(),
        labels,
        predecessors,
        transitions,
    })
}

/// Traversing `trigger` disables `blocked` for the remainder of the walk
/// branch.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DoubleArrow {
    pub trigger: Link,
    pub blocked: Link,
}

/// A diagram compiled for one origin: the base links plus the double
/// arrows that switch impossible continuations off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactiveNet {
    pub base: Diagram,
    pub origin: NodeId,
    pub double_arrows: BTreeSet<DoubleArrow>,
}

/// Compiles the diagram for walks starting at `origin`.
///
/// For every node reached by accepted paths, each continuation link whose
/// one-step extension is not accepted is blocked by a double arrow from the
/// first link of every accepted path reaching that node. Accepted negative
/// paths cannot continue at all, so all their continuations are blocked.
pub fn compile(
    gamma: &Diagram,
    origin: &NodeId,
    cfg: &PolicyConfig,
) -> Result<ReactiveNet, ReactiveError> {
    if !gamma.contains(origin) {
        return Err(ReactiveError::UnknownNode(origin.clone()));
    }
    let analysis = Analysis::new(gamma, *cfg)?;
    let mut double_arrows = BTreeSet::new();

    for y in gamma.nodes() {
        if y == origin {
            continue;
        }
        for polarity in [Polarity::Positive, Polarity::Negative] {
            let accepted = analysis.valid_paths(origin, y, polarity);
            if accepted.is_empty() {
                continue;
            }
            for continuation in gamma.outgoing(y) {
                for sigma in accepted {
                    let blocked = match polarity {
                        // Negative paths end; every continuation is off.
                        Polarity::Negative => true,
                        Polarity::Positive => {
                            let extended = sigma
                                .extend(continuation.clone())
                                .expect("continuation starts at the endpoint");
                            !analysis.is_valid(&extended)?
                        }
                    };
                    if blocked {
                        double_arrows.insert(DoubleArrow {
                            trigger: sigma.steps()[0].clone(),
                            blocked: continuation.clone(),
                        });
                    }
                }
            }
        }
    }

    Ok(ReactiveNet {
        base: gamma.clone(),
        origin: origin.clone(),
        double_arrows,
    })
}

impl ReactiveNet {
    fn blocked_by<'a>(&'a self, trigger: &'a Link) -> impl Iterator<Item = &'a Link> + 'a {
        self.double_arrows
            .iter()
            .filter(move |da| &da.trigger == trigger)
            .map(|da| &da.blocked)
    }
}

/// Depth-first traversal from the compiled origin along enabled links.
/// Taking a link disables whatever it triggers for the rest of the branch;
/// a negative link ends the branch. Returns the polarity of the first
/// surviving path that ends at `target`, or `None` when the target is
/// unreachable.
pub fn walk(rn: &ReactiveNet, target: &NodeId) -> Result<Verdict, ReactiveError> {
    if !rn.base.contains(target) {
        return Err(ReactiveError::UnknownNode(target.clone()));
    }
    let mut disabled: BTreeSet<Link> = BTreeSet::new();
    Ok(walk_from(rn, &rn.origin, target, &mut disabled))
}

fn walk_from(
    rn: &ReactiveNet,
    at: &NodeId,
    target: &NodeId,
    disabled: &mut BTreeSet<Link>,
) -> Verdict {
    for link in rn.base.outgoing(at) {
        if disabled.contains(link) {
            continue;
        }
        let newly_disabled: Vec<Link> = rn
            .blocked_by(link)
            .filter(|b| !disabled.contains(*b))
            .cloned()
            .collect();
        disabled.extend(newly_disabled.iter().cloned());

        let found = if &link.target == target {
            Verdict::from_polarity(link.polarity)
        } else if link.polarity == Polarity::Positive {
            walk_from(rn, &link.target, target, disabled)
        } else {
            Verdict::None
        };

        for b in &newly_disabled {
            disabled.remove(b);
        }
        if found != Verdict::None {
            return found;
        }
    }
    Verdict::None
}

/// Every potential path from the origin that survives the double arrows,
/// paired with the links disabled once it has been walked.
fn surviving(rn: &ReactiveNet) -> Vec<(Path, BTreeSet<Link>)> {
    let mut out = Vec::new();
    let mut disabled = BTreeSet::new();
    collect_surviving(rn, &rn.origin, None, &mut disabled, &mut out);
    out
}

fn collect_surviving(
    rn: &ReactiveNet,
    at: &NodeId,
    so_far: Option<&Path>,
    disabled: &mut BTreeSet<Link>,
    out: &mut Vec<(Path, BTreeSet<Link>)>,
) {
    if let Some(p) = so_far {
        if p.polarity() == Polarity::Negative {
            return;
        }
    }
    for link in rn.base.outgoing(at) {
        if disabled.contains(link) {
            continue;
        }
        let newly_disabled: Vec<Link> = rn
            .blocked_by(link)
            .filter(|b| !disabled.contains(*b))
            .cloned()
            .collect();
        disabled.extend(newly_disabled.iter().cloned());

        let path = match so_far {
            None => Path::direct(link.clone()),
            Some(p) => p.extend(link.clone()).expect("walk links chain"),
        };
        out.push((path.clone(), disabled.clone()));
        collect_surviving(rn, &link.target, Some(&path), disabled, out);

        for b in &newly_disabled {
            disabled.remove(b);
        }
    }
}

/// All surviving potential paths from the origin, sorted.
pub fn surviving_paths(rn: &ReactiveNet) -> Vec<Path> {
    let mut paths: Vec<Path> = surviving(rn).into_iter().map(|(p, _)| p).collect();
    paths.sort();
    paths.dedup();
    paths
}

/// Runs the double-arrow derivation a second time, now over the compiled
/// net: surviving paths play the role of accepted paths, and a
/// continuation is impossible exactly when it is already disabled at that
/// point of the walk. On a correctly compiled net this reproduces the
/// existing double-arrow set.
pub fn recompile(rn: &ReactiveNet) -> BTreeSet<DoubleArrow> {
    let mut arrows = BTreeSet::new();
    for (path, disabled) in surviving(rn) {
        let endpoint = path.endpoint();
        for continuation in rn.base.outgoing(endpoint) {
            let impossible = match path.polarity() {
                Polarity::Negative => true,
                Polarity::Positive => disabled.contains(continuation),
            };
            if impossible {
                arrows.insert(DoubleArrow {
                    trigger: path.steps()[0].clone(),
                    blocked: continuation.clone(),
                });
            }
        }
    }
    arrows
}

/// Deterministic DOT rendering. Base links participating in a double arrow
/// are split through a point-shaped pseudo-node `e:<src>:<dst>` so the
/// arrow can be drawn between links; double arrows are dashed edges
/// labelled "blocks". Negative links carry the label "!". The colon
/// separator cannot occur in node names, so pseudo-node names never
/// collide.
pub fn to_dot(rn: &ReactiveNet) -> String {
    let mut lines = Vec::new();
    lines.push(format!("digraph \"from_{}\" {{", rn.origin));

    let mut split: BTreeSet<&Link> = BTreeSet::new();
    for da in &rn.double_arrows {
        split.insert(&da.trigger);
        split.insert(&da.blocked);
    }
    let pseudo = |l: &Link| format!("e:{}:{}", l.source, l.target);

    for node in rn.base.nodes() {
        lines.push(format!("  {node};"));
    }
    for l in split.iter() {
        lines.push(format!("  \"{}\" [shape=point, label=\"\"];", pseudo(l)));
    }
    for link in rn.base.links() {
        let label = match link.polarity {
            Polarity::Positive => String::new(),
            Polarity::Negative => " [label=\"!\"]".to_string(),
        };
        if split.contains(link) {
            let mid = pseudo(link);
            lines.push(format!(
                "  {} -> \"{}\" [arrowhead=none];",
                link.source, mid
            ));
            lines.push(format!("  \"{}\" -> {}{};", mid, link.target, label));
        } else {
            lines.push(format!("  {} -> {}{};", link.source, link.target, label));
        }
    }
    for da in &rn.double_arrows {
        lines.push(format!(
            "  \"{}\" -> \"{}\" [style=dashed, label=\"blocks\"];",
            pseudo(&da.trigger),
            pseudo(&da.blocked)
        ));
    }
    lines.push("}".to_string());
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::build_diagram;

    fn n(s: &str) -> NodeId {
        NodeId::new(s).unwrap()
    }

    fn pos(a: &str, b: &str) -> Link {
        Link::positive(n(a), n(b)).unwrap()
    }

    fn neg(a: &str, b: &str) -> Link {
        Link::negative(n(a), n(b)).unwrap()
    }

    fn tweety() -> Diagram {
        build_diagram(
            [],
            [
                pos("a", "b"),
                pos("a", "c"),
                pos("c", "b"),
                pos("b", "d"),
                neg("c", "d"),
            ],
        )
        .unwrap()
    }

    fn nixon() -> Diagram {
        build_diagram(
            [],
            [pos("a", "b"), pos("a", "c"), pos("b", "d"), neg("c", "d")],
        )
        .unwrap()
    }

    fn updown() -> Diagram {
        build_diagram(
            [],
            [
                pos("z", "u"),
                neg("z", "x"),
                pos("u", "x"),
                pos("u", "v"),
                pos("x", "v"),
                neg("x", "y"),
                pos("v", "y"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn tweety_labels() {
        let d = tweety();
        let t = label_all(&d, &n("a")).unwrap();
        assert_eq!(t.label(&n("a"), &n("c")), PairLabel::VPos);
        assert_eq!(t.label(&n("a"), &n("b")), PairLabel::VPos);
        assert_eq!(t.label(&n("a"), &n("d")), PairLabel::VNeg);
        assert!(t.is_complete());
        assert!(t.transitions_respect_order());
    }

    #[test]
    fn nixon_label_settles_to_star_after_pboth() {
        let d = nixon();
        let t = label_all(&d, &n("a")).unwrap();
        assert_eq!(t.label(&n("a"), &n("d")), PairLabel::Star);
        assert!(t
            .transitions()
            .iter()
            .any(|(x, y, _, to)| x == &n("a") && y == &n("d") && *to == PairLabel::PBoth));
        assert!(t.is_complete());
    }

    #[test]
    fn isolated_pair_stays_star_untouched() {
        let d = build_diagram([n("w")], [pos("a", "b")]).unwrap();
        let t = label_all(&d, &n("a")).unwrap();
        assert_eq!(t.label(&n("a"), &n("w")), PairLabel::Star);
        assert!(t.transitions().iter().all(|(_, y, _, _)| y != &n("w")));
    }

    #[test]
    fn predecessor_lists_are_recorded() {
        let d = tweety();
        let t = label_all(&d, &n("a")).unwrap();
        let preds = t.predecessors(&n("d")).unwrap();
        assert_eq!(preds, &[n("b"), n("c")].into());
    }

    #[test]
    fn updown_compile_from_u_blocks_vy() {
        let d = updown();
        let rn = compile(&d, &n("u"), &PolicyConfig::default()).unwrap();
        let expected: BTreeSet<DoubleArrow> = [
            DoubleArrow {
                trigger: pos("u", "v"),
                blocked: pos("v", "y"),
            },
            DoubleArrow {
                trigger: pos("u", "x"),
                blocked: pos("v", "y"),
            },
        ]
        .into();
        assert_eq!(rn.double_arrows, expected);
        assert_eq!(walk(&rn, &n("y")).unwrap(), Verdict::Negative);
    }

    #[test]
    fn updown_compile_from_z_keeps_vy_open() {
        let d = updown();
        let rn = compile(&d, &n("z"), &PolicyConfig::default()).unwrap();
        assert!(!rn
            .double_arrows
            .iter()
            .any(|da| da.blocked == pos("v", "y")));
        // The detour through x is cancelled from z.
        assert!(rn.double_arrows.contains(&DoubleArrow {
            trigger: pos("z", "u"),
            blocked: pos("u", "x"),
        }));
        assert_eq!(walk(&rn, &n("y")).unwrap(), Verdict::Positive);
    }

    #[test]
    fn tweety_compile_from_a() {
        let d = tweety();
        let rn = compile(&d, &n("a"), &PolicyConfig::default()).unwrap();
        let expected: BTreeSet<DoubleArrow> = [
            DoubleArrow {
                trigger: pos("a", "b"),
                blocked: pos("b", "d"),
            },
            DoubleArrow {
                trigger: pos("a", "c"),
                blocked: pos("b", "d"),
            },
        ]
        .into();
        assert_eq!(rn.double_arrows, expected);
        assert_eq!(walk(&rn, &n("d")).unwrap(), Verdict::Negative);
    }

    #[test]
    fn conflict_free_chain_compiles_clean() {
        let d = build_diagram([], [pos("a", "b"), pos("b", "c")]).unwrap();
        let rn = compile(&d, &n("a"), &PolicyConfig::default()).unwrap();
        assert!(rn.double_arrows.is_empty());
        assert_eq!(walk(&rn, &n("c")).unwrap(), Verdict::Positive);
    }

    #[test]
    fn walk_to_origin_is_none() {
        let d = updown();
        let rn = compile(&d, &n("u"), &PolicyConfig::default()).unwrap();
        assert_eq!(walk(&rn, &n("u")).unwrap(), Verdict::None);
        assert!(matches!(
            walk(&rn, &n("nope")),
            Err(ReactiveError::UnknownNode(_))
        ));
    }

    #[test]
    fn compile_rejects_unknown_origins_and_extension_policies() {
        let d = updown();
        assert!(matches!(
            compile(&d, &n("nope"), &PolicyConfig::default()),
            Err(ReactiveError::UnknownNode(_))
        ));
        let cfg = PolicyConfig::default().with_scepticism(crate::engine::Scepticism::Extensions);
        assert!(matches!(
            compile(&d, &n("u"), &cfg),
            Err(ReactiveError::Engine(_))
        ));
        assert!(matches!(
            label_all(&d, &n("nope")),
            Err(ReactiveError::UnknownNode(_))
        ));
    }

    #[test]
    fn recompilation_is_stable_on_corpus_nets() {
        for d in [tweety(), nixon(), updown()] {
            for x in d.nodes() {
                let rn = compile(&d, x, &PolicyConfig::default()).unwrap();
                assert_eq!(recompile(&rn), rn.double_arrows, "origin {x}");
            }
        }
    }

    #[test]
    fn dot_output_is_deterministic_and_marked() {
        let d = updown();
        let rn = compile(&d, &n("u"), &PolicyConfig::default()).unwrap();
        let dot = to_dot(&rn);
        assert_eq!(dot, to_dot(&rn));
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("label=\"!\""));
        assert!(dot.contains("label=\"blocks\""));
    }
}
