//! Brute-force ground truth for the path engine.
//!
//! Everything here is deliberately naive: exhaustive path enumeration and a
//! direct recursive evaluation of the validity conditions with no memo table
//! and no shared state. The engine is tested against these functions on
//! small random diagrams.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::engine::{PolicyConfig, PreclusionScope, PreclusionValidity, Resolver, Scepticism};
use crate::net::{build_diagram, Diagram, Link, NetError, NodeId, Path, PathKind, Polarity};

/// Enumeration is intended for small diagrams only.
pub const MAX_ORACLE_NODES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("diagram too large for exhaustive enumeration ({0} nodes, limit {MAX_ORACLE_NODES})")]
    DiagramTooLarge(usize),
    #[error("unknown node: {0}")]
    UnknownNode(NodeId),
    #[error("path is not over the given diagram: {0}")]
    PathNotInDiagram(Path),
    #[error("the naive evaluator only supports direct scepticism")]
    UnsupportedPolicy,
}

/// All paths of one kind between a fixed pair, exhaustively enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub kind: PathKind,
    pub paths: Vec<Path>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.paths.contains(p)
    }
}

fn guard(gamma: &Diagram) -> Result<(), OracleError> {
    if gamma.nodes().len() > MAX_ORACLE_NODES {
        return Err(OracleError::DiagramTooLarge(gamma.nodes().len()));
    }
    Ok(())
}

/// Depth-first enumeration of every generalized or potential path from `x`
/// to `y`. Acyclicity bounds the search; `(x, x)` has no paths.
pub fn enumerate_paths(
    gamma: &Diagram,
    x: &NodeId,
    y: &NodeId,
    kind: PathKind,
) -> Result<PathSet, OracleError> {
    guard(gamma)?;
    for n in [x, y] {
        if !gamma.contains(n) {
            return Err(OracleError::UnknownNode(n.clone()));
        }
    }
    let mut paths = Vec::new();
    let mut stack: Vec<Link> = Vec::new();
    walk_paths(gamma, x, x, y, kind, &mut stack, &mut paths);
    paths.sort();
    Ok(PathSet { kind, paths })
}

fn walk_paths(
    gamma: &Diagram,
    origin: &NodeId,
    at: &NodeId,
    goal: &NodeId,
    kind: PathKind,
    stack: &mut Vec<Link>,
    out: &mut Vec<Path>,
) {
    // A potential path cannot continue past a negative step.
    if kind == PathKind::Potential {
        if let Some(last) = stack.last() {
            if last.polarity == Polarity::Negative {
                return;
            }
        }
    }
    for link in gamma.outgoing(at) {
        stack.push(link.clone());
        if &link.target == goal {
            let p = Path::new(origin.clone(), stack.clone(), kind)
                .expect("enumerated steps always chain");
            out.push(p);
        }
        walk_paths(gamma, origin, &link.target, goal, kind, stack, out);
        stack.pop();
    }
}

/// Every valid positive path from `a` to `b`, found by enumerating and
/// filtering. Used by the quantifier clauses below.
fn valid_positive_paths(
    gamma: &Diagram,
    a: &NodeId,
    b: &NodeId,
    cfg: &PolicyConfig,
) -> Result<Vec<Path>, OracleError> {
    let candidates = enumerate_paths(gamma, a, b, PathKind::Potential)?;
    let mut out = Vec::new();
    for p in candidates.paths {
        if p.polarity() == Polarity::Positive && naive_is_valid(gamma, &p, cfg)? {
            out.push(p);
        }
    }
    Ok(out)
}

fn exists_valid_positive(
    gamma: &Diagram,
    a: &NodeId,
    b: &NodeId,
    cfg: &PolicyConfig,
) -> Result<bool, OracleError> {
    Ok(!valid_positive_paths(gamma, a, b, cfg)?.is_empty())
}

/// Is there a valid positive path from `a` to `b` passing through `via`?
/// Endpoints count as being on the path.
fn exists_valid_positive_through(
    gamma: &Diagram,
    a: &NodeId,
    via: &NodeId,
    b: &NodeId,
    cfg: &PolicyConfig,
) -> Result<bool, OracleError> {
    for p in valid_positive_paths(gamma, a, b, cfg)? {
        if p.nodes().contains(via) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Literal recursive evaluation of path validity under upward chaining.
///
/// A direct link is valid. A compound potential path `sigma = sigma' o
/// (u, y)` is valid iff
///   (1) its initial segment `sigma'` is valid,
///   (2) it is not precluded by a more specific contradicting source, and
///   (3) every potentially conflicting path is itself precluded by a more
///       specific source agreeing with `sigma`.
/// The preclusion clauses vary with the policy flags; every quantifier is
/// realized by exhaustive enumeration.
pub fn naive_is_valid(
    gamma: &Diagram,
    sigma: &Path,
    cfg: &PolicyConfig,
) -> Result<bool, OracleError> {
    guard(gamma)?;
    if cfg.scepticism != Scepticism::Direct {
        return Err(OracleError::UnsupportedPolicy);
    }
    if sigma.kind() != PathKind::Potential || !sigma.belongs_to(gamma) {
        return Err(OracleError::PathNotInDiagram(sigma.clone()));
    }
    if sigma.is_direct() {
        return Ok(true);
    }

    let x = sigma.origin().clone();
    let last = sigma.steps().last().unwrap().clone();
    let u = last.source.clone();
    let y = last.target.clone();
    let pol = last.polarity;

    // (1) Upward chaining: the initial segment must be valid.
    let prefix = sigma.prefix().expect("compound path has a prefix");
    if !naive_is_valid(gamma, &prefix, cfg)? {
        return Ok(false);
    }

    // (2) The path itself is not precluded.
    match cfg.preclusion_scope {
        PreclusionScope::OnPath => {
            // A contradicting link leaving any node of sigma precludes it.
            for v in sigma.nodes() {
                if gamma.has_link(&v, &y, pol.flip()) {
                    return Ok(false);
                }
            }
        }
        PreclusionScope::OffPath => {
            for v in gamma.nodes() {
                if !gamma.has_link(v, &y, pol.flip()) {
                    continue;
                }
                if v == &x {
                    // Empty lower segment; the upper segment must reach u,
                    // and sigma' itself is such a path.
                    if exists_valid_positive(gamma, &x, &u, cfg)? {
                        return Ok(false);
                    }
                    continue;
                }
                let precluded = match cfg.preclusion_validity {
                    PreclusionValidity::Split => {
                        exists_valid_positive(gamma, &x, v, cfg)?
                            && exists_valid_positive(gamma, v, &u, cfg)?
                    }
                    PreclusionValidity::Total => {
                        exists_valid_positive_through(gamma, &x, v, &u, cfg)?
                    }
                };
                if precluded {
                    return Ok(false);
                }
            }
        }
    }

    // Under the dominance-blind resolver a better source of either claim
    // precludes; under the default only a contradicting one does.
    let dominator_polarities: &[Polarity] = match cfg.resolver {
        Resolver::P22 => &[],
        Resolver::P21 => &[pol],
    };
    if cfg.preclusion_scope == PreclusionScope::OffPath {
        for dpol in dominator_polarities {
            for v in gamma.nodes() {
                if v == &u || v == &x || !gamma.has_link(v, &y, *dpol) {
                    continue;
                }
                let dominated = match cfg.preclusion_validity {
                    PreclusionValidity::Split => {
                        exists_valid_positive(gamma, &x, v, cfg)?
                            && exists_valid_positive(gamma, v, &u, cfg)?
                    }
                    PreclusionValidity::Total => {
                        exists_valid_positive_through(gamma, &x, v, &u, cfg)?
                    }
                };
                if dominated {
                    return Ok(false);
                }
            }
        }
    }

    // (3) Every conflicting potential path is precluded.
    for v in gamma.nodes() {
        if !gamma.has_link(v, &y, pol.flip()) {
            continue;
        }
        let accessible = v == &x || exists_valid_positive(gamma, &x, v, cfg)?;
        if !accessible {
            continue;
        }
        if v == &x {
            // The contradicting direct link wins; nothing can preclude it.
            return Ok(false);
        }
        let precluder_polarities: &[Polarity] = match cfg.resolver {
            Resolver::P22 => &[pol],
            Resolver::P21 => &[pol, pol.flip()],
        };
        let mut precluded = false;
        'search: for zpol in precluder_polarities {
            for z in gamma.nodes() {
                if z == &x || z == v || !gamma.has_link(z, &y, *zpol) {
                    continue;
                }
                let witnessed = match cfg.preclusion_validity {
                    PreclusionValidity::Split => {
                        exists_valid_positive(gamma, &x, z, cfg)?
                            && exists_valid_positive(gamma, z, v, cfg)?
                    }
                    PreclusionValidity::Total => {
                        exists_valid_positive_through(gamma, &x, z, v, cfg)?
                    }
                };
                if witnessed {
                    precluded = true;
                    break 'search;
                }
            }
        }
        if !precluded {
            return Ok(false);
        }
    }

    Ok(true)
}

/// Pair verdict by enumeration: the polarity of the valid paths from `x` to
/// `y`, if any.
pub fn naive_verdict(
    gamma: &Diagram,
    x: &NodeId,
    y: &NodeId,
    cfg: &PolicyConfig,
) -> Result<crate::net::Verdict, OracleError> {
    let candidates = enumerate_paths(gamma, x, y, PathKind::Potential)?;
    let mut verdict = crate::net::Verdict::None;
    for p in &candidates.paths {
        if naive_is_valid(gamma, p, cfg)? {
            verdict = crate::net::Verdict::from_polarity(p.polarity());
            break;
        }
    }
    Ok(verdict)
}

/// SplitMix64: tiny deterministic generator so sweeps reproduce across
/// platforms without an external dependency.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

/// Seed for randomized sweeps: the `ORACLE_SEED` environment variable
/// (decimal) when set, otherwise a fixed default.
pub fn seed_from_env() -> u64 {
    std::env::var("ORACLE_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0x1e7a11)
}

/// Random DAG: nodes `n0..`, each forward ordered pair independently linked
/// with probability 1/4, polarity by fair coin.
pub fn random_diagram(rng: &mut SplitMix64, max_nodes: usize) -> Diagram {
    random_diagram_with_density(rng, max_nodes, 1, 4)
}

/// As [`random_diagram`] with link probability `link_num/link_den`. Linking
/// only forward pairs keeps the result acyclic and free of hard
/// contradictions; the repair step is kept as a safety net should the
/// generator ever change.
pub fn random_diagram_with_density(
    rng: &mut SplitMix64,
    max_nodes: usize,
    link_num: u64,
    link_den: u64,
) -> Diagram {
    assert!(max_nodes >= 2);
    let count = 2 + rng.below((max_nodes - 1) as u64) as usize;
    let names: Vec<NodeId> = (0..count)
        .map(|i| NodeId::new(format!("n{i}")).unwrap())
        .collect();
    let mut links: BTreeSet<Link> = BTreeSet::new();
    for i in 0..count {
        for j in (i + 1)..count {
            if rng.chance(link_num, link_den) {
                let polarity = if rng.chance(1, 2) {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                links.insert(Link::new(names[i].clone(), names[j].clone(), polarity).unwrap());
            }
        }
    }
    build_repaired(names, links)
}

/// Builds a diagram from sampled links, repairing hard contradictions by
/// dropping the negative link of each offending pair.
fn build_repaired(names: Vec<NodeId>, links: BTreeSet<Link>) -> Diagram {
    match build_diagram(names.iter().cloned(), links.iter().cloned()) {
        Ok(d) => d,
        Err(NetError::HardContradiction(a, b)) => {
            let repaired: BTreeSet<Link> = links
                .into_iter()
                .filter(|l| !(l.polarity == Polarity::Negative && l.source == a && l.target == b))
                .collect();
            build_repaired(names, repaired)
        }
        Err(e) => panic!("random generator produced an invalid diagram: {e}"),
    }
}

/// A batch of random diagrams from one seed.
pub fn random_diagrams(seed: u64, count: usize, max_nodes: usize) -> Vec<Diagram> {
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| random_diagram(&mut rng, max_nodes))
        .collect()
}

/// A random `.inet` file: a handful of nets plus queries over their nodes,
/// with or without expectations. The text format declares diagrams by their
/// links, so isolated nodes are dropped here.
pub fn random_netfile(rng: &mut SplitMix64) -> crate::dsl::NetFile {
    use crate::dsl::{NamedNet, NetFile, Query};
    use crate::net::Verdict;

    let mut file = NetFile::default();
    let net_count = rng.below(3) as usize + usize::from(rng.chance(3, 4));
    for i in 0..net_count {
        let name = format!("net_{i}");
        let linked = random_diagram(rng, 7);
        let diagram = build_diagram([], linked.links().iter().cloned())
            .expect("re-building from links keeps validity");
        file.nets.push(NamedNet { name, diagram });
    }
    let queryable: Vec<usize> = file
        .nets
        .iter()
        .enumerate()
        .filter(|(_, n)| !n.diagram.nodes().is_empty())
        .map(|(i, _)| i)
        .collect();
    if !queryable.is_empty() {
        let query_count = rng.below(5);
        for _ in 0..query_count {
            let net = &file.nets[queryable[rng.below(queryable.len() as u64) as usize]];
            let nodes: Vec<&NodeId> = net.diagram.nodes().iter().collect();
            let subject = nodes[rng.below(nodes.len() as u64) as usize].clone();
            let predicate = nodes[rng.below(nodes.len() as u64) as usize].clone();
            let expected = match rng.below(4) {
                0 => Some(Verdict::Positive),
                1 => Some(Verdict::Negative),
                2 => Some(Verdict::None),
                _ => None,
            };
            file.queries.push(Query {
                net: net.name.clone(),
                subject,
                predicate,
                expected,
            });
        }
    }
    file
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::Verdict;

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

    #[test]
    fn enumerates_tweety_potential_paths() {
        let d = tweety();
        let set = enumerate_paths(&d, &n("a"), &n("d"), PathKind::Potential).unwrap();
        let rendered: Vec<String> = set.paths.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            rendered,
            vec!["a -> b -> d", "a -> c -> b -> d", "a -> c !> d"]
        );
    }

    #[test]
    fn no_paths_between_unconnected_or_equal_nodes() {
        let d = tweety();
        assert!(enumerate_paths(&d, &n("b"), &n("c"), PathKind::Potential)
            .unwrap()
            .is_empty());
        assert!(enumerate_paths(&d, &n("a"), &n("a"), PathKind::Potential)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn potential_is_filtered_generalized() {
        let d = tweety();
        for x in d.nodes() {
            for y in d.nodes() {
                let general = enumerate_paths(&d, x, y, PathKind::Generalized).unwrap();
                let potential = enumerate_paths(&d, x, y, PathKind::Potential).unwrap();
                let filtered: Vec<&Path> = general
                    .paths
                    .iter()
                    .filter(|p| {
                        let negs = p
                            .steps()
                            .iter()
                            .filter(|l| l.polarity == Polarity::Negative)
                            .count();
                        negs == 0
                            || (negs == 1
                                && p.steps().last().unwrap().polarity == Polarity::Negative)
                    })
                    .collect();
                let as_potential: Vec<Path> = filtered
                    .iter()
                    .map(|p| {
                        Path::new(p.origin().clone(), p.steps().to_vec(), PathKind::Potential)
                            .unwrap()
                    })
                    .collect();
                assert_eq!(as_potential, potential.paths);
            }
        }
    }

    #[test]
    fn degree_equals_longest_enumerated_generalized_path() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..40 {
            let d = random_diagram(&mut rng, 8);
            for x in d.nodes() {
                for y in d.nodes() {
                    let set = enumerate_paths(&d, x, y, PathKind::Generalized).unwrap();
                    let expected = set.paths.iter().map(Path::len).max();
                    assert_eq!(crate::net::degree(&d, x, y).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn direct_links_are_valid() {
        let d = tweety();
        let cfg = PolicyConfig::default();
        for l in d.links() {
            assert!(naive_is_valid(&d, &Path::direct(l.clone()), &cfg).unwrap());
        }
    }

    #[test]
    fn tweety_verdicts() {
        let d = tweety();
        let cfg = PolicyConfig::default();
        let bird_route = Path::new(
            n("a"),
            vec![pos("a", "b"), pos("b", "d")],
            PathKind::Potential,
        )
        .unwrap();
        let penguin_route = Path::new(
            n("a"),
            vec![pos("a", "c"), neg("c", "d")],
            PathKind::Potential,
        )
        .unwrap();
        assert!(!naive_is_valid(&d, &bird_route, &cfg).unwrap());
        assert!(naive_is_valid(&d, &penguin_route, &cfg).unwrap());
        assert_eq!(
            naive_verdict(&d, &n("a"), &n("d"), &cfg).unwrap(),
            Verdict::Negative
        );
    }

    #[test]
    fn size_guard_fires() {
        let links: Vec<Link> = (0..13)
            .map(|i| pos(&format!("m{i}"), &format!("m{}", i + 1)))
            .collect();
        let d = build_diagram([], links).unwrap();
        assert!(matches!(
            enumerate_paths(&d, &n("m0"), &n("m13"), PathKind::Potential),
            Err(OracleError::DiagramTooLarge(_))
        ));
    }

    #[test]
    fn random_diagrams_are_deterministic_per_seed() {
        let a = random_diagrams(42, 10, 8);
        let b = random_diagrams(42, 10, 8);
        assert_eq!(a, b);
        let c = random_diagrams(43, 10, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_extension_policies_and_foreign_paths() {
        let d = tweety();
        let cfg = PolicyConfig::default().with_scepticism(Scepticism::Extensions);
        let direct = Path::direct(pos("a", "b"));
        assert!(matches!(
            naive_is_valid(&d, &direct, &cfg),
            Err(OracleError::UnsupportedPolicy)
        ));
        let foreign = Path::direct(pos("a", "zz"));
        assert!(matches!(
            naive_is_valid(&d, &foreign, &PolicyConfig::default()),
            Err(OracleError::PathNotInDiagram(_))
        ));
        assert!(matches!(
            enumerate_paths(&d, &n("a"), &n("zz"), PathKind::Potential),
            Err(OracleError::UnknownNode(_))
        ));
    }

    #[test]
    fn hard_contradiction_repair_drops_the_negative_links() {
        // The forward-pair generator cannot produce contradictions, but the
        // repair fallback must stay correct should it ever change.
        let links: BTreeSet<Link> = [
            pos("a", "b"),
            neg("a", "b"),
            pos("b", "c"),
            neg("b", "c"),
            pos("a", "c"),
        ]
        .into();
        let d = super::build_repaired(vec![n("a"), n("b"), n("c")], links);
        assert!(d.has_link(&n("a"), &n("b"), Polarity::Positive));
        assert!(d.has_link(&n("b"), &n("c"), Polarity::Positive));
        assert_eq!(d.links().len(), 3);
    }
}
