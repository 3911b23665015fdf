//! Core model for defeasible inheritance diagrams: nodes, signed links,
//! validated acyclic diagrams, and chains of links (paths).
//!
//! Everything here is immutable after construction and safe to share
//! across threads.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Polarity of a link or path: `a -> b` is positive, `a !> b` negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Positive => write!(f, "->"),
            Polarity::Negative => write!(f, "!>"),
        }
    }
}

/// Three-valued answer to a query: accepted, rejected, or no conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Positive,
    Negative,
    None,
}

impl Verdict {
    pub fn from_polarity(p: Polarity) -> Verdict {
        match p {
            Polarity::Positive => Verdict::Positive,
            Polarity::Negative => Verdict::Negative,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Positive => write!(f, "POSITIVE"),
            Verdict::Negative => write!(f, "NEGATIVE"),
            Verdict::None => write!(f, "NONE"),
        }
    }
}

/// Node name. Non-empty, letters/digits/underscore, case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<NodeId, NetError> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(NetError::InvalidNodeName(name));
        }
        Ok(NodeId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed signed link between two distinct nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub source: NodeId,
    pub target: NodeId,
    pub polarity: Polarity,
}

impl Link {
    pub fn new(source: NodeId, target: NodeId, polarity: Polarity) -> Result<Link, NetError> {
        if source == target {
            return Err(NetError::SelfLoop(source));
        }
        Ok(Link {
            source,
            target,
            polarity,
        })
    }

    pub fn positive(source: NodeId, target: NodeId) -> Result<Link, NetError> {
        Link::new(source, target, Polarity::Positive)
    }

    pub fn negative(source: NodeId, target: NodeId) -> Result<Link, NetError> {
        Link::new(source, target, Polarity::Negative)
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.source, self.polarity, self.target)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("invalid node name: {0:?}")]
    InvalidNodeName(String),
    #[error("self loop on node {0}")]
    SelfLoop(NodeId),
    #[error("cycle detected: {}", format_cycle(.0))]
    CycleDetected(Vec<NodeId>),
    #[error("hard contradiction: both {0} -> {1} and {0} !> {1} present")]
    HardContradiction(NodeId, NodeId),
    #[error("unknown node: {0}")]
    UnknownNode(NodeId),
    #[error("cannot concatenate: {0} ends at a different node than {1} starts")]
    EndpointMismatch(NodeId, NodeId),
    #[error("path step {0} is not a link of the diagram")]
    StepNotInDiagram(Link),
    #[error("path steps do not chain: {0} does not start where the previous step ends")]
    BrokenChain(Link),
    #[error("a path must have at least one step")]
    EmptyPath,
    #[error("negative steps may only occur as the last step of a potential path")]
    MisplacedNegativeStep,
}

fn format_cycle(nodes: &[NodeId]) -> String {
    nodes
        .iter()
        .map(NodeId::as_str)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// A finite acyclic diagram of signed links. Validated on construction:
/// no self loops, no cycles, and never both `x -> y` and `x !> y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    nodes: BTreeSet<NodeId>,
    links: BTreeSet<Link>,
    outgoing: BTreeMap<NodeId, Vec<Link>>,
    incoming: BTreeMap<NodeId, Vec<Link>>,
    topo: Vec<NodeId>,
}

/// Validates and builds a diagram. The node set is the given set plus all
/// link endpoints; isolated nodes are permitted.
pub fn build_diagram(
    nodes: impl IntoIterator<Item = NodeId>,
    links: impl IntoIterator<Item = Link>,
) -> Result<Diagram, NetError> {
    let mut node_set: BTreeSet<NodeId> = nodes.into_iter().collect();
    let link_set: BTreeSet<Link> = links.into_iter().collect();

    for link in &link_set {
        node_set.insert(link.source.clone());
        node_set.insert(link.target.clone());
        let twin = Link {
            source: link.source.clone(),
            target: link.target.clone(),
            polarity: link.polarity.flip(),
        };
        if link_set.contains(&twin) {
            return Err(NetError::HardContradiction(
                link.source.clone(),
                link.target.clone(),
            ));
        }
    }

    let mut outgoing: BTreeMap<NodeId, Vec<Link>> = BTreeMap::new();
    let mut incoming: BTreeMap<NodeId, Vec<Link>> = BTreeMap::new();
    for n in &node_set {
        outgoing.insert(n.clone(), Vec::new());
        incoming.insert(n.clone(), Vec::new());
    }
    for link in &link_set {
        outgoing.get_mut(&link.source).unwrap().push(link.clone());
        incoming.get_mut(&link.target).unwrap().push(link.clone());
    }

    let topo = toposort(&node_set, &outgoing)?;

    Ok(Diagram {
        nodes: node_set,
        links: link_set,
        outgoing,
        incoming,
        topo,
    })
}

/// Kahn's algorithm; on failure walks the leftover subgraph to report one
/// concrete cycle.
fn toposort(
    nodes: &BTreeSet<NodeId>,
    outgoing: &BTreeMap<NodeId, Vec<Link>>,
) -> Result<Vec<NodeId>, NetError> {
    let mut indegree: BTreeMap<&NodeId, usize> = nodes.iter().map(|n| (n, 0)).collect();
    for links in outgoing.values() {
        for l in links {
            *indegree.get_mut(&l.target).unwrap() += 1;
        }
    }
    let mut queue: VecDeque<&NodeId> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(n, _)| *n)
        .collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(n) = queue.pop_front() {
        order.push(n.clone());
        for l in &outgoing[n] {
            let d = indegree.get_mut(&l.target).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(&l.target);
            }
        }
    }
    if order.len() == nodes.len() {
        return Ok(order);
    }

    // Some node is stuck on a cycle; follow successors inside the leftover
    // set until a node repeats.
    let leftover: BTreeSet<&NodeId> = nodes.iter().filter(|n| indegree[*n] > 0).collect();
    let start = *leftover.iter().next().unwrap();
    let mut seen: Vec<NodeId> = vec![start.clone()];
    let mut current = start;
    loop {
        let next = outgoing[current]
            .iter()
            .map(|l| &l.target)
            .find(|t| leftover.contains(t))
            .expect("cyclic node has a successor in the cycle set");
        if let Some(pos) = seen.iter().position(|n| n == next) {
            let mut cycle: Vec<NodeId> = seen[pos..].to_vec();
            cycle.push(next.clone());
            return Err(NetError::CycleDetected(cycle));
        }
        seen.push(next.clone());
        current = next;
    }
}

impl Diagram {
    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn links(&self) -> &BTreeSet<Link> {
        &self.links
    }

    pub fn contains(&self, node: &NodeId) -> bool {
        self.nodes.contains(node)
    }

    pub fn has_link(&self, source: &NodeId, target: &NodeId, polarity: Polarity) -> bool {
        self.link_between(source, target) == Some(polarity)
    }

    /// The polarity of the link from `source` to `target`, if one exists.
    /// At most one polarity can be present (no hard contradictions).
    pub fn link_between(&self, source: &NodeId, target: &NodeId) -> Option<Polarity> {
        self.outgoing
            .get(source)?
            .iter()
            .find(|l| &l.target == target)
            .map(|l| l.polarity)
    }

    pub fn outgoing(&self, node: &NodeId) -> &[Link] {
        self.outgoing.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Direct predecessors of `node`: all links pointing into it.
    pub fn incoming(&self, node: &NodeId) -> &[Link] {
        self.incoming.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Nodes in a topological order of the link relation.
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Longest generalized path lengths from `origin` to every reachable
    /// node, by dynamic programming over the topological order.
    pub fn longest_path_lengths(&self, origin: &NodeId) -> BTreeMap<NodeId, usize> {
        let mut dist: BTreeMap<NodeId, usize> = BTreeMap::new();
        dist.insert(origin.clone(), 0);
        for n in &self.topo {
            let Some(&d) = dist.get(n) else { continue };
            for l in self.outgoing(n) {
                let entry = dist.entry(l.target.clone()).or_insert(0);
                if d + 1 > *entry {
                    *entry = d + 1;
                }
            }
        }
        dist.remove(origin);
        dist
    }
}

/// Length of the longest generalized path from `x` to `y`; `None` when no
/// generalized path exists. Well-defined because the diagram is acyclic.
pub fn degree(gamma: &Diagram, x: &NodeId, y: &NodeId) -> Result<Option<usize>, NetError> {
    for n in [x, y] {
        if !gamma.contains(n) {
            return Err(NetError::UnknownNode(n.clone()));
        }
    }
    Ok(gamma.longest_path_lengths(x).get(y).copied())
}

/// Path classification. A generalized path chains links of any polarity;
/// a potential path carries at most one negative link, and only as its
/// final step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathKind {
    Generalized,
    Potential,
}

/// A non-empty chain of links within a fixed diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    origin: NodeId,
    steps: Vec<Link>,
    kind: PathKind,
    polarity: Polarity,
}

impl Path {
    /// Builds a path, checking step chaining and the kind invariant.
    /// Membership of the steps in a concrete diagram is checked separately
    /// by the consumers that require it.
    pub fn new(origin: NodeId, steps: Vec<Link>, kind: PathKind) -> Result<Path, NetError> {
        if steps.is_empty() {
            return Err(NetError::EmptyPath);
        }
        if steps[0].source != origin {
            return Err(NetError::BrokenChain(steps[0].clone()));
        }
        for w in steps.windows(2) {
            if w[0].target != w[1].source {
                return Err(NetError::BrokenChain(w[1].clone()));
            }
        }
        if kind == PathKind::Potential {
            let negatives = steps
                .iter()
                .filter(|l| l.polarity == Polarity::Negative)
                .count();
            let last_negative = steps.last().unwrap().polarity == Polarity::Negative;
            if negatives > 1 || (negatives == 1 && !last_negative) {
                return Err(NetError::MisplacedNegativeStep);
            }
        }
        let polarity = steps.last().unwrap().polarity;
        Ok(Path {
            origin,
            steps,
            kind,
            polarity,
        })
    }

    pub fn direct(link: Link) -> Path {
        let origin = link.source.clone();
        let polarity = link.polarity;
        Path {
            origin,
            steps: vec![link],
            kind: PathKind::Potential,
            polarity,
        }
    }

    pub fn origin(&self) -> &NodeId {
        &self.origin
    }

    pub fn endpoint(&self) -> &NodeId {
        &self.steps.last().unwrap().target
    }

    pub fn steps(&self) -> &[Link] {
        &self.steps
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_direct(&self) -> bool {
        self.steps.len() == 1
    }

    /// All nodes visited, origin first.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = vec![self.origin.clone()];
        out.extend(self.steps.iter().map(|l| l.target.clone()));
        out
    }

    /// The path without its final step, if the path is composite.
    pub fn prefix(&self) -> Option<Path> {
        if self.steps.len() < 2 {
            return None;
        }
        let steps = self.steps[..self.steps.len() - 1].to_vec();
        Some(Path::new(self.origin.clone(), steps, self.kind).expect("prefix of a valid chain"))
    }

    /// Extends the path by one link, keeping the potential invariant when
    /// possible and downgrading to generalized otherwise.
    pub fn extend(&self, link: Link) -> Result<Path, NetError> {
        if self.endpoint() != &link.source {
            return Err(NetError::EndpointMismatch(
                self.endpoint().clone(),
                link.source,
            ));
        }
        let mut steps = self.steps.clone();
        steps.push(link);
        match Path::new(self.origin.clone(), steps.clone(), PathKind::Potential) {
            Ok(p) => Ok(p),
            Err(NetError::MisplacedNegativeStep) => {
                Path::new(self.origin.clone(), steps, PathKind::Generalized)
            }
            Err(e) => Err(e),
        }
    }

    pub fn belongs_to(&self, gamma: &Diagram) -> bool {
        self.steps.iter().all(|l| gamma.links().contains(l))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.origin)?;
        for l in &self.steps {
            write!(f, " {} {}", l.polarity, l.target)?;
        }
        Ok(())
    }
}

/// Joins two paths. The result is a potential path when the combined steps
/// satisfy the potential invariant, and a generalized path otherwise.
pub fn concatenate(sigma: &Path, tau: &Path) -> Result<Path, NetError> {
    if sigma.endpoint() != tau.origin() {
        return Err(NetError::EndpointMismatch(
            sigma.endpoint().clone(),
            tau.origin().clone(),
        ));
    }
    let mut steps = sigma.steps.clone();
    steps.extend(tau.steps.iter().cloned());
    match Path::new(sigma.origin.clone(), steps.clone(), PathKind::Potential) {
        Ok(p) => Ok(p),
        Err(NetError::MisplacedNegativeStep) => {
            Path::new(sigma.origin.clone(), steps, PathKind::Generalized)
        }
        Err(e) => Err(e),
    }
}

/// The answer to a query, with the accepted paths as evidence and the
/// information source whose strength decided it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Conclusion {
    pub subject: NodeId,
    pub predicate: NodeId,
    pub verdict: Verdict,
    pub witnesses: BTreeSet<Path>,
    pub strength: Option<NodeId>,
}

impl Conclusion {
    pub fn none(subject: NodeId, predicate: NodeId) -> Conclusion {
        Conclusion {
            subject,
            predicate,
            verdict: Verdict::None,
            witnesses: BTreeSet::new(),
            strength: None,
        }
    }
}
