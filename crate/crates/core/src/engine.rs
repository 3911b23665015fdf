//! The path engine: decides which potential paths are accepted and answers
//! queries under configurable preclusion and scepticism policies.
//!
//! Validity is decided by upward chaining. A direct link is always valid.
//! A compound path is valid when its initial segment is valid, no more
//! specific contradicting source precludes it, and every conflicting
//! candidate path is itself precluded by a more specific agreeing source.
//! Specificity between sources is witnessed by valid positive paths, so the
//! comparison is absolute (split validity) unless total validity is
//! requested, in which case the whole preclusion path must be valid.
//!
//! All pair facts are computed once per analysis, by induction on degree
//! (the longest generalized path length between the endpoints); validity at
//! one degree only consults strictly smaller degrees.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::net::{Conclusion, Diagram, Link, NodeId, Path, PathKind, Polarity, Verdict};

/// Where a precluding source may sit: anywhere (off-path) or on the
/// contested path itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PreclusionScope {
    OffPath,
    OnPath,
}

/// Whether a preclusion witness splits into two separately valid segments
/// or must be one whole valid path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PreclusionValidity {
    Split,
    Total,
}

/// Direct scepticism cancels unresolved conflicts; extensions branch on
/// them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scepticism {
    Direct,
    Extensions,
}

/// Conflict resolution among information sources. `P21` drops a source
/// whenever a better one exists; `P22` only when the better source
/// contradicts it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resolver {
    P21,
    P22,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolicyConfig {
    pub preclusion_scope: PreclusionScope,
    pub preclusion_validity: PreclusionValidity,
    pub scepticism: Scepticism,
    pub resolver: Resolver,
}

impl Default for PolicyConfig {
    /// Directly sceptical, split-validity, off-path, contradiction-gated
    /// elimination.
    fn default() -> Self {
        PolicyConfig {
            preclusion_scope: PreclusionScope::OffPath,
            preclusion_validity: PreclusionValidity::Split,
            scepticism: Scepticism::Direct,
            resolver: Resolver::P22,
        }
    }
}

impl PolicyConfig {
    pub fn with_scope(mut self, scope: PreclusionScope) -> Self {
        self.preclusion_scope = scope;
        self
    }

    pub fn with_validity(mut self, validity: PreclusionValidity) -> Self {
        self.preclusion_validity = validity;
        self
    }

    pub fn with_scepticism(mut self, scepticism: Scepticism) -> Self {
        self.scepticism = scepticism;
        self
    }

    pub fn with_resolver(mut self, resolver: Resolver) -> Self {
        self.resolver = resolver;
        self
    }

    /// The four scope x validity combinations, all directly sceptical.
    pub fn all_direct() -> Vec<PolicyConfig> {
        let mut out = Vec::new();
        for scope in [PreclusionScope::OffPath, PreclusionScope::OnPath] {
            for validity in [PreclusionValidity::Split, PreclusionValidity::Total] {
                out.push(
                    PolicyConfig::default()
                        .with_scope(scope)
                        .with_validity(validity),
                );
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown node: {0}")]
    UnknownNode(NodeId),
    #[error("path is not a potential path over this diagram: {0}")]
    PathNotInDiagram(Path),
    #[error(
        "operation requires direct scepticism; use compute_extensions for extension semantics"
    )]
    UnsupportedPolicy,
    #[error("no reports to resolve")]
    EmptyReportSet,
    #[error("reports speak about different predicates: {0} vs {1}")]
    MixedAbout(NodeId, NodeId),
}

/// One direct claim: `source` asserts `about` (positively or negatively).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceReport {
    pub source: NodeId,
    pub claim_polarity: Polarity,
    pub about: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionOutcome {
    Positive,
    Negative,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceResolution {
    pub outcome: ResolutionOutcome,
    pub survivors: BTreeSet<SourceReport>,
}

/// Applies the plug-in conflict decision to a set of reports about one
/// predicate, under an arbitrary (partial, not necessarily transitive)
/// better-than relation. `better(a, b)` means `a` is more specific than
/// `b`. A dropped report still eliminates others: elimination is a single
/// pass, not a fixpoint.
pub fn resolve_sources(
    reports: &BTreeSet<SourceReport>,
    better: impl Fn(&NodeId, &NodeId) -> bool,
    resolver: Resolver,
) -> Result<SourceResolution, EngineError> {
    let mut iter = reports.iter();
    let Some(first) = iter.next() else {
        return Err(EngineError::EmptyReportSet);
    };
    for r in iter.clone() {
        if r.about != first.about {
            return Err(EngineError::MixedAbout(
                first.about.clone(),
                r.about.clone(),
            ));
        }
    }

    let survivors: BTreeSet<SourceReport> = reports
        .iter()
        .filter(|r| {
            !reports.iter().any(|other| {
                other.source != r.source
                    && better(&other.source, &r.source)
                    && (resolver == Resolver::P21 || other.claim_polarity != r.claim_polarity)
            })
        })
        .cloned()
        .collect();

    let outcome = match (
        survivors
            .iter()
            .any(|r| r.claim_polarity == Polarity::Positive),
        survivors
            .iter()
            .any(|r| r.claim_polarity == Polarity::Negative),
    ) {
        (true, false) => ResolutionOutcome::Positive,
        (false, true) => ResolutionOutcome::Negative,
        _ => ResolutionOutcome::Undecided,
    };

    Ok(SourceResolution { outcome, survivors })
}

/// The valid paths between one ordered pair, by polarity. At most one side
/// is non-empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct PairEntry {
    pos: Vec<Path>,
    neg: Vec<Path>,
}

impl PairEntry {
    fn paths(&self, polarity: Polarity) -> &[Path] {
        match polarity {
            Polarity::Positive => &self.pos,
            Polarity::Negative => &self.neg,
        }
    }

    fn verdict(&self) -> Verdict {
        if !self.pos.is_empty() {
            Verdict::Positive
        } else if !self.neg.is_empty() {
            Verdict::Negative
        } else {
            Verdict::None
        }
    }
}

/// All ordered pairs with a generalized path, sorted by increasing degree
/// (ties lexicographic): the induction order for validity.
fn pairs_in_degree_order(gamma: &Diagram) -> Vec<(usize, NodeId, NodeId)> {
    let mut pairs = Vec::new();
    for x in gamma.nodes() {
        for (y, d) in gamma.longest_path_lengths(x) {
            pairs.push((d, x.clone(), y));
        }
    }
    pairs.sort();
    pairs
}

/// Precomputed pair facts for one diagram under one policy.
pub struct Analysis<'d> {
    gamma: &'d Diagram,
    cfg: PolicyConfig,
    table: BTreeMap<(NodeId, NodeId), PairEntry>,
}

impl<'d> Analysis<'d> {
    pub fn new(gamma: &'d Diagram, cfg: PolicyConfig) -> Result<Analysis<'d>, EngineError> {
        if cfg.scepticism != Scepticism::Direct {
            return Err(EngineError::UnsupportedPolicy);
        }
        let pairs = pairs_in_degree_order(gamma);
        Ok(Self::build(gamma, cfg, pairs))
    }

    /// Same analysis with same-degree pairs processed in a seed-derived
    /// order. Results must not depend on tie order; tests compare this
    /// against the canonical build.
    pub fn new_with_shuffled_ties(
        gamma: &'d Diagram,
        cfg: PolicyConfig,
        seed: u64,
    ) -> Result<Analysis<'d>, EngineError> {
        if cfg.scepticism != Scepticism::Direct {
            return Err(EngineError::UnsupportedPolicy);
        }
        let mut pairs = pairs_in_degree_order(gamma);
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut i = 0;
        while i < pairs.len() {
            let mut j = i;
            while j < pairs.len() && pairs[j].0 == pairs[i].0 {
                j += 1;
            }
            for k in ((i + 1)..j).rev() {
                let pick = i + (next() % (k - i + 1) as u64) as usize;
                pairs.swap(k, pick);
            }
            i = j;
        }
        Ok(Self::build(gamma, cfg, pairs))
    }

    fn build(
        gamma: &'d Diagram,
        cfg: PolicyConfig,
        pairs: Vec<(usize, NodeId, NodeId)>,
    ) -> Analysis<'d> {
        let mut table: BTreeMap<(NodeId, NodeId), PairEntry> = BTreeMap::new();
        for (_, x, y) in pairs {
            let entry = decide_pair(gamma, cfg, &table, &x, &y).into_entry();
            table.insert((x, y), entry);
        }
        Analysis { gamma, cfg, table }
    }

    pub fn diagram(&self) -> &Diagram {
        self.gamma
    }

    pub fn config(&self) -> PolicyConfig {
        self.cfg
    }

    fn entry(&self, x: &NodeId, y: &NodeId) -> Option<&PairEntry> {
        self.table.get(&(x.clone(), y.clone()))
    }

    /// All valid paths from `x` to `y` of the given polarity.
    pub fn valid_paths(&self, x: &NodeId, y: &NodeId, polarity: Polarity) -> &[Path] {
        self.entry(x, y).map(|e| e.paths(polarity)).unwrap_or(&[])
    }

    pub fn verdict(&self, x: &NodeId, y: &NodeId) -> Verdict {
        self.entry(x, y)
            .map(PairEntry::verdict)
            .unwrap_or(Verdict::None)
    }

    /// Is there a valid positive path from `a` to `b`? This is both
    /// reachability of information and the specificity comparison.
    pub fn has_valid_positive(&self, a: &NodeId, b: &NodeId) -> bool {
        !self.valid_paths(a, b, Polarity::Positive).is_empty()
    }

    pub fn is_valid(&self, sigma: &Path) -> Result<bool, EngineError> {
        if sigma.kind() != PathKind::Potential || !sigma.belongs_to(self.gamma) {
            return Err(EngineError::PathNotInDiagram(sigma.clone()));
        }
        Ok(self
            .valid_paths(sigma.origin(), sigma.endpoint(), sigma.polarity())
            .contains(sigma))
    }

    pub fn conclusion(&self, x: &NodeId, y: &NodeId) -> Result<Conclusion, EngineError> {
        for n in [x, y] {
            if !self.gamma.contains(n) {
                return Err(EngineError::UnknownNode(n.clone()));
            }
        }
        let verdict = self.verdict(x, y);
        let witnesses: BTreeSet<Path> = match verdict {
            Verdict::None => BTreeSet::new(),
            Verdict::Positive => self
                .valid_paths(x, y, Polarity::Positive)
                .iter()
                .cloned()
                .collect(),
            Verdict::Negative => self
                .valid_paths(x, y, Polarity::Negative)
                .iter()
                .cloned()
                .collect(),
        };
        let strength = conclusion_strength(self.gamma, x, y, verdict, &witnesses);
        Ok(Conclusion {
            subject: x.clone(),
            predicate: y.clone(),
            verdict,
            witnesses,
            strength,
        })
    }

    /// Links a traveller from `x` bound for `y` must not take: links leaving
    /// a node of some accepted witness (or leaving `x`) that lie on no
    /// accepted witness. Warning posts go up everywhere and are then
    /// collected backwards along the valid paths.
    pub fn signposts(&self, x: &NodeId, y: &NodeId) -> Result<BTreeSet<Link>, EngineError> {
        for n in [x, y] {
            if !self.gamma.contains(n) {
                return Err(EngineError::UnknownNode(n.clone()));
            }
        }
        let verdict = self.verdict(x, y);
        let witnesses: Vec<&Path> = match verdict {
            Verdict::None => Vec::new(),
            Verdict::Positive => self.valid_paths(x, y, Polarity::Positive).iter().collect(),
            Verdict::Negative => self.valid_paths(x, y, Polarity::Negative).iter().collect(),
        };
        let mut on_links: BTreeSet<&Link> = BTreeSet::new();
        let mut frontier: BTreeSet<NodeId> = BTreeSet::new();
        frontier.insert(x.clone());
        for w in &witnesses {
            for step in w.steps() {
                on_links.insert(step);
                if &step.source != y {
                    frontier.insert(step.source.clone());
                }
            }
        }
        let mut posts = BTreeSet::new();
        for node in &frontier {
            for link in self.gamma.outgoing(node) {
                if !on_links.contains(link) {
                    posts.insert(link.clone());
                }
            }
        }
        Ok(posts)
    }
}

/// The information source that decided a conclusion: the subject itself for
/// a direct link (direct arrows are uncontested), otherwise the least of
/// the surviving sources under the witnesses.
fn conclusion_strength(
    gamma: &Diagram,
    x: &NodeId,
    y: &NodeId,
    verdict: Verdict,
    witnesses: &BTreeSet<Path>,
) -> Option<NodeId> {
    let polarity = match verdict {
        Verdict::Positive => Polarity::Positive,
        Verdict::Negative => Polarity::Negative,
        Verdict::None => return None,
    };
    if gamma.has_link(x, y, polarity) {
        return Some(x.clone());
    }
    witnesses
        .iter()
        .map(|w| w.steps().last().unwrap().source.clone())
        .min()
}

/// What a pair decision looks like before scepticism is applied: the
/// accepted paths per polarity, or an unresolved conflict carrying both
/// non-precluded candidate sets.
enum PairDecision {
    Settled(PairEntry),
    Conflict { pos: Vec<Path>, neg: Vec<Path> },
}

impl PairDecision {
    /// Direct scepticism: an unresolved conflict yields no valid paths.
    fn into_entry(self) -> PairEntry {
        match self {
            PairDecision::Settled(e) => e,
            PairDecision::Conflict { .. } => PairEntry::default(),
        }
    }
}

trait PairFacts {
    fn paths_of(&self, a: &NodeId, b: &NodeId, polarity: Polarity) -> &[Path];

    fn has_valid_positive(&self, a: &NodeId, b: &NodeId) -> bool {
        !self.paths_of(a, b, Polarity::Positive).is_empty()
    }

    /// Does some valid positive path from `a` to `b` pass through `via`?
    fn valid_positive_through(&self, a: &NodeId, via: &NodeId, b: &NodeId) -> bool {
        self.paths_of(a, b, Polarity::Positive)
            .iter()
            .any(|p| p.nodes().contains(via))
    }
}

impl PairFacts for BTreeMap<(NodeId, NodeId), PairEntry> {
    fn paths_of(&self, a: &NodeId, b: &NodeId, polarity: Polarity) -> &[Path] {
        self.get(&(a.clone(), b.clone()))
            .map(|e| e.paths(polarity))
            .unwrap_or(&[])
    }
}

/// Is source `dominator` more specific than source `dominee` for decisions
/// from origin `x`? Split validity compares absolutely via a valid positive
/// path; total validity demands one whole valid path from `x` through the
/// dominator to the dominee.
fn dominates(
    facts: &dyn PairFacts,
    cfg: PolicyConfig,
    x: &NodeId,
    dominator: &NodeId,
    dominee: &NodeId,
) -> bool {
    match cfg.preclusion_validity {
        PreclusionValidity::Split => facts.has_valid_positive(dominator, dominee),
        PreclusionValidity::Total => facts.valid_positive_through(x, dominator, dominee),
    }
}

/// Decides one pair `(x, y)` given the facts for all smaller-degree pairs.
///
/// Sources are the direct predecessors of `y` (other than `x`) reachable
/// from `x` by a valid positive path. A source is eliminated when a more
/// specific source contradicts it (or, under the dominance-blind resolver,
/// merely exists). A composite candidate of one polarity is accepted only
/// when no contradicting source survives and no direct link from `x`
/// contradicts it; a direct link from `x` is valid on its own. Candidates
/// of both polarities left standing form an unresolved conflict.
fn decide_pair(
    gamma: &Diagram,
    cfg: PolicyConfig,
    facts: &BTreeMap<(NodeId, NodeId), PairEntry>,
    x: &NodeId,
    y: &NodeId,
) -> PairDecision {
    let mut entry = PairEntry::default();
    let direct = gamma.link_between(x, y);
    if let Some(pol) = direct {
        let link = Link::new(x.clone(), y.clone(), pol).expect("diagram link");
        match pol {
            Polarity::Positive => entry.pos.push(Path::direct(link)),
            Polarity::Negative => entry.neg.push(Path::direct(link)),
        }
    }

    let sources: Vec<&Link> = gamma
        .incoming(y)
        .iter()
        .filter(|l| &l.source != x && facts.has_valid_positive(x, &l.source))
        .collect();

    let eliminated = |candidate: &Link| -> bool {
        sources.iter().any(|other| {
            other.source != candidate.source
                && (cfg.resolver == Resolver::P21 || other.polarity != candidate.polarity)
                && dominates(facts, cfg, x, &other.source, &candidate.source)
        })
    };

    let survives = |link: &Link| !eliminated(link);
    let has_survivor = |polarity: Polarity| {
        sources
            .iter()
            .any(|l| l.polarity == polarity && survives(l))
    };
    let has_pos_survivor = has_survivor(Polarity::Positive);
    let has_neg_survivor = has_survivor(Polarity::Negative);

    // Candidate composite paths of one polarity that pass the preclusion
    // check on the path itself. Off-path: the last source must survive
    // elimination. On-path: only contradicting links leaving the path's own
    // nodes preclude it, so eliminated sources may still carry candidates.
    let candidates = |polarity: Polarity| -> Vec<Path> {
        let mut out = Vec::new();
        for src in sources.iter().filter(|l| l.polarity == polarity) {
            match cfg.preclusion_scope {
                PreclusionScope::OffPath => {
                    if !survives(src) {
                        continue;
                    }
                }
                PreclusionScope::OnPath => {}
            }
            for prefix in facts.paths_of(x, &src.source, Polarity::Positive) {
                if cfg.preclusion_scope == PreclusionScope::OnPath
                    && prefix
                        .nodes()
                        .iter()
                        .any(|v| gamma.has_link(v, y, polarity.flip()))
                {
                    continue;
                }
                let extended = prefix
                    .extend((*src).clone())
                    .expect("source link continues its prefix");
                if extended.kind() == PathKind::Potential {
                    out.push(extended);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    };

    let pos_candidates = candidates(Polarity::Positive);
    let neg_candidates = candidates(Polarity::Negative);

    // A polarity wins only if every contradicting source was eliminated and
    // no direct link from x contradicts it.
    let pos_ok =
        !pos_candidates.is_empty() && !has_neg_survivor && direct != Some(Polarity::Negative);
    let neg_ok =
        !neg_candidates.is_empty() && !has_pos_survivor && direct != Some(Polarity::Positive);

    if direct.is_none()
        && !pos_candidates.is_empty()
        && !neg_candidates.is_empty()
        && !pos_ok
        && !neg_ok
    {
        return PairDecision::Conflict {
            pos: pos_candidates,
            neg: neg_candidates,
        };
    }

    if pos_ok {
        entry.pos.extend(pos_candidates);
        entry.pos.sort();
        entry.pos.dedup();
    }
    if neg_ok {
        entry.neg.extend(neg_candidates);
        entry.neg.sort();
        entry.neg.dedup();
    }
    PairDecision::Settled(entry)
}

/// Is `sigma` an accepted path? Decided against a fresh analysis of the
/// diagram; build an [`Analysis`] directly to amortize across calls.
pub fn is_valid(gamma: &Diagram, sigma: &Path, cfg: &PolicyConfig) -> Result<bool, EngineError> {
    Analysis::new(gamma, *cfg)?.is_valid(sigma)
}

/// Answers "is x a y?" with all accepted witnesses, or no conclusion when
/// every candidate is cancelled.
pub fn query(
    gamma: &Diagram,
    x: &NodeId,
    y: &NodeId,
    cfg: &PolicyConfig,
) -> Result<Conclusion, EngineError> {
    Analysis::new(gamma, *cfg)?.conclusion(x, y)
}

/// Links through which no accepted path from `x` continues to `y`.
pub fn signposts(
    gamma: &Diagram,
    x: &NodeId,
    y: &NodeId,
    cfg: &PolicyConfig,
) -> Result<BTreeSet<Link>, EngineError> {
    Analysis::new(gamma, *cfg)?.signposts(x, y)
}

/// One maximal consistent way of resolving every conflict.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    pub valid_paths: BTreeSet<Path>,
    pub conclusions: BTreeSet<Conclusion>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionsOutcome {
    pub extensions: Vec<Extension>,
    /// Conclusions shared by every extension (indirect scepticism).
    pub intersection: BTreeSet<(NodeId, NodeId, Verdict)>,
}

/// Branches on every unresolved conflict, in increasing (degree, pair)
/// order: one branch accepts the positive non-precluded candidates, the
/// other the negative ones. Policy flags other than scepticism are honored.
pub fn compute_extensions(
    gamma: &Diagram,
    cfg: &PolicyConfig,
) -> Result<ExtensionsOutcome, EngineError> {
    let cfg = cfg.with_scepticism(Scepticism::Direct);
    let pairs = pairs_in_degree_order(gamma);
    let mut leaves: Vec<BTreeMap<(NodeId, NodeId), PairEntry>> = Vec::new();
    branch(gamma, cfg, &pairs, 0, BTreeMap::new(), &mut leaves);

    let mut extensions = Vec::new();
    for table in leaves {
        let mut valid_paths = BTreeSet::new();
        let mut conclusions = BTreeSet::new();
        for ((x, y), entry) in &table {
            for p in entry.pos.iter().chain(entry.neg.iter()) {
                valid_paths.insert(p.clone());
            }
            let verdict = entry.verdict();
            if verdict == Verdict::None {
                continue;
            }
            let witnesses: BTreeSet<Path> = match verdict {
                Verdict::Positive => entry.pos.iter().cloned().collect(),
                Verdict::Negative => entry.neg.iter().cloned().collect(),
                Verdict::None => unreachable!(),
            };
            let strength = conclusion_strength(gamma, x, y, verdict, &witnesses);
            conclusions.insert(Conclusion {
                subject: x.clone(),
                predicate: y.clone(),
                verdict,
                witnesses,
                strength,
            });
        }
        extensions.push(Extension {
            valid_paths,
            conclusions,
        });
    }
    extensions.sort();
    extensions.dedup();

    let mut intersection: BTreeSet<(NodeId, NodeId, Verdict)> = extensions
        .first()
        .map(|e| {
            e.conclusions
                .iter()
                .map(|c| (c.subject.clone(), c.predicate.clone(), c.verdict))
                .collect()
        })
        .unwrap_or_default();
    for ext in extensions.iter().skip(1) {
        let these: BTreeSet<(NodeId, NodeId, Verdict)> = ext
            .conclusions
            .iter()
            .map(|c| (c.subject.clone(), c.predicate.clone(), c.verdict))
            .collect();
        intersection = intersection.intersection(&these).cloned().collect();
    }

    Ok(ExtensionsOutcome {
        extensions,
        intersection,
    })
}

fn branch(
    gamma: &Diagram,
    cfg: PolicyConfig,
    pairs: &[(usize, NodeId, NodeId)],
    index: usize,
    mut table: BTreeMap<(NodeId, NodeId), PairEntry>,
    leaves: &mut Vec<BTreeMap<(NodeId, NodeId), PairEntry>>,
) {
    for (offset, (_, x, y)) in pairs[index..].iter().enumerate() {
        match decide_pair(gamma, cfg, &table, x, y) {
            PairDecision::Settled(entry) => {
                table.insert((x.clone(), y.clone()), entry);
            }
            PairDecision::Conflict { pos, neg } => {
                let next = index + offset + 1;
                let mut positive_branch = table.clone();
                positive_branch.insert(
                    (x.clone(), y.clone()),
                    PairEntry {
                        pos,
                        neg: Vec::new(),
                    },
                );
                branch(gamma, cfg, pairs, next, positive_branch, leaves);
                table.insert(
                    (x.clone(), y.clone()),
                    PairEntry {
                        pos: Vec::new(),
                        neg,
                    },
                );
                branch(gamma, cfg, pairs, next, table, leaves);
                return;
            }
        }
    }
    leaves.push(table);
}
