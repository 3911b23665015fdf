//! Translation of diagrams into a calculus of relative big subsets.
//!
//! Each link contributes a base fact: `X -> Y` puts `X & Y` among the
//! Y-BIG subsets of `X` (written `B(X, Y)`), and `X !> Y` puts `X & ~Y`
//! there. Direct-link strength (`B`) is distinguished from transferred
//! strength (`b`): moving information along composite access channels only
//! ever yields `b`, which is what blocks free concatenation of valid paths.
//!
//! Rules:
//! - `R3`: `A in B(X, Y)` implies `A in b(X, Y)`.
//! - `R12`: big access channels intersect: `X&Y in b(X, Y)` and
//!   `X&Y' in b(X, Y')` give `X&Y&Y' in b(X, Y&Y')`.
//! - `R13`: direct claims about `Z` from several sources combine over the
//!   intersection, resolved by preclusion: the specificity order is the
//!   engine's valid-positive-path relation and conflicts fall to the
//!   contradiction-gated plug-in rule.
//! - `R14`: transfer from the most specific reference class (the
//!   intersection of every source reachable from `X` that carries a direct
//!   `Z`-link) down to `X`'s copy of it.
//! - `R2`: projection back to `X` itself.
//!
//! Undecided combinations produce no statement at all; there is no medium
//! grade. `check_correspondence` verifies, pair by pair, that derivability
//! here coincides with the path engine's verdicts.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::engine::{
    resolve_sources, Analysis, PolicyConfig, ResolutionOutcome, Resolver, SourceReport,
};
use crate::net::{Diagram, NodeId, Polarity, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetsemError {
    #[error("unknown node: {0}")]
    UnknownNode(NodeId),
}

/// An intersection of node sets with at most one complemented factor,
/// e.g. `b&c` or `b&c&~d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SetExpr {
    factors: BTreeSet<NodeId>,
    complemented: Option<NodeId>,
}

impl SetExpr {
    pub fn of(factors: impl IntoIterator<Item = NodeId>) -> SetExpr {
        let factors: BTreeSet<NodeId> = factors.into_iter().collect();
        assert!(!factors.is_empty(), "a set expression needs a factor");
        SetExpr {
            factors,
            complemented: None,
        }
    }

    pub fn single(node: NodeId) -> SetExpr {
        SetExpr::of([node])
    }

    /// The expression intersected with `node` or its complement.
    pub fn with(&self, node: NodeId, polarity: Polarity) -> SetExpr {
        let mut out = self.clone();
        match polarity {
            Polarity::Positive => {
                out.factors.insert(node);
            }
            Polarity::Negative => {
                assert!(
                    out.complemented.is_none(),
                    "at most one complemented factor"
                );
                assert!(!out.factors.contains(&node), "complement of a factor");
                out.complemented = Some(node);
            }
        }
        out
    }

    pub fn factors(&self) -> &BTreeSet<NodeId> {
        &self.factors
    }

    pub fn complemented(&self) -> Option<&NodeId> {
        self.complemented.as_ref()
    }

    pub fn is_single(&self) -> bool {
        self.factors.len() == 1 && self.complemented.is_none()
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in &self.factors {
            if !first {
                write!(f, "&")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        if let Some(c) = &self.complemented {
            if !first {
                write!(f, "&")?;
            }
            write!(f, "~{c}")?;
        }
        Ok(())
    }
}

/// Upper is direct-link strength (`B`); Lower is transferred strength
/// (`b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Grade {
    Upper,
    Lower,
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Upper => write!(f, "B"),
            Grade::Lower => write!(f, "b"),
        }
    }
}

/// A graded claim: the subject is an `about`-BIG (`B`) or `about`-big (`b`)
/// subset of the reference. `about` is usually a single node `Z`, but
/// intersecting access channels produces statements graded relative to a
/// set expression, e.g. `x&y&y2 in b(x, y&y2)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SizeStatement {
    pub subject: SetExpr,
    pub reference: SetExpr,
    pub about: SetExpr,
    pub grade: Grade,
    pub polarity: Polarity,
}

impl SizeStatement {
    pub fn new(
        reference: SetExpr,
        about: NodeId,
        grade: Grade,
        polarity: Polarity,
    ) -> SizeStatement {
        let subject = reference.with(about.clone(), polarity);
        SizeStatement {
            subject,
            reference,
            about: SetExpr::single(about),
            grade,
            polarity,
        }
    }

    /// `x & z in b(x, z)`.
    pub fn positive_goal(x: NodeId, z: NodeId) -> SizeStatement {
        SizeStatement::new(SetExpr::single(x), z, Grade::Lower, Polarity::Positive)
    }

    /// `x & ~z in b(x, z)`.
    pub fn negative_goal(x: NodeId, z: NodeId) -> SizeStatement {
        SizeStatement::new(SetExpr::single(x), z, Grade::Lower, Polarity::Negative)
    }

    /// The single node the statement grades against, when it is one.
    pub fn about_node(&self) -> Option<&NodeId> {
        if self.about.is_single() {
            self.about.factors().iter().next()
        } else {
            None
        }
    }
}

impl fmt::Display for SizeStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in {}({}, {})",
            self.subject, self.grade, self.reference, self.about
        )
    }
}

/// Access statement `X & G in b(X, G)` for a channel set `G`.
fn access_statement(x: &NodeId, channel: &BTreeSet<NodeId>) -> SizeStatement {
    let mut subject = SetExpr::of(channel.iter().cloned());
    subject.factors.insert(x.clone());
    SizeStatement {
        subject,
        reference: SetExpr::single(x.clone()),
        about: SetExpr::of(channel.iter().cloned()),
        grade: Grade::Lower,
        polarity: Polarity::Positive,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rule {
    Base,
    R3,
    R12,
    R13,
    R14,
    R2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Base => "Base",
            Rule::R3 => "R3",
            Rule::R12 => "R12",
            Rule::R13 => "R13",
            Rule::R14 => "R14",
            Rule::R2 => "R2",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Derivation {
    pub conclusion: SizeStatement,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    fn leaf(conclusion: SizeStatement) -> Derivation {
        Derivation {
            conclusion,
            rule: Rule::Base,
            premises: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self
            .premises
            .iter()
            .map(Derivation::depth)
            .max()
            .unwrap_or(0)
    }

    /// Direct-link strength may only enter through a base fact or a
    /// preclusion-resolved combination; transfers always land in the lower
    /// grade.
    pub fn grades_are_separated(&self) -> bool {
        let own =
            self.conclusion.grade != Grade::Upper || matches!(self.rule, Rule::Base | Rule::R13);
        own && self.premises.iter().all(Derivation::grades_are_separated)
    }
}

/// Indented rule tree, one statement per line, premises in stable order.
pub fn render(derivation: &Derivation) -> String {
    let mut out = String::new();
    render_into(derivation, 0, &mut out);
    out
}

fn render_into(d: &Derivation, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(&format!("{:<4} {}\n", d.rule.to_string(), d.conclusion));
    for p in &d.premises {
        render_into(p, depth + 1, out);
    }
}

/// One BIG statement per link, polarity matching the link.
pub fn base_theory(gamma: &Diagram) -> BTreeSet<SizeStatement> {
    gamma
        .links()
        .iter()
        .map(|l| {
            SizeStatement::new(
                SetExpr::single(l.source.clone()),
                l.target.clone(),
                Grade::Upper,
                l.polarity,
            )
        })
        .collect()
}

/// Forward-chains the rules toward `goal`; `None` when the goal is not
/// derivable (including every undecided combination).
pub fn derive(gamma: &Diagram, goal: &SizeStatement) -> Result<Option<Derivation>, SetsemError> {
    for node in goal
        .reference
        .factors()
        .iter()
        .chain(goal.about.factors().iter())
    {
        if !gamma.contains(node) {
            return Err(SetsemError::UnknownNode(node.clone()));
        }
    }
    let analysis = Analysis::new(gamma, PolicyConfig::default()).expect("default policy is direct");
    Ok(derive_with(&analysis, goal))
}

fn derive_with(analysis: &Analysis<'_>, goal: &SizeStatement) -> Option<Derivation> {
    goal.about_node()?;
    match (goal.grade, goal.reference.is_single()) {
        (Grade::Upper, true) => derive_base(analysis, goal),
        (Grade::Upper, false) => derive_combined(analysis, goal).map(|(d, _)| d),
        (Grade::Lower, true) => derive_transfer(analysis, goal),
        (Grade::Lower, false) => None,
    }
}

/// Base facts: exactly the link statements.
fn derive_base(analysis: &Analysis<'_>, goal: &SizeStatement) -> Option<Derivation> {
    let x = goal.reference.factors().iter().next().unwrap();
    let z = goal.about_node()?;
    if analysis.diagram().has_link(x, z, goal.polarity) {
        Some(Derivation::leaf(goal.clone()))
    } else {
        None
    }
}

/// The preclusion-resolved combination (`R13`) over a reference
/// intersection: every factor must carry a direct claim about `Z`, and the
/// plug-in resolution under the valid-path specificity order must decide
/// for the goal's polarity.
fn derive_combined(
    analysis: &Analysis<'_>,
    goal: &SizeStatement,
) -> Option<(Derivation, BTreeSet<SourceReport>)> {
    let gamma = analysis.diagram();
    let z = goal.about_node()?;
    let mut reports: BTreeSet<SourceReport> = BTreeSet::new();
    let mut premises = Vec::new();
    for y in goal.reference.factors() {
        let claim = gamma.link_between(y, z)?;
        reports.insert(SourceReport {
            source: y.clone(),
            claim_polarity: claim,
            about: z.clone(),
        });
        let base = SizeStatement::new(SetExpr::single(y.clone()), z.clone(), Grade::Upper, claim);
        premises.push(Derivation::leaf(base));
    }
    let resolution = resolve_sources(
        &reports,
        |a, b| analysis.has_valid_positive(a, b),
        Resolver::P22,
    )
    .ok()?;
    let decided = match resolution.outcome {
        ResolutionOutcome::Positive => Polarity::Positive,
        ResolutionOutcome::Negative => Polarity::Negative,
        ResolutionOutcome::Undecided => return None,
    };
    if decided != goal.polarity {
        return None;
    }
    Some((
        Derivation {
            conclusion: goal.clone(),
            rule: Rule::R13,
            premises,
        },
        resolution.survivors,
    ))
}

/// Transferred statements `X & [~]Z in b(X, Z)`: either a lowered base fact
/// or the full channel construction through the most specific reference
/// class.
fn derive_transfer(analysis: &Analysis<'_>, goal: &SizeStatement) -> Option<Derivation> {
    let gamma = analysis.diagram();
    let x = goal.reference.factors().iter().next().unwrap().clone();
    let z = goal.about_node()?.clone();

    // A matching direct link lowers straight from the base theory.
    if let Some(base) = derive_base(
        analysis,
        &SizeStatement::new(
            SetExpr::single(x.clone()),
            z.clone(),
            Grade::Upper,
            goal.polarity,
        ),
    ) {
        return Some(Derivation {
            conclusion: goal.clone(),
            rule: Rule::R3,
            premises: vec![base],
        });
    }
    // A contradicting direct link always wins; no transfer applies.
    if gamma.link_between(&x, &z).is_some() {
        return None;
    }

    // The most specific reference class: every source reachable from x by
    // a valid positive path that carries a direct claim about z.
    let channel: BTreeSet<NodeId> = gamma
        .incoming(&z)
        .iter()
        .map(|l| l.source.clone())
        .filter(|y| y != &x && analysis.has_valid_positive(&x, y))
        .collect();
    if channel.is_empty() {
        return None;
    }

    let combined_goal = SizeStatement::new(
        SetExpr::of(channel.iter().cloned()),
        z.clone(),
        Grade::Upper,
        goal.polarity,
    );
    let (combined, _) = derive_combined(analysis, &combined_goal)?;

    // Access channel: X & Yi in b(X, Yi) for each source, intersected.
    let mut sources = channel.iter();
    let first = sources.next().unwrap();
    let mut running_set: BTreeSet<NodeId> = [first.clone()].into();
    let mut access = derive_access(analysis, &x, first)?;
    for y in sources {
        let next_access = derive_access(analysis, &x, y)?;
        running_set.insert(y.clone());
        access = Derivation {
            conclusion: access_statement(&x, &running_set),
            rule: Rule::R12,
            premises: vec![access, next_access],
        };
    }

    // Transfer into X's copy of the reference class, then project to X.
    let mut transferred_subject = SetExpr::of(channel.iter().cloned());
    transferred_subject.factors.insert(x.clone());
    let transferred = SizeStatement {
        subject: transferred_subject.with(z.clone(), goal.polarity),
        reference: transferred_subject,
        about: SetExpr::single(z.clone()),
        grade: Grade::Lower,
        polarity: goal.polarity,
    };
    let r14 = Derivation {
        conclusion: transferred,
        rule: Rule::R14,
        premises: vec![combined, access.clone()],
    };
    Some(Derivation {
        conclusion: goal.clone(),
        rule: Rule::R2,
        premises: vec![r14, access],
    })
}

/// `X & Y in b(X, Y)` for a single source: a lowered direct link or,
/// recursively, a transferred statement along the valid path to `Y`.
fn derive_access(analysis: &Analysis<'_>, x: &NodeId, y: &NodeId) -> Option<Derivation> {
    derive_transfer(
        analysis,
        &SizeStatement::positive_goal(x.clone(), y.clone()),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub subject: NodeId,
    pub about: NodeId,
    pub engine_verdict: Verdict,
    pub positive_derivable: bool,
    pub negative_derivable: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): engine {} vs derivable(+)={} derivable(-)={}",
            self.subject,
            self.about,
            self.engine_verdict,
            self.positive_derivable,
            self.negative_derivable
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub pairs_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CorrespondenceReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// For every ordered pair: `x & z in b(x, z)` must be derivable exactly
/// when the engine accepts "x is a z", and `x & ~z in b(x, z)` exactly when
/// it rejects it.
pub fn check_correspondence(gamma: &Diagram) -> Result<CorrespondenceReport, SetsemError> {
    let analysis = Analysis::new(gamma, PolicyConfig::default()).expect("default policy is direct");
    let mut report = CorrespondenceReport {
        pairs_checked: 0,
        mismatches: Vec::new(),
    };
    for x in gamma.nodes() {
        for z in gamma.nodes() {
            if x == z {
                continue;
            }
            report.pairs_checked += 1;
            let verdict = analysis.verdict(x, z);
            let positive = derive_with(
                &analysis,
                &SizeStatement::positive_goal(x.clone(), z.clone()),
            )
            .is_some();
            let negative = derive_with(
                &analysis,
                &SizeStatement::negative_goal(x.clone(), z.clone()),
            )
            .is_some();
            let expected = match verdict {
                Verdict::Positive => (true, false),
                Verdict::Negative => (false, true),
                Verdict::None => (false, false),
            };
            if (positive, negative) != expected {
                report.mismatches.push(Mismatch {
                    subject: x.clone(),
                    about: z.clone(),
                    engine_verdict: verdict,
                    positive_derivable: positive,
                    negative_derivable: negative,
                });
            }
        }
    }
    Ok(report)
}
