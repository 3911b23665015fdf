//! Reasoner for defeasible inheritance diagrams.
//!
//! An inheritance diagram is a finite acyclic graph of positive (`a -> b`,
//! "a's are normally b's") and negative (`a !> b`) links. The library
//! decides queries "is x a y?" by upward chaining over potential paths,
//! resolving soft contradictions by specificity (preclusion), with
//! configurable policy flags: off-path vs on-path preclusion, split vs
//! total validity of preclusion witnesses, direct scepticism vs branching
//! into extensions, and two plug-in rules for conflicting sources.
//!
//! On top of the engine sit three companion subsystems:
//! - [`reactive`] compiles a diagram, per origin, into a graph with
//!   blocking double arrows so that plain depth-first traversal reproduces
//!   the engine's verdicts;
//! - [`setsem`] translates diagrams into a calculus of relative big/small
//!   subsets and machine-checks that its derivations coincide with the
//!   engine;
//! - [`oracle`] holds deliberately naive brute-force re-implementations
//!   used as ground truth in tests.
//!
//! The `.inet` text format ([`dsl`]) describes diagrams and expected query
//! outcomes; the shipped corpus ([`corpus`]) covers the classic diagrams
//! (Tweety, Nixon diamond, up-down chaining, split-vs-total preclusion).
//!
//! Batch sweeps ([`sweep`]) run the corpus and randomized cross-checks;
//! with the default `parallel` feature they fan out over rayon, without it
//! they fall back to sequential iteration behind the same API.

pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod net;
pub mod oracle;
pub mod reactive;
pub mod setsem;
pub mod sweep;

pub use engine::{PolicyConfig, PreclusionScope, PreclusionValidity, Resolver, Scepticism};
pub use net::{
    build_diagram, concatenate, degree, Conclusion, Diagram, Link, NetError, NodeId, Path,
    PathKind, Polarity, Verdict,
};
