//! Integral homology of concurrency models.
//!
//! The library takes a finite transition system in which declared pairs of
//! events may commute (a partial action of a partially commutative
//! alphabet), builds an integer chain complex out of the states and the
//! independence cliques acting on them, and reads the homology groups off
//! Smith normal forms of the boundary matrices. Condition/event nets are
//! supported by deriving the independence relation from disjointness of
//! the places an event touches and compiling the reachable markings into
//! such a system.
//!
//! Modules:
//! - [`trace`]: alphabets, independence, canonical words, cliques;
//! - [`action`]: partial action systems, validation, reachability;
//! - [`complex`]: graded bases, boundary matrices, homology groups;
//! - [`smith`]: sparse integer matrices and Smith normal form;
//! - [`cenet`]: condition/event nets and their compilation;
//! - [`nerve`]: independent nerve-based homology cross-check;
//! - [`report`]: end-to-end analysis and serializable reports.

pub mod action;
pub mod cenet;
pub mod complex;
pub mod error;
pub mod nerve;
pub mod report;
pub mod smith;
pub mod trace;

pub use action::{CommutationViolation, PartialActionSystem, StateId, Transition};
pub use cenet::{CENet, Marking, PlaceId};
pub use complex::{ChainComplex, Cube, HomologyGroup};
pub use error::{Error, Result};
pub use nerve::{enumerate_morphisms, nerve_homology, MorphismTable};
pub use report::{analyze, verify, Analysis, AnalysisReport, AnalyzeOptions, InputKind, ScopeChoice, VerifyReport};
pub use smith::{rank, smith_normal_form, SmithDecomposition, SparseIntMatrix};
pub use trace::{EventAlphabet, EventId, IndependenceRelation, Word};
