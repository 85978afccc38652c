//! Nondeterministic copyless streaming string transducers.
//!
//! The crate covers the model itself ([`sst`]), skeletons and pumping
//! ([`skeleton`]), word combinatorics ([`wordcomb`]), the delay between runs
//! ([`delay`]), ambiguity and valuedness analysis ([`analysis`]), and
//! per-input decomposition into single-valued selectors ([`decompose`]).

pub mod analysis;
mod budget;
pub mod decompose;
pub mod delay;
pub mod error;
pub mod fixtures;
pub mod skeleton;
pub mod sst;
pub mod wordcomb;

pub use analysis::{
    amplify_valuedness, analyze_valuedness, build_wrun, find_dumbbell, is_finite_ambiguous,
    is_simply_divergent, AnalysisBudget, Dumbbell, MarkedSeq, Verdict, VerdictKind, WPattern,
};
pub use decompose::{
    check_equivalence_bounded, decompose_selectors, lex_compare, semantic_cover, Equivalence,
    Selector,
};
pub use delay::{delay, weight, DelayReport};
pub use error::{Error, Result};
pub use skeleton::{
    find_loops, idempotent_power_words, pump, pumped_output_expr, skeleton_of, LoopSet, Skeleton,
    SkeletonMonoid,
};
pub use sst::{
    ambiguity_oracle, compose_updates, enumerate_runs, outputs, parse_sst, valuedness_oracle,
    AnnotatedRun, OracleReading, Run, Sst, Sym, Update,
};
pub use wordcomb::{cuts, primitive_root, Assignment, Inequality, Param, ParamWord};
