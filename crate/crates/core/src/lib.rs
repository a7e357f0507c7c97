//! Memoized backward-induction solver for finite two-player games.
//!
//! The [`engine`] evaluates any game that implements
//! [`engine::GameRules`]: can a player force a win, or at least avoid a
//! loss? [`strategy`] turns those valuations into explicit strategy
//! subtrees and counts them by brute force. Two games ship with the crate,
//! the two-heaps game in [`heaps`] and the board colouring game in
//! [`board`], and [`analysis`] runs the golden-ratio experiments on the
//! former.

pub mod analysis;
pub mod board;
pub mod engine;
pub mod heaps;
pub mod strategy;

pub use engine::{
    Criterion, Engine, EngineError, EvalOptions, GameError, GameRules, Outcome, Player,
    ValuationCache,
};
