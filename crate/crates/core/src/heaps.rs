//! The two-heaps game.
//!
//! With heap sizes `A` and `B`, the player to move removes a positive
//! multiple of `A` or of `B` from one heap. Whoever takes the last token
//! wins, so the player facing two empty heaps has lost. Configurations are
//! kept ordered (`a <= b`); the game does not care which heap is which.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::engine::{GameError, GameRules, Outcome, Player};

/// A pair of heap sizes with `a <= b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeapsConfig {
    a: u64,
    b: u64,
}

impl HeapsConfig {
    pub const EMPTY: HeapsConfig = HeapsConfig { a: 0, b: 0 };

    /// Orders the two sizes.
    pub fn new(x: u64, y: u64) -> Self {
        HeapsConfig {
            a: x.min(y),
            b: x.max(y),
        }
    }

    pub fn small(&self) -> u64 {
        self.a
    }

    pub fn large(&self) -> u64 {
        self.b
    }

    pub fn total(&self) -> u64 {
        self.a + self.b
    }
}

impl fmt::Display for HeapsConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.a, self.b)
    }
}

/// Parses two base-10 integers separated by a single space, e.g. `"2 5"`.
impl FromStr for HeapsConfig {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || GameError::InvalidConfig(format!("expected two heap sizes like \"2 5\", got {s:?}"));
        let (x, y) = s.split_once(' ').ok_or_else(bad)?;
        let parse = |t: &str| -> Result<i64, GameError> {
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit() || c == b'-') {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        normalize(parse(x)?, parse(y)?)
    }
}

/// Orders a pair of heap sizes; negative sizes are rejected.
pub fn normalize(x: i64, y: i64) -> Result<HeapsConfig, GameError> {
    if x < 0 || y < 0 {
        return Err(GameError::InvalidConfig(format!(
            "negative heap size in ({x}, {y})"
        )));
    }
    Ok(HeapsConfig::new(x as u64, y as u64))
}

/// Subtracts `m` from the larger heap as many times as possible, returning
/// each intermediate pair `(a, b - k*m)` unordered.
///
/// # Panics
///
/// If `m` is zero.
pub fn sub(c: HeapsConfig, m: u64) -> Vec<(u64, u64)> {
    assert!(m > 0, "sub requires a positive step");
    let mut out = Vec::new();
    let mut rest = c.b;
    while m <= rest {
        rest -= m;
        out.push((c.a, rest));
    }
    out
}

/// All configurations one move away from `c`, ordered and duplicate-free.
pub fn next_heaps(c: HeapsConfig) -> Vec<HeapsConfig> {
    let HeapsConfig { a, b } = c;
    if b == 0 {
        return Vec::new();
    }
    if a == 0 {
        return vec![HeapsConfig::EMPTY];
    }
    if a == b {
        return vec![HeapsConfig::new(0, a)];
    }
    let mut set = BTreeSet::new();
    set.insert(HeapsConfig::new(0, a));
    set.insert(HeapsConfig::new(0, b));
    set.extend(sub(c, a).into_iter().map(|(x, y)| HeapsConfig::new(x, y)));
    set.into_iter().collect()
}

/// The game ends exactly at two empty heaps, whoever is to move.
pub fn halted_heaps(_mover: Player, c: HeapsConfig) -> bool {
    c == HeapsConfig::EMPTY
}

/// The player left to move at empty heaps has lost.
pub fn leaf_outcome_heaps(mover: Player, c: HeapsConfig) -> Result<Outcome, GameError> {
    if !halted_heaps(mover, c) {
        return Err(GameError::NotHalted);
    }
    Ok(mover.other().win())
}

/// [`GameRules`] binding for the two-heaps game.
#[derive(Clone, Copy, Debug, Default)]
pub struct HeapsGame;

impl GameRules for HeapsGame {
    type Config = HeapsConfig;
    type Key = HeapsConfig;

    fn halted(&self, mover: Player, c: &HeapsConfig) -> bool {
        halted_heaps(mover, *c)
    }

    fn leaf_outcome(&self, mover: Player, c: &HeapsConfig) -> Result<Outcome, GameError> {
        leaf_outcome_heaps(mover, *c)
    }

    fn next_configs(&self, _mover: Player, c: &HeapsConfig) -> Vec<HeapsConfig> {
        next_heaps(*c)
    }

    fn canonical_key(&self, c: &HeapsConfig) -> HeapsConfig {
        *c
    }
}
