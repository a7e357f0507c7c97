//! Backward-induction valuation of positions in finite two-player games.
//!
//! A game plugs in through [`GameRules`]. The [`Engine`] evaluates, for a
//! chosen target player, whether that player can force a win (or at least
//! avoid a loss) from a position, memoizing every interior node it finishes
//! in a [`ValuationCache`].
//!
//! Evaluation is iterative, so deep game trees do not consume call stack.
//! At a node where the target moves the successors are combined with `or`,
//! elsewhere with `and`; successors are visited in the order the rules
//! return them and the combination stops at the first absorbing value.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use thiserror::Error;

/// Default bound on the number of plies a single evaluation may descend.
pub const DEFAULT_DEPTH_LIMIT: usize = 1_000_000;

/// One of the two players. Benny plays blue, Rebecca plays red.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Benny,
    Rebecca,
}

impl Player {
    pub const ALL: [Player; 2] = [Player::Benny, Player::Rebecca];

    pub fn other(self) -> Player {
        match self {
            Player::Benny => Player::Rebecca,
            Player::Rebecca => Player::Benny,
        }
    }

    /// The outcome in which this player is the winner.
    pub fn win(self) -> Outcome {
        match self {
            Player::Benny => Outcome::BWin,
            Player::Rebecca => Outcome::RWin,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Player::Benny => 'B',
            Player::Rebecca => 'R',
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown player `{0}` (expected B or R)")]
pub struct ParsePlayerError(String);

impl FromStr for Player {
    type Err = ParsePlayerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "b" | "benny" => Ok(Player::Benny),
            "r" | "rebecca" => Ok(Player::Rebecca),
            _ => Err(ParsePlayerError(s.to_string())),
        }
    }
}

/// Result of a finished play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    RWin,
    BWin,
    Draw,
}

impl Outcome {
    pub fn winner(self) -> Option<Player> {
        match self {
            Outcome::RWin => Some(Player::Rebecca),
            Outcome::BWin => Some(Player::Benny),
            Outcome::Draw => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::RWin => "RWin",
            Outcome::BWin => "BWin",
            Outcome::Draw => "Draw",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a strategy (or a valuation) has to guarantee at the leaves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    /// Every leaf is a win for the target.
    Winning,
    /// No leaf is a win for the target's opponent.
    NonLosing,
}

impl Criterion {
    pub fn leaf_satisfied(self, target: Player, outcome: Outcome) -> bool {
        match self {
            Criterion::Winning => outcome == target.win(),
            Criterion::NonLosing => outcome != target.other().win(),
        }
    }
}

/// Errors raised by game plugins.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("leaf outcome requested for a position that has not halted")]
    NotHalted,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("search exceeded the depth limit of {limit} plies")]
    DepthExceeded { limit: usize },
    #[error("more than {cap} states are reachable")]
    CapExceeded { cap: usize },
    #[error("position is not halted but has no successors")]
    DeadEnd,
    #[error(transparent)]
    Game(#[from] GameError),
}

/// The rules of a finite, alternating, two-player game.
///
/// Implementations must keep `halted(p, c)` equivalent to
/// `next_configs(p, c).is_empty()`, and return successors free of
/// duplicates and sorted by `canonical_key`.
pub trait GameRules {
    type Config: Clone + Eq + Hash + fmt::Debug;
    type Key: Clone + Ord + Hash + fmt::Debug;

    fn halted(&self, mover: Player, c: &Self::Config) -> bool;

    /// Only defined on halted positions.
    fn leaf_outcome(&self, mover: Player, c: &Self::Config) -> Result<Outcome, GameError>;

    fn next_configs(&self, mover: Player, c: &Self::Config) -> Vec<Self::Config>;

    /// Identity used for memoization; positions sharing a key must share
    /// their valuation.
    fn canonical_key(&self, c: &Self::Config) -> Self::Key;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CacheKey<K> {
    target: Player,
    mover: Player,
    criterion: Criterion,
    key: K,
}

/// Transposition table of finished valuations.
///
/// Bindings are insert-once: re-inserting a key keeps the original value.
#[derive(Clone, Debug)]
pub struct ValuationCache<K> {
    map: HashMap<CacheKey<K>, bool>,
}

impl<K> Default for ValuationCache<K> {
    fn default() -> Self {
        ValuationCache {
            map: HashMap::new(),
        }
    }
}

impl<K: Clone + Eq + Hash> ValuationCache<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(
        &self,
        target: Player,
        mover: Player,
        criterion: Criterion,
        key: &K,
    ) -> Option<bool> {
        // Borrowed lookup would need a second key type; the clone is cheap for
        // every key this crate uses.
        self.map
            .get(&CacheKey {
                target,
                mover,
                criterion,
                key: key.clone(),
            })
            .copied()
    }

    /// Binds `value` unless the key is already bound, and returns the value
    /// that is bound afterwards.
    pub fn insert(
        &mut self,
        target: Player,
        mover: Player,
        criterion: Criterion,
        key: K,
        value: bool,
    ) -> bool {
        let bound = *self
            .map
            .entry(CacheKey {
                target,
                mover,
                criterion,
                key,
            })
            .or_insert(value);
        debug_assert_eq!(bound, value, "valuation cache rebinding");
        bound
    }
}

/// Knobs for an [`Engine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub depth_limit: usize,
    /// Stop combining successors at the first absorbing value. Turning this
    /// off evaluates every successor and must not change any result.
    pub short_circuit: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            depth_limit: DEFAULT_DEPTH_LIMIT,
            short_circuit: true,
        }
    }
}

enum Probe<K> {
    Known(bool),
    Open(K),
}

struct Frame<C, K> {
    mover: Player,
    key: K,
    /// Remaining successors, stored reversed so the next one is at the end.
    pending: Vec<C>,
    /// Value that decides the node as soon as one successor yields it.
    absorbing: bool,
    decided: bool,
}

/// Memoized evaluator bound to one set of game rules.
pub struct Engine<'r, G: GameRules> {
    rules: &'r G,
    cache: ValuationCache<G::Key>,
    options: EvalOptions,
}

impl<'r, G: GameRules> Engine<'r, G> {
    pub fn new(rules: &'r G) -> Self {
        Self::with_options(rules, EvalOptions::default())
    }

    pub fn with_options(rules: &'r G, options: EvalOptions) -> Self {
        Self::with_cache(rules, options, ValuationCache::new())
    }

    pub fn with_cache(rules: &'r G, options: EvalOptions, cache: ValuationCache<G::Key>) -> Self {
        Engine {
            rules,
            cache,
            options,
        }
    }

    pub fn rules(&self) -> &'r G {
        self.rules
    }

    pub fn options(&self) -> EvalOptions {
        self.options
    }

    pub fn cache(&self) -> &ValuationCache<G::Key> {
        &self.cache
    }

    pub fn into_cache(self) -> ValuationCache<G::Key> {
        self.cache
    }

    /// Does `target` have a winning strategy from `c` with `mover` to move?
    pub fn wins_for(
        &mut self,
        target: Player,
        mover: Player,
        c: &G::Config,
    ) -> Result<bool, EngineError> {
        self.valuation(target, Criterion::Winning, mover, c)
    }

    /// Does `target` have a strategy from `c` that never ends in a loss?
    pub fn nonlosing_for(
        &mut self,
        target: Player,
        mover: Player,
        c: &G::Config,
    ) -> Result<bool, EngineError> {
        self.valuation(target, Criterion::NonLosing, mover, c)
    }

    /// Value of the game under perfect play.
    pub fn game_value(&mut self, mover: Player, c: &G::Config) -> Result<Outcome, EngineError> {
        let rebecca = self.wins_for(Player::Rebecca, mover, c)?;
        let benny = self.wins_for(Player::Benny, mover, c)?;
        debug_assert!(
            !(rebecca && benny),
            "both players cannot have a winning strategy"
        );
        Ok(if rebecca {
            Outcome::RWin
        } else if benny {
            Outcome::BWin
        } else {
            Outcome::Draw
        })
    }

    pub fn valuation(
        &mut self,
        target: Player,
        criterion: Criterion,
        mover: Player,
        c: &G::Config,
    ) -> Result<bool, EngineError> {
        let key = match self.probe(target, criterion, mover, c)? {
            Probe::Known(v) => return Ok(v),
            Probe::Open(key) => key,
        };
        let mut stack = vec![self.open_frame(target, mover, c, key)?];
        let mut incoming: Option<bool> = None;

        loop {
            let top = stack
                .last_mut()
                .expect("stack holds the root until it returns");
            if let Some(v) = incoming.take() {
                if v == top.absorbing {
                    top.decided = true;
                    if self.options.short_circuit {
                        top.pending.clear();
                    }
                }
            }

            if let Some(child) = top.pending.pop() {
                let child_mover = top.mover.other();
                match self.probe(target, criterion, child_mover, &child)? {
                    Probe::Known(v) => incoming = Some(v),
                    Probe::Open(key) => {
                        if stack.len() >= self.options.depth_limit {
                            return Err(EngineError::DepthExceeded {
                                limit: self.options.depth_limit,
                            });
                        }
                        let frame = self.open_frame(target, child_mover, &child, key)?;
                        stack.push(frame);
                    }
                }
            } else {
                let frame = stack.pop().expect("non-empty");
                let value = if frame.decided {
                    frame.absorbing
                } else {
                    !frame.absorbing
                };
                self.cache
                    .insert(target, frame.mover, criterion, frame.key, value);
                if stack.is_empty() {
                    return Ok(value);
                }
                incoming = Some(value);
            }
        }
    }

    fn probe(
        &self,
        target: Player,
        criterion: Criterion,
        mover: Player,
        c: &G::Config,
    ) -> Result<Probe<G::Key>, EngineError> {
        if self.rules.halted(mover, c) {
            let outcome = self.rules.leaf_outcome(mover, c)?;
            return Ok(Probe::Known(criterion.leaf_satisfied(target, outcome)));
        }
        let key = self.rules.canonical_key(c);
        Ok(match self.cache.get(target, mover, criterion, &key) {
            Some(v) => Probe::Known(v),
            None => Probe::Open(key),
        })
    }

    fn open_frame(
        &self,
        target: Player,
        mover: Player,
        c: &G::Config,
        key: G::Key,
    ) -> Result<Frame<G::Config, G::Key>, EngineError> {
        let mut pending = self.rules.next_configs(mover, c);
        if pending.is_empty() {
            return Err(EngineError::DeadEnd);
        }
        pending.reverse();
        Ok(Frame {
            mover,
            key,
            pending,
            absorbing: mover == target,
            decided: false,
        })
    }

    /// Longest play from `c`: zero at halted positions, otherwise one more
    /// than the highest successor.
    pub fn height(&self, mover: Player, c: &G::Config) -> Result<usize, EngineError> {
        height(self.rules, mover, c, self.options.depth_limit)
    }

    pub fn reachable_states(
        &self,
        mover: Player,
        c: &G::Config,
        cap: usize,
    ) -> Result<BTreeSet<(Player, G::Key)>, EngineError> {
        reachable_states(self.rules, mover, c, cap)
    }
}

/// Height of the game tree below `(mover, c)`, memoized by canonical key.
pub fn height<G: GameRules>(
    rules: &G,
    mover: Player,
    c: &G::Config,
    depth_limit: usize,
) -> Result<usize, EngineError> {
    if rules.halted(mover, c) {
        return Ok(0);
    }
    // (mover, key, remaining successors, best child height so far)
    type HeightFrame<G> = (
        Player,
        <G as GameRules>::Key,
        Vec<<G as GameRules>::Config>,
        usize,
    );
    let mut memo: HashMap<(Player, G::Key), usize> = HashMap::new();
    let mut stack: Vec<HeightFrame<G>> = Vec::new();
    let root_next = rules.next_configs(mover, c);
    if root_next.is_empty() {
        return Err(EngineError::DeadEnd);
    }
    stack.push((mover, rules.canonical_key(c), root_next, 0));

    loop {
        let (top_mover, _, pending, best) = stack.last_mut().expect("non-empty");
        let child_mover = top_mover.other();
        match pending.pop() {
            Some(child) => {
                if rules.halted(child_mover, &child) {
                    continue;
                }
                let key = rules.canonical_key(&child);
                if let Some(&h) = memo.get(&(child_mover, key.clone())) {
                    *best = (*best).max(h);
                    continue;
                }
                if stack.len() >= depth_limit {
                    return Err(EngineError::DepthExceeded { limit: depth_limit });
                }
                let next = rules.next_configs(child_mover, &child);
                if next.is_empty() {
                    return Err(EngineError::DeadEnd);
                }
                stack.push((child_mover, key, next, 0));
            }
            None => {
                let (m, key, _, best) = stack.pop().expect("non-empty");
                let h = best + 1;
                match stack.last_mut() {
                    Some(parent) => {
                        parent.3 = parent.3.max(h);
                        memo.insert((m, key), h);
                    }
                    None => return Ok(h),
                }
            }
        }
    }
}

/// Every `(mover, position)` reachable from `(mover, c)`, deduplicated by
/// canonical key, as one representative configuration each in breadth-first
/// order.
pub fn reachable_positions<G: GameRules>(
    rules: &G,
    mover: Player,
    c: &G::Config,
    cap: usize,
) -> Result<Vec<(Player, G::Config)>, EngineError> {
    let mut seen: HashSet<(Player, G::Key)> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert((mover, rules.canonical_key(c)));
    queue.push_back((mover, c.clone()));
    if seen.len() > cap {
        return Err(EngineError::CapExceeded { cap });
    }
    while let Some((m, config)) = queue.pop_front() {
        for next in rules.next_configs(m, &config) {
            if seen.insert((m.other(), rules.canonical_key(&next))) {
                if seen.len() > cap {
                    return Err(EngineError::CapExceeded { cap });
                }
                queue.push_back((m.other(), next));
            }
        }
        out.push((m, config));
    }
    Ok(out)
}

pub fn reachable_states<G: GameRules>(
    rules: &G,
    mover: Player,
    c: &G::Config,
    cap: usize,
) -> Result<BTreeSet<(Player, G::Key)>, EngineError> {
    Ok(reachable_positions(rules, mover, c, cap)?
        .into_iter()
        .map(|(m, config)| (m, rules.canonical_key(&config)))
        .collect())
}
