//! Experiments on the two-heaps game: the grid of positions Benny wins when
//! Rebecca moves first, the bounds `a_n <= k <= b_n` read off that grid, and
//! their closed form `a_n = ceil(n/phi)`, `b_n = floor(phi*n)` evaluated in
//! exact integer arithmetic.
//!
//! [`verify_all`] runs the whole battery and reports each check by name.

use std::fmt;

use crate::board::BoardGame;
use crate::engine::{
    reachable_positions, Engine, EngineError, EvalOptions, GameRules, Outcome, Player,
};
use crate::heaps::{next_heaps, HeapsConfig, HeapsGame};

/// Floor square root by Newton iteration from above, with a final
/// correction so that `s*s <= m < (s+1)*(s+1)`.
pub fn isqrt(m: u128) -> u128 {
    if m < 2 {
        return m;
    }
    let bits = 128 - m.leading_zeros();
    let mut x: u128 = 1 << bits.div_ceil(2);
    loop {
        let y = (x + m / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    while x * x > m {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= m) {
        x += 1;
    }
    x
}

/// `(ceil(n/phi), floor(phi*n))` computed from `floor(n*sqrt(5))`; `(0, 0)`
/// at zero.
///
/// # Panics
///
/// If `n >= 2^62`.
pub fn phi_bounds(n: u64) -> (u64, u64) {
    assert!(n < 1 << 62, "phi_bounds argument too large");
    if n == 0 {
        return (0, 0);
    }
    let n128 = u128::from(n);
    let s = isqrt(5 * n128 * n128);
    let b = (n128 + s) / 2;
    let a = (s - n128) / 2 + 1;
    (a as u64, b as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PositionClass {
    /// The player to move loses.
    L,
    /// The player to move wins.
    W,
}

impl fmt::Display for PositionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PositionClass::L => "L",
            PositionClass::W => "W",
        })
    }
}

/// Closed-form class of the heaps `(k, n)`, in either order.
pub fn classify(k: u64, n: u64) -> PositionClass {
    let c = HeapsConfig::new(k, n);
    let (a, b) = phi_bounds(c.large());
    if a <= c.small() && c.small() <= b {
        PositionClass::L
    } else {
        PositionClass::W
    }
}

/// Square grid over `0..=max` in both heap sizes; `get(k, n)` is true when
/// Benny wins from heaps `(k, n)` with Rebecca to move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepGrid {
    max: usize,
    cells: Vec<bool>,
}

impl SweepGrid {
    pub fn from_fn(max: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let side = max + 1;
        let mut cells = Vec::with_capacity(side * side);
        for k in 0..side {
            for n in 0..side {
                cells.push(f(k, n));
            }
        }
        SweepGrid { max, cells }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn get(&self, k: usize, n: usize) -> bool {
        self.cells[k * (self.max + 1) + n]
    }

    pub fn set(&mut self, k: usize, n: usize, value: bool) {
        self.cells[k * (self.max + 1) + n] = value;
    }

    /// Copy restricted to `0..=max`.
    pub fn truncated(&self, max: usize) -> SweepGrid {
        assert!(max <= self.max);
        SweepGrid::from_fn(max, |k, n| self.get(k, n))
    }
}

/// Solves every heap pair up to `max` with one shared cache.
pub fn sweep(max: usize) -> SweepGrid {
    let rules = HeapsGame;
    let mut engine = Engine::new(&rules);
    sweep_with(&mut engine, max).expect("the heaps game is finite and well formed")
}

pub fn sweep_with(
    engine: &mut Engine<'_, HeapsGame>,
    max: usize,
) -> Result<SweepGrid, EngineError> {
    let side = max + 1;
    let mut upper = vec![false; side * side];
    for n in 0..side {
        for k in 0..=n {
            let c = HeapsConfig::new(k as u64, n as u64);
            upper[k * side + n] = engine.wins_for(Player::Benny, Player::Rebecca, &c)?;
        }
    }
    Ok(SweepGrid::from_fn(max, |k, n| {
        upper[k.min(n) * side + k.max(n)]
    }))
}

/// Per-row bounds of Benny's winning region.
///
/// `a[n]` is the least winning `k` in row `n`. `b[n]` is the greatest, and is
/// `None` when the row's winning cells reach the grid edge, since the true
/// bound may lie beyond it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePair {
    pub a: Vec<Option<u64>>,
    pub b: Vec<Option<u64>>,
    pub contiguous: Vec<bool>,
}

pub fn extract_sequences(g: &SweepGrid) -> SequencePair {
    let side = g.max() + 1;
    let mut out = SequencePair {
        a: Vec::with_capacity(side),
        b: Vec::with_capacity(side),
        contiguous: Vec::with_capacity(side),
    };
    for n in 0..side {
        let wins: Vec<usize> = (0..side).filter(|&k| g.get(k, n)).collect();
        match (wins.first(), wins.last()) {
            (Some(&lo), Some(&hi)) => {
                out.a.push(Some(lo as u64));
                out.b.push((hi < g.max()).then_some(hi as u64));
                out.contiguous.push(wins.len() == hi - lo + 1);
            }
            _ => {
                out.a.push(None);
                out.b.push(None);
                out.contiguous.push(false);
            }
        }
    }
    out
}

/// One named check of the verification battery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    /// The first few failures, rendered as text.
    pub counterexamples: Vec<String>,
}

const MAX_COUNTEREXAMPLES: usize = 10;

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            checked: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status} {} ({} checked, {} failed)",
                c.name, c.checked, c.failures
            )?;
            for ce in &c.counterexamples {
                writeln!(f, "  counterexample: {ce}")?;
            }
        }
        Ok(())
    }
}

/// Grid cells agree with the closed-form class: Benny wins exactly on `L`.
pub fn check_corollary(g: &SweepGrid) -> CheckResult {
    let mut res = CheckResult::new("corollary");
    for k in 0..=g.max() {
        for n in 0..=g.max() {
            let want = classify(k as u64, n as u64) == PositionClass::L;
            res.record(g.get(k, n) == want, || {
                format!(
                    "({k}, {n}): grid says {}, closed form says {want}",
                    g.get(k, n)
                )
            });
        }
    }
    res
}

/// From every `W` position in range some move reaches `L`.
pub fn check_w_reaches_l(max: u64) -> CheckResult {
    let mut res = CheckResult::new("proposition-1");
    for k in 0..=max {
        for n in 0..=max {
            if classify(k, n) != PositionClass::W {
                continue;
            }
            let ok = next_heaps(HeapsConfig::new(k, n))
                .iter()
                .any(|c| classify(c.small(), c.large()) == PositionClass::L);
            res.record(ok, || format!("({k}, {n}) is W with no move to L"));
        }
    }
    res
}

/// Every move from an `L` position lands in `W`.
pub fn check_l_only_reaches_w(max: u64) -> CheckResult {
    let mut res = CheckResult::new("proposition-2");
    for k in 0..=max {
        for n in 0..=max {
            if classify(k, n) != PositionClass::L {
                continue;
            }
            let bad: Vec<_> = next_heaps(HeapsConfig::new(k, n))
                .into_iter()
                .filter(|c| classify(c.small(), c.large()) == PositionClass::L)
                .collect();
            res.record(bad.is_empty(), || {
                format!("({k}, {n}) is L but moves to L at {:?}", bad[0])
            });
        }
    }
    res
}

/// Cap on the number of states collected for a duality sweep.
const DUALITY_STATE_CAP: usize = 10_000_000;

/// For every state reachable from `starts`, a player can force a win exactly
/// when the opponent cannot avoid losing.
pub fn check_duality<G: GameRules>(
    rules: &G,
    starts: &[(Player, G::Config)],
    options: EvalOptions,
    res: &mut CheckResult,
) -> Result<(), EngineError> {
    let mut engine = Engine::with_options(rules, options);
    let mut seen = std::collections::HashSet::new();
    for (mover, start) in starts {
        for (m, c) in reachable_positions(rules, *mover, start, DUALITY_STATE_CAP)? {
            if !seen.insert((m, rules.canonical_key(&c))) {
                continue;
            }
            for target in Player::ALL {
                let wins = engine.wins_for(target, m, &c)?;
                let other_safe = engine.nonlosing_for(target.other(), m, &c)?;
                res.record(wins != other_safe, || {
                    format!("{m} to move at {c:?}: wins_for({target}) = {wins}, nonlosing_for({}) = {other_safe}", target.other())
                });
            }
        }
    }
    Ok(())
}

/// Runs the duality check over heap starts up to `heap_max` and empty boards
/// up to `board_max`.
pub fn duality_report(
    heap_max: u64,
    board_max: u8,
    options: EvalOptions,
) -> Result<CheckResult, EngineError> {
    let mut res = CheckResult::new("duality");
    let mut starts = Vec::new();
    for n in 0..=heap_max {
        for k in 0..=n {
            for p in Player::ALL {
                starts.push((p, HeapsConfig::new(k, n)));
            }
        }
    }
    check_duality(&HeapsGame, &starts, options, &mut res)?;
    for side in 1..=board_max {
        let game = BoardGame::new(side)?;
        let start = game.start();
        check_duality(
            &game,
            &[(Player::Benny, start), (Player::Rebecca, start)],
            options,
            &mut res,
        )?;
    }
    Ok(res)
}

/// Contiguity of each row, `a_n <= n <= b_n` and `b_n - a_n = n - 1` for
/// `1 <= n <= max`. `g` must extend far enough past `max` for every `b_n` to
/// be observed.
pub fn check_observations(g: &SweepGrid, max: usize) -> CheckResult {
    let mut res = CheckResult::new("observations");
    let seq = extract_sequences(g);
    for n in 0..=max.min(g.max()) {
        res.record(seq.contiguous[n], || format!("row {n} is not contiguous"));
        if n == 0 {
            continue;
        }
        match (seq.a[n], seq.b[n]) {
            (Some(a), Some(b)) => {
                let n64 = n as u64;
                res.record(a <= n64 && n64 <= b, || {
                    format!("row {n}: a = {a}, b = {b} do not bracket n")
                });
                res.record(b - a == n64 - 1, || {
                    format!("row {n}: b - a = {} != n - 1", b - a)
                });
            }
            (a, b) => res.record(false, || {
                format!("row {n}: bounds not observed in grid (a = {a:?}, b = {b:?})")
            }),
        }
    }
    res
}

/// Empty boards are a Rebecca win exactly at odd sizes.
pub fn check_board_parity(board_max: u8, options: EvalOptions) -> Result<CheckResult, EngineError> {
    let mut res = CheckResult::new("board-parity");
    for side in 1..=board_max {
        let game = BoardGame::new(side)?;
        let value =
            Engine::with_options(&game, options).game_value(Player::Benny, &game.start())?;
        let odd = side % 2 == 1;
        res.record((value == Outcome::RWin) == odd, || {
            format!("size {side}: value {value}")
        });
    }
    Ok(res)
}

/// The full battery over heaps up to `max` and boards up to `board_max`.
pub fn verify_all(max: usize, board_max: u8) -> Result<Report, EngineError> {
    verify_all_with(max, board_max, EvalOptions::default())
}

pub fn verify_all_with(
    max: usize,
    board_max: u8,
    options: EvalOptions,
) -> Result<Report, EngineError> {
    let rules = HeapsGame;
    let mut engine = Engine::with_options(&rules, options);
    let wide = sweep_with(&mut engine, 2 * max)?;
    let grid = wide.truncated(max);
    let checks = vec![
        check_corollary(&grid),
        check_w_reaches_l(max as u64),
        check_l_only_reaches_w(max as u64),
        duality_report((max as u64).min(30), board_max, options)?,
        check_observations(&wide, max),
        check_board_parity(board_max, options)?,
    ];
    Ok(Report { checks })
}
