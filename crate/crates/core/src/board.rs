//! The board colouring game.
//!
//! On an `n x n` board Benny colours an uncoloured 2x2 square blue, then
//! Rebecca colours one uncoloured cell red, alternating until the player to
//! move cannot colour anything. Remaining cells then count as red, and the
//! colour with more cells wins; equal counts are a draw.
//!
//! Cells are bits of a `u64` in row-major order, which caps the side length
//! at 8.

use std::fmt;

use crate::engine::{GameError, GameRules, Outcome, Player};

pub const MAX_SIDE: u8 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoardConfig {
    n: u8,
    blue: u64,
    red: u64,
}

impl BoardConfig {
    pub fn empty(n: u8) -> Result<Self, GameError> {
        Self::from_masks(n, 0, 0)
    }

    pub fn from_masks(n: u8, blue: u64, red: u64) -> Result<Self, GameError> {
        if n == 0 || n > MAX_SIDE {
            return Err(GameError::InvalidConfig(format!(
                "board side must be between 1 and {MAX_SIDE}, got {n}"
            )));
        }
        if blue & red != 0 {
            return Err(GameError::InvalidConfig(
                "a cell is both blue and red".into(),
            ));
        }
        if (blue | red) & !full_mask(n) != 0 {
            return Err(GameError::InvalidConfig(
                "coloured cell outside the board".into(),
            ));
        }
        Ok(BoardConfig { n, blue, red })
    }

    pub fn side(&self) -> u8 {
        self.n
    }

    pub fn blue(&self) -> u64 {
        self.blue
    }

    pub fn red(&self) -> u64 {
        self.red
    }

    pub fn cells(&self) -> u32 {
        u32::from(self.n) * u32::from(self.n)
    }

    pub fn uncoloured(&self) -> u64 {
        full_mask(self.n) & !(self.blue | self.red)
    }
}

/// Rows top to bottom separated by `/`; `B` blue, `R` red, `.` uncoloured.
impl fmt::Display for BoardConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = usize::from(self.n);
        for r in 0..n {
            if r > 0 {
                f.write_str("/")?;
            }
            for c in 0..n {
                let bit = 1u64 << (r * n + c);
                let ch = if self.blue & bit != 0 {
                    'B'
                } else if self.red & bit != 0 {
                    'R'
                } else {
                    '.'
                };
                write!(f, "{ch}")?;
            }
        }
        Ok(())
    }
}

fn full_mask(n: u8) -> u64 {
    let cells = u32::from(n) * u32::from(n);
    if cells >= 64 {
        u64::MAX
    } else {
        (1u64 << cells) - 1
    }
}

/// Masks of every 2x2 block, ordered by top-left corner in row-major order.
pub fn block_masks(n: u8) -> Vec<u64> {
    let n = usize::from(n);
    let mut out = Vec::new();
    for r in 0..n.saturating_sub(1) {
        for c in 0..n - 1 {
            let tl = r * n + c;
            out.push(
                (1u64 << tl) | (1u64 << (tl + 1)) | (1u64 << (tl + n)) | (1u64 << (tl + n + 1)),
            );
        }
    }
    out
}

fn blue_moves_in(c: &BoardConfig, blocks: &[u64]) -> Vec<BoardConfig> {
    let free = c.uncoloured();
    blocks
        .iter()
        .filter(|&&m| free & m == m)
        .map(|&m| BoardConfig {
            blue: c.blue | m,
            ..*c
        })
        .collect()
}

/// One successor per fully uncoloured 2x2 block, with that block made blue.
pub fn blue_moves(c: &BoardConfig) -> Vec<BoardConfig> {
    blue_moves_in(c, &block_masks(c.n))
}

/// One successor per uncoloured cell, with that cell made red.
pub fn red_moves(c: &BoardConfig) -> Vec<BoardConfig> {
    let mut free = c.uncoloured();
    let mut out = Vec::with_capacity(free.count_ones() as usize);
    while free != 0 {
        let bit = free & free.wrapping_neg();
        free &= free - 1;
        out.push(BoardConfig {
            red: c.red | bit,
            ..*c
        });
    }
    out
}

fn can_place_block(c: &BoardConfig, blocks: &[u64]) -> bool {
    let free = c.uncoloured();
    blocks.iter().any(|&m| m & !free == 0)
}

/// True when `mover` has nothing left to colour.
pub fn halted_board(mover: Player, c: &BoardConfig) -> bool {
    match mover {
        Player::Benny => !can_place_block(c, &block_masks(c.n)),
        Player::Rebecca => c.uncoloured() == 0,
    }
}

/// Scores a halted board, counting every uncoloured cell as red.
pub fn leaf_outcome_board(mover: Player, c: &BoardConfig) -> Result<Outcome, GameError> {
    if !halted_board(mover, c) {
        return Err(GameError::NotHalted);
    }
    Ok(score(c))
}

fn score(c: &BoardConfig) -> Outcome {
    let blue = c.blue.count_ones();
    let red = c.cells() - blue;
    match blue.cmp(&red) {
        std::cmp::Ordering::Greater => Outcome::BWin,
        std::cmp::Ordering::Less => Outcome::RWin,
        std::cmp::Ordering::Equal => Outcome::Draw,
    }
}

/// The eight symmetries of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Identity,
    Rot90,
    Rot180,
    Rot270,
    FlipHorizontal,
    FlipVertical,
    Transpose,
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
        Symmetry::FlipHorizontal,
        Symmetry::FlipVertical,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    fn map(self, n: usize, r: usize, c: usize) -> (usize, usize) {
        let m = n - 1;
        match self {
            Symmetry::Identity => (r, c),
            Symmetry::Rot90 => (c, m - r),
            Symmetry::Rot180 => (m - r, m - c),
            Symmetry::Rot270 => (m - c, r),
            Symmetry::FlipHorizontal => (r, m - c),
            Symmetry::FlipVertical => (m - r, c),
            Symmetry::Transpose => (c, r),
            Symmetry::AntiTranspose => (m - c, m - r),
        }
    }

    /// Cell permutation on an `n x n` board: `perm[i]` is where cell `i` goes.
    pub fn permutation(self, n: u8) -> Vec<u8> {
        let n = usize::from(n);
        (0..n * n)
            .map(|i| {
                let (r, c) = self.map(n, i / n, i % n);
                (r * n + c) as u8
            })
            .collect()
    }
}

fn permute(mask: u64, perm: &[u8]) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1u64 << perm[i];
    }
    out
}

pub fn transform(c: &BoardConfig, sym: Symmetry) -> BoardConfig {
    let perm = sym.permutation(c.n);
    BoardConfig {
        n: c.n,
        blue: permute(c.blue, &perm),
        red: permute(c.red, &perm),
    }
}

/// Memoization key for a board: the least `(blue, red)` mask pair over the
/// eight symmetric images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoardKey {
    pub n: u8,
    pub blue: u64,
    pub red: u64,
}

fn canonical_with(c: &BoardConfig, perms: &[Vec<u8>]) -> BoardKey {
    perms
        .iter()
        .map(|p| BoardKey {
            n: c.n,
            blue: permute(c.blue, p),
            red: permute(c.red, p),
        })
        .min()
        .expect("at least the identity")
}

pub fn canonicalize_board(c: &BoardConfig) -> BoardKey {
    let perms: Vec<_> = Symmetry::ALL.iter().map(|s| s.permutation(c.n)).collect();
    canonical_with(c, &perms)
}

/// [`GameRules`] binding for one board size.
#[derive(Clone, Debug)]
pub struct BoardGame {
    n: u8,
    blocks: Vec<u64>,
    /// Empty when symmetry reduction is off; keys are then the raw masks.
    perms: Vec<Vec<u8>>,
}

impl BoardGame {
    pub fn new(n: u8) -> Result<Self, GameError> {
        Self::build(n, true)
    }

    /// Same game with memoization keyed on raw masks.
    pub fn without_symmetry(n: u8) -> Result<Self, GameError> {
        Self::build(n, false)
    }

    fn build(n: u8, symmetric: bool) -> Result<Self, GameError> {
        BoardConfig::empty(n)?;
        let perms = if symmetric {
            Symmetry::ALL.iter().map(|s| s.permutation(n)).collect()
        } else {
            Vec::new()
        };
        Ok(BoardGame {
            n,
            blocks: block_masks(n),
            perms,
        })
    }

    pub fn side(&self) -> u8 {
        self.n
    }

    pub fn start(&self) -> BoardConfig {
        BoardConfig::empty(self.n).expect("side validated on construction")
    }
}

impl GameRules for BoardGame {
    type Config = BoardConfig;
    type Key = BoardKey;

    fn halted(&self, mover: Player, c: &BoardConfig) -> bool {
        match mover {
            Player::Benny => !can_place_block(c, &self.blocks),
            Player::Rebecca => c.uncoloured() == 0,
        }
    }

    fn leaf_outcome(&self, mover: Player, c: &BoardConfig) -> Result<Outcome, GameError> {
        if !self.halted(mover, c) {
            return Err(GameError::NotHalted);
        }
        Ok(score(c))
    }

    fn next_configs(&self, mover: Player, c: &BoardConfig) -> Vec<BoardConfig> {
        let moves = match mover {
            Player::Benny => blue_moves_in(c, &self.blocks),
            Player::Rebecca => red_moves(c),
        };
        let mut keyed: Vec<_> = moves
            .into_iter()
            .map(|m| (self.canonical_key(&m), m))
            .collect();
        keyed.sort_unstable();
        keyed.into_iter().map(|(_, m)| m).collect()
    }

    fn canonical_key(&self, c: &BoardConfig) -> BoardKey {
        if self.perms.is_empty() {
            BoardKey {
                n: c.n,
                blue: c.blue,
                red: c.red,
            }
        } else {
            canonical_with(c, &self.perms)
        }
    }
}
