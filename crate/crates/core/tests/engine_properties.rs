use std::collections::BTreeSet;

use proptest::prelude::*;
use strategem::board::{transform, BoardConfig, BoardGame, Symmetry};
use strategem::engine::{
    height, reachable_positions, reachable_states, Criterion, Engine, EngineError, EvalOptions,
    GameRules, Outcome, Player, DEFAULT_DEPTH_LIMIT,
};
use strategem::heaps::{HeapsConfig, HeapsGame};
use strategem::strategy::{count_strategies, extract_strategy, verify_strategy};

const R: Player = Player::Rebecca;
const B: Player = Player::Benny;

fn h(x: u64, y: u64) -> HeapsConfig {
    HeapsConfig::new(x, y)
}

fn heap_starts(max: u64) -> Vec<(Player, HeapsConfig)> {
    let mut out = Vec::new();
    for n in 0..=max {
        for k in 0..=n {
            for p in Player::ALL {
                out.push((p, h(k, n)));
            }
        }
    }
    out
}

fn all_reachable<G: GameRules>(
    rules: &G,
    starts: &[(Player, G::Config)],
) -> Vec<(Player, G::Config)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (m, c) in starts {
        for (pm, pc) in reachable_positions(rules, *m, c, 1_000_000).unwrap() {
            if seen.insert((pm, rules.canonical_key(&pc))) {
                out.push((pm, pc));
            }
        }
    }
    out
}

#[test]
fn wins_for_examples() {
    let rules = HeapsGame;
    let mut e = Engine::new(&rules);
    assert!(e.wins_for(R, R, &h(2, 5)).unwrap());
    assert!(e.wins_for(R, B, &h(0, 0)).unwrap());
    assert!(!e.wins_for(R, R, &h(0, 0)).unwrap());
    assert!(!e.wins_for(R, R, &h(1, 1)).unwrap());
}

#[test]
fn nonlosing_for_examples() {
    let rules = HeapsGame;
    let mut e = Engine::new(&rules);
    assert!(!e.nonlosing_for(B, R, &h(2, 5)).unwrap());
    assert!(!e.nonlosing_for(B, B, &h(0, 0)).unwrap());
    assert!(e.nonlosing_for(B, R, &h(0, 0)).unwrap());
}

#[test]
fn game_value_examples() {
    let rules = HeapsGame;
    assert_eq!(
        Engine::new(&rules).game_value(R, &h(2, 5)).unwrap(),
        Outcome::RWin
    );
    for (n, want) in [(2, Outcome::BWin), (3, Outcome::RWin)] {
        let game = BoardGame::new(n).unwrap();
        assert_eq!(
            Engine::new(&game).game_value(B, &game.start()).unwrap(),
            want,
            "n = {n}"
        );
    }
}

#[test]
fn height_examples() {
    let rules = HeapsGame;
    for p in Player::ALL {
        assert_eq!(height(&rules, p, &h(0, 0), DEFAULT_DEPTH_LIMIT).unwrap(), 0);
    }
    assert_eq!(height(&rules, R, &h(0, 5), DEFAULT_DEPTH_LIMIT).unwrap(), 1);
    assert_eq!(height(&rules, R, &h(1, 1), DEFAULT_DEPTH_LIMIT).unwrap(), 2);
}

#[test]
fn reachable_examples() {
    let rules = HeapsGame;
    let only: BTreeSet<_> = [(R, h(0, 0))].into_iter().collect();
    assert_eq!(reachable_states(&rules, R, &h(0, 0), 10).unwrap(), only);
    let line: BTreeSet<_> = [(R, h(1, 1)), (B, h(0, 1)), (R, h(0, 0))]
        .into_iter()
        .collect();
    assert_eq!(reachable_states(&rules, R, &h(1, 1), 10).unwrap(), line);
    assert_eq!(
        reachable_states(&rules, R, &h(2, 5), 3),
        Err(EngineError::CapExceeded { cap: 3 })
    );
}

#[test]
fn rules_contract_holds_on_reachable_states() {
    let heaps = HeapsGame;
    for (m, c) in all_reachable(&heaps, &heap_starts(12)) {
        let next = heaps.next_configs(m, &c);
        assert_eq!(heaps.halted(m, &c), next.is_empty());
        assert!(next
            .windows(2)
            .all(|w| heaps.canonical_key(&w[0]) < heaps.canonical_key(&w[1])));
    }
    for n in 1..=3 {
        let game = BoardGame::new(n).unwrap();
        for (m, c) in all_reachable(&game, &[(B, game.start())]) {
            let next = game.next_configs(m, &c);
            assert_eq!(game.halted(m, &c), next.is_empty());
            let distinct: BTreeSet<_> = next.iter().collect();
            assert_eq!(distinct.len(), next.len());
            assert!(next
                .windows(2)
                .all(|w| game.canonical_key(&w[0]) <= game.canonical_key(&w[1])));
            // Every move colours more cells.
            let coloured = (c.blue() | c.red()).count_ones();
            assert!(next
                .iter()
                .all(|s| (s.blue() | s.red()).count_ones() > coloured));
            assert_eq!(c.blue().count_ones() % 4, 0);
        }
    }
}

#[test]
fn duality_on_heaps_and_small_boards() {
    let heaps = HeapsGame;
    let mut e = Engine::new(&heaps);
    for (m, c) in all_reachable(&heaps, &heap_starts(15)) {
        for t in Player::ALL {
            assert_eq!(
                e.wins_for(t, m, &c).unwrap(),
                !e.nonlosing_for(t.other(), m, &c).unwrap()
            );
        }
    }
    for n in 1..=3 {
        let game = BoardGame::new(n).unwrap();
        let mut e = Engine::new(&game);
        for (m, c) in all_reachable(&game, &[(B, game.start())]) {
            for t in Player::ALL {
                assert_eq!(
                    e.wins_for(t, m, &c).unwrap(),
                    !e.nonlosing_for(t.other(), m, &c).unwrap()
                );
            }
        }
    }
}

#[test]
fn leaf_base_case() {
    let game = BoardGame::new(3).unwrap();
    let mut e = Engine::new(&game);
    for (m, c) in all_reachable(&game, &[(B, game.start())]) {
        if !game.halted(m, &c) {
            continue;
        }
        let outcome = game.leaf_outcome(m, &c).unwrap();
        for t in Player::ALL {
            assert_eq!(e.wins_for(t, m, &c).unwrap(), outcome == t.win());
            assert_eq!(
                e.nonlosing_for(t, m, &c).unwrap(),
                outcome != t.other().win()
            );
        }
    }
}

#[test]
fn odd_boards_never_draw() {
    let game = BoardGame::new(3).unwrap();
    for (m, c) in all_reachable(&game, &[(B, game.start())]) {
        if game.halted(m, &c) {
            assert_ne!(game.leaf_outcome(m, &c).unwrap(), Outcome::Draw);
        }
    }
}

#[test]
fn memo_and_short_circuit_are_transparent() {
    let heaps = HeapsGame;
    let exhaustive = EvalOptions {
        short_circuit: false,
        ..EvalOptions::default()
    };
    let mut warm = Engine::new(&heaps);
    let mut full = Engine::with_options(&heaps, exhaustive);
    for (m, c) in all_reachable(&heaps, &heap_starts(10)) {
        for t in Player::ALL {
            for crit in [Criterion::Winning, Criterion::NonLosing] {
                let cold = Engine::new(&heaps).valuation(t, crit, m, &c).unwrap();
                assert_eq!(warm.valuation(t, crit, m, &c).unwrap(), cold);
                assert_eq!(full.valuation(t, crit, m, &c).unwrap(), cold);
            }
        }
    }
    let game = BoardGame::new(3).unwrap();
    let mut warm = Engine::new(&game);
    let mut full = Engine::with_options(&game, exhaustive);
    for (m, c) in all_reachable(&game, &[(B, game.start())]) {
        let cold = Engine::new(&game).game_value(m, &c).unwrap();
        assert_eq!(warm.game_value(m, &c).unwrap(), cold);
        assert_eq!(full.game_value(m, &c).unwrap(), cold);
    }
}

#[test]
fn height_decreases_along_every_edge() {
    let heaps = HeapsGame;
    for (m, c) in all_reachable(&heaps, &heap_starts(10)) {
        let hc = height(&heaps, m, &c, DEFAULT_DEPTH_LIMIT).unwrap();
        for s in heaps.next_configs(m, &c) {
            assert!(height(&heaps, m.other(), &s, DEFAULT_DEPTH_LIMIT).unwrap() < hc);
        }
    }
}

#[test]
fn strategy_oracle_matches_engine() {
    let heaps = HeapsGame;
    let mut e = Engine::new(&heaps);
    for n in 0..=6 {
        for k in 0..=n {
            for m in Player::ALL {
                for t in Player::ALL {
                    for crit in [Criterion::Winning, Criterion::NonLosing] {
                        let c = h(k, n);
                        let exists =
                            count_strategies(&heaps, t, crit, m, &c, 1, DEFAULT_DEPTH_LIMIT)
                                .unwrap()
                                >= 1;
                        assert_eq!(
                            e.valuation(t, crit, m, &c).unwrap(),
                            exists,
                            "{t} {crit:?} {m} {c}"
                        );
                        let s = extract_strategy(&mut e, t, crit, m, &c).unwrap();
                        assert_eq!(s.is_some(), exists);
                        if let Some(s) = s {
                            assert!(verify_strategy(&s, &heaps));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn symmetry_soundness_on_small_boards() {
    for n in 1..=3 {
        let reduced = BoardGame::new(n).unwrap();
        let raw = BoardGame::without_symmetry(n).unwrap();
        let mut er = Engine::new(&reduced);
        let mut eraw = Engine::new(&raw);
        for (m, c) in all_reachable(&raw, &[(B, raw.start())]) {
            let v = eraw.game_value(m, &c).unwrap();
            for sym in Symmetry::ALL {
                let t = transform(&c, sym);
                assert_eq!(er.game_value(m, &t).unwrap(), v);
                assert_eq!(eraw.game_value(m, &t).unwrap(), v);
            }
        }
    }
}

fn arb_board(n: u8) -> impl Strategy<Value = BoardConfig> {
    let cells = usize::from(n) * usize::from(n);
    proptest::collection::vec(0u8..3, cells).prop_map(move |v| {
        let (mut blue, mut red) = (0u64, 0u64);
        for (i, x) in v.iter().enumerate() {
            match x {
                1 => blue |= 1 << i,
                2 => red |= 1 << i,
                _ => {}
            }
        }
        BoardConfig::from_masks(n, blue, red).unwrap()
    })
}

proptest! {
    #[test]
    fn canonical_key_is_symmetry_invariant(c in arb_board(5)) {
        let game = BoardGame::new(5).unwrap();
        let key = game.canonical_key(&c);
        for sym in Symmetry::ALL {
            prop_assert_eq!(game.canonical_key(&transform(&c, sym)), key);
        }
    }

    #[test]
    fn heaps_duality(k in 0u64..60, n in 0u64..60, mover in prop_oneof![Just(R), Just(B)]) {
        let heaps = HeapsGame;
        let mut e = Engine::new(&heaps);
        let c = h(k, n);
        prop_assert_eq!(e.wins_for(R, mover, &c).unwrap(), !e.nonlosing_for(B, mover, &c).unwrap());
        prop_assert_eq!(e.wins_for(B, mover, &c).unwrap(), !e.nonlosing_for(R, mover, &c).unwrap());
    }
}
