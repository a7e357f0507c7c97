//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use strategem::analysis::{
    check_corollary, check_l_only_reaches_w, check_observations, check_w_reaches_l, duality_report,
    extract_sequences, sweep, CheckResult,
};
use strategem::board::BoardGame;
use strategem::engine::{
    reachable_positions, Criterion, Engine, EvalOptions, GameRules, Outcome, Player,
    DEFAULT_DEPTH_LIMIT,
};
use strategem::heaps::{HeapsConfig, HeapsGame};
use strategem::strategy::{count_strategies, extract_strategy, verify_strategy};

const R: Player = Player::Rebecca;
const B: Player = Player::Benny;

const A_SEGMENT: [u64; 24] = [
    0, 1, 2, 2, 3, 4, 4, 5, 5, 6, 7, 7, 8, 9, 9, 10, 10, 11, 12, 12, 13, 13, 14, 15,
];
const B_SEGMENT: [u64; 24] = [
    0, 1, 3, 4, 6, 8, 9, 11, 12, 14, 16, 17, 19, 21, 22, 24, 25, 27, 29, 30, 32, 33, 35, 37,
];

type Verdict = Result<String, String>;
type Criterion_ = (&'static str, fn() -> Verdict);

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn check(res: &CheckResult) -> Result<(), String> {
    if res.passed() {
        Ok(())
    } else {
        Err(format!(
            "{} failures, e.g. {:?}",
            res.failures, res.counterexamples
        ))
    }
}

fn benchmark_position() -> Verdict {
    let start = Instant::now();
    let rules = HeapsGame;
    let mut engine = Engine::new(&rules);
    let c = HeapsConfig::new(2, 5);
    let mut errors = Vec::new();
    if !engine.wins_for(R, R, &c).map_err(|e| e.to_string())? {
        errors.push("wins_for(R, R, (2,5)) is false".to_string());
    }
    let s = extract_strategy(&mut engine, R, Criterion::Winning, R, &c)
        .map_err(|e| e.to_string())?
        .ok_or("no winning strategy extracted")?;
    if !verify_strategy(&s, &rules) {
        errors.push("extracted strategy fails verification".into());
    }
    let root_move = s.root_move().copied();
    if root_move != Some(HeapsConfig::new(1, 2)) {
        let one_two_wins = engine
            .wins_for(R, B, &HeapsConfig::new(1, 2))
            .map_err(|e| e.to_string())?;
        errors.push(format!(
            "root move is {root_move:?}, expected (1, 2); Rebecca {} from (1, 2) with Benny to move",
            if one_two_wins { "wins" } else { "loses" }
        ));
    }
    let count = count_strategies(
        &rules,
        R,
        Criterion::Winning,
        R,
        &c,
        10,
        DEFAULT_DEPTH_LIMIT,
    )
    .map_err(|e| e.to_string())?;
    if count != 1 {
        errors.push(format!("count_strategies = {count}, expected 1"));
    }
    if let Err(e) = within(start, Duration::from_secs(1)) {
        errors.push(e);
    }
    if errors.is_empty() {
        Ok(format!("root move {root_move:?}, 1 strategy"))
    } else {
        Err(errors.join("; "))
    }
}

fn sequence_regression() -> Verdict {
    let start = Instant::now();
    let seq = extract_sequences(&sweep(60));
    let a: Vec<Option<u64>> = seq.a[..A_SEGMENT.len()].to_vec();
    let want_a: Vec<Option<u64>> = A_SEGMENT.iter().copied().map(Some).collect();
    if a != want_a {
        return Err(format!("a = {a:?}"));
    }
    let listed: Vec<(usize, u64)> = B_SEGMENT
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, b)| b <= 60)
        .collect();
    for &(n, want) in &listed {
        if seq.b[n] != Some(want) {
            return Err(format!("b[{n}] = {:?}, expected {want}", seq.b[n]));
        }
    }
    if let Some(n) = seq.contiguous.iter().position(|&c| !c) {
        return Err(format!("row {n} not contiguous"));
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!(
        "{} a terms, {} b terms",
        A_SEGMENT.len(),
        listed.len()
    ))
}

fn golden_ratio_law() -> Verdict {
    let start = Instant::now();
    let res = check_corollary(&sweep(60));
    check(&res)?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} cells", res.checked))
}

fn observations() -> Verdict {
    // b_60 lies beyond 60, so the grid extends to 120 for the bounds to be seen.
    let res = check_observations(&sweep(120), 60);
    check(&res)?;
    Ok(format!("{} assertions", res.checked))
}

fn proposition() -> Verdict {
    let start = Instant::now();
    let w = check_w_reaches_l(100);
    let l = check_l_only_reaches_w(100);
    check(&w)?;
    check(&l)?;
    within(start, Duration::from_secs(10))?;
    Ok(format!("{} W and {} L positions", w.checked, l.checked))
}

fn duality() -> Verdict {
    let res = duality_report(30, 3, EvalOptions::default()).map_err(|e| e.to_string())?;
    check(&res)?;
    Ok(format!("{} comparisons", res.checked))
}

fn oracle_for<G: GameRules>(rules: &G, positions: &[(Player, G::Config)]) -> Result<usize, String> {
    let mut engine = Engine::new(rules);
    let mut n = 0;
    for (m, c) in positions {
        for t in Player::ALL {
            for crit in [Criterion::Winning, Criterion::NonLosing] {
                let v = engine
                    .valuation(t, crit, *m, c)
                    .map_err(|e| e.to_string())?;
                let exists = count_strategies(rules, t, crit, *m, c, 1, DEFAULT_DEPTH_LIMIT)
                    .map_err(|e| e.to_string())?
                    >= 1;
                if v != exists {
                    return Err(format!(
                        "{t} {crit:?} {m} {c:?}: engine {v}, enumeration {exists}"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

fn strategy_oracle() -> Verdict {
    let mut heaps = Vec::new();
    for n in 0..=6 {
        for k in 0..=n {
            for p in Player::ALL {
                heaps.push((p, HeapsConfig::new(k, n)));
            }
        }
    }
    let mut total = oracle_for(&HeapsGame, &heaps)?;
    for side in 1..=2 {
        let game = BoardGame::without_symmetry(side).map_err(|e| e.to_string())?;
        let mut positions = Vec::new();
        for p in Player::ALL {
            positions.extend(
                reachable_positions(&game, p, &game.start(), 1_000_000)
                    .map_err(|e| e.to_string())?,
            );
        }
        total += oracle_for(&game, &positions)?;
    }
    Ok(format!("{total} comparisons"))
}

fn board_parity() -> Verdict {
    let mut notes = Vec::new();
    for side in 1..=4u8 {
        let start = Instant::now();
        let game = BoardGame::new(side).map_err(|e| e.to_string())?;
        let value = Engine::new(&game)
            .game_value(B, &game.start())
            .map_err(|e| e.to_string())?;
        let limit = if side <= 3 {
            Duration::from_secs(1)
        } else {
            Duration::from_secs(600)
        };
        within(start, limit).map_err(|e| format!("n = {side}: {e}"))?;
        let ok = match side {
            1 | 3 => value == Outcome::RWin,
            2 => value == Outcome::BWin,
            _ => value != Outcome::RWin,
        };
        if !ok {
            return Err(format!("n = {side}: value {value}"));
        }
        notes.push(format!("n={side}: {value} in {:?}", start.elapsed()));
    }
    Ok(notes.join(", "))
}

fn sweep_performance() -> Verdict {
    let start = Instant::now();
    let g = sweep(100);
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "101x101 grid in {:?} ({} cells)",
        start.elapsed(),
        (g.max() + 1).pow(2)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion_; 9] = [
        ("benchmark position (2,5)", benchmark_position),
        ("sequence regression", sequence_regression),
        ("golden-ratio law", golden_ratio_law),
        ("row observations", observations),
        ("proposition", proposition),
        ("duality", duality),
        ("strategy oracle", strategy_oracle),
        ("board parity", board_parity),
        ("sweep performance", sweep_performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
