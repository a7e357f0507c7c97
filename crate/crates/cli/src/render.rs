//! Text renderers for sweep grids and strategy trees.

use std::fmt::{Display, Write as _};

use strategem::analysis::SweepGrid;
use strategem::engine::{GameRules, Outcome, Player};
use strategem::strategy::{StrategyNode, StrategyTree};

/// `k,n,benny_wins` rows, `k` outer and `n` inner, values 0/1.
pub fn render_csv(g: &SweepGrid) -> String {
    let mut out = String::from("k,n,benny_wins\n");
    for k in 0..=g.max() {
        for n in 0..=g.max() {
            writeln!(out, "{k},{n},{}", u8::from(g.get(k, n))).unwrap();
        }
    }
    out
}

/// Plain PGM with `n` increasing upwards and `k` to the right; black (0)
/// marks Benny's winning cells.
pub fn render_pgm(g: &SweepGrid) -> String {
    let side = g.max() + 1;
    let mut out = format!("P2\n{side} {side}\n1\n");
    for r in 0..side {
        let n = g.max() - r;
        let row: Vec<&str> = (0..side)
            .map(|k| if g.get(k, n) { "0" } else { "1" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<SweepGrid, String> {
    let mut lines = text.lines();
    if lines.next() != Some("k,n,benny_wins") {
        return Err("missing header".into());
    }
    let mut rows = Vec::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let [k, n, v] = f[..] else {
            return Err(format!("bad row {line:?}"));
        };
        let num = |s: &str| s.parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
        rows.push((num(k)?, num(n)?, num(v)? == 1));
    }
    let side = (rows.len() as f64).sqrt() as usize;
    if side == 0 || side * side != rows.len() {
        return Err(format!("{} rows do not form a square grid", rows.len()));
    }
    let mut g = SweepGrid::from_fn(side - 1, |_, _| false);
    for (k, n, v) in rows {
        if k >= side || n >= side {
            return Err(format!("cell ({k}, {n}) outside grid"));
        }
        g.set(k, n, v);
    }
    Ok(g)
}

pub fn parse_pgm(text: &str) -> Result<SweepGrid, String> {
    let mut tokens = text.split_ascii_whitespace();
    if tokens.next() != Some("P2") {
        return Err("not a plain PGM".into());
    }
    let mut num = || -> Result<usize, String> {
        let t = tokens.next().ok_or("truncated PGM")?;
        t.parse().map_err(|e| format!("{t:?}: {e}"))
    };
    let (w, h, _maxval) = (num()?, num()?, num()?);
    if w != h || w == 0 {
        return Err(format!("expected a square image, got {w}x{h}"));
    }
    let mut values = Vec::with_capacity(w * h);
    for _ in 0..w * h {
        values.push(num()?);
    }
    let max = w - 1;
    Ok(SweepGrid::from_fn(max, |k, n| {
        values[(max - n) * w + k] == 0
    }))
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn player_colour(p: Player) -> &'static str {
    match p {
        Player::Benny => "blue",
        Player::Rebecca => "red",
    }
}

fn outcome_colour(o: Outcome) -> &'static str {
    match o {
        Outcome::BWin => "blue",
        Outcome::RWin => "red",
        Outcome::Draw => "black",
    }
}

/// Graphviz digraph of a strategy. Node ids follow the path from the root,
/// so a configuration reached along two lines appears twice.
pub fn render_dot<G>(s: &StrategyTree<G::Config>, rules: &G) -> String
where
    G: GameRules,
    G::Config: Display,
{
    let mut out = String::from("digraph strategy {\n");
    writeln!(
        out,
        "  label=\"{} strategy for {}\";",
        match s.criterion {
            strategem::Criterion::Winning => "winning",
            strategem::Criterion::NonLosing => "non-losing",
        },
        s.target
    )
    .unwrap();
    out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
    let mut stack: Vec<(String, &StrategyNode<G::Config>)> = vec![("n".to_string(), &s.root)];
    while let Some((id, node)) = stack.pop() {
        let label = dot_escape(&format!("{}:{}", node.mover, node.config));
        if node.children.is_empty() {
            match rules.leaf_outcome(node.mover, &node.config) {
                Ok(o) => writeln!(
                    out,
                    "  {id} [label=\"{label}\", xlabel=\"{o}\", color={}, penwidth=2];",
                    outcome_colour(o)
                )
                .unwrap(),
                Err(_) => writeln!(out, "  {id} [label=\"{label}\"];").unwrap(),
            }
        } else {
            writeln!(out, "  {id} [label=\"{label}\"];").unwrap();
        }
        for i in 0..node.children.len() {
            writeln!(
                out,
                "  {id} -> {id}_{i} [color={}];",
                player_colour(node.mover)
            )
            .unwrap();
        }
        // Reverse so children are emitted in order.
        for (i, child) in node.children.iter().enumerate().rev() {
            stack.push((format!("{id}_{i}"), child));
        }
    }
    out.push_str("}\n");
    out
}

/// Indented outline of a strategy, one node per line.
pub fn render_outline<G>(s: &StrategyTree<G::Config>, rules: &G) -> String
where
    G: GameRules,
    G::Config: Display,
{
    fn walk<G: GameRules>(node: &StrategyNode<G::Config>, rules: &G, depth: usize, out: &mut String)
    where
        G::Config: Display,
    {
        write!(
            out,
            "{:indent$}{}:{}",
            "",
            node.mover,
            node.config,
            indent = 2 * depth
        )
        .unwrap();
        if node.children.is_empty() {
            if let Ok(o) = rules.leaf_outcome(node.mover, &node.config) {
                write!(out, " [{o}]").unwrap();
            }
        }
        out.push('\n');
        for ch in &node.children {
            walk(ch, rules, depth + 1, out);
        }
    }
    let mut out = String::new();
    walk(&s.root, rules, 0, &mut out);
    out
}
