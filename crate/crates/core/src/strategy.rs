//! Strategies as subtrees of the game tree.
//!
//! A strategy for a target player keeps the root of the game tree, every
//! move of the opponent, and exactly one move of the target at each of its
//! nodes. It is winning (or non-losing) when every leaf meets that
//! criterion for the target.

use std::collections::{HashMap, HashSet};

use crate::engine::{Criterion, Engine, EngineError, GameRules, Player};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyNode<C> {
    pub mover: Player,
    pub config: C,
    pub children: Vec<StrategyNode<C>>,
}

impl<C> StrategyNode<C> {
    pub fn leaf(mover: Player, config: C) -> Self {
        StrategyNode {
            mover,
            config,
            children: Vec::new(),
        }
    }

    /// Number of nodes in this subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(StrategyNode::size).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyTree<C> {
    pub target: Player,
    pub criterion: Criterion,
    pub root: StrategyNode<C>,
}

impl<C> StrategyTree<C> {
    /// The target's chosen move at the root, if the target moves there.
    pub fn root_move(&self) -> Option<&C> {
        if self.root.mover == self.target {
            self.root.children.first().map(|n| &n.config)
        } else {
            None
        }
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }
}

/// Builds a strategy for `target` from `(mover, c)`, or `None` when no
/// strategy meeting `criterion` exists. At each target node the first
/// successor (in the rules' order) that keeps the valuation true is taken.
pub fn extract_strategy<G: GameRules>(
    engine: &mut Engine<'_, G>,
    target: Player,
    criterion: Criterion,
    mover: Player,
    c: &G::Config,
) -> Result<Option<StrategyTree<G::Config>>, EngineError> {
    if !engine.valuation(target, criterion, mover, c)? {
        return Ok(None);
    }
    let root = build(engine, target, criterion, mover, c, 0)?;
    Ok(Some(StrategyTree {
        target,
        criterion,
        root,
    }))
}

fn build<G: GameRules>(
    engine: &mut Engine<'_, G>,
    target: Player,
    criterion: Criterion,
    mover: Player,
    c: &G::Config,
    depth: usize,
) -> Result<StrategyNode<G::Config>, EngineError> {
    let limit = engine.options().depth_limit;
    if depth > limit {
        return Err(EngineError::DepthExceeded { limit });
    }
    let rules = engine.rules();
    if rules.halted(mover, c) {
        return Ok(StrategyNode::leaf(mover, c.clone()));
    }
    let next = rules.next_configs(mover, c);
    let mut children = Vec::new();
    if mover == target {
        for child in &next {
            if engine.valuation(target, criterion, mover.other(), child)? {
                children.push(build(
                    engine,
                    target,
                    criterion,
                    mover.other(),
                    child,
                    depth + 1,
                )?);
                break;
            }
        }
        // A true valuation at a target node always has a true successor.
        debug_assert_eq!(children.len(), 1);
    } else {
        for child in &next {
            children.push(build(
                engine,
                target,
                criterion,
                mover.other(),
                child,
                depth + 1,
            )?);
        }
    }
    Ok(StrategyNode {
        mover,
        config: c.clone(),
        children,
    })
}

/// Checks the subtree conditions and the leaf criterion. Malformed trees
/// yield `false`.
pub fn verify_strategy<G: GameRules>(s: &StrategyTree<G::Config>, rules: &G) -> bool {
    verify_node(&s.root, s.target, s.criterion, rules)
}

fn verify_node<G: GameRules>(
    node: &StrategyNode<G::Config>,
    target: Player,
    criterion: Criterion,
    rules: &G,
) -> bool {
    let mover = node.mover;
    if rules.halted(mover, &node.config) {
        return node.children.is_empty()
            && rules
                .leaf_outcome(mover, &node.config)
                .is_ok_and(|o| criterion.leaf_satisfied(target, o));
    }
    let next = rules.next_configs(mover, &node.config);
    if node.children.iter().any(|ch| ch.mover != mover.other()) {
        return false;
    }
    let shape_ok = if mover == target {
        node.children.len() == 1 && next.contains(&node.children[0].config)
    } else {
        let want: HashSet<_> = next.iter().collect();
        let got: HashSet<_> = node.children.iter().map(|ch| &ch.config).collect();
        node.children.len() == next.len() && got == want
    };
    shape_ok
        && node
            .children
            .iter()
            .all(|ch| verify_node(ch, target, criterion, rules))
}

/// Counts distinct strategy subtrees meeting `criterion` by exhaustive
/// enumeration of the target's choices, saturating at `cap`.
///
/// Shares nothing with the engine's valuation, so it serves as an
/// independent check of it.
pub fn count_strategies<G: GameRules>(
    rules: &G,
    target: Player,
    criterion: Criterion,
    mover: Player,
    c: &G::Config,
    cap: u64,
    depth_limit: usize,
) -> Result<u64, EngineError> {
    let mut counter = Counter {
        rules,
        target,
        criterion,
        cap: cap.max(1),
        depth_limit,
        memo: HashMap::new(),
    };
    counter.count(mover, c, 0)
}

struct Counter<'r, G: GameRules> {
    rules: &'r G,
    target: Player,
    criterion: Criterion,
    cap: u64,
    depth_limit: usize,
    memo: HashMap<(Player, G::Config), u64>,
}

impl<G: GameRules> Counter<'_, G> {
    fn count(&mut self, mover: Player, c: &G::Config, depth: usize) -> Result<u64, EngineError> {
        if depth > self.depth_limit {
            return Err(EngineError::DepthExceeded {
                limit: self.depth_limit,
            });
        }
        if let Some(&n) = self.memo.get(&(mover, c.clone())) {
            return Ok(n);
        }
        let n = if self.rules.halted(mover, c) {
            let outcome = self.rules.leaf_outcome(mover, c)?;
            u64::from(self.criterion.leaf_satisfied(self.target, outcome))
        } else {
            let next = self.rules.next_configs(mover, c);
            if next.is_empty() {
                return Err(EngineError::DeadEnd);
            }
            if mover == self.target {
                let mut total = 0u64;
                for child in &next {
                    total = total.saturating_add(self.count(mover.other(), child, depth + 1)?);
                }
                total
            } else {
                let mut product = 1u64;
                for child in &next {
                    product =
                        product.saturating_mul(self.count(mover.other(), child, depth + 1)?);
                    if product == 0 {
                        break;
                    }
                }
                product
            }
        };
        let n = n.min(self.cap);
        self.memo.insert((mover, c.clone()), n);
        Ok(n)
    }
}
