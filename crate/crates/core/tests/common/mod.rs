//! Test-only oracles and random instance generators. Nothing here calls the
//! solver.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use noisy_games::{GameGraph, MoveErrorModel, PositionId};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random DAG with `1..=max_positions` positions. Edges only go from a
/// higher to a lower rank, then positions are relabelled by a random
/// permutation and follower lists shuffled.
pub fn random_dag<R: Rng>(rng: &mut R, max_positions: usize) -> GameGraph {
    let n = rng.random_range(1..=max_positions);
    let density = rng.random_range(0.2..0.9);
    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(rng);
    let mut followers = vec![Vec::new(); n];
    for rank in 0..n {
        let mut fs: Vec<PositionId> =
            (0..rank).filter(|_| rng.random_bool(density)).map(|lower| PositionId(relabel[lower])).collect();
        fs.shuffle(rng);
        followers[relabel[rank]] = fs;
    }
    let start = PositionId(relabel[n - 1]);
    GameGraph::new(followers, start, Vec::new()).expect("generated graph is a DAG")
}

/// Random row-stochastic channel; `positive` forces every entry above zero,
/// otherwise roughly a third of the entries are zero.
pub fn random_model<R: Rng>(rng: &mut R, graph: &GameGraph, positive: bool) -> MoveErrorModel {
    let matrices = graph
        .positions()
        .map(|v| {
            let n = graph.out_degree(v);
            (0..n)
                .map(|_| {
                    let mut row: Vec<f64> = (0..n)
                        .map(|_| {
                            if positive {
                                rng.random_range(0.05..1.0)
                            } else if rng.random_bool(0.35) {
                                0.0
                            } else {
                                rng.random_range(0.0..1.0)
                            }
                        })
                        .collect();
                    if row.iter().all(|&x| x == 0.0) {
                        let i = rng.random_range(0..n);
                        row[i] = 1.0;
                    }
                    let total: f64 = row.iter().sum();
                    row.iter_mut().for_each(|x| *x /= total);
                    row
                })
                .collect()
        })
        .collect();
    MoveErrorModel::new(graph, matrices).expect("generated model is stochastic")
}

/// Exhaustive-expectation oracle. The value of sending `w` from `v` is the
/// sum, over every complete play sequence that follows, of the sequence
/// probability times the indicator that the mover at `v` wins. Players
/// follow the move that maximizes this same path sum.
pub struct PathOracle<'a> {
    graph: &'a GameGraph,
    model: &'a MoveErrorModel,
    strategy: HashMap<PositionId, usize>,
}

impl<'a> PathOracle<'a> {
    pub fn new(graph: &'a GameGraph, model: &'a MoveErrorModel) -> Self {
        PathOracle { graph, model, strategy: HashMap::new() }
    }

    pub fn value(&mut self, v: PositionId) -> f64 {
        if self.graph.is_terminal(v) {
            return 0.0;
        }
        (0..self.graph.out_degree(v)).map(|w| self.move_value(v, w)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn move_value(&mut self, v: PositionId, sent: usize) -> f64 {
        let mut total = 0.0;
        self.walk(v, sent, 1.0, true, &mut total);
        total
    }

    fn choose(&mut self, v: PositionId) -> usize {
        if let Some(&w) = self.strategy.get(&v) {
            return w;
        }
        let values: Vec<f64> = (0..self.graph.out_degree(v)).map(|w| self.move_value(v, w)).collect();
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let w = values.iter().position(|&x| x == best).unwrap();
        self.strategy.insert(v, w);
        w
    }

    // `mover_is_root`: whether the player transmitting at `v` is the one
    // whose win probability is being summed.
    fn walk(&mut self, v: PositionId, sent: usize, prob: f64, mover_is_root: bool, total: &mut f64) {
        let row = self.model.row(v, sent).to_vec();
        for (landed, &q) in row.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let next = self.graph.followers(v)[landed];
            let path = prob * q;
            if self.graph.is_terminal(next) {
                // the opponent faces the terminal position and loses
                if mover_is_root {
                    *total += path;
                }
            } else {
                let reply = self.choose(next);
                self.walk(next, reply, path, !mover_is_root, total);
            }
        }
    }
}

/// Classical Sprague-Grundy values by mex recursion.
pub fn grundy_values(graph: &GameGraph) -> Vec<usize> {
    fn grundy(graph: &GameGraph, v: PositionId, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(g) = memo[v.0] {
            return g;
        }
        let seen: HashSet<usize> = graph.followers(v).iter().map(|&u| grundy(graph, u, memo)).collect();
        let g = (0..).find(|x| !seen.contains(x)).unwrap();
        memo[v.0] = Some(g);
        g
    }
    let mut memo = vec![None; graph.position_count()];
    graph.positions().map(|v| grundy(graph, v, &mut memo)).collect()
}

/// Number of non-increasing height vectors of length `cols` with entries in
/// `0..=rows` and first entry at least one, by brute force over all vectors.
pub fn count_staircases(rows: usize, cols: usize) -> usize {
    let total = (rows + 1).pow(cols as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let heights: Vec<usize> = (0..cols)
                .map(|_| {
                    let h = c % (rows + 1);
                    c /= rows + 1;
                    h
                })
                .collect();
            heights[0] >= 1 && heights.windows(2).all(|w| w[1] <= w[0])
        })
        .count()
}
