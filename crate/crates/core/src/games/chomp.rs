//! Chomp! on an `n × m` bar with the poisoned square at column 0, row 0.
//!
//! A position is stored as its column heights, which are non-increasing.
//! Moves are indexed row-major over the remaining cells, the poisoned cell
//! excluded; chomping at `(c, r)` removes every cell `(c', r')` with
//! `c' >= c` and `r' >= r`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::graph::{GameGraph, PositionId};
use crate::model::MoveErrorModel;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChompPosition {
    heights: Vec<usize>,
}

impl ChompPosition {
    pub fn new(heights: Vec<usize>) -> Result<Self> {
        if heights.first().is_none_or(|&h| h == 0) {
            return Err(GameError::InvalidParameters("poisoned square must remain".into()));
        }
        if heights.windows(2).any(|w| w[1] > w[0]) {
            return Err(GameError::InvalidParameters(format!("column heights {heights:?} are not non-increasing")));
        }
        Ok(ChompPosition { heights })
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn contains(&self, col: usize, row: usize) -> bool {
        self.heights.get(col).is_some_and(|&h| row < h)
    }

    pub fn cell_count(&self) -> usize {
        self.heights.iter().sum()
    }

    /// Remaining cells other than the poisoned one, row-major.
    pub fn move_cells(&self) -> Vec<(usize, usize)> {
        let rows = self.heights[0];
        (0..rows)
            .flat_map(|r| (0..self.heights.len()).map(move |c| (c, r)))
            .filter(|&(c, r)| (c, r) != (0, 0) && self.contains(c, r))
            .collect()
    }

    pub fn chomp(&self, col: usize, row: usize) -> ChompPosition {
        let heights = self.heights.iter().enumerate().map(|(c, &h)| if c >= col { h.min(row) } else { h }).collect();
        ChompPosition { heights }
    }

    pub fn is_terminal(&self) -> bool {
        self.cell_count() == 1
    }
}

impl fmt::Display for ChompPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.heights.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChompVariant {
    /// Error spread evenly over the 8 surrounding cells.
    N8,
    /// Error spread evenly over the 4 edge-adjacent cells.
    N4,
    /// Error biased towards the poisoned corner: left and below get a
    /// quarter each, below-left gets half.
    LowerLeft,
    /// Every move lands uniformly, whatever was sent.
    Uniform,
}

impl FromStr for ChompVariant {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n8" => Ok(ChompVariant::N8),
            "n4" => Ok(ChompVariant::N4),
            "lower_left" | "lower-left" => Ok(ChompVariant::LowerLeft),
            "uniform" => Ok(ChompVariant::Uniform),
            other => Err(GameError::InvalidParameters(format!("unknown chomp variant '{other}'"))),
        }
    }
}

impl fmt::Display for ChompVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChompVariant::N8 => "n8",
            ChompVariant::N4 => "n4",
            ChompVariant::LowerLeft => "lower_left",
            ChompVariant::Uniform => "uniform",
        })
    }
}

const NEIGHBOURS_8: [(isize, isize); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];
const NEIGHBOURS_4: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
const LOWER_LEFT: [((isize, isize), f64); 3] = [((-1, 0), 0.25), ((0, -1), 0.25), ((-1, -1), 0.5)];

/// Enumerated Chomp! game: every reachable position of an `n × m` bar
/// together with the cell behind each move.
#[derive(Debug, Clone)]
pub struct ChompBoard {
    rows: usize,
    cols: usize,
    positions: Vec<ChompPosition>,
    moves: Vec<Vec<(usize, usize)>>,
    graph: GameGraph,
}

impl ChompBoard {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GameError::InvalidParameters(format!("chomp bar {rows}x{cols} has no cells")));
        }
        let mut positions = Vec::new();
        let mut heights = Vec::with_capacity(cols);
        enumerate_staircases(rows, cols, &mut heights, &mut positions);
        let index: HashMap<&ChompPosition, usize> = positions.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let moves: Vec<Vec<(usize, usize)>> = positions.iter().map(ChompPosition::move_cells).collect();
        let followers = positions
            .iter()
            .zip(&moves)
            .map(|(pos, cells)| cells.iter().map(|&(c, r)| PositionId(index[&pos.chomp(c, r)])).collect())
            .collect();
        let full = ChompPosition { heights: vec![rows; cols] };
        let start = PositionId(index[&full]);
        let labels = positions.iter().map(ToString::to_string).collect();
        let graph = GameGraph::from_parts(followers, start, labels);
        Ok(ChompBoard { rows, cols, positions, moves, graph })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn graph(&self) -> &GameGraph {
        &self.graph
    }

    pub fn position(&self, v: PositionId) -> &ChompPosition {
        &self.positions[v.index()]
    }

    pub fn position_id(&self, heights: &[usize]) -> Option<PositionId> {
        self.positions.iter().position(|p| p.heights == heights).map(PositionId)
    }

    /// Cell `(column, row)` targeted by each move at `v`.
    pub fn move_cells(&self, v: PositionId) -> &[(usize, usize)] {
        &self.moves[v.index()]
    }

    pub fn move_index(&self, v: PositionId, cell: (usize, usize)) -> Option<usize> {
        self.moves[v.index()].iter().position(|&c| c == cell)
    }

    /// Channel where the targeted cell is hit with probability `p` (ignored
    /// by [`ChompVariant::Uniform`]) and the rest of the mass goes to nearby
    /// cells that are legal moves.
    pub fn model(&self, variant: ChompVariant, p: f64) -> Result<MoveErrorModel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(GameError::ProbabilityOutOfRange(p));
        }
        Ok(MoveErrorModel::from_fn(&self.graph, |v, n| {
            let cells = &self.moves[v.index()];
            (0..n).map(|sent| self.row(cells, sent, variant, p)).collect()
        }))
    }

    fn row(&self, cells: &[(usize, usize)], sent: usize, variant: ChompVariant, p: f64) -> Vec<f64> {
        let n = cells.len();
        if variant == ChompVariant::Uniform {
            return vec![1.0 / n as f64; n];
        }
        let (tc, tr) = cells[sent];
        let locate = |(dc, dr): (isize, isize)| {
            let c = tc.checked_add_signed(dc)?;
            let r = tr.checked_add_signed(dr)?;
            cells.iter().position(|&cell| cell == (c, r))
        };
        let weighted: Vec<(usize, f64)> = match variant {
            ChompVariant::N8 => NEIGHBOURS_8.iter().filter_map(|&d| locate(d)).map(|i| (i, 1.0)).collect(),
            ChompVariant::N4 => NEIGHBOURS_4.iter().filter_map(|&d| locate(d)).map(|i| (i, 1.0)).collect(),
            ChompVariant::LowerLeft => LOWER_LEFT.iter().filter_map(|&(d, w)| locate(d).map(|i| (i, w))).collect(),
            ChompVariant::Uniform => unreachable!(),
        };
        let mut row = vec![0.0; n];
        let total: f64 = weighted.iter().map(|(_, w)| w).sum();
        if weighted.is_empty() {
            row[sent] = 1.0;
            return row;
        }
        row[sent] = p;
        for (i, w) in weighted {
            row[i] += (1.0 - p) * w / total;
        }
        row
    }
}

fn enumerate_staircases(rows: usize, cols: usize, heights: &mut Vec<usize>, out: &mut Vec<ChompPosition>) {
    if heights.len() == cols {
        out.push(ChompPosition { heights: heights.clone() });
        return;
    }
    let (low, high) = match heights.last() {
        None => (1, rows),
        Some(&prev) => (0, prev),
    };
    for h in low..=high {
        heights.push(h);
        enumerate_staircases(rows, cols, heights, out);
        heights.pop();
    }
}

/// Game graph of the `rows × cols` Chomp! bar.
pub fn chomp_graph(rows: usize, cols: usize) -> Result<GameGraph> {
    Ok(ChompBoard::new(rows, cols)?.graph)
}

/// Channel of the `rows × cols` Chomp! bar for the given error variant.
pub fn chomp_model(rows: usize, cols: usize, variant: ChompVariant, p: f64) -> Result<MoveErrorModel> {
    ChompBoard::new(rows, cols)?.model(variant, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn two_by_two_has_five_positions() {
        let board = ChompBoard::new(2, 2).unwrap();
        let mut shapes: Vec<Vec<usize>> = (0..5).map(|i| board.position(PositionId(i)).heights().to_vec()).collect();
        shapes.sort();
        assert_eq!(shapes, vec![vec![1, 0], vec![1, 1], vec![2, 0], vec![2, 1], vec![2, 2]]);
        let g = board.graph();
        assert!(g.validate().is_empty());
        let terminal = board.position_id(&[1, 0]).unwrap();
        assert_eq!(g.terminals().into_iter().collect::<Vec<_>>(), vec![terminal]);
        assert_eq!(board.move_cells(g.start()), &[(1, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn one_by_one_is_terminal() {
        let board = ChompBoard::new(1, 1).unwrap();
        assert_eq!(board.graph().position_count(), 1);
        assert!(board.graph().is_terminal(board.graph().start()));
        assert!(ChompBoard::new(0, 3).is_err());
    }

    #[test]
    fn two_by_three_contains_drawn_shapes() {
        let board = ChompBoard::new(2, 3).unwrap();
        for shape in [[1, 1, 1], [2, 1, 1], [2, 2, 1]] {
            assert!(board.position_id(&shape).is_some());
        }
    }

    #[test]
    fn position_rejects_bad_heights() {
        assert!(ChompPosition::new(vec![1, 2]).is_err());
        assert!(ChompPosition::new(vec![0, 0]).is_err());
        assert!(ChompPosition::new(vec![2, 1, 1]).is_ok());
    }

    #[test]
    fn n8_full_two_by_two_top_right() {
        let p = 0.4;
        let board = ChompBoard::new(2, 2).unwrap();
        let model = board.model(ChompVariant::N8, p).unwrap();
        let start = board.graph().start();
        let sent = board.move_index(start, (1, 1)).unwrap();
        let row = model.row(start, sent);
        assert!(close(row[board.move_index(start, (1, 0)).unwrap()], (1.0 - p) / 2.0));
        assert!(close(row[board.move_index(start, (0, 1)).unwrap()], (1.0 - p) / 2.0));
        assert!(close(row[sent], p));
    }

    #[test]
    fn n8_five_cell_bar_boundaries() {
        let p = 0.1;
        let board = ChompBoard::new(2, 3).unwrap();
        let model = board.model(ChompVariant::N8, p).unwrap();
        let v = board.position_id(&[2, 2, 1]).unwrap();
        let row_of = |cell| model.row(v, board.move_index(v, cell).unwrap()).to_vec();
        let idx = |cell| board.move_index(v, cell).unwrap();

        // far-right cell: two legal neighbours
        let far = row_of((2, 0));
        assert!(close(far[idx((2, 0))], p));
        assert!(close(far[idx((1, 0))], (1.0 - p) / 2.0));
        assert!(close(far[idx((1, 1))], (1.0 - p) / 2.0));
        assert!(close(far[idx((0, 1))], 0.0));

        // middle bottom cell: three legal neighbours
        let mid = row_of((1, 0));
        assert!(close(mid[idx((1, 0))], p));
        for cell in [(0, 1), (1, 1), (2, 0)] {
            assert!(close(mid[idx(cell)], (1.0 - p) / 3.0));
        }

        let top = row_of((0, 1));
        assert!(close(top[idx((1, 1))], (1.0 - p) / 2.0));
        assert!(close(top[idx((1, 0))], (1.0 - p) / 2.0));
        assert!(close(top[idx((2, 0))], 0.0));
    }

    #[test]
    fn n4_interior_and_lower_left_interior() {
        let p = 0.2;
        let board = ChompBoard::new(4, 4).unwrap();
        let v = board.graph().start();
        let idx = |cell| board.move_index(v, cell).unwrap();
        let n4 = board.model(ChompVariant::N4, p).unwrap();
        let row = n4.row(v, idx((2, 2)));
        for cell in [(1, 2), (3, 2), (2, 1), (2, 3)] {
            assert!(close(row[idx(cell)], (1.0 - p) / 4.0));
        }
        let ll = board.model(ChompVariant::LowerLeft, p).unwrap();
        let row = ll.row(v, idx((2, 2)));
        assert!(close(row[idx((1, 2))], (1.0 - p) / 4.0));
        assert!(close(row[idx((2, 1))], (1.0 - p) / 4.0));
        assert!(close(row[idx((1, 1))], (1.0 - p) / 2.0));
        assert!(close(row[idx((2, 2))], p));
    }

    #[test]
    fn lower_left_redistributes_proportionally() {
        let p = 0.2;
        let board = ChompBoard::new(2, 3).unwrap();
        let v = board.graph().start();
        let idx = |cell| board.move_index(v, cell).unwrap();
        let ll = board.model(ChompVariant::LowerLeft, p).unwrap();
        // (1,0): left is the poisoned cell, the other offsets fall off the bar
        let row = ll.row(v, idx((1, 0)));
        assert!(close(row[idx((1, 0))], 1.0));
        // (1,1): left (0,1) and below (1,0) legal, below-left poisoned:
        // each gets half of 1 - p.
        let row = ll.row(v, idx((1, 1)));
        assert!(close(row[idx((0, 1))], (1.0 - p) / 2.0));
        assert!(close(row[idx((1, 0))], (1.0 - p) / 2.0));
        // (2,1): left (1,1) 1/4, below (2,0) 1/4, below-left (1,0) 1/2
        let row = ll.row(v, idx((2, 1)));
        assert!(close(row[idx((1, 1))], (1.0 - p) / 4.0));
        assert!(close(row[idx((2, 0))], (1.0 - p) / 4.0));
        assert!(close(row[idx((1, 0))], (1.0 - p) / 2.0));
    }

    #[test]
    fn uniform_full_bar() {
        let board = ChompBoard::new(3, 4).unwrap();
        let model = board.model(ChompVariant::Uniform, 0.9).unwrap();
        let v = board.graph().start();
        for row in model.matrix(v) {
            assert!(row.iter().all(|&x| close(x, 1.0 / 11.0)));
        }
    }

    #[test]
    fn every_variant_is_stochastic() {
        let board = ChompBoard::new(3, 4).unwrap();
        for variant in [ChompVariant::N8, ChompVariant::N4, ChompVariant::LowerLeft, ChompVariant::Uniform] {
            for p in [0.0, 0.3, 1.0] {
                let model = board.model(variant, p).unwrap();
                assert!(model.validate(board.graph()).is_empty(), "{variant} at {p}");
            }
        }
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("lower_left".parse::<ChompVariant>().unwrap(), ChompVariant::LowerLeft);
        assert!("n6".parse::<ChompVariant>().is_err());
    }
}
