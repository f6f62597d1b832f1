//! Parameter sweeps, CSV output, the bundled one-pile Nim reference values
//! and the optimal-move conjecture scan.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::games::{nim1_solution_curve, ChompBoard, ChompVariant, CurvePoint};
use crate::solver::{solve, TIE_TOLERANCE};

/// `points` evenly spaced probabilities `i / (points - 1)`.
pub fn p_grid(points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(GameError::InvalidParameters(format!("a p-grid needs at least 2 points, got {points}")));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(|i| i as f64 / last).collect())
}

/// Game families with a channel parameter to sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SweepFamily {
    Nim1 { k: usize },
    Chomp { n: usize, m: usize, variant: ChompVariant },
}

/// Start value and optimal moves at every `p` of the grid.
pub fn sweep(family: SweepFamily, grid: &[f64]) -> Result<Vec<CurvePoint>> {
    match family {
        SweepFamily::Nim1 { k } => nim1_solution_curve(k, grid),
        SweepFamily::Chomp { n, m, variant } => {
            let board = ChompBoard::new(n, m)?;
            grid.iter()
                .map(|&p| {
                    let solved = solve(board.graph(), &board.model(variant, p)?)?;
                    let start = solved.position(board.graph().start());
                    Ok(CurvePoint { p, value: start.value, optimal_moves: start.optimal_moves.clone() })
                })
                .collect()
        }
    }
}

fn p_decimals(points: usize) -> usize {
    let mut decimals = 0;
    let mut span = points.saturating_sub(1);
    while span > 1 {
        span = span.div_ceil(10);
        decimals += 1;
    }
    decimals.max(2)
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    p: String,
    #[serde(rename = "N")]
    value: String,
    optimal_moves: String,
}

/// Writes `p,N,optimal_moves` rows; values carry 15 decimals and optimal
/// moves are `;`-separated.
pub fn write_sweep_csv<W: Write>(rows: &[CurvePoint], writer: W) -> Result<()> {
    let decimals = p_decimals(rows.len());
    let io_err = |e: csv::Error| GameError::InvalidParameters(format!("cannot write CSV: {e}"));
    let mut out = csv::Writer::from_writer(writer);
    for row in rows {
        let moves: Vec<String> = row.optimal_moves.iter().map(ToString::to_string).collect();
        out.serialize(CsvRow {
            p: format!("{:.*}", decimals, row.p),
            value: format!("{:.15}", row.value),
            optimal_moves: moves.join(";"),
        })
        .map_err(io_err)?;
    }
    out.flush().map_err(|e| GameError::InvalidParameters(format!("cannot write CSV: {e}")))?;
    Ok(())
}

/// Parses a file produced by [`write_sweep_csv`].
pub fn read_sweep_csv<R: Read>(reader: R) -> Result<Vec<CurvePoint>> {
    let bad = |msg: String| GameError::InvalidParameters(format!("malformed sweep CSV: {msg}"));
    csv::Reader::from_reader(reader)
        .deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(|e| bad(e.to_string()))?;
            let optimal_moves = if row.optimal_moves.is_empty() {
                Vec::new()
            } else {
                row.optimal_moves
                    .split(';')
                    .map(|m| m.parse().map_err(|_| bad(format!("bad move '{m}'"))))
                    .collect::<Result<_>>()?
            };
            Ok(CurvePoint {
                p: row.p.parse().map_err(|_| bad(format!("bad p '{}'", row.p)))?,
                value: row.value.parse().map_err(|_| bad(format!("bad value '{}'", row.value)))?,
                optimal_moves,
            })
        })
        .collect()
}

/// A reference start value of one-pile Nim with its optimal move set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotValue {
    pub k: usize,
    /// Grid index `i` of `p = i / 100`.
    pub percent: usize,
    pub value: f64,
    pub optimal_moves: Vec<usize>,
}

impl SpotValue {
    pub fn p(&self) -> f64 {
        self.percent as f64 / 100.0
    }
}

/// Absolute tolerance for reference values.
pub const SPOT_TOLERANCE: f64 = 1e-9;

/// Reference values of the published one-pile Nim tables (`k = 4..10`). At
/// `p = 0.50` the tables print the full range `0 - (k-1)`: every move ties.
pub fn reference_spot_values() -> Vec<SpotValue> {
    let spot = |k: usize, percent: usize, value: f64, moves: &[usize]| SpotValue {
        k,
        percent,
        value,
        optimal_moves: moves.to_vec(),
    };
    let all = |k: usize| (0..k).collect::<Vec<_>>();
    vec![
        spot(4, 25, 0.631250000000000, &[0]),
        spot(4, 50, 0.5, &all(4)),
        spot(4, 75, 0.646634615384615, &[3]),
        spot(4, 100, 1.0, &[3]),
        spot(5, 76, 0.454178272731180, &[3]),
        spot(5, 77, 0.458703309461914, &[4]),
        spot(6, 76, 0.471666277251390, &[0]),
        spot(6, 79, 0.480657745012594, &[4]),
        spot(7, 79, 0.489647199317731, &[0]),
        spot(7, 80, 0.492023516195469, &[4]),
        spot(8, 50, 0.5, &all(8)),
        spot(8, 99, 0.970694959999281, &[7]),
        spot(9, 50, 0.5, &all(9)),
        spot(9, 81, 0.492137510167114, &[8]),
        spot(9, 82, 0.493999659131848, &[4]),
        spot(10, 30, 0.527252488101950, &[0]),
        spot(10, 99, 0.508830272700490, &[4]),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotCheck {
    pub expected: SpotValue,
    pub value: f64,
    pub optimal_moves: Vec<usize>,
    pub abs_error: f64,
}

impl SpotCheck {
    pub fn value_ok(&self) -> bool {
        self.abs_error <= SPOT_TOLERANCE
    }

    pub fn moves_ok(&self) -> bool {
        self.optimal_moves == self.expected.optimal_moves
    }

    pub fn passed(&self) -> bool {
        self.value_ok() && self.moves_ok()
    }
}

/// Recomputes each reference value with the solver.
pub fn verify_spot_values(expected: &[SpotValue]) -> Result<Vec<SpotCheck>> {
    expected
        .iter()
        .map(|spot| {
            let point = nim1_solution_curve(spot.k, &[spot.p()])?.remove(0);
            Ok(SpotCheck {
                expected: spot.clone(),
                value: point.value,
                abs_error: (point.value - spot.value).abs(),
                optimal_moves: point.optimal_moves,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conjecture {
    /// For `p <= 1/2`: `N_k(p) >= 1/2` and removing the whole pile is optimal.
    TakeAllBelowHalf,
    /// For `k` a power of two: `N_k(p) >= 1/2` for all `p`, and leaving
    /// `k - 1` chips is optimal for `p >= 1/2`.
    PowerOfTwo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub conjecture: Conjecture,
    pub k: usize,
    pub p: f64,
    pub value: f64,
    pub optimal_moves: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub max_chips: usize,
    pub grid_points: usize,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Per `k`, the consecutive grid points where the canonical optimal move changes.
    pub switches: Vec<MoveSwitch>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveSwitch {
    pub k: usize,
    pub p_before: f64,
    pub p_after: f64,
    pub move_before: usize,
    pub move_after: usize,
}

/// Checks both conjectures for every `k <= max_chips` on the grid. Only
/// candidate counterexamples are reported; nothing is proved.
pub fn conjecture_scan(max_chips: usize, grid: &[f64]) -> Result<ConjectureReport> {
    if max_chips == 0 {
        return Err(GameError::InvalidParameters("max_chips must be at least 1".into()));
    }
    let mut report = ConjectureReport {
        max_chips,
        grid_points: grid.len(),
        checks: 0,
        counterexamples: Vec::new(),
        switches: Vec::new(),
    };
    for k in 1..=max_chips {
        let curve = nim1_solution_curve(k, grid)?;
        for point in &curve {
            let at_least_half = point.value >= 0.5 - TIE_TOLERANCE;
            let mut fail = |conjecture| {
                report.counterexamples.push(Counterexample {
                    conjecture,
                    k,
                    p: point.p,
                    value: point.value,
                    optimal_moves: point.optimal_moves.clone(),
                })
            };
            if point.p <= 0.5 {
                report.checks += 1;
                if !(at_least_half && point.optimal_moves.contains(&0)) {
                    fail(Conjecture::TakeAllBelowHalf);
                }
            }
            if k.is_power_of_two() {
                report.checks += 1;
                let move_ok = point.p < 0.5 || point.optimal_moves.contains(&(k - 1));
                if !(at_least_half && move_ok) {
                    fail(Conjecture::PowerOfTwo);
                }
            }
        }
        for pair in curve.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if let (Some(&ma), Some(&mb)) = (a.optimal_moves.first(), b.optimal_moves.first()) {
                // a full tie is not a switch of the preferred move
                let tie = |p: &CurvePoint| p.optimal_moves.len() == k && k > 1;
                if ma != mb && !tie(a) && !tie(b) {
                    report.switches.push(MoveSwitch {
                        k,
                        p_before: a.p,
                        p_after: b.p,
                        move_before: ma,
                        move_after: mb,
                    });
                }
            }
        }
    }
    Ok(report)
}
