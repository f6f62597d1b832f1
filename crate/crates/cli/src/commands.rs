use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use noisy_games::games::ChompVariant;
use noisy_games::tables::{
    conjecture_scan, p_grid, reference_spot_values, sweep, verify_spot_values, write_sweep_csv, Conjecture,
    ConjectureReport, SpotCheck, SpotValue, SweepFamily,
};
use noisy_games::{estimate_win_probability, BuiltinSpec, GameError, GameSpec, SimulationReport, SolutionListing};
use serde::Serialize;

use crate::args::{Command, Family, GameArgs, ScanArgs, SimulateArgs, SolveArgs, SweepArgs, VerifyArgs};
use crate::server;

/// A command that could not run. Usage errors exit with 2, the rest with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    /// The reader of stdout went away; nothing more to report.
    OutputClosed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) | CliError::OutputClosed => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failed(msg) => f.write_str(msg),
            CliError::OutputClosed => f.write_str("output closed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::BrokenPipe => CliError::OutputClosed,
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A verification found mismatches; exit code 1.
    Mismatch,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Mismatch => 1,
        }
    }
}

/// Runs one subcommand, writing its report to `out` unless `--out` redirects it.
pub fn run(command: Command, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match command {
        Command::Solve(args) => solve_cmd(&args, out),
        Command::Sweep(args) => sweep_cmd(&args, out),
        Command::VerifyAppendix(args) => verify_cmd(&args, out),
        Command::ConjectureScan(args) => scan_cmd(&args, out),
        Command::Simulate(args) => simulate_cmd(&args, out),
        Command::Serve(args) => server::serve_blocking(&args).map(|()| Outcome::Success),
    }
}

fn missing(flag: &str, family: &str) -> CliError {
    CliError::Usage(format!("--{flag} is required for --game {family}"))
}

fn read_spec(path: &Path) -> Result<GameSpec, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
    GameSpec::from_json(&text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

impl GameArgs {
    /// The game named by `--spec` or by the family flags.
    pub fn to_spec(&self) -> Result<GameSpec, CliError> {
        if let Some(path) = &self.spec {
            return read_spec(path);
        }
        let spec = match self.game {
            None => return Err(CliError::Usage("either --spec or --game is required".into())),
            Some(Family::Nim1) => BuiltinSpec::Nim1 {
                k: self.chips.ok_or_else(|| missing("chips", "nim1"))?,
                p: self.p.ok_or_else(|| missing("p", "nim1"))?,
            },
            Some(Family::Nim) => {
                if self.piles.is_empty() {
                    return Err(missing("piles", "nim"));
                }
                BuiltinSpec::Nim { piles: self.piles.clone(), equiprobable: !self.noiseless }
            }
            Some(Family::Chomp) => {
                let p = match (self.variant, self.p) {
                    (_, Some(p)) => p,
                    (ChompVariant::N8 | ChompVariant::N4, None) => return Err(missing("p", "chomp")),
                    (_, None) => 0.0,
                };
                BuiltinSpec::Chomp {
                    n: self.rows.ok_or_else(|| missing("rows", "chomp"))?,
                    m: self.cols.ok_or_else(|| missing("cols", "chomp"))?,
                    variant: self.variant,
                    p,
                }
            }
        };
        Ok(GameSpec::Builtin(spec))
    }

    /// The family to sweep over `p`; a spec's own `p` is ignored.
    pub fn sweep_family(&self) -> Result<SweepFamily, CliError> {
        let unsupported = || CliError::Usage("sweep needs a game with a channel parameter: nim1 or chomp".into());
        if let Some(path) = &self.spec {
            return match read_spec(path)? {
                GameSpec::Builtin(BuiltinSpec::Nim1 { k, .. }) => Ok(SweepFamily::Nim1 { k }),
                GameSpec::Builtin(BuiltinSpec::Chomp { n, m, variant, .. }) => Ok(SweepFamily::Chomp { n, m, variant }),
                _ => Err(unsupported()),
            };
        }
        match self.game {
            None => Err(CliError::Usage("either --spec or --game is required".into())),
            Some(Family::Nim1) => Ok(SweepFamily::Nim1 { k: self.chips.ok_or_else(|| missing("chips", "nim1"))? }),
            Some(Family::Chomp) => Ok(SweepFamily::Chomp {
                n: self.rows.ok_or_else(|| missing("rows", "chomp"))?,
                m: self.cols.ok_or_else(|| missing("cols", "chomp"))?,
                variant: self.variant,
            }),
            Some(Family::Nim) => Err(unsupported()),
        }
    }
}

fn with_output<F>(path: Option<&Path>, out: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        None => body(out),
        Some(path) => {
            let file =
                File::create(path).map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            body(&mut writer)?;
            writer.flush().map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))
        }
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Failed(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn solve_cmd(args: &SolveArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let game = args.game.to_spec()?.resolve()?;
    let listing = game.listing(&game.solve()?);
    with_output(args.out.as_deref(), out, |w| {
        if args.json {
            write_json(w, &listing)
        } else {
            write_listing(&listing, w)
        }
    })?;
    Ok(Outcome::Success)
}

/// Start position first, then the rest by id.
pub fn write_listing(listing: &SolutionListing, out: &mut dyn Write) -> Result<(), CliError> {
    let start = listing.start_position();
    let optimal: Vec<&str> = start.optimal_moves.iter().map(|&i| start.move_labels[i].as_str()).collect();
    writeln!(out, "start {}: value {:.15}, class {:?}", start.label, start.value, start.class)?;
    if !optimal.is_empty() {
        writeln!(out, "optimal: {}", optimal.join(", "))?;
    }
    let rest = listing.positions.iter().filter(|p| p.id != listing.start);
    for position in std::iter::once(start).chain(rest) {
        writeln!(out)?;
        writeln!(out, "{}  {:?}  {:.15}", position.label, position.class, position.value)?;
        let width = position.move_labels.iter().map(String::len).max().unwrap_or(0);
        for (i, (label, value)) in position.move_labels.iter().zip(&position.move_values).enumerate() {
            let mark = if position.optimal_moves.contains(&i) { "  *" } else { "" };
            writeln!(out, "  [{i}] {label:<width$}  {value:.15}{mark}")?;
        }
    }
    Ok(())
}

fn sweep_cmd(args: &SweepArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let family = args.game.sweep_family()?;
    let rows = sweep(family, &p_grid(args.points as usize)?)?;
    let mut csv = Vec::new();
    write_sweep_csv(&rows, &mut csv)?;
    with_output(args.out.as_deref(), out, |w| Ok(w.write_all(&csv)?))?;
    Ok(Outcome::Success)
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let expected: Vec<SpotValue> = match &args.expected {
        None => reference_spot_values(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?
        }
    };
    let checks = verify_spot_values(&expected)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for check in &checks {
        writeln!(out, "{}", spot_line(check))?;
    }
    let max_err = checks.iter().map(|c| c.abs_error).fold(0.0, f64::max);
    writeln!(out, "{} of {} values match; max |error| {max_err:.1e}", checks.len() - failed, checks.len())?;
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Mismatch })
}

fn spot_line(c: &SpotCheck) -> String {
    let status = if c.passed() { "ok  " } else { "FAIL" };
    let mut line = format!(
        "{status} N_{}({:.2}) = {:.15}  |error| {:.1e}  optimal {:?}",
        c.expected.k,
        c.expected.p(),
        c.value,
        c.abs_error,
        c.optimal_moves
    );
    if !c.value_ok() {
        line.push_str(&format!("  expected value {:.15}", c.expected.value));
    }
    if !c.moves_ok() {
        line.push_str(&format!("  expected optimal {:?}", c.expected.optimal_moves));
    }
    line
}

fn scan_cmd(args: &ScanArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let report = conjecture_scan(args.max_chips as usize, &p_grid(args.points as usize)?)?;
    if args.json {
        write_json(out, &report)?;
    } else {
        write_scan(&report, out)?;
    }
    Ok(Outcome::Success)
}

fn conjecture_name(c: Conjecture) -> &'static str {
    match c {
        Conjecture::TakeAllBelowHalf => "take-all for p <= 1/2",
        Conjecture::PowerOfTwo => "power-of-two pile",
    }
}

fn write_scan(report: &ConjectureReport, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "k = 1..{}, {} grid points, {} checks", report.max_chips, report.grid_points, report.checks)?;
    if report.counterexamples.is_empty() {
        writeln!(out, "counterexample candidates: none")?;
    } else {
        writeln!(out, "counterexample candidates: {}", report.counterexamples.len())?;
        for c in &report.counterexamples {
            writeln!(
                out,
                "  {}: k={} p={} value {:.15} optimal {:?}",
                conjecture_name(c.conjecture),
                c.k,
                c.p,
                c.value,
                c.optimal_moves
            )?;
        }
    }
    writeln!(out, "optimal move switches:")?;
    for s in &report.switches {
        writeln!(out, "  k={:<3} p {} -> {}: {} -> {}", s.k, s.p_before, s.p_after, s.move_before, s.move_after)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SimulationSummary {
    #[serde(flatten)]
    report: SimulationReport,
    seed: u64,
    solved_value: f64,
    z_score: f64,
}

fn simulate_cmd(args: &SimulateArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let game = args.game.to_spec()?.resolve()?;
    let solved = game.solve()?;
    let report = estimate_win_probability(&game.graph, &game.model, args.games, args.seed)?;
    let summary = SimulationSummary {
        report,
        seed: args.seed,
        solved_value: solved.start_value(),
        z_score: report.z_score(solved.start_value()),
    };
    if args.json {
        write_json(out, &summary)?;
    } else {
        writeln!(out, "games      {}", report.games_played)?;
        writeln!(out, "wins       {}", report.first_player_wins)?;
        writeln!(out, "estimate   {:.6} (standard error {:.6})", report.estimate, report.standard_error)?;
        writeln!(out, "solved     {:.15}", summary.solved_value)?;
        writeln!(out, "deviation  {:.2} standard errors", summary.z_score)?;
    }
    Ok(Outcome::Success)
}
