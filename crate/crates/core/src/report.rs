//! Four-block size reports, memory estimates and their text/CSV/JSON forms.

use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::bigcount::Count;
use crate::cards::{self, CanonicalSource, CardsError, DealCounts};
use crate::gamespec::{Betting, GameSpec};
use crate::limit::{limit_game_size, LimitError};
use crate::nolimit::{nolimit_game_size, NoLimitError};
use crate::tally::RoundTally;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid game: `{key}` {reason}")]
    InvalidGame { key: &'static str, reason: String },
    #[error(transparent)]
    Cards(#[from] CardsError),
    #[error(transparent)]
    NoLimit(#[from] NoLimitError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error("report is internally inconsistent: {0}")]
    Inconsistent(String),
    #[error("malformed report data: {0}")]
    Parse(String),
}

/// The four ways a size is reported, in table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// Betting histories alone, no cards.
    BettingSequences,
    /// Histories times canonical one-player deals.
    OneSidedCanonical,
    /// Histories times one-player deals: information sets.
    OneSided,
    /// Histories times two-player deals: game states.
    TwoSided,
}

impl BlockKind {
    pub const ALL: [BlockKind; 4] = [
        BlockKind::BettingSequences,
        BlockKind::OneSidedCanonical,
        BlockKind::OneSided,
        BlockKind::TwoSided,
    ];

    pub fn key(self) -> &'static str {
        match self {
            BlockKind::BettingSequences => "betting_sequences",
            BlockKind::OneSidedCanonical => "one_sided_canonical",
            BlockKind::OneSided => "one_sided",
            BlockKind::TwoSided => "two_sided",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            BlockKind::BettingSequences => "Betting Sequences",
            BlockKind::OneSidedCanonical => "One-Sided Canonical",
            BlockKind::OneSided => "One-Sided",
            BlockKind::TwoSided => "Two-Sided",
        }
    }

    /// Name of the first column: what a decision point is multiplied into.
    pub fn unit(self) -> &'static str {
        match self {
            BlockKind::BettingSequences => "sequences",
            BlockKind::OneSidedCanonical | BlockKind::OneSided => "infosets",
            BlockKind::TwoSided => "states",
        }
    }

    pub fn from_key(key: &str) -> Option<BlockKind> {
        BlockKind::ALL.into_iter().find(|b| b.key() == key)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Row {
    /// Decision points: sequences, infosets or states depending on the block.
    pub sequences: Count,
    pub actions: Count,
    pub continuing: Count,
    pub terminal: Count,
}

impl Row {
    fn scaled(t: &RoundTally, k: &Count) -> Row {
        Row {
            sequences: t.decisions.mul(k),
            actions: t.infoset_actions.mul(k),
            continuing: t.continuing_total.mul(k),
            terminal: t.terminal.mul(k),
        }
    }

    pub fn columns(&self) -> [&Count; 4] {
        [
            &self.sequences,
            &self.actions,
            &self.continuing,
            &self.terminal,
        ]
    }

    fn columns_mut(&mut self) -> [&mut Count; 4] {
        [
            &mut self.sequences,
            &mut self.actions,
            &mut self.continuing,
            &mut self.terminal,
        ]
    }

    fn accumulate(&mut self, other: &Row) {
        for (a, b) in self.columns_mut().into_iter().zip(other.columns()) {
            *a += b;
        }
    }
}

const COLUMN_KEYS: [&str; 3] = ["actions", "continuing", "terminal"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub rounds: Vec<Row>,
    pub total: Row,
}

impl Block {
    fn new(kind: BlockKind, rounds: Vec<Row>) -> Block {
        let mut total = Row::default();
        for r in &rounds {
            total.accumulate(r);
        }
        Block {
            kind,
            rounds,
            total,
        }
    }

    pub fn column_names(&self) -> [&'static str; 4] {
        [
            self.kind.unit(),
            COLUMN_KEYS[0],
            COLUMN_KEYS[1],
            COLUMN_KEYS[2],
        ]
    }
}

/// Byte count with a binary-prefix rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryFigure {
    pub bytes: Count,
    /// Index into [`UNITS`]: bytes = value × 1024^unit.
    pub unit: usize,
    /// Bytes divided by the unit size, rounded up.
    pub value: Count,
}

pub const UNITS: [&str; 9] = ["B", "KiB", "MiB", "GiB", "TiB", "PiB", "EiB", "ZiB", "YiB"];

impl MemoryFigure {
    pub fn new(bytes: Count) -> MemoryFigure {
        // largest prefix not exceeding the byte count, capped at yotta
        let mut unit = 0;
        while unit + 1 < UNITS.len() && bytes >= Count::pow2(10 * (unit as u32 + 1)) {
            unit += 1;
        }
        let size = Count::pow2(10 * unit as u32);
        let value = bytes.ceil_div(&size).expect("unit size is positive");
        MemoryFigure { bytes, unit, value }
    }

    pub fn unit_name(&self) -> &'static str {
        UNITS[self.unit]
    }

    pub fn render(&self) -> String {
        format!(
            "{} {} ({})",
            self.value.render_decimal(false),
            self.unit_name(),
            self.value.render_scientific_fixed(4)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryEstimate {
    /// One byte per canonical infoset-action.
    pub strategy: MemoryFigure,
    /// Two 8-byte accumulators per canonical infoset-action.
    pub cfr: MemoryFigure,
}

pub fn memory_estimates(canonical_infoset_actions: &Count) -> MemoryEstimate {
    MemoryEstimate {
        strategy: MemoryFigure::new(canonical_infoset_actions.clone()),
        cfr: MemoryFigure::new(canonical_infoset_actions.mul_small(16)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub spec: GameSpec,
    pub round_names: Vec<String>,
    pub blocks: [Block; 4],
    pub deals: DealCounts,
    pub memory: MemoryEstimate,
}

impl SizeReport {
    pub fn from_tallies(spec: &GameSpec, tallies: &[RoundTally], deals: &DealCounts) -> SizeReport {
        assert_eq!(tallies.len(), deals.len(), "one deal row per betting round");
        let block = |kind: BlockKind, mult: &dyn Fn(usize) -> Count| {
            Block::new(
                kind,
                tallies
                    .iter()
                    .enumerate()
                    .map(|(i, t)| Row::scaled(t, &mult(i)))
                    .collect(),
            )
        };
        let d = &deals.rounds;
        let blocks = [
            block(BlockKind::BettingSequences, &|_| Count::one()),
            block(BlockKind::OneSidedCanonical, &|i| {
                d[i].canonical_one_player.clone()
            }),
            block(BlockKind::OneSided, &|i| d[i].one_player.clone()),
            block(BlockKind::TwoSided, &|i| d[i].two_player.clone()),
        ];
        let memory = memory_estimates(&blocks[1].total.actions);
        SizeReport {
            spec: spec.clone(),
            round_names: (0..spec.num_rounds).map(|r| spec.round_name(r)).collect(),
            blocks,
            deals: deals.clone(),
            memory,
        }
    }

    pub fn block(&self, kind: BlockKind) -> &Block {
        &self.blocks[BlockKind::ALL.iter().position(|&k| k == kind).unwrap()]
    }

    pub fn betting(&self) -> &Block {
        self.block(BlockKind::BettingSequences)
    }

    pub fn game_states(&self) -> &Count {
        &self.block(BlockKind::TwoSided).total.sequences
    }

    pub fn information_sets(&self) -> &Count {
        &self.block(BlockKind::OneSided).total.sequences
    }

    pub fn canonical_infoset_actions(&self) -> &Count {
        &self.block(BlockKind::OneSidedCanonical).total.actions
    }

    /// Re-derive the information-set total from freshly computed binomial
    /// deal counts and compare; also checks the ordering between blocks.
    pub fn verify_totals(&self) -> Result<(), ReportError> {
        let raw = cards::raw_deal_counts(&self.spec);
        let betting = self.betting();
        let mut infosets = Count::zero();
        for (row, (_, one)) in betting.rounds.iter().zip(&raw) {
            infosets += row.sequences.mul(one);
        }
        if &infosets != self.information_sets() {
            return Err(ReportError::Inconsistent(format!(
                "information sets {} but decisions x deals gives {infosets}",
                self.information_sets()
            )));
        }
        for pair in self.blocks[1..].windows(2) {
            let rows = pair[0].rounds.iter().zip(&pair[1].rounds);
            for (lo, hi) in rows.chain(std::iter::once((&pair[0].total, &pair[1].total))) {
                if lo.columns().iter().zip(hi.columns()).any(|(a, b)| *a > b) {
                    return Err(ReportError::Inconsistent(format!(
                        "{} exceeds {}",
                        pair[0].kind.title(),
                        pair[1].kind.title()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Every cell as `(block, round, column, value)`, rounds keyed by
    /// lower-case name and the total row as `total`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for block in &self.blocks {
            let names = block.column_names();
            let rows = self
                .round_keys()
                .into_iter()
                .zip(&block.rounds)
                .chain(std::iter::once(("total".into(), &block.total)));
            for (round, row) in rows {
                for (col, value) in names.iter().zip(row.columns()) {
                    out.push(Cell {
                        block: block.kind.key().to_string(),
                        round: round.clone(),
                        column: col.to_string(),
                        value: value.clone(),
                    });
                }
            }
        }
        out
    }

    fn round_keys(&self) -> Vec<String> {
        self.round_names
            .iter()
            .map(|n| n.to_lowercase().replace(' ', "_"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub block: String,
    pub round: String,
    pub column: String,
    pub value: Count,
}

/// Compute deal counts and the betting tallies for `spec` and assemble its report.
pub fn game_size(spec: &GameSpec, canonical: &CanonicalSource) -> Result<SizeReport, ReportError> {
    spec.validate().map_err(|v| ReportError::InvalidGame {
        key: v.key,
        reason: v.reason,
    })?;
    let deals = cards::deal_counts(spec, canonical)?;
    let report = match spec.betting {
        Betting::Limit { .. } => limit_game_size(spec, &deals)?,
        Betting::NoLimit => nolimit_game_size(spec, &deals)?,
    };
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}` (expected text, csv or json)"
            )),
        }
    }
}

/// Render a report after re-checking its totals. `sig_digits` only affects
/// the scientific cells of the text table.
pub fn emit(report: &SizeReport, format: Format, sig_digits: usize) -> Result<String, ReportError> {
    report.verify_totals()?;
    Ok(match format {
        Format::Text => emit_text(report, sig_digits),
        Format::Csv => emit_csv(report),
        Format::Json => emit_json(report),
    })
}

fn emit_text(report: &SizeReport, sig: usize) -> String {
    let width = 14;
    let mut out = String::new();
    for block in &report.blocks {
        let names = block.column_names();
        let _ = writeln!(out, "{}", block.kind.title());
        let head: Vec<String> = names.iter().map(|n| capitalize(n)).collect();
        let _ = writeln!(
            out,
            "  {:<8}{}",
            "Round",
            head.iter()
                .map(|h| format!("{h:>width$}"))
                .collect::<String>()
        );
        let rows = report
            .round_names
            .iter()
            .map(String::as_str)
            .zip(&block.rounds);
        for (name, row) in rows.chain(std::iter::once(("Total", &block.total))) {
            let mut line = format!("  {name:<8}");
            for (i, c) in row.columns().iter().enumerate() {
                let cell = if name == "Total" && i == 2 {
                    String::new()
                } else {
                    c.render_scientific(sig)
                };
                let _ = write!(line, "{cell:>width$}");
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out.push('\n');
    }
    let _ = writeln!(out, "Precise counts:");
    let _ = writeln!(out, "  Game states: {}", report.game_states());
    let _ = writeln!(out, "  Information Sets: {}", report.information_sets());
    let _ = writeln!(
        out,
        "  Canonical Infoset-Actions: {}",
        report.canonical_infoset_actions()
    );
    out.push('\n');
    let _ = writeln!(out, "Memory (binary prefixes, 1 KiB = 1024 B):");
    let _ = writeln!(
        out,
        "  Strategy, 1 byte per canonical infoset-action: {}",
        report.memory.strategy.render()
    );
    let _ = writeln!(
        out,
        "  CFR, 16 bytes per canonical infoset-action: {}",
        report.memory.cfr.render()
    );
    out
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next()
        .map(|f| f.to_uppercase().chain(c).collect())
        .unwrap_or_default()
}

fn emit_csv(report: &SizeReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["block", "round", "column", "value"])
        .expect("in-memory write");
    for cell in report.cells() {
        w.write_record([
            &cell.block,
            &cell.round,
            &cell.column,
            &cell.value.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

fn emit_json(report: &SizeReport) -> String {
    let mut root = Map::new();
    root.insert("rounds".into(), Value::from(report.round_names.clone()));
    for cell in report.cells() {
        let block = root
            .entry(cell.block)
            .or_insert_with(|| Value::Object(Map::new()));
        let round = block
            .as_object_mut()
            .unwrap()
            .entry(cell.round)
            .or_insert_with(|| Value::Object(Map::new()));
        round
            .as_object_mut()
            .unwrap()
            .insert(cell.column, Value::String(cell.value.to_string()));
    }
    let mut precise = Map::new();
    precise.insert(
        "game_states".into(),
        report.game_states().to_string().into(),
    );
    precise.insert(
        "information_sets".into(),
        report.information_sets().to_string().into(),
    );
    precise.insert(
        "canonical_infoset_actions".into(),
        report.canonical_infoset_actions().to_string().into(),
    );
    root.insert("precise".into(), Value::Object(precise));
    let figure = |f: &MemoryFigure| {
        let mut m = Map::new();
        m.insert("bytes".into(), f.bytes.to_string().into());
        m.insert("unit".into(), f.unit_name().into());
        m.insert("value".into(), f.value.to_string().into());
        Value::Object(m)
    };
    let mut memory = Map::new();
    memory.insert("strategy".into(), figure(&report.memory.strategy));
    memory.insert("cfr".into(), figure(&report.memory.cfr));
    root.insert("memory".into(), Value::Object(memory));
    let mut text =
        serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
    text.push('\n');
    text
}

/// Read back the cells of an emitted CSV report.
pub fn parse_csv_cells(text: &str) -> Result<Vec<Cell>, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| ReportError::Parse(e.to_string()))?;
        if rec.len() != 4 {
            return Err(ReportError::Parse(format!(
                "expected 4 fields, got {}",
                rec.len()
            )));
        }
        out.push(Cell {
            block: rec[0].to_string(),
            round: rec[1].to_string(),
            column: rec[2].to_string(),
            value: Count::parse_decimal(&rec[3]).map_err(|e| ReportError::Parse(e.to_string()))?,
        });
    }
    Ok(out)
}

/// Read back the block cells of an emitted JSON report, in document order.
pub fn parse_json_cells(text: &str) -> Result<Vec<Cell>, ReportError> {
    let root: Value = serde_json::from_str(text).map_err(|e| ReportError::Parse(e.to_string()))?;
    let root = root
        .as_object()
        .ok_or_else(|| ReportError::Parse("top level is not an object".into()))?;
    let mut out = Vec::new();
    for (block, rounds) in root
        .iter()
        .filter(|(k, _)| BlockKind::from_key(k).is_some())
    {
        let rounds = rounds
            .as_object()
            .ok_or_else(|| ReportError::Parse(format!("{block} is not an object")))?;
        for (round, cols) in rounds {
            let cols = cols
                .as_object()
                .ok_or_else(|| ReportError::Parse(format!("{block}.{round} is not an object")))?;
            for (column, v) in cols {
                let s = v.as_str().ok_or_else(|| {
                    ReportError::Parse(format!("{block}.{round}.{column} is not a string"))
                })?;
                out.push(Cell {
                    block: block.clone(),
                    round: round.clone(),
                    column: column.clone(),
                    value: Count::parse_decimal(s)
                        .map_err(|e| ReportError::Parse(e.to_string()))?,
                });
            }
        }
    }
    Ok(out)
}
