//! Single-pass dynamic program over no-limit betting configurations.
//!
//! A player's legal actions depend only on the round, the money they have
//! left, the bet they face and whether a passive action keeps the round
//! going. Histories that agree on those four values share their entire
//! future, so instead of walking histories we count how many reach each
//! configuration and push those counts forward.
//!
//! Within a round every action moves to a configuration later in a fixed
//! order: check-allowed configurations first, then the ones where a call
//! ends the round; inside each group stacks descending, and for equal
//! stacks bets ascending. One sweep in that order therefore sees every
//! configuration only after all of its predecessors, whatever the history.
//!
//! Raises from a configuration cover a contiguous range of bet sizes that
//! always runs up to the largest possible raise, which is also the last
//! index of the target row. In [`SweepMode::RangeAdd`] a raise fan-out is a
//! single addition into the target row's start-delta array that is
//! prefix-summed while that row is swept, giving O(S²) big-integer
//! additions per round. [`SweepMode::Direct`] adds to every target cell and
//! is kept as the reference path.

use std::collections::BTreeMap;
use std::time::Instant;

use log::info;
use thiserror::Error;

use crate::bigcount::Count;
use crate::cards::DealCounts;
use crate::gamespec::{Betting, Chips, GameSpec};
use crate::report::SizeReport;
use crate::tally::{RoundTally, Tally};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NoLimitError {
    #[error("invalid betting configuration {cfg:?}: {reason}")]
    InvalidConfig { cfg: BettingConfig, reason: String },
    #[error("the no-limit counter needs a no-limit game")]
    NotNoLimit,
    #[error("multi-modular count: {0}")]
    Magnitude(String),
    #[error("multi-modular reconstruction failed: {0}")]
    ResidueCheck(String),
}

/// A decision point up to strategic equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BettingConfig {
    pub round: usize,
    /// Money the acting player has left.
    pub stack: Chips,
    /// Amount the actor must add to match the opponent.
    pub bet_faced: Chips,
    /// A passive action keeps the round going (first action of a round).
    pub check_allowed: bool,
}

impl BettingConfig {
    /// Where every hand starts: the small blind acts, facing the rest of the
    /// big blind.
    pub fn game_start(spec: &GameSpec) -> Self {
        BettingConfig {
            round: 0,
            stack: spec.stack_size - spec.small_blind,
            bet_faced: spec.big_blind - spec.small_blind,
            check_allowed: true,
        }
    }

    pub fn round_opener(round: usize, stack: Chips) -> Self {
        BettingConfig {
            round,
            stack,
            bet_faced: 0,
            check_allowed: true,
        }
    }
}

/// What the opponent's passive reply leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Passive {
    /// First action of a post-flop round with no bet: check, opponent to act.
    CheckContinues,
    /// Opening limp of the first round: call, opponent may still act.
    CallContinues,
    /// Call (or check back) that closes the betting round.
    CallEndsRound,
    /// Call that leaves both players all-in; no further decisions.
    CallAllIn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionMenu {
    pub fold_legal: bool,
    pub passive: Passive,
    /// Inclusive range of nominal raise increments.
    pub raise_min: Option<Chips>,
    pub raise_max: Option<Chips>,
    /// The all-in raise offered when it is smaller than a min-raise.
    pub allin_underraise: Option<Chips>,
}

impl ActionMenu {
    /// Inclusive bounds of all raise increments, whether nominal or all-in.
    pub fn raise_bounds(&self) -> Option<(Chips, Chips)> {
        match (self.raise_min, self.raise_max, self.allin_underraise) {
            (Some(lo), Some(hi), _) => Some((lo, hi)),
            (_, _, Some(allin)) => Some((allin, allin)),
            _ => None,
        }
    }

    pub fn num_raises(&self) -> u64 {
        self.raise_bounds()
            .map_or(0, |(lo, hi)| (hi - lo + 1) as u64)
    }

    pub fn num_actions(&self) -> u64 {
        self.fold_legal as u64 + 1 + self.num_raises()
    }
}

/// Legal actions at `cfg`.
///
/// Fold is offered only against a bet. The minimum raise increment is the
/// larger of the bet faced and the big blind; the maximum puts the actor
/// all-in, and that all-in is offered even when it is below the minimum.
/// No raise is possible once the opponent is all-in (`bet_faced == stack`).
pub fn legal_actions(cfg: &BettingConfig, spec: &GameSpec) -> Result<ActionMenu, NoLimitError> {
    let invalid = |reason: &str| NoLimitError::InvalidConfig {
        cfg: *cfg,
        reason: reason.to_string(),
    };
    if cfg.round >= spec.num_rounds {
        return Err(invalid("round out of range"));
    }
    if cfg.stack > spec.stack_size {
        return Err(invalid("stack exceeds starting stack"));
    }
    if cfg.bet_faced > cfg.stack {
        return Err(invalid("bet faced exceeds the actor's stack"));
    }
    if cfg.check_allowed {
        let opener = cfg.bet_faced == 0;
        let blind_base = cfg.round == 0 && cfg == &BettingConfig::game_start(spec);
        if !opener && !blind_base {
            return Err(invalid(
                "a passive continuation only exists for round openers",
            ));
        }
    }
    let b = cfg.bet_faced;
    let m = cfg.stack;
    let rest = m - b;
    let passive = if rest == 0 {
        Passive::CallAllIn
    } else if !cfg.check_allowed {
        Passive::CallEndsRound
    } else if b == 0 {
        Passive::CheckContinues
    } else {
        Passive::CallContinues
    };
    let (mut raise_min, mut raise_max, mut allin_underraise) = (None, None, None);
    if b < m {
        let nominal = b.max(spec.big_blind);
        if nominal <= rest {
            raise_min = Some(nominal);
            raise_max = Some(rest);
        } else {
            allin_underraise = Some(rest);
        }
    }
    Ok(ActionMenu {
        fold_legal: b > 0,
        passive,
        raise_min,
        raise_max,
        allin_underraise,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    #[default]
    RangeAdd,
    Direct,
}

/// Histories entering a round.
#[derive(Debug, Clone, Copy)]
pub enum Incoming<'a, T = Count> {
    /// The single history at the start of the hand.
    GameStart,
    /// Continuing histories from the previous round, by remaining stack.
    Continuing(&'a BTreeMap<Chips, T>),
}

/// Sweep-order position: (check-allowed group first, stacks descending,
/// bets ascending).
type SweepKey = (u8, Chips, Chips);

/// Ordering instrumentation for a sweep.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepAudit {
    pub cells_visited: u64,
    pub writes: u64,
    /// Writes to a configuration at or before the sweep cursor.
    pub violations: u64,
    /// Visits that did not advance the cursor.
    pub order_regressions: u64,
    cursor: Option<SweepKey>,
}

impl SweepAudit {
    fn key(spec: &GameSpec, check_allowed: bool, stack: Chips, bet: Chips) -> SweepKey {
        (!check_allowed as u8, spec.stack_size - stack, bet)
    }

    fn visit(&mut self, key: SweepKey) {
        if self.cursor.is_some_and(|c| key <= c) {
            self.order_regressions += 1;
        }
        self.cursor = Some(key);
        self.cells_visited += 1;
    }

    fn write(&mut self, key: SweepKey, cells: u64) {
        self.writes += cells;
        if self.cursor.is_some_and(|c| key <= c) {
            self.violations += 1;
        }
    }

    fn reset_round(&mut self) {
        self.cursor = None;
    }
}

/// Reach counts for the call-ends-round configurations of one round,
/// reused from round to round.
struct Lattice<T> {
    /// `(stack, 0)`: reached only by a passive action.
    checked: Vec<T>,
    /// `raised[m][b]` for `b >= 1`: reached only by raises. Holds start
    /// deltas in range-add mode and plain counts in direct mode.
    raised: Vec<Vec<T>>,
}

impl<T: Tally> Lattice<T> {
    fn new(stack_size: Chips) -> Self {
        let rows = stack_size as usize + 1;
        Lattice {
            checked: vec![T::default(); rows],
            raised: (0..rows).map(|m| vec![T::default(); m + 1]).collect(),
        }
    }
}

struct Pass<'a, T> {
    spec: &'a GameSpec,
    last_round: bool,
    mode: SweepMode,
    lattice: &'a mut Lattice<T>,
    tally: RoundTally<T>,
    audit: Option<&'a mut SweepAudit>,
}

impl<T: Tally> Pass<'_, T> {
    fn visit(&mut self, cfg: BettingConfig, n: &T) {
        if let Some(a) = self.audit.as_deref_mut() {
            a.visit(SweepAudit::key(
                self.spec,
                cfg.check_allowed,
                cfg.stack,
                cfg.bet_faced,
            ));
        }
        let menu = legal_actions(&cfg, self.spec).expect("sweep only visits valid configurations");
        self.tally.decisions += n;
        self.tally.infoset_actions += &n.scale(menu.num_actions());
        if menu.fold_legal {
            self.tally.terminal += n;
        }
        let rest = cfg.stack - cfg.bet_faced;
        match menu.passive {
            Passive::CheckContinues | Passive::CallContinues => {
                if let Some(a) = self.audit.as_deref_mut() {
                    a.write(SweepAudit::key(self.spec, false, rest, 0), 1);
                }
                self.lattice.checked[rest as usize] += n;
            }
            Passive::CallEndsRound | Passive::CallAllIn => self.end_of_round(rest, n),
        }
        if let Some((lo, hi)) = menu.raise_bounds() {
            debug_assert_eq!(hi, rest, "raise ranges end at the target row's last index");
            if let Some(a) = self.audit.as_deref_mut() {
                a.write(
                    SweepAudit::key(self.spec, false, rest, lo),
                    (hi - lo + 1) as u64,
                );
            }
            let row = &mut self.lattice.raised[rest as usize];
            match self.mode {
                SweepMode::RangeAdd => row[lo as usize] += n,
                SweepMode::Direct => {
                    for cell in &mut row[lo as usize..=hi as usize] {
                        *cell += n;
                    }
                }
            }
        }
    }

    fn end_of_round(&mut self, stack: Chips, n: &T) {
        if self.last_round {
            self.tally.terminal += n;
        } else {
            self.tally.add_continuing(stack, n);
        }
    }

    fn sweep(&mut self, round: usize, incoming: Incoming<'_, T>) {
        match incoming {
            Incoming::GameStart => {
                debug_assert_eq!(round, 0);
                self.visit(BettingConfig::game_start(self.spec), &T::one());
            }
            Incoming::Continuing(by_stack) => {
                for (&stack, n) in by_stack.iter().rev() {
                    if n.is_zero() {
                        continue;
                    }
                    if stack == 0 {
                        // both all-in: forced actions only
                        self.end_of_round(0, n);
                    } else {
                        self.visit(BettingConfig::round_opener(round, stack), n);
                    }
                }
            }
        }

        for m in (1..=self.spec.stack_size).rev() {
            let cfg = |bet_faced| BettingConfig {
                round,
                stack: m,
                bet_faced,
                check_allowed: false,
            };
            let checked = std::mem::take(&mut self.lattice.checked[m as usize]);
            if !checked.is_zero() {
                self.visit(cfg(0), &checked);
            }
            let mut acc = T::default();
            for b in 1..=m {
                let cell = std::mem::take(&mut self.lattice.raised[m as usize][b as usize]);
                let n = match self.mode {
                    SweepMode::RangeAdd => {
                        acc += &cell;
                        &acc
                    }
                    SweepMode::Direct => &cell,
                };
                if !n.is_zero() {
                    self.visit(cfg(b), n);
                }
            }
        }
        debug_assert!(self.lattice.checked[0].is_zero());
    }
}

/// One round's sweep; see the module docs for the ordering.
pub fn run_round_pass(
    spec: &GameSpec,
    round: usize,
    incoming: Incoming<'_>,
    mode: SweepMode,
) -> Result<RoundTally, NoLimitError> {
    if spec.betting != Betting::NoLimit {
        return Err(NoLimitError::NotNoLimit);
    }
    let mut lattice = Lattice::new(spec.stack_size);
    Ok(pass(spec, round, incoming, mode, &mut lattice, None))
}

fn pass<T: Tally>(
    spec: &GameSpec,
    round: usize,
    incoming: Incoming<'_, T>,
    mode: SweepMode,
    lattice: &mut Lattice<T>,
    audit: Option<&mut SweepAudit>,
) -> RoundTally<T> {
    let mut p = Pass {
        spec,
        last_round: round + 1 == spec.num_rounds,
        mode,
        lattice,
        tally: RoundTally::default(),
        audit,
    };
    if let Some(a) = p.audit.as_deref_mut() {
        a.reset_round();
    }
    p.sweep(round, incoming);
    p.tally
}

fn run_all<T: Tally>(
    spec: &GameSpec,
    mode: SweepMode,
    mut audit: Option<&mut SweepAudit>,
) -> Result<Vec<RoundTally<T>>, NoLimitError> {
    if spec.betting != Betting::NoLimit {
        return Err(NoLimitError::NotNoLimit);
    }
    let mut lattice = Lattice::new(spec.stack_size);
    let mut tallies: Vec<RoundTally<T>> = Vec::with_capacity(spec.num_rounds);
    for round in 0..spec.num_rounds {
        let started = Instant::now();
        let tally = match tallies.last() {
            None => pass(
                spec,
                round,
                Incoming::GameStart,
                mode,
                &mut lattice,
                audit.as_deref_mut(),
            ),
            Some(prev) => pass(
                spec,
                round,
                Incoming::Continuing(&prev.continuing_by_stack),
                mode,
                &mut lattice,
                audit.as_deref_mut(),
            ),
        };
        info!(
            "{} swept in {:.2?}",
            spec.round_name(round),
            started.elapsed()
        );
        tallies.push(tally);
    }
    Ok(tallies)
}

/// Per-round betting tallies for a no-limit game.
pub fn count_betting(spec: &GameSpec, mode: SweepMode) -> Result<Vec<RoundTally>, NoLimitError> {
    run_all(spec, mode, None)
}

/// As [`count_betting`], in any [`Tally`] arithmetic.
pub fn count_betting_in<T: Tally>(
    spec: &GameSpec,
    mode: SweepMode,
) -> Result<Vec<RoundTally<T>>, NoLimitError> {
    run_all(spec, mode, None)
}

/// As [`count_betting`], recording sweep-order instrumentation.
pub fn count_betting_audited(
    spec: &GameSpec,
    mode: SweepMode,
) -> Result<(Vec<RoundTally>, SweepAudit), NoLimitError> {
    let mut audit = SweepAudit::default();
    let tallies = run_all(spec, mode, Some(&mut audit))?;
    Ok((tallies, audit))
}

/// Lattices above this many cells are counted with residues; a
/// big-integer cell costs tens of bytes, a residue eight.
pub const BIG_LATTICE_CELLS: u64 = 1 << 25;

pub fn lattice_cells(spec: &GameSpec) -> u64 {
    let rows = spec.stack_size as u64 + 1;
    rows * (rows + 1) / 2 + rows
}

/// Full size report for a no-limit game.
pub fn nolimit_game_size(spec: &GameSpec, deals: &DealCounts) -> Result<SizeReport, NoLimitError> {
    let tallies = if lattice_cells(spec) > BIG_LATTICE_CELLS {
        info!(
            "{} lattice cells: counting through residues",
            lattice_cells(spec)
        );
        // one residue lattice at a time keeps memory flat
        crate::modular::count_betting_multimodular(
            spec,
            SweepMode::RangeAdd,
            crate::exec::Execution::Sequential,
        )?
    } else {
        count_betting(spec, SweepMode::RangeAdd)?
    };
    Ok(SizeReport::from_tallies(spec, &tallies, deals))
}
