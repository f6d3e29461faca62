//! Limit betting: per-round sequence enumeration and full-game sizes.
//!
//! With fixed bet sizes and stacks deep enough for every cap, a round's
//! betting is independent of earlier rounds, so each round is enumerated on
//! its own and chained by multiplying with the number of sequences that
//! continue from the rounds before.

use thiserror::Error;

use crate::bigcount::Count;
use crate::cards::DealCounts;
use crate::gamespec::GameSpec;
use crate::report::SizeReport;
use crate::tally::RoundTally;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("the limit counter needs a limit game")]
    NotLimit,
}

/// Position inside a limit betting round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LimitState {
    /// Bets made this round, the first-round blind included.
    pub bets: u32,
    pub facing_bet: bool,
    /// No action yet this round: a passive reply lets the opponent act.
    pub first_action: bool,
}

impl LimitState {
    pub fn round_start(first_round: bool) -> Self {
        LimitState {
            bets: first_round as u32,
            facing_bet: first_round,
            first_action: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitAction {
    Fold,
    Call,
    Raise,
}

impl LimitAction {
    pub fn symbol(self) -> char {
        match self {
            LimitAction::Fold => 'f',
            LimitAction::Call => 'c',
            LimitAction::Raise => 'r',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitOutcome {
    Continue(LimitState),
    Fold,
    RoundOver,
}

/// Legal actions in order fold, check/call, bet/raise. Folding is offered
/// only against a bet; raising only below the round's cap.
pub fn limit_actions(state: &LimitState, max_bets: u32) -> Vec<LimitAction> {
    let mut out = Vec::with_capacity(3);
    if state.facing_bet {
        out.push(LimitAction::Fold);
    }
    out.push(LimitAction::Call);
    if state.bets < max_bets {
        out.push(LimitAction::Raise);
    }
    out
}

pub fn apply_limit_action(state: &LimitState, action: LimitAction) -> LimitOutcome {
    match action {
        LimitAction::Fold => LimitOutcome::Fold,
        LimitAction::Call if state.first_action => LimitOutcome::Continue(LimitState {
            bets: state.bets,
            facing_bet: false,
            first_action: false,
        }),
        LimitAction::Call => LimitOutcome::RoundOver,
        LimitAction::Raise => LimitOutcome::Continue(LimitState {
            bets: state.bets + 1,
            facing_bet: true,
            first_action: false,
        }),
    }
}

/// Betting sequences of one limit round.
///
/// Decision points are named by the actions leading to them (`_` for the
/// round's first decision); infoset-actions as `prefix-action`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitRoundProfile {
    pub decisions: Count,
    pub decision_actions: Count,
    pub continuing: Count,
    pub terminal: Count,
    pub decision_seqs: Vec<String>,
    pub action_seqs: Vec<String>,
    pub continuing_seqs: Vec<String>,
    pub terminal_seqs: Vec<String>,
}

pub fn enumerate_limit_round(
    max_bets: u32,
    first_round: bool,
    last_round: bool,
) -> LimitRoundProfile {
    let mut profile = LimitRoundProfile {
        decisions: Count::zero(),
        decision_actions: Count::zero(),
        continuing: Count::zero(),
        terminal: Count::zero(),
        decision_seqs: Vec::new(),
        action_seqs: Vec::new(),
        continuing_seqs: Vec::new(),
        terminal_seqs: Vec::new(),
    };
    walk_round(
        LimitState::round_start(first_round),
        String::new(),
        max_bets,
        last_round,
        &mut profile,
    );
    profile.decisions = Count::from(profile.decision_seqs.len());
    profile.decision_actions = Count::from(profile.action_seqs.len());
    profile.continuing = Count::from(profile.continuing_seqs.len());
    profile.terminal = Count::from(profile.terminal_seqs.len());
    profile
}

fn walk_round(
    state: LimitState,
    history: String,
    max_bets: u32,
    last: bool,
    out: &mut LimitRoundProfile,
) {
    out.decision_seqs.push(if history.is_empty() {
        "_".to_string()
    } else {
        history.clone()
    });
    for action in limit_actions(&state, max_bets) {
        out.action_seqs
            .push(format!("{history}-{}", action.symbol()));
        let mut next = history.clone();
        next.push(action.symbol());
        match apply_limit_action(&state, action) {
            LimitOutcome::Continue(s) => walk_round(s, next, max_bets, last, out),
            LimitOutcome::Fold => out.terminal_seqs.push(next),
            LimitOutcome::RoundOver if last => out.terminal_seqs.push(next),
            LimitOutcome::RoundOver => out.continuing_seqs.push(next),
        }
    }
}

/// Cumulative per-round betting tallies for a limit game.
pub fn limit_betting_tallies(spec: &GameSpec) -> Result<Vec<RoundTally>, LimitError> {
    let max_bets = spec.max_bets().ok_or(LimitError::NotLimit)?;
    let mut reaching = Count::one();
    let mut out = Vec::with_capacity(spec.num_rounds);
    for (round, &cap) in max_bets.iter().enumerate() {
        let last = round + 1 == spec.num_rounds;
        let p = enumerate_limit_round(cap, round == 0, last);
        let continuing_total = p.continuing.mul(&reaching);
        out.push(RoundTally {
            decisions: p.decisions.mul(&reaching),
            infoset_actions: p.decision_actions.mul(&reaching),
            terminal: p.terminal.mul(&reaching),
            continuing_total: continuing_total.clone(),
            continuing_by_stack: Default::default(),
        });
        reaching = continuing_total;
    }
    Ok(out)
}

pub fn limit_game_size(spec: &GameSpec, deals: &DealCounts) -> Result<SizeReport, LimitError> {
    let tallies = limit_betting_tallies(spec)?;
    Ok(SizeReport::from_tallies(spec, &tallies, deals))
}
