//! Explicit betting-tree walker used as the reference for both counters.
//!
//! The walk tracks each player's committed money directly and visits every
//! betting history one at a time, so it is only practical for small games.
//! Card dealing is not part of the walk; deal multipliers are applied to
//! its tallies exactly as they are to the counters'.

use std::collections::HashMap;

use thiserror::Error;

use crate::bigcount::Count;
use crate::gamespec::{Betting, Chips, GameSpec};
use crate::limit::{apply_limit_action, limit_actions, LimitOutcome, LimitState};
use crate::nolimit::{legal_actions, BettingConfig, Passive};
use crate::tally::RoundTally;

pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("betting tree has an estimated {estimate:.3e} nodes, above the limit of {limit}")]
    TooLarge { estimate: f64, limit: u64 },
}

/// A no-limit decision point as the walker sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkState {
    pub round: usize,
    pub committed: [Chips; 2],
    pub actor: usize,
    pub check_allowed: bool,
}

impl WalkState {
    pub fn bet_faced(&self) -> Chips {
        self.committed[1 - self.actor] - self.committed[self.actor]
    }

    pub fn config(&self, spec: &GameSpec) -> BettingConfig {
        BettingConfig {
            round: self.round,
            stack: spec.stack_size - self.committed[self.actor],
            bet_faced: self.bet_faced(),
            check_allowed: self.check_allowed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRun {
    pub tallies: Vec<RoundTally>,
    /// Decision nodes plus history endpoints.
    pub nodes_visited: u64,
}

struct Walker<'a> {
    spec: &'a GameSpec,
    tallies: Vec<RoundTally>,
    nodes: u64,
}

impl Walker<'_> {
    fn last(&self, round: usize) -> bool {
        round + 1 == self.spec.num_rounds
    }

    fn terminal(&mut self, round: usize) {
        self.nodes += 1;
        self.tallies[round].terminal += 1u64;
    }

    /// Round closed with equal commitments.
    fn end_round(&mut self, round: usize, committed: Chips) {
        if self.last(round) {
            self.terminal(round);
            return;
        }
        let left = self.spec.stack_size - committed;
        self.tallies[round].add_continuing(left, &Count::one());
        if left == 0 {
            // all-in: the remaining rounds hold only forced actions
            self.end_round(round + 1, committed);
        } else {
            let next = WalkState {
                round: round + 1,
                committed: [committed; 2],
                actor: 1,
                check_allowed: true,
            };
            self.walk_nolimit(next);
        }
    }

    fn walk_nolimit(&mut self, state: WalkState) {
        let spec = self.spec;
        let menu = legal_actions(&state.config(spec), spec).expect("walker states are valid");
        self.nodes += 1;
        let round = state.round;
        self.tallies[round].decisions += 1u64;
        self.tallies[round].infoset_actions += menu.num_actions();
        let me = state.actor;
        let opp = 1 - me;
        if menu.fold_legal {
            self.terminal(round);
        }
        let matched = state.committed[opp];
        match menu.passive {
            Passive::CheckContinues | Passive::CallContinues => {
                let mut committed = state.committed;
                committed[me] = matched;
                self.walk_nolimit(WalkState {
                    round,
                    committed,
                    actor: opp,
                    check_allowed: false,
                });
            }
            Passive::CallEndsRound | Passive::CallAllIn => self.end_round(round, matched),
        }
        if let Some((lo, hi)) = menu.raise_bounds() {
            for raise in lo..=hi {
                let mut committed = state.committed;
                committed[me] = matched + raise;
                self.walk_nolimit(WalkState {
                    round,
                    committed,
                    actor: opp,
                    check_allowed: false,
                });
            }
        }
    }

    fn walk_limit(&mut self, round: usize, state: LimitState) {
        let caps = self.spec.max_bets().expect("limit game");
        let actions = limit_actions(&state, caps[round]);
        self.nodes += 1;
        self.tallies[round].decisions += 1u64;
        self.tallies[round].infoset_actions += actions.len() as u64;
        for action in actions {
            match apply_limit_action(&state, action) {
                LimitOutcome::Continue(next) => self.walk_limit(round, next),
                LimitOutcome::Fold => self.terminal(round),
                LimitOutcome::RoundOver if self.last(round) => self.terminal(round),
                LimitOutcome::RoundOver => {
                    self.tallies[round].continuing_total += 1u64;
                    self.walk_limit(round + 1, LimitState::round_start(false));
                }
            }
        }
    }
}

/// Node count of the no-limit betting tree, by memoized recursion in
/// floating point. Gives up (returning infinity) when the reachable
/// configurations get too numerous to memoize.
pub fn estimate_nodes(spec: &GameSpec) -> f64 {
    const MEMO_LIMIT: usize = 4_000_000;
    struct Est<'a> {
        spec: &'a GameSpec,
        memo: HashMap<BettingConfig, f64>,
        overflow: bool,
    }
    impl Est<'_> {
        fn end_round(&mut self, round: usize, left: Chips) -> f64 {
            if round + 1 == self.spec.num_rounds {
                1.0
            } else if left == 0 {
                self.end_round(round + 1, 0)
            } else {
                self.node(BettingConfig::round_opener(round + 1, left))
            }
        }

        fn node(&mut self, cfg: BettingConfig) -> f64 {
            if let Some(&v) = self.memo.get(&cfg) {
                return v;
            }
            if self.overflow || self.memo.len() > MEMO_LIMIT {
                self.overflow = true;
                return f64::INFINITY;
            }
            let menu = legal_actions(&cfg, self.spec).expect("valid");
            let rest = cfg.stack - cfg.bet_faced;
            let mut total = 1.0 + menu.fold_legal as u8 as f64;
            total += match menu.passive {
                Passive::CheckContinues | Passive::CallContinues => self.node(BettingConfig {
                    round: cfg.round,
                    stack: rest,
                    bet_faced: 0,
                    check_allowed: false,
                }),
                _ => self.end_round(cfg.round, rest),
            };
            if let Some((lo, hi)) = menu.raise_bounds() {
                for r in lo..=hi {
                    total += self.node(BettingConfig {
                        round: cfg.round,
                        stack: rest,
                        bet_faced: r,
                        check_allowed: false,
                    });
                }
            }
            self.memo.insert(cfg, total);
            total
        }
    }
    let mut est = Est {
        spec,
        memo: HashMap::new(),
        overflow: false,
    };
    let n = est.node(BettingConfig::game_start(spec));
    if est.overflow {
        f64::INFINITY
    } else {
        n
    }
}

/// Walk every betting history of `spec`, refusing no-limit games whose
/// estimated tree exceeds `max_nodes`. Limit games are always walked.
pub fn walk_betting(spec: &GameSpec, max_nodes: u64) -> Result<OracleRun, OracleError> {
    let mut walker = Walker {
        spec,
        tallies: vec![RoundTally::default(); spec.num_rounds],
        nodes: 0,
    };
    match spec.betting {
        Betting::Limit { .. } => walker.walk_limit(0, LimitState::round_start(true)),
        Betting::NoLimit => {
            let estimate = estimate_nodes(spec);
            if estimate.is_nan() || estimate > max_nodes as f64 {
                return Err(OracleError::TooLarge {
                    estimate,
                    limit: max_nodes,
                });
            }
            let start = WalkState {
                round: 0,
                committed: [spec.small_blind, spec.big_blind],
                actor: 0,
                check_allowed: true,
            };
            walker.walk_nolimit(start);
        }
    }
    Ok(OracleRun {
        tallies: walker.tallies,
        nodes_visited: walker.nodes,
    })
}
