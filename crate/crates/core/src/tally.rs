//! Per-round betting tallies shared by the counters and the oracle.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::AddAssign;

use serde::Serialize;

use crate::bigcount::Count;
use crate::gamespec::Chips;

/// What the betting sweep counts with: exact integers, residues modulo a
/// prime, or floating-point magnitudes.
pub trait Tally:
    Clone + Default + PartialEq + Debug + Send + Sync + for<'a> AddAssign<&'a Self>
{
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, k: u64) -> Self;
}

impl Tally for Count {
    fn one() -> Self {
        Count::one()
    }

    fn is_zero(&self) -> bool {
        Count::is_zero(self)
    }

    fn scale(&self, k: u64) -> Self {
        self.mul_small(k)
    }
}

impl Tally for f64 {
    fn one() -> Self {
        1.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn scale(&self, k: u64) -> Self {
        self * k as f64
    }
}

/// Betting-sequence counts for one round.
///
/// All counts are cumulative histories: a decision on the turn is counted
/// once for every distinct history (including earlier rounds) that reaches
/// it. Histories in which both players are already all-in pass through
/// later rounds without decisions; they are reported as continuing until
/// the last round, where they become terminal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RoundTally<T = Count> {
    pub decisions: T,
    pub infoset_actions: T,
    pub terminal: T,
    pub continuing_total: T,
    /// Continuing histories keyed by the (equal) stack each player has left.
    /// Empty for limit games, where stacks are not tracked.
    pub continuing_by_stack: BTreeMap<Chips, T>,
}

impl<T: Tally> RoundTally<T> {
    /// `(decisions, actions, continuing, terminal)`
    pub fn columns(&self) -> [&T; 4] {
        [
            &self.decisions,
            &self.infoset_actions,
            &self.continuing_total,
            &self.terminal,
        ]
    }

    pub fn add_continuing(&mut self, stack: Chips, n: &T) {
        self.continuing_total += n;
        *self.continuing_by_stack.entry(stack).or_default() += n;
    }

    /// Apply `f` to every count.
    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> RoundTally<U> {
        RoundTally {
            decisions: f(&self.decisions),
            infoset_actions: f(&self.infoset_actions),
            terminal: f(&self.terminal),
            continuing_total: f(&self.continuing_total),
            continuing_by_stack: self
                .continuing_by_stack
                .iter()
                .map(|(&k, v)| (k, f(v)))
                .collect(),
        }
    }
}

impl RoundTally {
    /// Field-by-field difference description, `None` when equal.
    pub fn diff(&self, other: &RoundTally) -> Option<String> {
        let names = ["decisions", "infoset_actions", "continuing", "terminal"];
        let mut out = Vec::new();
        for ((name, a), b) in names.iter().zip(self.columns()).zip(other.columns()) {
            if a != b {
                out.push(format!("{name}: {a} vs {b}"));
            }
        }
        if self.continuing_by_stack != other.continuing_by_stack {
            out.push("continuing_by_stack differs".to_string());
        }
        if out.is_empty() {
            None
        } else {
            Some(out.join(", "))
        }
    }
}
