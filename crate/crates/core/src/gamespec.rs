//! Poker variant parameterization and the game-definition file format.
//!
//! A definition file is UTF-8 text made of `key = value` pairs, one per line
//! (several pairs may share a line when separated by commas). `#` starts a
//! comment. Recognized keys:
//!
//! | key        | value                                   |
//! |------------|-----------------------------------------|
//! | `betting`  | `limit` or `nolimit`                    |
//! | `blinds`   | small blind and big blind               |
//! | `stack`    | per-player stack, reset every hand      |
//! | `rounds`   | number of betting rounds                |
//! | `board`    | public cards dealt per round            |
//! | `suits`    | suits in the deck                       |
//! | `ranks`    | ranks per suit                          |
//! | `hole`     | private cards per player                |
//! | `max_bets` | per-round bet cap (limit games only)    |
//!
//! All amounts are whole currency units.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// Whole currency units.
pub type Chips = u32;

/// Largest rank count the card enumerator supports (one bit per rank).
pub const MAX_RANKS: u32 = 64;
/// Largest suit count accepted.
pub const MAX_SUITS: u32 = 16;

const KEYS: [&str; 9] = [
    "betting", "blinds", "stack", "rounds", "board", "suits", "ranks", "hole", "max_bets",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Betting {
    /// Fixed-size bets; `max_bets[r]` caps the bets in round `r`, and in the
    /// first round the big blind counts as one of them.
    Limit { max_bets: Vec<u32> },
    #[serde(rename = "nolimit")]
    NoLimit,
}

impl Betting {
    pub fn is_limit(&self) -> bool {
        matches!(self, Betting::Limit { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameSpec {
    pub betting: Betting,
    pub small_blind: Chips,
    pub big_blind: Chips,
    pub stack_size: Chips,
    pub num_rounds: usize,
    pub board_cards: Vec<u32>,
    pub num_hole_cards: u32,
    pub num_suits: u32,
    pub num_ranks: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameSpecError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: expected `key = value`, found {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: missing required key `{key}`")]
    MissingKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("line {line}: `{key}` violates game invariant: {reason}")]
    Invariant {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("unknown builtin game `{0}`")]
    UnknownGame(String),
}

/// An invariant violation detected on an assembled spec, attributed to a key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub key: &'static str,
    pub reason: String,
}

impl GameSpec {
    pub fn deck_size(&self) -> u32 {
        self.num_suits * self.num_ranks
    }

    pub fn max_bets(&self) -> Option<&[u32]> {
        match &self.betting {
            Betting::Limit { max_bets } => Some(max_bets),
            Betting::NoLimit => None,
        }
    }

    /// Human-readable round label: Preflop/Flop/Turn/River for hold'em-style
    /// schedules, `Round k` otherwise.
    pub fn round_name(&self, round: usize) -> String {
        const HOLDEM: [&str; 4] = ["Preflop", "Flop", "Turn", "River"];
        if self.board_cards.first() == Some(&0) && round < HOLDEM.len() {
            HOLDEM[round].to_string()
        } else {
            format!("Round {}", round + 1)
        }
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let fail = |key, reason: String| Err(Violation { key, reason });
        if self.small_blind == 0 {
            return fail("blinds", "small blind must be positive".into());
        }
        if self.small_blind > self.big_blind {
            return fail(
                "blinds",
                format!(
                    "small blind {} exceeds big blind {}",
                    self.small_blind, self.big_blind
                ),
            );
        }
        if self.big_blind > self.stack_size {
            return fail(
                "stack",
                format!(
                    "big blind {} exceeds stack size {}",
                    self.big_blind, self.stack_size
                ),
            );
        }
        if self.num_rounds == 0 {
            return fail("rounds", "at least one round is required".into());
        }
        if self.board_cards.len() != self.num_rounds {
            return fail(
                "board",
                format!(
                    "{} entries for {} rounds",
                    self.board_cards.len(),
                    self.num_rounds
                ),
            );
        }
        if self.num_hole_cards == 0 {
            return fail("hole", "at least one hole card is required".into());
        }
        if self.num_suits == 0 || self.num_suits > MAX_SUITS {
            return fail("suits", format!("must be between 1 and {MAX_SUITS}"));
        }
        if self.num_ranks < 2 || self.num_ranks > MAX_RANKS {
            return fail("ranks", format!("must be between 2 and {MAX_RANKS}"));
        }
        let needed = 2 * self.num_hole_cards as u64
            + self.board_cards.iter().map(|&b| b as u64).sum::<u64>();
        if needed > self.deck_size() as u64 {
            return fail(
                "board",
                format!(
                    "{} cards dealt from a {}-card deck",
                    needed,
                    self.deck_size()
                ),
            );
        }
        if let Betting::Limit { max_bets } = &self.betting {
            if max_bets.len() != self.num_rounds {
                return fail(
                    "max_bets",
                    format!("{} entries for {} rounds", max_bets.len(), self.num_rounds),
                );
            }
            if max_bets.contains(&0) {
                return fail("max_bets", "every round allows at least one bet".into());
            }
        }
        Ok(())
    }

    /// Render in the canonical definition-file layout.
    pub fn to_definition(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let kind = if self.betting.is_limit() {
            "limit"
        } else {
            "nolimit"
        };
        writeln!(f, "betting = {kind}")?;
        writeln!(f, "blinds = {} {}", self.small_blind, self.big_blind)?;
        writeln!(f, "stack = {}", self.stack_size)?;
        writeln!(f, "rounds = {}", self.num_rounds)?;
        writeln!(f, "board = {}", join(&self.board_cards))?;
        writeln!(f, "suits = {}", self.num_suits)?;
        writeln!(f, "ranks = {}", self.num_ranks)?;
        writeln!(f, "hole = {}", self.num_hole_cards)?;
        if let Betting::Limit { max_bets } = &self.betting {
            writeln!(f, "max_bets = {}", join(max_bets))?;
        }
        Ok(())
    }
}

impl FromStr for GameSpec {
    type Err = GameSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_game_file(s)
    }
}

struct Entry {
    line: usize,
    value: String,
}

fn ints(key: &str, entry: &Entry) -> Result<Vec<u32>, GameSpecError> {
    entry
        .value
        .split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| GameSpecError::BadValue {
                line: entry.line,
                key: key.to_string(),
                reason: format!("{tok:?} is not a nonnegative integer"),
            })
        })
        .collect()
}

fn single(key: &str, entry: &Entry) -> Result<u32, GameSpecError> {
    let v = ints(key, entry)?;
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(GameSpecError::BadValue {
            line: entry.line,
            key: key.to_string(),
            reason: format!("expected one integer, found {:?}", entry.value),
        }),
    }
}

/// Parse and validate a game-definition file.
pub fn parse_game_file(text: &str) -> Result<GameSpec, GameSpecError> {
    let mut entries: HashMap<&'static str, Entry> = HashMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("");
        for item in content.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| GameSpecError::Malformed {
                    line,
                    text: item.to_string(),
                })?;
            let key = key.trim();
            let known =
                KEYS.iter()
                    .find(|k| **k == key)
                    .ok_or_else(|| GameSpecError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })?;
            let entry = Entry {
                line,
                value: value.trim().to_string(),
            };
            if entries.insert(known, entry).is_some() {
                return Err(GameSpecError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
        }
    }

    // Blind/stack consistency is reported before missing keys so a partial
    // file with contradictory amounts names the contradiction.
    if let (Some(b), Some(s)) = (entries.get("blinds"), entries.get("stack")) {
        if let (Ok(blinds), Ok(stack)) = (ints("blinds", b), single("stack", s)) {
            if blinds.len() == 2 && blinds[1] > stack {
                return Err(GameSpecError::Invariant {
                    line: s.line,
                    key: "stack".into(),
                    reason: format!("big blind {} exceeds stack size {}", blinds[1], stack),
                });
            }
        }
    }

    let missing = |key: &str| GameSpecError::MissingKey {
        line: last_line,
        key: key.to_string(),
    };
    let get = |key: &'static str| entries.get(key).ok_or_else(|| missing(key));

    let betting_entry = get("betting")?;
    let is_limit = match betting_entry.value.as_str() {
        "limit" => true,
        "nolimit" => false,
        other => {
            return Err(GameSpecError::BadValue {
                line: betting_entry.line,
                key: "betting".into(),
                reason: format!("{other:?} is neither `limit` nor `nolimit`"),
            })
        }
    };
    let blinds_entry = get("blinds")?;
    let blinds = ints("blinds", blinds_entry)?;
    if blinds.len() != 2 {
        return Err(GameSpecError::BadValue {
            line: blinds_entry.line,
            key: "blinds".into(),
            reason: "expected small and big blind".into(),
        });
    }
    let stack_size = single("stack", get("stack")?)?;
    let num_rounds = single("rounds", get("rounds")?)? as usize;
    let board_cards = ints("board", get("board")?)?;
    let num_suits = single("suits", get("suits")?)?;
    let num_ranks = single("ranks", get("ranks")?)?;
    let num_hole_cards = single("hole", get("hole")?)?;
    let betting = match (is_limit, entries.get("max_bets")) {
        (true, Some(e)) => Betting::Limit {
            max_bets: ints("max_bets", e)?,
        },
        (true, None) => return Err(missing("max_bets")),
        (false, Some(e)) => {
            return Err(GameSpecError::Invariant {
                line: e.line,
                key: "max_bets".into(),
                reason: "only limit games take a bet cap".into(),
            })
        }
        (false, None) => Betting::NoLimit,
    };

    let spec = GameSpec {
        betting,
        small_blind: blinds[0],
        big_blind: blinds[1],
        stack_size,
        num_rounds,
        board_cards,
        num_hole_cards,
        num_suits,
        num_ranks,
    };
    spec.validate().map_err(|v| GameSpecError::Invariant {
        line: entries.get(v.key).map_or(last_line, |e| e.line),
        key: v.key.to_string(),
        reason: v.reason,
    })?;
    Ok(spec)
}

/// Games with shipped definition files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnownGame {
    AcpcLimitTexas,
    AcpcNl2007,
    AcpcNl2009,
    AcpcNl2010,
    Royal2x20,
}

impl KnownGame {
    pub const ALL: [KnownGame; 5] = [
        KnownGame::AcpcLimitTexas,
        KnownGame::AcpcNl2007,
        KnownGame::AcpcNl2009,
        KnownGame::AcpcNl2010,
        KnownGame::Royal2x20,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KnownGame::AcpcLimitTexas => "acpc-limit-texas",
            KnownGame::AcpcNl2007 => "acpc-nl-2007",
            KnownGame::AcpcNl2009 => "acpc-nl-2009",
            KnownGame::AcpcNl2010 => "acpc-nl-2010",
            KnownGame::Royal2x20 => "royal-2-20",
        }
    }

    pub fn definition(self) -> &'static str {
        match self {
            KnownGame::AcpcLimitTexas => include_str!("../games/acpc-limit-texas.game"),
            KnownGame::AcpcNl2007 => include_str!("../games/acpc-nl-2007.game"),
            KnownGame::AcpcNl2009 => include_str!("../games/acpc-nl-2009.game"),
            KnownGame::AcpcNl2010 => include_str!("../games/acpc-nl-2010.game"),
            KnownGame::Royal2x20 => include_str!("../games/royal-2-20.game"),
        }
    }

    pub fn spec(self) -> GameSpec {
        parse_game_file(self.definition()).expect("shipped game definitions are valid")
    }
}

impl fmt::Display for KnownGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KnownGame {
    type Err = GameSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KnownGame::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| GameSpecError::UnknownGame(s.to_string()))
    }
}

pub fn builtin(name: &str) -> Result<GameSpec, GameSpecError> {
    name.parse::<KnownGame>().map(KnownGame::spec)
}
