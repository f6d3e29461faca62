//! Exact size computation for heads-up limit and no-limit poker games.
//!
//! The crate counts game states, information sets and infoset-actions per
//! betting round without walking the game tree:
//!
//! * [`limit`] enumerates the per-round betting sequences of a limit game
//!   and composes them with the card-deal multipliers.
//! * [`nolimit`] runs a single-pass dynamic program over betting
//!   configurations (round, stack remaining, bet faced, whether a passive
//!   action continues the round).
//! * [`modular`] reruns that program over residues modulo word-sized
//!   primes when a big-integer lattice would not fit in memory.
//! * [`oracle`] walks the full betting tree explicitly and serves as the
//!   reference for both counters on small games.
//! * [`report`] assembles the per-block tables and memory estimates and
//!   renders them as text, CSV or JSON.
//!
//! ```
//! use gtcount_core::{cards::CanonicalSource, gamespec::KnownGame, report};
//!
//! let spec = KnownGame::Royal2x20.spec();
//! let size = report::game_size(&spec, &CanonicalSource::shipped()).unwrap();
//! assert_eq!(size.betting().total.sequences.to_string(), "21184");
//! ```

pub mod bigcount;
pub mod cards;
pub mod exec;
pub mod gamespec;
pub mod limit;
pub mod modular;
pub mod nolimit;
pub mod oracle;
pub mod report;
pub mod tally;

pub use bigcount::Count;
pub use exec::Execution;
pub use gamespec::{GameSpec, KnownGame};
