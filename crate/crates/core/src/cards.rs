//! Card-deal combinatorics and suit-isomorphism counting.
//!
//! A one-player view is the player's hole cards plus the public cards of
//! each round so far, where every group is an unordered set but the groups
//! themselves are distinguishable (the turn card is not a flop card). Two
//! views are isomorphic when a permutation of suits maps one onto the other.
//!
//! The canonical representative of an orbit is the view whose per-suit
//! signatures are sorted in non-increasing order. A suit's signature is the
//! tuple of rank bitmasks it contributes to each group, hole first. Exactly
//! one member of every orbit has sorted signatures, so the number of orbits
//! equals the number of views that are already sorted; counting those needs
//! no orbit storage.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use log::{info, warn};
use thiserror::Error;

use crate::bigcount::Count;
use crate::exec::Execution;
use crate::gamespec::GameSpec;

#[derive(Debug, Error)]
pub enum CardsError {
    #[error("binomial({n}, {k}) is undefined")]
    Binomial { n: i64, k: i64 },
    #[error("round {round} out of range for a {rounds}-round game")]
    Round { round: usize, rounds: usize },
    #[error("canonical cache line {line}: {reason}")]
    CacheFormat { line: usize, reason: String },
    #[error("reading canonical cache {path}: {source}")]
    CacheIo {
        path: String,
        source: std::io::Error,
    },
}

/// Exact `C(n, k)`; negative arguments and `k > n` are rejected.
pub fn binomial(n: i64, k: i64) -> Result<Count, CardsError> {
    if n < 0 || k < 0 || k > n {
        return Err(CardsError::Binomial { n, k });
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    // acc * (n - i) is always divisible by (i + 1) after the multiply
    for i in 0..k {
        acc = acc
            .mul_small((n - i) as u64)
            .floor_div(&Count::from((i + 1) as u64))
            .expect("nonzero");
    }
    Ok(acc)
}

fn binom(n: u32, k: u32) -> Count {
    binomial(n as i64, k as i64).expect("validated spec keeps binomials in range")
}

/// Deal multipliers for one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundDeals {
    pub two_player: Count,
    pub one_player: Count,
    pub canonical_one_player: Count,
}

/// Per-round deal multipliers: the chance branching applied to betting tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealCounts {
    pub rounds: Vec<RoundDeals>,
}

impl DealCounts {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }
}

/// Total two-player and one-player deal counts per round, in that order.
pub fn raw_deal_counts(spec: &GameSpec) -> Vec<(Count, Count)> {
    let deck = spec.deck_size();
    let hole = spec.num_hole_cards;
    let mut two = binom(deck, hole).mul(&binom(deck - hole, hole));
    let mut one = binom(deck, hole);
    let mut left_two = deck - 2 * hole;
    let mut left_one = deck - hole;
    let mut out = Vec::with_capacity(spec.num_rounds);
    for &board in &spec.board_cards {
        two = two.mul(&binom(left_two, board));
        one = one.mul(&binom(left_one, board));
        left_two -= board;
        left_one -= board;
        out.push((two.clone(), one.clone()));
    }
    out
}

/// Where canonical one-player counts come from.
#[derive(Debug, Clone)]
pub enum CanonicalSource {
    /// Look up the cache; enumerate on a miss.
    Cache(CanonicalCache),
    /// Always enumerate.
    Compute(Execution),
}

impl CanonicalSource {
    pub fn shipped() -> Self {
        CanonicalSource::Cache(CanonicalCache::shipped())
    }

    pub fn canonical_count(&self, spec: &GameSpec, round: usize) -> Result<Count, CardsError> {
        match self {
            CanonicalSource::Cache(cache) => match cache.lookup(spec, round) {
                Some(c) => Ok(c.clone()),
                None => {
                    warn!("no cached canonical count for round {round}; enumerating");
                    canonical_count_with(spec, round, Execution::default())
                }
            },
            CanonicalSource::Compute(exec) => canonical_count_with(spec, round, *exec),
        }
    }
}

/// Full deal table, canonical column included.
pub fn deal_counts(spec: &GameSpec, canonical: &CanonicalSource) -> Result<DealCounts, CardsError> {
    let raw = raw_deal_counts(spec);
    let mut rounds = Vec::with_capacity(raw.len());
    for (round, (two_player, one_player)) in raw.into_iter().enumerate() {
        let canonical_one_player = canonical.canonical_count(spec, round)?;
        rounds.push(RoundDeals {
            two_player,
            one_player,
            canonical_one_player,
        });
    }
    Ok(DealCounts { rounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Card {
    pub rank: u8,
    pub suit: u8,
}

impl Card {
    pub fn new(rank: u8, suit: u8) -> Self {
        Card { rank, suit }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.rank, self.suit)
    }
}

/// One player's cards: hole cards and each round's public cards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardView {
    pub hole: Vec<Card>,
    pub board: Vec<Vec<Card>>,
}

impl CardView {
    pub fn new(hole: Vec<Card>, board: Vec<Vec<Card>>) -> Self {
        let mut v = CardView { hole, board };
        v.normalize();
        v
    }

    /// Sort each unordered group (cards compare by rank, then suit).
    pub fn normalize(&mut self) {
        self.hole.sort();
        for group in &mut self.board {
            group.sort();
        }
    }

    fn groups(&self) -> impl Iterator<Item = &Vec<Card>> {
        std::iter::once(&self.hole).chain(self.board.iter())
    }

    /// Relabel suits through `perm` (old suit -> new suit).
    pub fn permute_suits(&self, perm: &[u8]) -> CardView {
        let map = |g: &Vec<Card>| {
            g.iter()
                .map(|c| Card::new(c.rank, perm[c.suit as usize]))
                .collect()
        };
        CardView::new(map(&self.hole), self.board.iter().map(map).collect())
    }

    fn suit_signatures(&self, num_suits: u32) -> Vec<Vec<u64>> {
        let mut sig = vec![Vec::new(); num_suits as usize];
        for group in self.groups() {
            for s in sig.iter_mut() {
                s.push(0u64);
            }
            for card in group {
                *sig[card.suit as usize].last_mut().unwrap() |= 1u64 << card.rank;
            }
        }
        sig
    }
}

/// Map a view to its orbit's representative under suit permutations.
///
/// Suits are relabeled so that their signatures appear in non-increasing
/// order; the result is a member of the input's orbit and is identical for
/// every member of that orbit.
pub fn canonical_form(view: &CardView, num_suits: u32) -> CardView {
    let sig = view.suit_signatures(num_suits);
    let mut order: Vec<usize> = (0..num_suits as usize).collect();
    order.sort_by(|&a, &b| sig[b].cmp(&sig[a]).then(a.cmp(&b)));
    let mut perm = vec![0u8; num_suits as usize];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new as u8;
    }
    view.permute_suits(&perm)
}

/// Number of card groups observed by the end of `round`, hole cards first.
fn group_sizes(spec: &GameSpec, round: usize) -> Vec<u32> {
    std::iter::once(spec.num_hole_cards)
        .chain(spec.board_cards[..=round].iter().copied())
        .filter(|&k| k > 0)
        .collect()
}

const MAX_SUITS: usize = crate::gamespec::MAX_SUITS as usize;

/// Enumeration state after some groups have been dealt.
#[derive(Clone, Copy)]
struct Prefix {
    /// Cards already dealt, one rank mask per suit.
    used: [u64; MAX_SUITS],
    /// Bit i set while suits i and i+1 still have equal signatures.
    ties: u32,
}

struct Enumerator {
    ranks: u32,
    suits: usize,
    groups: Vec<u32>,
}

impl Enumerator {
    fn new(spec: &GameSpec, round: usize) -> Self {
        Enumerator {
            ranks: spec.num_ranks,
            suits: spec.num_suits as usize,
            groups: group_sizes(spec, round),
        }
    }

    fn root(&self) -> Prefix {
        let ties = if self.suits > 1 {
            (1u32 << (self.suits - 1)) - 1
        } else {
            0
        };
        Prefix {
            used: [0; MAX_SUITS],
            ties,
        }
    }

    /// Visit every k-subset of the undealt cards, passing per-suit rank masks.
    fn for_each_subset(
        &self,
        used: &[u64; MAX_SUITS],
        k: u32,
        mut f: impl FnMut(&[u64; MAX_SUITS]),
    ) {
        let avail: Vec<(usize, u32)> = (0..self.suits)
            .flat_map(|s| (0..self.ranks).map(move |r| (s, r)))
            .filter(|&(s, r)| used[s] & (1u64 << r) == 0)
            .collect();
        let k = k as usize;
        if k > avail.len() {
            return;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut masks = [0u64; MAX_SUITS];
            for &i in &idx {
                let (s, r) = avail[i];
                masks[s] |= 1u64 << r;
            }
            f(&masks);
            // advance to the next combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if idx[i] != i + avail.len() - k {
                    break;
                }
                if i == 0 {
                    return;
                }
            }
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Extend a prefix by one group; `None` when the extension breaks the
    /// sorted-signature order.
    fn extend(&self, prefix: &Prefix, masks: &[u64; MAX_SUITS]) -> Option<Prefix> {
        let mut ties = prefix.ties;
        let mut pending = prefix.ties;
        while pending != 0 {
            let i = pending.trailing_zeros() as usize;
            pending &= pending - 1;
            match masks[i].cmp(&masks[i + 1]) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Greater => ties &= !(1 << i),
                std::cmp::Ordering::Equal => {}
            }
        }
        let mut used = prefix.used;
        for s in 0..self.suits {
            used[s] |= masks[s];
        }
        Some(Prefix { used, ties })
    }

    fn count_below(&self, prefix: &Prefix, level: usize) -> u64 {
        let Some(&k) = self.groups.get(level) else {
            return 1;
        };
        let mut total = 0u64;
        let last = level + 1 == self.groups.len();
        self.for_each_subset(&prefix.used, k, |masks| {
            if let Some(next) = self.extend(prefix, masks) {
                total += if last {
                    1
                } else {
                    self.count_below(&next, level + 1)
                };
            }
        });
        total
    }

    /// Sorted prefixes after the first group, the unit of parallel work.
    fn first_level(&self) -> Vec<Prefix> {
        let mut out = Vec::new();
        if let Some(&k) = self.groups.first() {
            let root = self.root();
            self.for_each_subset(&root.used, k, |masks| {
                if let Some(p) = self.extend(&root, masks) {
                    out.push(p);
                }
            });
        }
        out
    }
}

/// Number of suit-isomorphism classes of one-player views at `round`.
pub fn canonical_count(spec: &GameSpec, round: usize) -> Result<Count, CardsError> {
    canonical_count_with(spec, round, Execution::default())
}

pub fn canonical_count_with(
    spec: &GameSpec,
    round: usize,
    exec: Execution,
) -> Result<Count, CardsError> {
    if round >= spec.num_rounds {
        return Err(CardsError::Round {
            round,
            rounds: spec.num_rounds,
        });
    }
    let en = Enumerator::new(spec, round);
    let prefixes = en.first_level();
    info!(
        "canonical count, round {round}: {} first-level classes",
        prefixes.len()
    );
    let total: u64 = exec.map_sum(&prefixes, |p| en.count_below(p, 1));
    Ok(Count::from(total))
}

/// Canonical-count cache: one line per (deck, board prefix) entry,
/// `ranks suits hole board-prefix count`, with the prefix comma-joined.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CanonicalCache {
    entries: HashMap<(u32, u32, u32, Vec<u32>), Count>,
}

pub const CACHE_ENV: &str = "GTCOUNT_CANONICAL_CACHE";
const SHIPPED_CACHE: &str = include_str!("../data/canonical_counts.txt");

impl CanonicalCache {
    pub fn shipped() -> Self {
        CanonicalCache::parse(SHIPPED_CACHE).expect("shipped cache is well formed")
    }

    /// The cache named by `GTCOUNT_CANONICAL_CACHE`, or the shipped one.
    pub fn from_env() -> Result<Self, CardsError> {
        match std::env::var_os(CACHE_ENV) {
            Some(path) => CanonicalCache::load(Path::new(&path)),
            None => Ok(CanonicalCache::shipped()),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CardsError> {
        let text = std::fs::read_to_string(path).map_err(|source| CardsError::CacheIo {
            path: path.display().to_string(),
            source,
        })?;
        CanonicalCache::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CardsError> {
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = |reason: &str| CardsError::CacheFormat {
                line,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [ranks, suits, hole, prefix, count] = fields[..] else {
                return Err(bad("expected `ranks suits hole board-prefix count`"));
            };
            let num = |s: &str| s.parse::<u32>().map_err(|_| bad("bad integer"));
            let prefix = prefix.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            let count = count.parse::<Count>().map_err(|_| bad("bad count"))?;
            entries.insert((num(ranks)?, num(suits)?, num(hole)?, prefix), count);
        }
        Ok(CanonicalCache { entries })
    }

    fn key(spec: &GameSpec, round: usize) -> (u32, u32, u32, Vec<u32>) {
        (
            spec.num_ranks,
            spec.num_suits,
            spec.num_hole_cards,
            spec.board_cards[..=round].to_vec(),
        )
    }

    pub fn lookup(&self, spec: &GameSpec, round: usize) -> Option<&Count> {
        if round >= spec.num_rounds {
            return None;
        }
        self.entries.get(&Self::key(spec, round))
    }

    pub fn insert(&mut self, spec: &GameSpec, round: usize, count: Count) {
        self.entries.insert(Self::key(spec, round), count);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self) -> String {
        let mut keys: Vec<_> = self.entries.keys().collect();
        keys.sort();
        let mut out = String::from("# ranks suits hole board-prefix count\n");
        for key in keys {
            let prefix = key
                .3
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                key.0, key.1, key.2, prefix, self.entries[key]
            ));
        }
        out
    }
}
