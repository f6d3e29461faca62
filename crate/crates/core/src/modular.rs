//! Multi-modular betting counts for games whose big-integer lattice does
//! not fit in memory.
//!
//! The sweep is run once per prime with machine-word residues, once more in
//! floating point to bound the magnitude of every tally, and the exact
//! counts are rebuilt with the Chinese remainder theorem. One prime beyond
//! what the bound requires is kept back as a check on the reconstruction.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use log::info;

use crate::bigcount::Count;
use crate::exec::Execution;
use crate::gamespec::GameSpec;
use crate::nolimit::{count_betting_in, NoLimitError, SweepMode};
use crate::tally::{RoundTally, Tally};

/// Primes just below 2^62, so a sum of two residues never overflows.
pub const PRIMES: [u64; 16] = [
    (1 << 62) - 57,
    (1 << 62) - 87,
    (1 << 62) - 117,
    (1 << 62) - 143,
    (1 << 62) - 153,
    (1 << 62) - 167,
    (1 << 62) - 171,
    (1 << 62) - 195,
    (1 << 62) - 203,
    (1 << 62) - 273,
    (1 << 62) - 287,
    (1 << 62) - 317,
    (1 << 62) - 443,
    (1 << 62) - 483,
    (1 << 62) - 495,
    (1 << 62) - 575,
];

/// Headroom, in bits, between the floating-point bound and the modulus.
const MARGIN_BITS: u64 = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Residue<const P: u64>(pub u64);

impl<const P: u64> AddAssign<&Residue<P>> for Residue<P> {
    fn add_assign(&mut self, other: &Residue<P>) {
        let s = self.0 + other.0;
        self.0 = if s >= P { s - P } else { s };
    }
}

impl<const P: u64> Tally for Residue<P> {
    fn one() -> Self {
        Residue(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn scale(&self, k: u64) -> Self {
        Residue((self.0 as u128 * k as u128 % P as u128) as u64)
    }
}

fn residue_run<const P: u64>(
    spec: &GameSpec,
    mode: SweepMode,
) -> Result<Vec<RoundTally<u64>>, NoLimitError> {
    let tallies = count_betting_in::<Residue<P>>(spec, mode)?;
    Ok(tallies.iter().map(|t| t.map(|r| r.0)).collect())
}

/// The sweep modulo `PRIMES[index]`.
pub fn betting_residues(
    spec: &GameSpec,
    mode: SweepMode,
    index: usize,
) -> Result<Vec<RoundTally<u64>>, NoLimitError> {
    macro_rules! dispatch {
        ($($i:literal)*) => {
            match index {
                $($i => residue_run::<{ PRIMES[$i] }>(spec, mode),)*
                _ => panic!("prime index {index} out of range"),
            }
        };
    }
    dispatch!(0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15)
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

fn mod_small(x: &Count, p: u64) -> u64 {
    let (_, r) = x.div_rem(&Count::from(p)).expect("prime is nonzero");
    r.to_u64().expect("remainder below a u64 modulus")
}

/// The unique value below `Π primes` with the given residues.
pub fn crt(residues: &[u64], primes: &[u64]) -> Count {
    assert_eq!(residues.len(), primes.len());
    let mut x = Count::zero();
    let mut modulus = Count::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let diff = (r as u128 + p as u128 - mod_small(&x, p) as u128) % p as u128;
        let inv = pow_mod(mod_small(&modulus, p), p - 2, p) as u128;
        let t = (diff * inv % p as u128) as u64;
        x += modulus.mul_small(t);
        modulus = modulus.mul_small(p);
    }
    x
}

/// Smallest number of leading primes whose product exceeds `2^bits`.
fn primes_needed(bits: u64) -> usize {
    let target = Count::pow2(bits as u32);
    let mut product = Count::one();
    for (i, &p) in PRIMES.iter().enumerate() {
        product = product.mul_small(p);
        if product > target {
            return i + 1;
        }
    }
    PRIMES.len() + 1
}

fn magnitude_bits(approx: &[RoundTally<f64>]) -> Result<u64, NoLimitError> {
    let mut max = 0.0f64;
    for t in approx {
        for v in t.columns() {
            max = max.max(*v);
        }
    }
    if !max.is_finite() {
        return Err(NoLimitError::Magnitude("tallies overflow a double".into()));
    }
    Ok(max.max(1.0).log2().ceil() as u64 + MARGIN_BITS)
}

/// Exact per-round betting tallies through residues.
pub fn count_betting_multimodular(
    spec: &GameSpec,
    mode: SweepMode,
    exec: Execution,
) -> Result<Vec<RoundTally>, NoLimitError> {
    let approx = count_betting_in::<f64>(spec, mode)?;
    let bits = magnitude_bits(&approx)?;
    let needed = primes_needed(bits);
    if needed + 1 > PRIMES.len() {
        return Err(NoLimitError::Magnitude(format!(
            "{bits}-bit tallies need more than {} primes",
            PRIMES.len() - 1
        )));
    }
    info!("tallies below 2^{bits}: {needed} primes plus one check");
    let indices: Vec<usize> = (0..=needed).collect();
    let runs = exec.map_collect(&indices, |&i| betting_residues(spec, mode, i));
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let (check, used) = runs.split_last().expect("at least two runs");
    let primes = &PRIMES[..needed];
    let check_prime = PRIMES[needed];

    let mut out = Vec::with_capacity(spec.num_rounds);
    for round in 0..spec.num_rounds {
        let field = |get: &dyn Fn(&RoundTally<u64>) -> u64| -> Result<Count, NoLimitError> {
            let residues: Vec<u64> = used.iter().map(|run| get(&run[round])).collect();
            let value = crt(&residues, primes);
            let expected = get(&check[round]);
            if mod_small(&value, check_prime) != expected {
                return Err(NoLimitError::ResidueCheck(format!(
                    "{} disagrees with the check prime",
                    spec.round_name(round)
                )));
            }
            Ok(value)
        };
        let mut stacks: Vec<_> = used
            .iter()
            .chain([check])
            .flat_map(|run| run[round].continuing_by_stack.keys().copied())
            .collect();
        stacks.sort_unstable();
        stacks.dedup();
        let mut by_stack = BTreeMap::new();
        for stack in stacks {
            let v = field(&|t| t.continuing_by_stack.get(&stack).copied().unwrap_or(0))?;
            if !v.is_zero() {
                by_stack.insert(stack, v);
            }
        }
        out.push(RoundTally {
            decisions: field(&|t| t.decisions)?,
            infoset_actions: field(&|t| t.infoset_actions)?,
            terminal: field(&|t| t.terminal)?,
            continuing_total: field(&|t| t.continuing_total)?,
            continuing_by_stack: by_stack,
        });
    }
    Ok(out)
}
