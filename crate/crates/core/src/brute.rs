//! Exhaustive enumeration over all `2^N` sequences in Gray-code order.
//!
//! Consecutive Gray codes differ in one spin, so every state costs one O(N)
//! profile update. The state space is cut into fixed-size chunks so results
//! do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::AutocorrelationProfile;
use crate::sequence::SpinSequence;

pub const BRUTE_FORCE_CAP: usize = 24;

const CHUNK_BITS: u32 = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceResult {
    pub n: usize,
    pub optimal_energy: i64,
    pub one_optimum: SpinSequence,
    pub optimum_count: u64,
    pub states_visited: u64,
}

#[inline]
pub(crate) fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Sequence whose spin `j` is `-1` iff bit `j` of `code` is set.
pub(crate) fn sequence_from_code(code: u64, n: usize) -> SpinSequence {
    let spins = (0..n).map(|j| if (code >> j) & 1 == 1 { -1 } else { 1 }).collect();
    SpinSequence::new(spins).expect("n >= 2")
}

/// Walks Gray-code ranks `[lo, hi)`, calling `visit` with each state and its profile.
pub(crate) fn walk_gray<F>(n: usize, lo: u64, hi: u64, mut visit: F)
where
    F: FnMut(&SpinSequence, &AutocorrelationProfile),
{
    if lo >= hi {
        return;
    }
    let mut seq = sequence_from_code(gray(lo), n);
    let mut profile = AutocorrelationProfile::new(&seq);
    visit(&seq, &profile);
    for i in lo + 1..hi {
        profile.apply_flip(&mut seq, i.trailing_zeros() as usize);
        visit(&seq, &profile);
    }
}

/// Splits `[0, 2^n)` into fixed chunks and folds each in parallel.
pub(crate) fn par_chunks<T, F>(n: usize, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n as u32);
    let chunks = total / chunk;
    (0..chunks)
        .into_par_iter()
        .map(|c| per_chunk(c * chunk, (c + 1) * chunk))
        .collect()
}

pub fn brute_force_optimum(n: usize) -> Result<BruteForceResult> {
    brute_force_optimum_capped(n, BRUTE_FORCE_CAP)
}

pub fn brute_force_optimum_capped(n: usize, cap: usize) -> Result<BruteForceResult> {
    if n < 2 {
        return Err(Error::TooShort(n));
    }
    if n > cap || n > 62 {
        return Err(Error::AboveCap { n, cap });
    }
    let partials = par_chunks(n, |lo, hi| {
        let mut best = i64::MAX;
        let mut count = 0u64;
        let mut witness = None;
        walk_gray(n, lo, hi, |seq, p| {
            let e = p.energy();
            if e < best {
                best = e;
                count = 1;
                witness = Some(seq.clone());
            } else if e == best {
                count += 1;
            }
        });
        (best, count, witness)
    });
    let (optimal_energy, optimum_count, witness) = partials.into_iter().fold(
        (i64::MAX, 0u64, None),
        |(be, bc, bw), (e, c, w)| match e.cmp(&be) {
            std::cmp::Ordering::Less => (e, c, w),
            std::cmp::Ordering::Equal => (be, bc + c, bw),
            std::cmp::Ordering::Greater => (be, bc, bw),
        },
    );
    Ok(BruteForceResult {
        n,
        optimal_energy,
        one_optimum: witness.expect("at least one state").canonical_form(),
        optimum_count,
        states_visited: 1u64 << n,
    })
}
