//! Seeded random elements and small balls on the fast path.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::raag::{Gen, GroupElement, Letter, Raag};

pub const SEED_ENV: &str = "RAAG_QM_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from the environment, or `fallback` when unset or unparsable.
pub fn seed_from_env(fallback: u64) -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(fallback)
}

pub fn random_letter<R: Rng>(rng: &mut R, raag: &Raag) -> Letter {
    let v = rng.gen_range(0..raag.rank()) as Gen;
    if rng.gen_bool(0.5) {
        Letter::pos(v)
    } else {
        Letter::neg(v)
    }
}

/// Reduction of a uniformly random raw word of length `0..=max_len`.
pub fn random_element<R: Rng>(rng: &mut R, raag: &Raag, max_len: usize) -> GroupElement {
    let n = rng.gen_range(0..=max_len);
    let raw: Vec<Letter> = (0..n).map(|_| random_letter(rng, raag)).collect();
    raag.element(&raw).expect("letters drawn from the graph")
}

pub fn random_nonidentity<R: Rng>(rng: &mut R, raag: &Raag, max_len: usize) -> GroupElement {
    assert!(max_len >= 1 && raag.rank() >= 1);
    loop {
        let g = random_element(rng, raag, max_len);
        if !g.is_identity() {
            return g;
        }
    }
}

/// Every element of length at most `r`, shortest first.
pub fn ball_elements(raag: &Raag, r: usize) -> Vec<GroupElement> {
    let letters: Vec<Letter> = (0..raag.rank() as Gen)
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect();
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut out = vec![raag.identity()];
    seen.insert(raag.identity());
    let mut frontier = out.clone();
    for _ in 0..r {
        let mut next = Vec::new();
        for x in &frontier {
            for &l in &letters {
                let y = x.mul_word(&[l]);
                if y.len() == x.len() + 1 && seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
