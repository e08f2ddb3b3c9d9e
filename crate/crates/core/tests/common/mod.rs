//! Shared generators for the randomized suites. Everything is seeded, so
//! every run tests the same instances.
#![allow(dead_code)]

use persuasion_core::interval::{IntervalOutcome, MeanThresholdGame, Piece};
use persuasion_core::rational::Rational;
use persuasion_core::GameSpec;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A rational `p / den` with `p` in `lo..=hi` (denominator fixed by the
/// caller so derived data stays on a coarse grid).
pub fn grid_rational(rng: &mut StdRng, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::ratio(rng.gen_range(lo..=hi), den)
}

/// A full-support prior with denominator at most `den`: a random composition
/// of `den` into `n` positive parts.
pub fn random_prior(rng: &mut StdRng, n: usize, den: i64) -> Vec<Rational> {
    assert!(den >= n as i64);
    // Choose n-1 distinct interior cut points of 0..den.
    let mut cuts = Vec::with_capacity(n + 1);
    cuts.push(0);
    while cuts.len() < n {
        let c = rng.gen_range(1..den);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.push(den);
    cuts.sort_unstable();
    cuts.windows(2).map(|w| Rational::ratio(w[1] - w[0], den)).collect()
}

/// A random valid game: `n` states, `k` actions, utilities on the `1/12`
/// grid, sender payoffs distinct `1/12`-grid values in increasing order.
pub fn random_game(rng: &mut StdRng, n: usize, k: usize) -> GameSpec {
    let prior = random_prior(rng, n, 12);
    let utility: Vec<Vec<Rational>> = (0..k)
        .map(|_| (0..n).map(|_| grid_rational(rng, -24, 24, 12)).collect())
        .collect();
    let payoff = increasing_payoffs(rng, k, 12);
    GameSpec::new(prior, utility, payoff).expect("generator produces valid games")
}

pub fn increasing_payoffs(rng: &mut StdRng, k: usize, den: i64) -> Vec<Rational> {
    let mut values = Vec::with_capacity(k);
    while values.len() < k {
        let v = rng.gen_range(-2 * den..=2 * den);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    values.sort_unstable();
    values.into_iter().map(|p| Rational::ratio(p, den)).collect()
}

/// A random binary-action game with sender payoffs normalized to (0, 1) and
/// the regularity condition (all utility advantages pairwise distinct).
pub fn random_binary_regular(rng: &mut StdRng, n: usize) -> GameSpec {
    let prior = random_prior(rng, n, 12.max(n as i64));
    loop {
        let utility: Vec<Vec<Rational>> = (0..2)
            .map(|_| (0..n).map(|_| grid_rational(rng, -24, 24, 12)).collect())
            .collect();
        let mut deltas: Vec<Rational> =
            (0..n).map(|t| &utility[1][t] - &utility[0][t]).collect();
        deltas.sort();
        if deltas.windows(2).all(|w| w[0] != w[1]) {
            let payoff = vec![Rational::zero(), Rational::one()];
            return GameSpec::new(prior, utility, payoff).expect("valid game");
        }
    }
}

/// A random mean-threshold game with `k` actions on the `1/den` grid.
pub fn random_mean_threshold_game(rng: &mut StdRng, k: usize, den: i64) -> MeanThresholdGame {
    let mut interior = Vec::with_capacity(k - 1);
    while interior.len() < k - 1 {
        let c = rng.gen_range(1..den);
        if !interior.contains(&c) {
            interior.push(c);
        }
    }
    interior.sort_unstable();
    let mut cutoffs = Vec::with_capacity(k + 1);
    cutoffs.push(Rational::zero());
    cutoffs.extend(interior.into_iter().map(|c| Rational::ratio(c, den)));
    cutoffs.push(Rational::one());
    MeanThresholdGame::new(cutoffs, increasing_payoffs(rng, k, den)).expect("valid game")
}

/// A random piecewise outcome over `k` actions with at most `max_pieces`
/// pieces, all data on the `1/den` grid.
pub fn random_interval_outcome(
    rng: &mut StdRng,
    k: usize,
    max_pieces: usize,
    den: i64,
) -> IntervalOutcome {
    let target = rng.gen_range(1..=max_pieces);
    let mut breaks = vec![0, den];
    while breaks.len() < target + 1 {
        let b = rng.gen_range(1..den);
        if !breaks.contains(&b) {
            breaks.push(b);
        }
    }
    breaks.sort_unstable();
    let pieces = breaks
        .windows(2)
        .map(|w| Piece {
            lo: Rational::ratio(w[0], den),
            hi: Rational::ratio(w[1], den),
            weights: random_weights(rng, k, den),
        })
        .collect();
    IntervalOutcome::new(pieces).expect("generator tiles [0,1]")
}

/// A random probability vector over `k` entries with denominator `den`
/// (zeros allowed).
pub fn random_weights(rng: &mut StdRng, k: usize, den: i64) -> Vec<Rational> {
    let mut parts = vec![0i64; k];
    for _ in 0..den {
        parts[rng.gen_range(0..k)] += 1;
    }
    parts.into_iter().map(|p| Rational::ratio(p, den)).collect()
}

/// A random piecewise outcome biased toward obedience: pieces are refined
/// by the game's cutoffs and most weight in each piece goes to the action
/// whose band contains it, with a little contamination. Not guaranteed
/// obedient; callers filter.
pub fn obedience_biased_outcome(
    rng: &mut StdRng,
    game: &MeanThresholdGame,
    den: i64,
) -> IntervalOutcome {
    let k = game.action_count();
    let mut breaks: Vec<Rational> = game.cutoffs().to_vec();
    for _ in 0..rng.gen_range(0..4) {
        let b = grid_rational(rng, 1, den - 1, den);
        if !breaks.contains(&b) {
            breaks.push(b);
        }
    }
    breaks.sort();
    let pieces = breaks
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| {
            let mid = (&w[0] + &w[1]) / Rational::from_integer(2);
            let home = (0..k)
                .find(|&j| game.cutoffs()[j + 1] >= mid)
                .expect("cutoffs end at 1");
            let spill = rng.gen_range(0..=den / 6);
            let mut parts = vec![0i64; k];
            parts[home] = den - spill;
            for _ in 0..spill {
                parts[rng.gen_range(0..k)] += 1;
            }
            Piece {
                lo: w[0].clone(),
                hi: w[1].clone(),
                weights: parts.into_iter().map(|p| Rational::ratio(p, den)).collect(),
            }
        })
        .collect();
    IntervalOutcome::new(pieces).expect("refined breaks tile [0,1]")
}
