use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steinharm_core::building::build_ball;
use steinharm_core::field::{PrimeField, Rationals};
use steinharm_core::harmonic::{check_hc1_cycles, solve_harmonic, verify_lemma_bwb};
use steinharm_core::weyl::AffineWeylElement;

fn random_bwb(n: usize, p: u64, radius: usize, trials: usize, max_len: usize, seed: u64) {
    let ball = build_ball(n, p, radius).unwrap();
    let rd = ball.root_datum().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < trials {
        let len = rng.random_range(0..=max_len);
        let word: Vec<usize> = (0..len).map(|_| rng.random_range(0..n)).collect();
        let w = AffineWeylElement::from_word(&rd, &word);
        let l = steinharm_core::weyl::length(&rd, &w).unwrap();
        let candidates: Vec<usize> = (0..ball.len()).filter(|&c| ball.distance(c) + l < radius).collect();
        let c = candidates[rng.random_range(0..candidates.len())];
        assert!(verify_lemma_bwb(&ball, c, &w).unwrap(), "chamber {c} word {word:?}");
        checked += 1;
    }
}

#[test]
fn bwb_on_the_tree() {
    random_bwb(2, 2, 6, 60, 3, 7);
    random_bwb(2, 3, 4, 20, 2, 8);
}

#[test]
fn bwb_in_rank_two() {
    random_bwb(3, 2, 4, 15, 3, 9);
}

#[test]
fn bwb_margin_is_reported() {
    let ball = build_ball(2, 2, 2).unwrap();
    let rd = ball.root_datum().clone();
    let w = AffineWeylElement::from_word(&rd, &[0, 1, 0]);
    assert!(verify_lemma_bwb(&ball, 0, &w).is_err());
}

#[test]
fn hc1_closes_on_harmonic_bases() {
    for (n, p, r) in [(2usize, 2u64, 3usize), (3, 2, 2)] {
        let ball = build_ball(n, p, r).unwrap();
        for h in solve_harmonic(&Rationals, &ball) {
            assert!(check_hc1_cycles(&Rationals, &ball, &h).unwrap().is_empty());
        }
        let f3 = PrimeField::new(3).unwrap();
        for h in solve_harmonic(&f3, &ball) {
            assert!(check_hc1_cycles(&f3, &ball, &h).unwrap().is_empty());
        }
    }
}
