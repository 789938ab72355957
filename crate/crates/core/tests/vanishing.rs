use steinharm_core::building::build_ball;
use steinharm_core::field::{Field, PrimeField, Rationals};
use steinharm_core::harmonic::{self, all_parahoric_generators, all_relation_generators, pair, solve_harmonic};

fn vanishes<F: Field>(field: &F, n: usize, p: u64, radius: usize) -> (usize, usize, usize) {
    let ball = build_ball(n, p, radius).unwrap();
    let basis = solve_harmonic(field, &ball);
    let parahoric = all_parahoric_generators(&ball);
    let relations = all_relation_generators(&ball).unwrap();
    assert!(!relations.is_empty());
    for h in &basis {
        assert!(harmonic::check_hc2(field, &ball, h).is_empty());
        for f in parahoric.iter().chain(&relations) {
            assert!(field.is_zero(&pair(field, &ball, h, f)), "n={n} p={p} r={radius}");
        }
    }
    (basis.len(), parahoric.len(), relations.len())
}

#[test]
fn tree_ball_over_q_and_f5() {
    let a = vanishes(&Rationals, 2, 2, 4);
    let b = vanishes(&PrimeField::new(5).unwrap(), 2, 2, 4);
    assert_eq!(a, b);
}

#[test]
fn rank_two_ball_over_q_and_f5() {
    let a = vanishes(&Rationals, 3, 2, 2);
    let b = vanishes(&PrimeField::new(5).unwrap(), 3, 2, 2);
    assert_eq!(a.0, b.0);
}

#[test]
fn tree_ball_p3() {
    vanishes(&PrimeField::new(2).unwrap(), 2, 3, 3);
}

#[test]
fn relations_detect_a_wrong_pointing_sign() {
    // Ignoring the re-pointing sign breaks the vanishing on relations.
    let q = Rationals;
    let ball = build_ball(2, 2, 4).unwrap();
    let basis = solve_harmonic(&q, &ball);
    let relations = all_relation_generators(&ball).unwrap();
    let unsigned = |h: &harmonic::Cochain<_>, f: &harmonic::IwahoriFunction| {
        f.support().fold(q.zero(), |acc, (pc, v)| q.add(&acc, &q.mul(&q.from_i64(v), h.canonical(pc.chamber))))
    };
    let broken = basis.iter().any(|h| relations.iter().any(|f| !q.is_zero(&unsigned(h, f))));
    assert!(broken);
}
