use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use steinharm_core::building::{self, build_ball, iwahori_contains, ChamberRep};
use steinharm_core::matrix::RatMatrix;
use steinharm_core::padic::valuation;
use steinharm_core::weyl::{self, AffineWeylElement};
use steinharm_core::Rat;

/// Stabilizer of the standard lattice chain `L_k = <e_1..e_k, p e_{k+1}..p e_n>`,
/// up to scalars: every conjugate `D_k^{-1} g D_k` is a scalar multiple of an
/// element of `GL_n(Z_p)` with the same scalar.
fn stabilizes_chain(g: &RatMatrix, p: u64) -> bool {
    let n = g.size();
    let mut scale = None;
    for k in 0..n {
        let d = RatMatrix::diagonal(
            (0..n)
                .map(|i| if i < k { BigRational::from_integer(1.into()) } else { BigRational::from_integer(BigInt::from(p)) })
                .collect(),
        );
        let conj = d.inverse().unwrap().mul(g).mul(&d);
        let v = conj.min_valuation(p).unwrap();
        let prim = conj.primitive(p);
        if valuation(&prim.determinant(), p) != Some(0) {
            return false;
        }
        match scale {
            None => scale = Some(v),
            Some(s) if s != v => return false,
            _ => {}
        }
    }
    true
}

fn small_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec((-6i64..=6, prop_oneof![Just(1i64), Just(2), Just(3), Just(4), Just(9)]), n * n)
        .prop_map(move |e| {
            RatMatrix::from_entries(n, e.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect())
        })
        .prop_filter("invertible", |m| !num_traits::Zero::is_zero(&m.determinant()))
}

/// Integer matrices upper triangular mod `p` with unit diagonal.
fn iwahori_element(n: usize, p: u64) -> impl Strategy<Value = RatMatrix> {
    let p = p as i64;
    proptest::collection::vec(-5i64..=5, n * n).prop_map(move |e| {
        let entries = e
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let (r, c) = (k / n, k % n);
                let v = if r > c {
                    x * p
                } else if r == c {
                    x * p + 1
                } else {
                    x
                };
                BigRational::from_integer(v.into())
            })
            .collect();
        RatMatrix::from_entries(n, entries)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iwahori_agrees_with_lattice_chain(g in small_matrix(2), h in small_matrix(3), p in prop_oneof![Just(2u64), Just(3)]) {
        prop_assert_eq!(iwahori_contains(&g, p).unwrap(), stabilizes_chain(&g, p));
        prop_assert_eq!(iwahori_contains(&h, p).unwrap(), stabilizes_chain(&h, p));
    }

    #[test]
    fn canonical_is_coset_invariant(g in small_matrix(3), h in small_matrix(3), p in prop_oneof![Just(2u64), Just(3)]) {
        let cg = ChamberRep::canonical(&g, p).unwrap();
        let ch = ChamberRep::canonical(&h, p).unwrap();
        let same = iwahori_contains(&g.inverse().unwrap().mul(&h), p).unwrap();
        prop_assert_eq!(cg == ch, same);
        prop_assert_eq!(ChamberRep::canonical(&cg.to_matrix(), p).unwrap(), cg.clone());
        prop_assert!(iwahori_contains(&g.inverse().unwrap().mul(&cg.to_matrix()), p).unwrap());
    }

    #[test]
    fn canonical_absorbs_iwahori_factors(g in small_matrix(3), b in iwahori_element(3, 2)) {
        let p = 2;
        prop_assert!(iwahori_contains(&b, p).unwrap());
        prop_assert_eq!(ChamberRep::canonical(&g.mul(&b), p).unwrap(), ChamberRep::canonical(&g, p).unwrap());
    }
}

fn laws(n: usize, p: u64, radius: usize) {
    let ball = build_ball(n, p, radius).unwrap();
    let rd = ball.root_datum().clone();
    for (_, panel) in ball.interior_panels() {
        assert_eq!(panel.members.len() as u64, p + 1);
    }
    let mut counts: BTreeMap<AffineWeylElement, u64> = BTreeMap::new();
    for id in 0..ball.len() {
        let w = ball.weyl_distance(id);
        assert_eq!(weyl::length(&rd, w).unwrap(), ball.distance(id));
        *counts.entry(w.clone()).or_default() += 1;
    }
    for (w, c) in &counts {
        let l = weyl::length(&rd, w).unwrap();
        if l < radius {
            assert_eq!(*c, p.pow(l as u32), "n={n} p={p} w={w:?}");
        }
    }
    // every element of W_a of length < radius occurs
    let mut frontier = vec![AffineWeylElement::identity(n - 1)];
    let mut seen: std::collections::BTreeSet<_> = frontier.iter().cloned().collect();
    for _ in 0..radius.saturating_sub(1) {
        let mut next = vec![];
        for w in &frontier {
            for s in 0..n {
                let ws = w.compose(&AffineWeylElement::generator(&rd, s));
                if seen.insert(ws.clone()) {
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    for w in seen {
        assert!(counts.contains_key(&w), "missing {w:?}");
    }
}

#[test]
fn counting_laws_small() {
    laws(2, 2, 4);
    laws(2, 3, 3);
    laws(3, 2, 2);
    laws(3, 3, 2);
}

#[test]
fn known_ball_sizes() {
    for (n, p, r, expected) in [(2, 2, 4, 61), (2, 3, 3, 79), (3, 2, 2, 31)] {
        assert_eq!(build_ball(n, p, r).unwrap().len(), expected, "n={n} p={p} r={r}");
    }
}

#[test]
fn tree_ball_sizes_follow_closed_form() {
    // 1 + 2 (q + q^2 + ... + q^r)
    for p in [2u64, 3] {
        for r in 0..=4 {
            let expected: u64 = 1 + 2 * (1..=r as u32).map(|k| p.pow(k)).sum::<u64>();
            assert_eq!(build_ball(2, p, r).unwrap().len() as u64, expected);
        }
    }
}

#[test]
fn translation_chambers_sit_at_the_right_distance() {
    for n in [2usize, 3] {
        let p = 2;
        let ball = build_ball(n, p, 4).unwrap();
        let rd = ball.root_datum().clone();
        for i in 1..n {
            let t = building::translation_matrix(n, p, i).unwrap();
            let pc = ball.locate(&t).unwrap().expect("in ball");
            assert_eq!(pc.pointer, i);
            let ti = weyl::translation_element(&rd, i).unwrap();
            assert_eq!(ball.distance(pc.chamber), weyl::length_extended(&rd, &ti));
        }
        // pure coroot translations: diag(p^{-1}, p) for n = 2 has length 2
        if n == 2 {
            let t = RatMatrix::diagonal(vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer(2.into())]);
            let pc = ball.locate(&t).unwrap().unwrap();
            assert_eq!(pc.pointer, 0);
            let w = ball.weyl_distance(pc.chamber);
            let coroot = AffineWeylElement::translation_by(vec![Rat::from_integer(1)]);
            let expected = [coroot.clone(), coroot.inverse()];
            assert!(expected.contains(w), "{w:?}");
        }
    }
}

#[test]
fn gallery_endpoints_match_weyl_distance() {
    let ball = build_ball(3, 2, 3).unwrap();
    let rd = ball.root_datum().clone();
    let mut by_w: BTreeMap<AffineWeylElement, Vec<usize>> = BTreeMap::new();
    for id in 0..ball.len() {
        by_w.entry(ball.weyl_distance(id).clone()).or_default().push(id);
    }
    for (w, ids) in by_w {
        let word = weyl::reduced_word(&rd, &w).unwrap();
        let ends = ball.gallery_endpoints(&RatMatrix::identity(3), &word).unwrap();
        let mut got: Vec<usize> = ends.iter().map(|e| ball.id_of(e).unwrap()).collect();
        got.sort();
        assert_eq!(got, ids);
    }
}
