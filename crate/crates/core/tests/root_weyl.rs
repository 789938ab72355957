use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use steinharm_core::apartment::{self, fundamental_chamber, locate_alcove};
use steinharm_core::rootdata::{CartanType, Family, RootDatum};
use steinharm_core::weyl::{self, AffineWeylElement, FiniteWeylElement};
use steinharm_core::Rat;

fn classical_count(t: CartanType) -> usize {
    let l = t.rank();
    match t.family() {
        Family::A => l * (l + 1) / 2,
        Family::B | Family::C => l * l,
        Family::D => l * (l - 1),
        Family::E => [36, 63, 120][l - 6],
        Family::F => 24,
        Family::G => 6,
    }
}

/// Orbit of the simple roots under every reflection found so far, in
/// simple-root coordinates: `s_β(γ) = γ - <β^vee, γ> β`.
fn closure(a: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let l = a.len();
    // <β^vee, γ> needs coroots; track pairs (root, coroot) in simple coordinates
    let pair = |cv: &[i64], r: &[i64]| -> i64 { (0..l).map(|i| (0..l).map(|j| cv[i] * a[i][j] * r[j]).sum::<i64>()).sum() };
    let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for i in 0..l {
        let mut e = vec![0; l];
        e[i] = 1;
        seen.insert(e.clone(), e.clone());
        queue.push_back(e);
    }
    while let Some(r) = queue.pop_front() {
        let pairs: Vec<(Vec<i64>, Vec<i64>)> = seen.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
        for (b, bv) in &pairs {
            let rv = seen[&r].clone();
            let c = pair(bv, &r);
            let image: Vec<i64> = (0..l).map(|k| r[k] - c * b[k]).collect();
            // coroot of the image: s_β(γ^vee) = γ^vee - <γ^vee, β> β^vee
            let d = pair(&rv, b);
            let image_v: Vec<i64> = (0..l).map(|k| rv[k] - d * bv[k]).collect();
            if !seen.contains_key(&image) {
                seen.insert(image.clone(), image_v);
                queue.push_back(image);
            }
        }
    }
    seen.into_keys().collect()
}

#[test]
fn closure_matches_stored_roots_and_counts() {
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let orbit = closure(rd.cartan_matrix());
        let mut stored: BTreeSet<Vec<i64>> = rd.positive_roots().iter().cloned().collect();
        for r in rd.positive_roots() {
            stored.insert(r.iter().map(|x| -x).collect());
        }
        assert_eq!(orbit, stored, "{t}");
        assert_eq!(rd.positive_roots().len(), classical_count(t), "{t}");
    }
}

#[test]
fn highest_root_and_coweights() {
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let l = rd.rank();
        for r in rd.positive_roots() {
            assert!(r.iter().zip(rd.highest_root()).all(|(a, b)| a <= b), "{t}");
        }
        assert_eq!(rd.marks(), rd.highest_root());
        for i in 1..=l {
            for j in 1..=l {
                let expected = Rat::from_integer(i64::from(i == j));
                assert_eq!(rd.pair_simple(rd.fundamental_coweight(i), j), expected);
            }
            assert_eq!(rd.special_set().contains(&i), rd.marks()[i - 1] == 1);
        }
        let coroot: Vec<Rat> = rd.highest_coroot().iter().map(|&c| Rat::from_integer(c)).collect();
        for j in 1..=l {
            assert!(rd.pair_simple(&coroot, j) >= Rat::from_integer(0));
        }
    }
}

#[test]
fn highest_coroot_is_a_fundamental_coweight_outside_type_a() {
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let coroot: Vec<Rat> = rd.highest_coroot().iter().map(|&c| Rat::from_integer(c)).collect();
        let solutions: Vec<usize> = (1..=rd.rank()).filter(|&i| rd.fundamental_coweight(i) == coroot.as_slice()).collect();
        match rd.cominuscule_index().unwrap() {
            None => {
                assert_eq!(t.family(), Family::A);
                assert!(solutions.is_empty() || t.rank() == 1);
            }
            Some(i0) => {
                assert_eq!(solutions, vec![i0], "{t}");
                assert!(!rd.special_set().contains(&i0));
                let s1 = weyl::affine_reflection(&rd, rd.highest_root(), 1).unwrap();
                let s = weyl::affine_reflection(&rd, rd.highest_root(), 0).unwrap();
                assert_eq!(s1.compose(&s), AffineWeylElement::translation_by(coroot.clone()));
            }
        }
    }
}

fn small_types() -> Vec<CartanType> {
    CartanType::all_up_to(4)
}

/// Breadth-first search over words in `S_a`; minimal word length per element.
fn bfs_lengths(rd: &RootDatum, max_len: usize) -> BTreeMap<AffineWeylElement, usize> {
    let mut dist = BTreeMap::new();
    let id = AffineWeylElement::identity(rd.rank());
    dist.insert(id.clone(), 0);
    let mut frontier = vec![id];
    for d in 1..=max_len {
        let mut next = vec![];
        for w in &frontier {
            for s in 0..=rd.rank() {
                let ws = w.compose(&AffineWeylElement::generator(rd, s));
                if !dist.contains_key(&ws) {
                    dist.insert(ws.clone(), d);
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    dist
}

#[test]
fn hyperplane_length_equals_word_length() {
    for t in small_types() {
        let rd = RootDatum::new(t);
        let max = if t.rank() >= 4 { 5 } else { 6 };
        for (w, d) in bfs_lengths(&rd, max) {
            assert_eq!(weyl::length(&rd, &w).unwrap(), d, "{t}");
            let word = weyl::reduced_word(&rd, &w).unwrap();
            assert_eq!(word.len(), d);
            assert_eq!(AffineWeylElement::from_word(&rd, &word), w);
            assert_eq!(w.linear().determinant(), weyl::sign_of_length(d));
        }
    }
}

#[test]
fn a4_lengths_up_to_six() {
    let rd = RootDatum::build(Family::A, 4).unwrap();
    let lengths = bfs_lengths(&rd, 6);
    assert!(lengths.values().any(|&d| d == 6));
    for (w, d) in lengths {
        assert_eq!(weyl::length(&rd, &w).unwrap(), d);
    }
}

#[test]
fn coxeter_relations() {
    for t in small_types() {
        let rd = RootDatum::new(t);
        for i in 0..=rd.rank() {
            for j in 0..=rd.rank() {
                let si = AffineWeylElement::generator(&rd, i);
                let sj = AffineWeylElement::generator(&rd, j);
                let prod = si.compose(&sj);
                let mut power = prod.clone();
                let mut order = 1;
                while !power.is_identity() && order <= 12 {
                    power = power.compose(&prod);
                    order += 1;
                }
                match weyl::coxeter_exponent(&rd, i, j) {
                    Some(m) => assert_eq!(order, m, "{t} {i} {j}"),
                    None => assert!(order > 12, "{t} {i} {j}"),
                }
            }
        }
    }
}

#[test]
fn finite_determinant_is_length_parity() {
    for t in CartanType::all_up_to(4) {
        let rd = RootDatum::new(t);
        for (w, d) in bfs_lengths(&rd, 4) {
            if w.translation().iter().all(|x| *x == Rat::from_integer(0)) {
                assert_eq!(w.linear().determinant(), weyl::sign_of_length(d));
                assert_eq!(w.linear().length(&rd), d);
            }
        }
    }
}

#[test]
fn longest_elements_have_expected_lengths() {
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        let w0 = weyl::longest_element(&rd, None);
        assert_eq!(w0.length(&rd), rd.positive_roots().len());
        assert!(w0.compose(&w0).is_identity());
    }
    let a2 = RootDatum::build(Family::A, 2).unwrap();
    assert_eq!(weyl::longest_element(&a2, Some(1)), FiniteWeylElement::simple(&a2, 2));
}

#[test]
fn translations_and_rotations() {
    for t in CartanType::all_up_to(8) {
        let rd = RootDatum::new(t);
        for i in rd.special_set() {
            let ti = weyl::translation_element(&rd, i).unwrap();
            let wi_w0 = weyl::longest_element(&rd, Some(i)).compose(&weyl::longest_element(&rd, None));
            assert_eq!(weyl::length_extended(&rd, &ti), wi_w0.length(&rd), "{t} {i}");
            let rot = weyl::chamber_rotation(&rd, i).unwrap();
            assert_eq!(weyl::length_extended(&rd, &rot), 0);
            let c0 = fundamental_chamber(&rd);
            let image = apartment::apply(&rd, &rot, &c0).unwrap();
            assert_eq!(image.vertex_set(), c0.vertex_set());
        }
    }
}

fn word_strategy() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0usize..small_types().len()).prop_flat_map(|k| {
        let l = small_types()[k].rank();
        (Just(k), proptest::collection::vec(0..=l, 0..9))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn random_words((k, word) in word_strategy()) {
        let rd = RootDatum::new(small_types()[k]);
        let w = AffineWeylElement::from_word(&rd, &word);
        let len = weyl::length(&rd, &w).unwrap();
        prop_assert!(len <= word.len());
        prop_assert_eq!(len % 2, word.len() % 2);
        let reduced = weyl::reduced_word(&rd, &w).unwrap();
        prop_assert_eq!(reduced.len(), len);
        prop_assert_eq!(AffineWeylElement::from_word(&rd, &reduced), w.clone());
        prop_assert_eq!(w.linear().determinant(), weyl::sign_of_length(len));
        // simply transitive on alcoves: folding recovers w
        let c = apartment::apply(&rd, &w, &fundamental_chamber(&rd)).unwrap();
        let (u, labels) = locate_alcove(&rd, &c.vertices).unwrap();
        prop_assert_eq!(u, w.clone());
        prop_assert_eq!(labels, (0..=rd.rank()).collect::<Vec<_>>());
        prop_assert_eq!(w.compose(&w.inverse()), AffineWeylElement::identity(rd.rank()));
    }

    #[test]
    fn affine_reflections_fix_their_walls(k in 0usize..small_types().len(), idx in 0usize..40, r in -3i64..4) {
        let rd = RootDatum::new(small_types()[k]);
        let root = rd.positive_roots()[idx % rd.positive_roots().len()].clone();
        let s = weyl::affine_reflection(&rd, &root, r).unwrap();
        prop_assert!(s.compose(&s).is_identity());
        // a point on the wall: r / <varpi_i, root> varpi_i for some i with nonzero coefficient
        let i = root.iter().position(|&c| c != 0).unwrap() + 1;
        let x: Vec<Rat> = rd.fundamental_coweight(i).iter().map(|c| *c * Rat::new(r, root[i - 1])).collect();
        prop_assert_eq!(rd.pair_root(&x, &root), Rat::from_integer(r));
        prop_assert_eq!(s.apply(&x), x);
    }
}
