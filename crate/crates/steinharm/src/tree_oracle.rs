//! The Bruhat-Tits tree of `PGL_2` built directly from lattice classes.
//!
//! A vertex is the class of the lattice spanned by `(p^a, 0)` and `(b, 1)`
//! with `b ∈ Z[1/p]`, `0 <= b < p^a`. Edges join `L` and `L'` with
//! `pL ⊂ L' ⊂ L`. Nothing here goes through the Iwahori coset model.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use steinharm_core::matrix::RatMatrix;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub a: i64,
    pub b: BigRational,
}

impl Vertex {
    /// Type of the vertex, `a mod 2`.
    pub fn label(&self) -> usize {
        self.a.rem_euclid(2) as usize
    }
}

/// An edge stored as (label-0 vertex, label-1 vertex).
pub type Edge = (Vertex, Vertex);

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn p_pow(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn int_val(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

fn val(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_val(x.numer(), p) - int_val(x.denom(), p))
}

/// The representative of `x + p^a Z_p` in `Z[1/p] ∩ [0, p^a)`.
fn reduce(x: &BigRational, p: u64, a: i64) -> BigRational {
    let v = match val(x, p) {
        None => return rat(0),
        Some(v) if v >= a => return rat(0),
        Some(v) => v,
    };
    let unit = x / p_pow(p, v);
    let modulus = num_traits::pow(BigInt::from(p), (a - v) as usize);
    let den_inv = {
        let e = unit.denom().mod_floor(&modulus).extended_gcd(&modulus);
        e.x.mod_floor(&modulus)
    };
    let r = (unit.numer() * den_inv).mod_floor(&modulus);
    BigRational::from_integer(r) * p_pow(p, v)
}

/// Class of the lattice spanned by the columns `(c0, c1)`.
pub fn normalize(cols: [[BigRational; 2]; 2], p: u64) -> Vertex {
    let [mut c0, mut c1] = cols;
    // second coordinates: c0[1], c1[1]; keep the one of least valuation in c1
    let v0 = val(&c0[1], p);
    let v1 = val(&c1[1], p);
    let swap = match (v0, v1) {
        (Some(_), None) => true,
        (Some(x), Some(y)) => x < y,
        _ => false,
    };
    if swap {
        std::mem::swap(&mut c0, &mut c1);
    }
    assert!(!c1[1].is_zero(), "degenerate lattice");
    let q = &c0[1] / &c1[1];
    c0 = [&c0[0] - &q * &c1[0], rat(0)];
    let z = c1[1].clone();
    let x = &c0[0] / &z;
    let y = &c1[0] / &z;
    let a = val(&x, p).expect("degenerate lattice");
    Vertex { a, b: reduce(&y, p, a) }
}

fn basis(v: &Vertex, p: u64) -> [[BigRational; 2]; 2] {
    [[p_pow(p, v.a), rat(0)], [v.b.clone(), rat(1)]]
}

fn combine(c: &[[BigRational; 2]; 2], s: &BigRational, t: &BigRational) -> [BigRational; 2] {
    [s * &c[0][0] + t * &c[1][0], s * &c[0][1] + t * &c[1][1]]
}

/// The `p + 1` neighbours of a vertex.
pub fn neighbors(v: &Vertex, p: u64) -> Vec<Vertex> {
    let c = basis(v, p);
    let pp = rat(p as i64);
    let mut out: Vec<Vertex> = (0..p as i64)
        .map(|t| normalize([combine(&c, &pp, &rat(0)), combine(&c, &rat(t), &rat(1))], p))
        .collect();
    out.push(normalize([c[0].clone(), combine(&c, &rat(0), &pp)], p));
    out
}

/// Class of `g Z_p^2`.
pub fn vertex_of(g: &RatMatrix, p: u64) -> Vertex {
    normalize([[g.get(0, 0).clone(), g.get(1, 0).clone()], [g.get(0, 1).clone(), g.get(1, 1).clone()]], p)
}

/// The neighbour of `v` on the ray towards the end given by the line
/// spanned by `e_1` (`axis = 0`) or `e_2` (`axis = 1`).
pub fn toward_end(v: &Vertex, axis: usize, p: u64) -> Vertex {
    let c = basis(v, p);
    let other = 1 - axis;
    // s c0 + t c1 has zero `other` coordinate
    let (mut s, mut t) = (c[1][other].clone(), -c[0][other].clone());
    let m = [val(&s, p), val(&t, p)].into_iter().flatten().min().expect("nonzero");
    s *= p_pow(p, -m);
    t *= p_pow(p, -m);
    let w = combine(&c, &s, &t);
    let pp = rat(p as i64);
    if val(&t, p) == Some(0) {
        normalize([combine(&c, &pp, &rat(0)), w], p)
    } else {
        normalize([w, combine(&c, &rat(0), &pp)], p)
    }
}

pub struct LatticeBall {
    pub p: u64,
    pub edges: Vec<Edge>,
    pub distances: Vec<usize>,
    pub vertices: BTreeSet<Vertex>,
}

fn edge(x: Vertex, y: Vertex) -> Edge {
    if x.label() == 0 {
        (x, y)
    } else {
        (y, x)
    }
}

/// Edges within gallery distance `radius` of the edge `{Z_p^2, <e_1, p e_2>}`.
pub fn lattice_ball(p: u64, radius: usize) -> LatticeBall {
    let v0 = Vertex { a: 0, b: rat(0) };
    let v1 = Vertex { a: -1, b: rat(0) };
    let start = edge(v0, v1);
    let mut dist: BTreeMap<Edge, usize> = BTreeMap::new();
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(e) = queue.pop_front() {
        let d = dist[&e];
        if d == radius {
            continue;
        }
        for (x, y) in [(&e.0, &e.1), (&e.1, &e.0)] {
            for w in neighbors(x, p) {
                if &w == y {
                    continue;
                }
                let f = edge(x.clone(), w);
                if !dist.contains_key(&f) {
                    dist.insert(f.clone(), d + 1);
                    queue.push_back(f);
                }
            }
        }
    }
    let vertices = dist.keys().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
    let (edges, distances) = dist.into_iter().unzip();
    LatticeBall { p, edges, distances, vertices }
}

impl LatticeBall {
    /// Vertices all of whose `p + 1` edges lie in the ball.
    pub fn interior_vertices(&self) -> Vec<Vertex> {
        let set: BTreeSet<&Edge> = self.edges.iter().collect();
        self.vertices
            .iter()
            .filter(|v| neighbors(v, self.p).into_iter().all(|w| set.contains(&edge((*v).clone(), w))))
            .cloned()
            .collect()
    }

    /// Rows `Σ_{e ∋ v} x_e = 0`, one per interior vertex, over the edge order.
    pub fn vertex_sum_rows(&self) -> Vec<Vec<BigRational>> {
        let index: BTreeMap<&Edge, usize> = self.edges.iter().enumerate().map(|(i, e)| (e, i)).collect();
        self.interior_vertices()
            .iter()
            .map(|v| {
                let mut row = vec![rat(0); self.edges.len()];
                for w in neighbors(v, self.p) {
                    row[index[&edge(v.clone(), w)]] = rat(1);
                }
                row
            })
            .collect()
    }

    /// `[ε ∈ U(e)] - [ε' ∈ U(e)]` on edges oriented from the label-1 end to
    /// the label-0 end, with `ε, ε'` the ends of the lines through `e_1, e_2`.
    pub fn difference_of_ends(&self) -> Vec<BigRational> {
        self.edges
            .iter()
            .map(|(v0, v1)| {
                let hit = |axis| i64::from(&toward_end(v1, axis, self.p) == v0);
                rat(hit(0) - hit(1))
            })
            .collect()
    }
}
