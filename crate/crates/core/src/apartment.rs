//! The fundamental apartment: alcoves as ordered vertex tuples, vertex labels,
//! pointed chambers and the permutations induced by the rotations
//! `t_i w_i w_0` of the fundamental alcove.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::rootdata::RootDatum;
use crate::weyl::{self, AffineWeylElement};
use crate::{Error, Rat, Result};

/// An alcove given by its `l + 1` vertices together with their labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentAlcove {
    pub vertices: Vec<Vec<Rat>>,
    pub labels: Vec<usize>,
}

impl ApartmentAlcove {
    pub fn barycenter(&self) -> Vec<Rat> {
        barycenter(&self.vertices)
    }

    /// Vertex set, sorted, for comparing alcoves irrespective of order.
    pub fn vertex_set(&self) -> Vec<Vec<Rat>> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

fn barycenter(vertices: &[Vec<Rat>]) -> Vec<Rat> {
    let l = vertices[0].len();
    let n = Rat::from_integer(vertices.len() as i64);
    (0..l)
        .map(|c| vertices.iter().fold(Rat::from_integer(0), |acc, v| acc + v[c]) / n)
        .collect()
}

/// `C_0`: `v_0 = 0`, `v_i = varpi_i / n_i`, label `i` at position `i`.
pub fn fundamental_chamber(rd: &RootDatum) -> ApartmentAlcove {
    let l = rd.rank();
    let mut vertices = vec![vec![Rat::from_integer(0); l]];
    for i in 1..=l {
        let n = Rat::from_integer(rd.marks()[i - 1]);
        vertices.push(rd.fundamental_coweight(i).iter().map(|x| *x / n).collect());
    }
    ApartmentAlcove { vertices, labels: (0..=l).collect() }
}

/// Folds an alcove back onto `C_0` by reflecting in walls of `C_0`. Returns
/// the element `u ∈ W_a` with `u(C_0)` equal to the alcove, and for each
/// vertex of the alcove its label.
pub fn locate_alcove(rd: &RootDatum, vertices: &[Vec<Rat>]) -> Result<(AffineWeylElement, Vec<usize>)> {
    let l = rd.rank();
    let mut current: Vec<Vec<Rat>> = vertices.to_vec();
    let mut folded = AffineWeylElement::identity(l);
    let one = Rat::from_integer(1);
    let zero = Rat::from_integer(0);
    loop {
        let bary = barycenter(&current);
        let wall = (1..=l)
            .find(|&i| rd.pair_simple(&bary, i) < zero)
            .or_else(|| (rd.pair(&bary, rd.highest_index()) > one).then_some(0));
        let Some(s) = wall else { break };
        let g = AffineWeylElement::generator(rd, s);
        current = current.iter().map(|v| g.apply(v)).collect();
        folded = g.compose(&folded);
    }
    let c0 = fundamental_chamber(rd);
    let labels = current
        .iter()
        .map(|v| {
            c0.vertices
                .iter()
                .position(|u| u == v)
                .ok_or_else(|| Error::Internal(format!("vertex {v:?} is not a vertex of C_0 after folding")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((folded.inverse(), labels))
}

/// Image of an alcove under an element of the extended affine Weyl group,
/// with labels recomputed from the geometry.
pub fn apply(rd: &RootDatum, w: &AffineWeylElement, c: &ApartmentAlcove) -> Result<ApartmentAlcove> {
    let vertices: Vec<Vec<Rat>> = c.vertices.iter().map(|v| w.apply(v)).collect();
    let (_, labels) = locate_alcove(rd, &vertices)?;
    Ok(ApartmentAlcove { vertices, labels })
}

/// A permutation of `{0, ..., l}` as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&k| self.0[k]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v] = k;
        }
        Self(inv)
    }

    /// `+1` or `-1`, from the cycle decomposition.
    pub fn sign(&self) -> i64 {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.0[k];
                len += 1;
            }
            transpositions += len - 1;
        }
        weyl::sign_of_length(transpositions)
    }
}

/// `sigma_i` with `t_i w_i w_0 (v_k) = v_{sigma_i(k)}`, for `i ∈ J`.
pub fn sigma_permutation(rd: &RootDatum, i: usize) -> Result<Permutation> {
    if i == 0 || i > rd.rank() || !rd.is_special_label(i) {
        return Err(Error::NotSpecial(i));
    }
    let rot = weyl::chamber_rotation(rd, i)?;
    let c0 = fundamental_chamber(rd);
    let images = c0
        .vertices
        .iter()
        .map(|v| {
            let image = rot.apply(v);
            c0.vertices
                .iter()
                .position(|u| *u == image)
                .ok_or_else(|| Error::Internal(format!("t_{i} w_{i} w_0 does not stabilize C_0")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Permutation(images))
}

/// The re-pointing permutation for pointer label `i`: identity for `0`,
/// `sigma_i` for `i ∈ J`.
pub fn pointing_permutation(rd: &RootDatum, label: usize) -> Result<Permutation> {
    if label == 0 {
        Ok(Permutation::identity(rd.rank() + 1))
    } else {
        sigma_permutation(rd, label)
    }
}

/// `C_0` with a distinguished special vertex and the induced vertex ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedApartmentChamber {
    pub alcove: ApartmentAlcove,
    pub pointer_index: usize,
    pub ordered_vertices: Vec<Vec<Rat>>,
}

pub fn pointed_fundamental(rd: &RootDatum, label: usize) -> Result<PointedApartmentChamber> {
    if !rd.is_special_label(label) {
        return Err(Error::NotSpecial(label));
    }
    let alcove = fundamental_chamber(rd);
    let sigma = pointing_permutation(rd, label)?;
    let ordered_vertices = (0..=rd.rank()).map(|k| alcove.vertices[sigma.apply(k)].clone()).collect();
    Ok(PointedApartmentChamber { alcove, pointer_index: label, ordered_vertices })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaTecRow {
    pub label: usize,
    pub sigma: Permutation,
    pub sign_sigma: i64,
    pub length: usize,
    pub length_sign: i64,
}

impl LemmaTecRow {
    pub fn holds(&self) -> bool {
        self.sign_sigma == self.length_sign
    }
}

/// For each `i ∈ J`: `sign(sigma_i)` and `(-1)^{l(w_i w_0)}`.
pub fn verify_lemma_tec(rd: &RootDatum) -> Result<Vec<LemmaTecRow>> {
    rd.special_set()
        .into_iter()
        .map(|i| {
            let sigma = sigma_permutation(rd, i)?;
            let wi_w0 = weyl::longest_element(rd, Some(i)).compose(&weyl::longest_element(rd, None));
            let length = wi_w0.length(rd);
            Ok(LemmaTecRow {
                label: i,
                sign_sigma: sigma.sign(),
                sigma,
                length,
                length_sign: weyl::sign_of_length(length),
            })
        })
        .collect()
}
