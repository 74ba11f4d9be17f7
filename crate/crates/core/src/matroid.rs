//! Vector matroids, in particular the matroid `𝔐_𝒜(U)` on the hyperplanes of
//! `𝒜` induced by a subspace `U`, and their counting invariants.
//!
//! Subsets of the ground set are `u32` bitmasks; elements are 0-based here and
//! reported 1-based by [`MatroidInvariants`].

use std::collections::{BTreeSet, HashMap};
use std::sync::Mutex;

use serde::Serialize;

use crate::arrangement::{restrict_to, Arrangement};
use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::lattice::{mobius_from_bottom, CharPoly};
use crate::linalg::{projective_normalize, rank_of, QMatrix, Rational};

pub const MAX_GROUND_SIZE: usize = 20;

pub type Mask = u32;

pub fn mask_of(elements: &[usize]) -> Mask {
    elements.iter().fold(0, |m, &e| m | (1 << e))
}

pub fn elements_of(mask: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize)
        .filter(|&e| mask >> e & 1 == 1)
        .collect()
}

/// Matroid of the columns `v₁, …, v_m ∈ ℚᵏ` with a memoized rank oracle.
#[derive(Debug)]
pub struct VectorMatroid {
    dim: usize,
    vectors: QMatrix,
    rank_cache: Mutex<HashMap<Mask, usize>>,
}

impl Clone for VectorMatroid {
    fn clone(&self) -> Self {
        VectorMatroid {
            dim: self.dim,
            vectors: self.vectors.clone(),
            rank_cache: Mutex::new(self.rank_cache.lock().expect("rank cache").clone()),
        }
    }
}

impl VectorMatroid {
    pub fn from_vectors(dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if vectors.len() > MAX_GROUND_SIZE {
            return Err(Error::OutOfRange {
                what: "ground size",
                value: vectors.len(),
                min: 0,
                max: MAX_GROUND_SIZE,
            });
        }
        Ok(VectorMatroid {
            dim,
            vectors: QMatrix::from_rows(dim, vectors.to_vec())?,
            rank_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.vectors.rows()
    }

    /// Dimension of the space the vectors live in.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, e: usize) -> &[Rational] {
        self.vectors.row(e)
    }

    pub fn ground(&self) -> Mask {
        if self.ground_size() == 0 {
            0
        } else {
            Mask::MAX >> (Mask::BITS as usize - self.ground_size())
        }
    }

    pub fn rank(&self, mask: Mask) -> usize {
        if let Some(&r) = self.rank_cache.lock().expect("rank cache").get(&mask) {
            return r;
        }
        let rows = self
            .vectors
            .select_rows(&elements_of(mask))
            .expect("mask within the ground set");
        let r = rank_of(&rows);
        self.rank_cache.lock().expect("rank cache").insert(mask, r);
        r
    }

    pub fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }

    pub fn is_independent(&self, mask: Mask) -> bool {
        self.rank(mask) == mask.count_ones() as usize
    }

    pub fn closure(&self, mask: Mask) -> Mask {
        let r = self.rank(mask);
        (0..self.ground_size())
            .filter(|&e| mask >> e & 1 == 1 || self.rank(mask | 1 << e) == r)
            .fold(0, |m, e| m | 1 << e)
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.ground_size())
            .filter(|&e| self.vector(e).iter().all(num::Zero::is_zero))
            .collect()
    }

    /// Non-loop elements grouped by the line they span, in order of first element.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_direction: HashMap<Vec<Rational>, usize> = HashMap::new();
        for e in 0..self.ground_size() {
            let Some(direction) = projective_normalize(self.vector(e)) else {
                continue;
            };
            match by_direction.get(&direction) {
                Some(&c) => classes[c].push(e),
                None => {
                    by_direction.insert(direction, classes.len());
                    classes.push(vec![e]);
                }
            }
        }
        classes
    }

    /// Every independent set, found by extending independent sets with larger elements.
    pub fn independent_sets(&self) -> Vec<Mask> {
        let mut out = vec![0];
        self.extend_independent(0, 0, &mut out);
        out
    }

    fn extend_independent(&self, mask: Mask, start: usize, out: &mut Vec<Mask>) {
        for e in start..self.ground_size() {
            let next = mask | 1 << e;
            if self.is_independent(next) {
                out.push(next);
                self.extend_independent(next, e + 1, out);
            }
        }
    }

    /// `I₀, …, I_r`: independent sets by size.
    pub fn independence_numbers(&self) -> Vec<usize> {
        let mut counts = vec![0; self.full_rank() + 1];
        for s in self.independent_sets() {
            counts[s.count_ones() as usize] += 1;
        }
        counts
    }

    /// Bases as sorted 0-based element lists, lexicographic.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let r = self.full_rank();
        let mut out: Vec<Vec<usize>> = self
            .independent_sets()
            .into_iter()
            .filter(|s| s.count_ones() as usize == r)
            .map(elements_of)
            .collect();
        out.sort();
        out
    }

    /// Minimal dependent sets. Each circuit `C` is found once, from the
    /// independent set `C ∖ max C`.
    pub fn circuits(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for s in self.independent_sets() {
            let start = if s == 0 {
                0
            } else {
                (Mask::BITS - s.leading_zeros()) as usize
            };
            for e in start..self.ground_size() {
                let c = s | 1 << e;
                if self.rank(c) == s.count_ones() as usize
                    && elements_of(s)
                        .iter()
                        .all(|&f| self.is_independent(c & !(1 << f)))
                {
                    out.push(elements_of(c));
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// `{C ∖ max C}` with the maximum taken in `order` (a permutation of the
    /// ground set listing elements from smallest to largest).
    pub fn broken_circuits(&self, order: &[usize]) -> Result<Vec<Vec<usize>>> {
        let position = self.order_positions(order)?;
        let set: BTreeSet<Vec<usize>> = self
            .circuits()
            .into_iter()
            .map(|c| {
                let top = *c
                    .iter()
                    .max_by_key(|&&e| position[e])
                    .expect("circuits are nonempty");
                c.into_iter().filter(|&e| e != top).collect()
            })
            .collect();
        let mut out: Vec<Vec<usize>> = set.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn order_positions(&self, order: &[usize]) -> Result<Vec<usize>> {
        let m = self.ground_size();
        let mut position = vec![usize::MAX; m];
        if order.len() != m {
            return Err(Error::InvalidOrder(format!(
                "{} elements given for a ground set of size {m}",
                order.len()
            )));
        }
        for (p, &e) in order.iter().enumerate() {
            if e >= m || position[e] != usize::MAX {
                return Err(Error::InvalidOrder(format!(
                    "element {} is repeated or outside the ground set",
                    e + 1
                )));
            }
            position[e] = p;
        }
        Ok(position)
    }

    pub fn natural_order(&self) -> Vec<usize> {
        (0..self.ground_size()).collect()
    }

    /// Number of sets of each size containing no broken circuit. A loop makes
    /// `∅` a broken circuit, so every count is zero.
    pub fn nbc_counts(&self, order: &[usize]) -> Result<Vec<usize>> {
        let broken: Vec<Mask> = self
            .broken_circuits(order)?
            .iter()
            .map(|b| mask_of(b))
            .collect();
        let mut counts = vec![0; self.full_rank() + 1];
        for s in self.independent_sets() {
            if broken.iter().all(|&b| b & s != b) {
                counts[s.count_ones() as usize] += 1;
            }
        }
        Ok(counts)
    }

    /// Closed sets graded by rank, built upward from the closure of `∅`.
    pub fn flats_lattice(&self) -> MatroidLattice {
        let r = self.full_rank();
        let mut by_rank: Vec<Vec<Mask>> = vec![vec![self.closure(0)]];
        for _ in 0..r {
            let mut next: BTreeSet<Mask> = BTreeSet::new();
            for &f in by_rank.last().expect("rank 0 present") {
                for e in 0..self.ground_size() {
                    if f >> e & 1 == 0 {
                        next.insert(self.closure(f | 1 << e));
                    }
                }
            }
            by_rank.push(next.into_iter().collect());
        }
        let flats: Vec<Mask> = by_rank.iter().flatten().copied().collect();
        let ranks: Vec<usize> = by_rank
            .iter()
            .enumerate()
            .flat_map(|(i, level)| std::iter::repeat_n(i, level.len()))
            .collect();
        let element_lists: Vec<Vec<usize>> = flats.iter().map(|&f| elements_of(f)).collect();
        let refs: Vec<&[usize]> = element_lists.iter().map(Vec::as_slice).collect();
        let mobius = mobius_from_bottom(&refs);
        MatroidLattice {
            rank: r,
            flats,
            ranks,
            mobius,
        }
    }

    /// `χ(t) = Σ_F μ(0̂, F) t^{r − rank F}` over the flats lattice.
    pub fn characteristic_polynomial(&self) -> CharPoly {
        self.flats_lattice().characteristic_polynomial()
    }

    pub fn whitney_numbers(&self) -> Vec<i64> {
        self.characteristic_polynomial().coeffs
    }

    /// `Σ_i (−1)^i nbc_i t^{r−i}`; identically zero when a loop exists.
    pub fn nbc_polynomial(&self, order: &[usize]) -> Result<CharPoly> {
        let coeffs = self
            .nbc_counts(order)?
            .into_iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .collect();
        Ok(CharPoly { coeffs })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidLattice {
    pub rank: usize,
    /// Flats sorted by rank, then by mask.
    pub flats: Vec<Mask>,
    pub ranks: Vec<usize>,
    pub mobius: Vec<i64>,
}

impl MatroidLattice {
    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank + 1];
        for &r in &self.ranks {
            sizes[r] += 1;
        }
        sizes
    }

    pub fn bottom(&self) -> Mask {
        self.flats[0]
    }

    pub fn characteristic_polynomial(&self) -> CharPoly {
        let mut coeffs = vec![0i64; self.rank + 1];
        for (&r, &mu) in self.ranks.iter().zip(&self.mobius) {
            coeffs[r] += mu;
        }
        CharPoly { coeffs }
    }
}

/// `𝔐_𝒜(U)`: element `i` is `A_U·αᵢᵀ`, the restriction of the `i`-th linear
/// form to `U` written in the canonical basis of `U`.
pub fn matroid_of_restriction(a: &Arrangement, u: &Subspace) -> Result<VectorMatroid> {
    if u.n() != a.dim() {
        return Err(Error::Dimension(format!(
            "subspace in ℚ^{}, arrangement in ℚ^{}",
            u.n(),
            a.dim()
        )));
    }
    let columns = a
        .hyperplanes()
        .iter()
        .map(|h| u.basis().mul_vec(h.normal()))
        .collect::<Result<Vec<_>>>()?;
    VectorMatroid::from_vectors(u.k(), &columns)
}

/// True iff both matroids have the same bases.
pub fn matroid_equal(m1: &VectorMatroid, m2: &VectorMatroid) -> Result<bool> {
    if m1.ground_size() != m2.ground_size() {
        return Err(Error::GroundSizeMismatch {
            left: m1.ground_size(),
            right: m2.ground_size(),
        });
    }
    Ok(m1.full_rank() == m2.full_rank() && m1.bases() == m2.bases())
}

/// Counting invariants of one matroid; element labels are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatroidInvariants {
    pub rank: usize,
    pub loops: Vec<usize>,
    pub parallel_classes: Vec<Vec<usize>>,
    pub bases_count: usize,
    #[serde(rename = "I")]
    pub independence_numbers: Vec<usize>,
    #[serde(rename = "w")]
    pub whitney: Vec<i64>,
    pub char_poly: Vec<i64>,
    pub nbc: Vec<usize>,
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|e| e + 1).collect()
}

impl MatroidInvariants {
    pub fn of(m: &VectorMatroid, order: &[usize]) -> Result<Self> {
        let chi = m.characteristic_polynomial();
        Ok(MatroidInvariants {
            rank: m.full_rank(),
            loops: one_based(&m.loops()),
            parallel_classes: m.parallel_classes().iter().map(|c| one_based(c)).collect(),
            bases_count: m.bases().len(),
            independence_numbers: m.independence_numbers(),
            whitney: chi.coeffs.clone(),
            char_poly: chi.coeffs,
            nbc: m.nbc_counts(order)?,
        })
    }
}

/// Matroid of the deduplicated restriction `𝒜|_U`, whose ground set is the set
/// of restricted hyperplanes rather than `[m]`.
pub fn restricted_arrangement_matroid(a: &Arrangement, u: &Subspace) -> Result<VectorMatroid> {
    let r = restrict_to(a, u)?;
    let normals: Vec<Vec<Rational>> = r
        .arrangement
        .hyperplanes()
        .iter()
        .map(|h| h.normal().to_vec())
        .collect();
    VectorMatroid::from_vectors(u.k(), &normals)
}
