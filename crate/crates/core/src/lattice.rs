//! Intersection lattices, maximal chains and characteristic polynomials.
//!
//! Flats are ordered by reverse inclusion, so `X ≤ Y` iff `Y ⊆ X` as
//! subspaces, which for closed flats is the same as
//! `contains(X) ⊆ contains(Y)`.

use std::collections::HashMap;
use std::fmt;

use num::Zero;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{dot, kernel_basis, row_space_basis, QMatrix, Rational};

/// Default bound on the number of maximal chains enumerated.
pub const DEFAULT_CHAIN_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    /// Sorted 0-based indices of all hyperplanes containing the subspace.
    pub contains: Vec<usize>,
    /// Canonical RREF basis whose row space is the subspace.
    pub basis: QMatrix,
    /// Codimension in the ambient space.
    pub rank: usize,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    dim: usize,
    flats: Vec<Flat>,
    by_rank: Vec<Vec<usize>>,
    hasse_edges: Vec<(usize, usize)>,
    mobius: Vec<i64>,
    by_basis: HashMap<QMatrix, usize>,
    by_contains: HashMap<Vec<usize>, usize>,
}

/// Subspace cut out by the given hyperplanes, with its closed contains-set.
fn flat_of(a: &Arrangement, subset: &[usize]) -> Flat {
    let basis = if subset.is_empty() {
        QMatrix::identity(a.dim())
    } else {
        row_space_basis(&kernel_basis(&a.normals_of(subset)))
    };
    let contains = (0..a.len())
        .filter(|&i| (0..basis.rows()).all(|r| dot(basis.row(r), a.normal(i)).is_zero()))
        .collect();
    Flat {
        contains,
        rank: a.dim() - basis.rows(),
        basis,
    }
}

/// Breadth-first closure: every flat of rank `r + 1` is some rank-`r` flat
/// cut by one hyperplane not containing it. Flats within a rank are ordered
/// lexicographically by contains-set.
pub fn build_lattice(a: &Arrangement) -> IntersectionLattice {
    let mut levels: Vec<Vec<Flat>> = vec![vec![flat_of(a, &[])]];
    loop {
        let current = levels.last().expect("at least the bottom level");
        let mut next: Vec<Flat> = Vec::new();
        let mut seen: HashMap<QMatrix, ()> = HashMap::new();
        for x in current {
            for i in 0..a.len() {
                if x.contains.binary_search(&i).is_ok() {
                    continue;
                }
                let mut subset = x.contains.clone();
                subset.push(i);
                let y = flat_of(a, &subset);
                if seen.insert(y.basis.clone(), ()).is_none() {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|p, q| p.contains.cmp(&q.contains));
        levels.push(next);
    }

    let mut flats = Vec::new();
    let mut by_rank = Vec::with_capacity(levels.len());
    for level in levels {
        let start = flats.len();
        by_rank.push((start..start + level.len()).collect());
        flats.extend(level);
    }
    let sets: Vec<&[usize]> = flats.iter().map(|f| f.contains.as_slice()).collect();
    let mobius = mobius_from_bottom(&sets);
    let hasse_edges = covering_pairs(&by_rank, &sets);
    let by_basis = flats
        .iter()
        .enumerate()
        .map(|(i, f)| (f.basis.clone(), i))
        .collect();
    let by_contains = flats
        .iter()
        .enumerate()
        .map(|(i, f)| (f.contains.clone(), i))
        .collect();
    IntersectionLattice {
        dim: a.dim(),
        flats,
        by_rank,
        hasse_edges,
        mobius,
        by_basis,
        by_contains,
    }
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

/// `μ(0̂, X)` for sets listed by nondecreasing rank with `sets[0]` the bottom,
/// ordered by inclusion.
pub(crate) fn mobius_from_bottom(sets: &[&[usize]]) -> Vec<i64> {
    let mut mu = vec![0i64; sets.len()];
    for x in 0..sets.len() {
        if x == 0 {
            mu[0] = 1;
            continue;
        }
        let below: i64 = (0..x)
            .filter(|&y| sets[y].len() < sets[x].len() && is_subset(sets[y], sets[x]))
            .map(|y| mu[y])
            .sum();
        mu[x] = -below;
    }
    mu
}

pub(crate) fn covering_pairs(by_rank: &[Vec<usize>], sets: &[&[usize]]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for w in by_rank.windows(2) {
        for &hi in &w[1] {
            for &lo in &w[0] {
                if is_subset(sets[lo], sets[hi]) {
                    edges.push((lo, hi));
                }
            }
        }
    }
    edges.sort_unstable();
    edges
}

impl IntersectionLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Largest rank present (the rank of the center).
    pub fn max_rank(&self) -> usize {
        self.by_rank.len() - 1
    }

    pub fn rank_sizes(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    /// Indices of all flats of the given rank (empty past the top).
    pub fn rank_indices(&self, rank: usize) -> &[usize] {
        self.by_rank.get(rank).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn hasse_edges(&self) -> &[(usize, usize)] {
        &self.hasse_edges
    }

    pub fn mobius(&self, i: usize) -> i64 {
        self.mobius[i]
    }

    pub fn mobius_values(&self) -> &[i64] {
        &self.mobius
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    /// `x ≤ y` in reverse inclusion.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        is_subset(&self.flats[x].contains, &self.flats[y].contains)
    }

    pub fn index_of_basis(&self, basis: &QMatrix) -> Option<usize> {
        self.by_basis.get(basis).copied()
    }

    pub fn index_of_contains(&self, contains: &[usize]) -> Option<usize> {
        self.by_contains.get(contains).copied()
    }

    /// The flat `⋂_{i ∈ subset} Hᵢ`.
    pub fn flat_of_subset(&self, a: &Arrangement, subset: &[usize]) -> usize {
        let f = flat_of(a, subset);
        self.index_of_basis(&f.basis)
            .expect("every intersection of hyperplanes is a flat")
    }

    /// Flats of rank exactly `k`.
    pub fn rank_k_flats(&self, k: usize) -> Result<Vec<&Flat>> {
        if k > self.dim {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                min: 0,
                max: self.dim,
            });
        }
        Ok(self
            .rank_indices(k)
            .iter()
            .map(|&i| &self.flats[i])
            .collect())
    }

    /// The flat whose relative interior contains `point`: the intersection of
    /// every hyperplane through the point.
    pub fn locate_flat(&self, a: &Arrangement, point: &[Rational]) -> Result<usize> {
        if point.len() != self.dim {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.dim
            )));
        }
        let through: Vec<usize> = (0..a.len())
            .filter(|&i| a.hyperplanes()[i].contains_point(point))
            .collect();
        // The set of hyperplanes through a point is already closed.
        self.index_of_contains(&through)
            .ok_or_else(|| Error::Invariant("point set of hyperplanes is not a flat".into()))
    }

    /// All maximal chains `0̂ = X₀ < X₁ < … < Xₙ`, depth first along Hasse
    /// edges, converted to flags with `Fᵢ = X_{n−i}`.
    pub fn maximal_chains(&self, cap: usize) -> Result<Vec<Flag>> {
        if self.max_rank() != self.dim {
            return Err(Error::NonEssential {
                rank: self.max_rank(),
                dim: self.dim,
            });
        }
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); self.flats.len()];
        for &(lo, hi) in &self.hasse_edges {
            up[lo].push(hi);
        }
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut path = vec![self.bottom()];
        self.extend_chains(&up, &mut path, &mut chains, cap)?;
        Ok(chains
            .into_iter()
            .map(|chain| {
                let flats: Vec<usize> = chain.into_iter().rev().collect();
                let bases = flats.iter().map(|&i| self.flats[i].basis.clone()).collect();
                Flag { flats, bases }
            })
            .collect())
    }

    fn extend_chains(
        &self,
        up: &[Vec<usize>],
        path: &mut Vec<usize>,
        chains: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        let last = *path.last().expect("path starts at the bottom");
        if up[last].is_empty() {
            if chains.len() == cap {
                return Err(Error::BudgetExceeded {
                    reached: cap + 1,
                    cap,
                });
            }
            chains.push(path.clone());
            return Ok(());
        }
        for &next in &up[last] {
            path.push(next);
            self.extend_chains(up, path, chains, cap)?;
            path.pop();
        }
        Ok(())
    }

    /// `Σ_X μ(0̂, X) t^{n − rank X}`.
    pub fn characteristic_polynomial(&self) -> CharPoly {
        let mut coeffs = vec![0i64; self.dim + 1];
        for (f, &mu) in self.flats.iter().zip(&self.mobius) {
            coeffs[f.rank] += mu;
        }
        CharPoly { coeffs }
    }
}

/// A complete flag `{0} = F₀ ⊂ F₁ ⊂ … ⊂ Fₙ` taken from a maximal chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    /// Lattice indices of `F₀, …, Fₙ`.
    pub flats: Vec<usize>,
    /// Basis of each `Fᵢ` (`i` rows).
    pub bases: Vec<QMatrix>,
}

impl Flag {
    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }
}

/// Integer polynomial in `t`, coefficients listed from the leading term down.
///
/// For a characteristic polynomial of rank `d`, `coeffs[i]` is the Whitney
/// number `wᵢ`, the coefficient of `t^{d−i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharPoly {
    pub coeffs: Vec<i64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn whitney(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().fold(0, |acc, &c| acc * t + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let power = d - i;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (a, power) {
                (_, 0) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, p) => write!(f, "t^{p}")?,
                (_, 1) => write!(f, "{a}t")?,
                (_, p) => write!(f, "{a}t^{p}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::a3;
    use crate::linalg::qvec;
    use itertools::Itertools;

    fn brute_force_rank_sizes(a: &Arrangement) -> Vec<usize> {
        let mut seen: HashMap<QMatrix, usize> = HashMap::new();
        for size in 0..=a.len() {
            for subset in (0..a.len()).combinations(size) {
                let f = flat_of(a, &subset);
                seen.insert(f.basis, f.rank);
            }
        }
        let mut sizes = vec![0; a.dim() + 1];
        for r in seen.values() {
            sizes[*r] += 1;
        }
        sizes
    }

    #[test]
    fn boolean_rank_sizes() {
        let l = build_lattice(&Arrangement::boolean(4));
        assert_eq!(l.rank_sizes(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn a3_rank_sizes_match_brute_force() {
        let a = a3();
        let l = build_lattice(&a);
        assert_eq!(brute_force_rank_sizes(&a), vec![1, 4, 6, 1]);
        assert_eq!(l.rank_sizes(), vec![1, 4, 6, 1]);
    }

    #[test]
    fn b2_mobius() {
        let l = build_lattice(&Arrangement::boolean(2));
        assert_eq!(l.mobius_values(), &[1, -1, -1, 1]);
    }

    #[test]
    fn rank_k_flats_examples() {
        let b4 = build_lattice(&Arrangement::boolean(4));
        assert_eq!(b4.rank_k_flats(2).unwrap().len(), 6);
        let bottom = b4.rank_k_flats(0).unwrap();
        assert_eq!(bottom.len(), 1);
        assert_eq!(bottom[0].basis, QMatrix::identity(4));
        assert!(b4.rank_k_flats(5).is_err());
        let l = build_lattice(&a3());
        assert_eq!(l.rank_k_flats(2).unwrap().len(), 6);
    }

    #[test]
    fn locate_examples() {
        let a = Arrangement::boolean(4);
        let l = build_lattice(&a);
        let x = l.locate_flat(&a, &qvec(&[1, 1, 1, 1])).unwrap();
        assert_eq!(l.flat(x).rank, 0);
        let x = l.locate_flat(&a, &qvec(&[0, 0, 1, 1])).unwrap();
        assert_eq!(l.flat(x).rank, 2);
        assert_eq!(l.flat(x).contains, vec![0, 1]);
        let x = l.locate_flat(&a, &qvec(&[0, 0, 0, 0])).unwrap();
        assert_eq!(l.flat(x).rank, 4);
    }

    #[test]
    fn locate_agrees_with_direct_scan() {
        let a = a3();
        let l = build_lattice(&a);
        for p in [
            [0, 0, 1],
            [1, -1, 0],
            [1, 1, -2],
            [2, 3, 5],
            [0, 0, 0],
            [1, 0, -1],
        ] {
            let point = qvec(&p);
            let x = l.locate_flat(&a, &point).unwrap();
            let on = |f: &Flat| {
                let k = kernel_basis(&f.basis);
                k.mul_vec(&point).unwrap().iter().all(Zero::is_zero)
            };
            assert!(on(l.flat(x)));
            for y in 0..l.len() {
                if y != x && l.leq(x, y) {
                    assert!(!on(l.flat(y)));
                }
            }
        }
    }

    #[test]
    fn chain_counts() {
        let b2 = build_lattice(&Arrangement::boolean(2));
        assert_eq!(b2.maximal_chains(DEFAULT_CHAIN_CAP).unwrap().len(), 2);
        let b3 = build_lattice(&Arrangement::boolean(3));
        assert_eq!(b3.maximal_chains(DEFAULT_CHAIN_CAP).unwrap().len(), 6);
        let l = build_lattice(&a3());
        let chains = l.maximal_chains(DEFAULT_CHAIN_CAP).unwrap();
        // Each atom lies in three lines and every line sits below the top.
        let by_atoms: usize = l
            .rank_indices(1)
            .iter()
            .map(|&x| l.rank_indices(2).iter().filter(|&&y| l.leq(x, y)).count())
            .sum();
        assert_eq!(chains.len(), by_atoms);
        assert_eq!(chains.len(), 12);
        for f in &chains {
            assert_eq!(f.len(), 4);
            for (i, b) in f.bases.iter().enumerate() {
                assert_eq!(b.rows(), i);
            }
        }
        assert_eq!(
            l.maximal_chains(10),
            Err(Error::BudgetExceeded {
                reached: 11,
                cap: 10
            })
        );
    }

    #[test]
    fn char_polys() {
        let b4 = build_lattice(&Arrangement::boolean(4)).characteristic_polynomial();
        assert_eq!(b4.coeffs, vec![1, -4, 6, -4, 1]);
        let a = build_lattice(&a3()).characteristic_polynomial();
        assert_eq!(a.coeffs, vec![1, -4, 6, -3]);
        assert_eq!(a.to_string(), "t^3 - 4t^2 + 6t - 3");
        let b2 = build_lattice(&Arrangement::boolean(2)).characteristic_polynomial();
        assert_eq!(b2.to_string(), "t^2 - 2t + 1");
    }

    #[test]
    fn lattice_closed_under_intersection() {
        let a = a3();
        let l = build_lattice(&a);
        for x in 0..l.len() {
            for y in 0..l.len() {
                let normals = kernel_basis(&l.flat(x).basis)
                    .vstack(&kernel_basis(&l.flat(y).basis))
                    .unwrap();
                let meet = row_space_basis(&kernel_basis(&normals));
                assert!(l.index_of_basis(&meet).is_some());
            }
        }
    }

    #[test]
    fn mobius_sums_vanish_on_intervals() {
        let l = build_lattice(&a3());
        for x in 1..l.len() {
            let s: i64 = (0..l.len())
                .filter(|&y| l.leq(y, x))
                .map(|y| l.mobius(y))
                .sum();
            assert_eq!(s, 0);
        }
    }
}
