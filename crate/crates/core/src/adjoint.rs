//! The k-adjoint of an arrangement, and the product formula expressing the
//! adjoint of a product through tensor products of smaller adjoints.
//!
//! Coordinates of `ℚ^C(n,k)` are indexed by the k-subsets of `[n]` in
//! lexicographic order. Subsets are 1-based throughout this module, matching
//! the sign rule `(−1)^{k(k+1)/2 + Σ_{i∈I} i}`.

use std::collections::HashMap;

use itertools::Itertools;
use num::{One, Zero};

use crate::arrangement::{product, Arrangement};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, Flat, IntersectionLattice};
use crate::linalg::{det, minor, projective_normalize, QMatrix, Rational};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All k-subsets of `[n]` (1-based, sorted) in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSubsetIndex {
    n: usize,
    k: usize,
    subsets: Vec<Vec<usize>>,
    position: HashMap<Vec<usize>, usize>,
}

impl KSubsetIndex {
    pub fn new(n: usize, k: usize) -> Self {
        let subsets: Vec<Vec<usize>> = (1..=n).combinations(k).collect();
        let position = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        KSubsetIndex {
            n,
            k,
            subsets,
            position,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    pub fn position(&self, subset: &[usize]) -> Option<usize> {
        self.position.get(subset).copied()
    }

    /// Renders subset `i` as `{1,3}`.
    pub fn key(&self, i: usize) -> String {
        format!("{{{}}}", self.subsets[i].iter().join(","))
    }
}

/// `(−1)^{k(k+1)/2 + Σ I} · Δ_{[n]∖I}(basis)` for every k-subset `I`, where
/// `basis` spans a subspace of dimension `n − k`.
///
/// Defined for all `0 ≤ k ≤ n`; at `k = n` the empty minor is 1.
pub(crate) fn signed_complement_minors(
    basis: &QMatrix,
    idx: &KSubsetIndex,
) -> Result<Vec<Rational>> {
    let (n, k) = (idx.n(), idx.k());
    if basis.cols() != n || basis.rows() + k != n {
        return Err(Error::Dimension(format!(
            "a {}x{} basis cannot represent a flat of rank {k} in dimension {n}",
            basis.rows(),
            basis.cols()
        )));
    }
    let rows: Vec<usize> = (0..basis.rows()).collect();
    idx.subsets()
        .iter()
        .map(|subset| {
            let complement: Vec<usize> = (1..=n)
                .filter(|i| !subset.contains(i))
                .map(|i| i - 1)
                .collect();
            let m = minor(basis, &rows, &complement)?;
            let exponent = k * (k + 1) / 2 + subset.iter().sum::<usize>();
            Ok(if exponent % 2 == 0 { m } else { -m })
        })
        .collect()
}

/// Raw signed coefficients `a_I(X)` of the adjoint hyperplane of a rank-k flat,
/// computed from the flat's canonical basis.
pub fn adjoint_coefficients_raw(x: &Flat, idx: &KSubsetIndex) -> Result<Vec<Rational>> {
    let (n, k) = (idx.n(), idx.k());
    if k >= n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: n.saturating_sub(1),
        });
    }
    if x.rank != k {
        return Err(Error::RankMismatch {
            expected: k,
            found: x.rank,
        });
    }
    signed_complement_minors(&x.basis, idx)
}

/// Projectively normalized adjoint coefficients.
pub fn adjoint_coefficients(x: &Flat, idx: &KSubsetIndex) -> Result<Vec<Rational>> {
    let raw = adjoint_coefficients_raw(x, idx)?;
    projective_normalize(&raw)
        .ok_or_else(|| Error::Invariant("adjoint coefficient vector vanished".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointHyperplane {
    /// Index of the source flat `X` in the lattice of the base arrangement.
    pub flat: usize,
    /// `a_I(X)` from the canonical representative of `X`.
    pub raw: Vec<Rational>,
    /// Projective normal form of `raw`.
    pub coeffs: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct AdjointArrangement {
    pub k: usize,
    pub index: KSubsetIndex,
    /// One entry per rank-k flat, in lattice order; position `j` is hyperplane `j` of `base`.
    pub hyperplanes: Vec<AdjointHyperplane>,
    pub base: Arrangement,
}

impl AdjointArrangement {
    /// Lattice index of the flat behind adjoint hyperplane `j`.
    pub fn source(&self, j: usize) -> usize {
        self.hyperplanes[j].flat
    }
}

/// `𝒜^(k)`: builds the lattice of `a` and delegates to [`k_adjoint_with`].
pub fn k_adjoint(a: &Arrangement, k: usize) -> Result<AdjointArrangement> {
    k_adjoint_with(a, &build_lattice(a), k)
}

/// `𝒜^(k) = {H(X) : X ∈ L_k(𝒜)}` in `ℚ^C(n,k)`.
///
/// `k = n` gives the empty arrangement in `ℚ¹`. Two flats with the same
/// adjoint hyperplane are reported as [`Error::AdjointCollision`].
pub fn k_adjoint_with(
    a: &Arrangement,
    lattice: &IntersectionLattice,
    k: usize,
) -> Result<AdjointArrangement> {
    let n = a.dim();
    if !a.is_essential() {
        return Err(Error::NonEssential {
            rank: lattice.max_rank(),
            dim: n,
        });
    }
    if k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: n,
        });
    }
    let index = KSubsetIndex::new(n, k);
    if k == n {
        return Ok(AdjointArrangement {
            k,
            index,
            hyperplanes: Vec::new(),
            base: Arrangement::new_allow_non_essential(1, &[])?,
        });
    }

    let mut hyperplanes = Vec::new();
    let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
    for &fi in lattice.rank_indices(k) {
        let raw = adjoint_coefficients_raw(lattice.flat(fi), &index)?;
        let coeffs = projective_normalize(&raw)
            .ok_or_else(|| Error::Invariant("adjoint coefficient vector vanished".into()))?;
        if let Some(&first) = seen.get(&coeffs) {
            return Err(Error::AdjointCollision { first, second: fi });
        }
        seen.insert(coeffs.clone(), fi);
        hyperplanes.push(AdjointHyperplane {
            flat: fi,
            raw,
            coeffs,
        });
    }
    let normals: Vec<Vec<Rational>> = hyperplanes.iter().map(|h| h.coeffs.clone()).collect();
    let base = Arrangement::new_allow_non_essential(index.len(), &normals)?;
    Ok(AdjointArrangement {
        k,
        index,
        hyperplanes,
        base,
    })
}

/// `𝒜 ⊗ ℬ` in `ℚ^{n·m}`: hyperplane `(H, K)` has coefficient `aᵢ·bⱼ` on
/// coordinate `(i−1)·m + j`. Pairs are listed with `H` varying slowest.
pub fn tensor(a: &Arrangement, b: &Arrangement) -> Arrangement {
    let (n, m) = (a.dim(), b.dim());
    let normals: Vec<Vec<Rational>> = a
        .hyperplanes()
        .iter()
        .cartesian_product(b.hyperplanes())
        .map(|(h, k)| {
            h.normal()
                .iter()
                .flat_map(|x| k.normal().iter().map(move |y| x * y))
                .collect()
        })
        .collect();
    Arrangement::new_allow_non_essential(n * m, &normals)
        .expect("outer products of distinct normal pairs are distinct")
}

/// The `i`-adjoint as a tensor factor of the product formula. For `i = n`
/// the single rank-n flat `{0}` has the empty minor `Δ_∅ = 1` as its only
/// coefficient, which is the origin of `ℚ¹` rather than the empty arrangement.
fn product_factor(a: &Arrangement, lattice: &IntersectionLattice, i: usize) -> Result<Arrangement> {
    if i == a.dim() {
        return Arrangement::new(1, &[vec![Rational::one()]]);
    }
    Ok(k_adjoint_with(a, lattice, i)?.base)
}

/// `∏_{i=0}^{k} 𝒜^(i) ⊗ ℬ^(k−i)` with blocks ordered by increasing `i`;
/// blocks with `i > n` or `k − i > m` have dimension zero and are skipped.
pub fn product_adjoint_rhs(a: &Arrangement, b: &Arrangement, k: usize) -> Result<Arrangement> {
    let (n, m) = (a.dim(), b.dim());
    if k > n + m {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: n + m,
        });
    }
    let (la, lb) = (build_lattice(a), build_lattice(b));
    let mut acc = Arrangement::new_allow_non_essential(0, &[])?;
    for i in 0..=k {
        if i > n || k - i > m {
            continue;
        }
        let block = tensor(&product_factor(a, &la, i)?, &product_factor(b, &lb, k - i)?);
        acc = product(&acc, &block);
    }
    Ok(acc)
}

/// Coordinate correspondence between `C([n+m], k)` and the block layout of
/// [`product_adjoint_rhs`].
#[derive(Clone, Debug)]
pub struct ProductIndexBijection {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// `forward[p]` is the block-layout coordinate of the `p`-th lex k-subset of `[n+m]`.
    pub forward: Vec<usize>,
}

/// `J ↦ (J ∩ [n], (J ∖ [n]) − n)`.
pub fn split_subset(n: usize, subset: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let (low, high): (Vec<usize>, Vec<usize>) = subset.iter().partition(|&&j| j <= n);
    (low, high.into_iter().map(|j| j - n).collect())
}

/// `(I₁, I₂) ↦ I₁ ∪ (I₂ + n)`.
pub fn join_subsets(n: usize, low: &[usize], high: &[usize]) -> Vec<usize> {
    low.iter()
        .copied()
        .chain(high.iter().map(|j| j + n))
        .collect()
}

pub fn product_index_bijection(n: usize, m: usize, k: usize) -> ProductIndexBijection {
    let mut offsets = vec![0usize; k + 1];
    let mut total = 0;
    for (i, offset) in offsets.iter_mut().enumerate() {
        *offset = total;
        total += binomial(n, i) * binomial(m, k - i);
    }
    let full = KSubsetIndex::new(n + m, k);
    let forward = full
        .subsets()
        .iter()
        .map(|j| {
            let (low, high) = split_subset(n, j);
            let (l, r) = (low.len(), high.len());
            let low_pos = KSubsetIndex::new(n, l)
                .position(&low)
                .expect("subset of [n]");
            let high_pos = KSubsetIndex::new(m, r)
                .position(&high)
                .expect("subset of [m]");
            offsets[l] + low_pos * binomial(m, r) + high_pos
        })
        .collect();
    ProductIndexBijection { n, m, k, forward }
}

impl ProductIndexBijection {
    /// Moves a coefficient vector from lex coordinates of `C([n+m], k)` to the block layout.
    pub fn apply(&self, coeffs: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); coeffs.len()];
        for (p, c) in coeffs.iter().enumerate() {
            out[self.forward[p]] = c.clone();
        }
        out
    }
}

/// `Σ_I a_I(X)·Δ_I(U)` with raw coefficients from the canonical basis of `X`,
/// checked against `det [A_U; A_X]` where `A_X` is that same basis.
pub fn laplace_pairing(u_basis: &QMatrix, x: &Flat) -> Result<Rational> {
    let n = u_basis.cols();
    let k = u_basis.rows();
    if x.basis.cols() != n {
        return Err(Error::Dimension(format!(
            "subspace in dimension {n}, flat in dimension {}",
            x.basis.cols()
        )));
    }
    if x.rank != k {
        return Err(Error::RankMismatch {
            expected: k,
            found: x.rank,
        });
    }
    let idx = KSubsetIndex::new(n, k);
    let coeffs = signed_complement_minors(&x.basis, &idx)?;
    let rows: Vec<usize> = (0..k).collect();
    let mut pairing = Rational::zero();
    for (subset, a) in idx.subsets().iter().zip(&coeffs) {
        if a.is_zero() {
            continue;
        }
        let cols: Vec<usize> = subset.iter().map(|i| i - 1).collect();
        pairing += a * minor(u_basis, &rows, &cols)?;
    }
    let stacked = det(&u_basis.vstack(&x.basis)?)?;
    if stacked != pairing {
        return Err(Error::Invariant(format!(
            "Laplace pairing {pairing} differs from stacked determinant {stacked}"
        )));
    }
    Ok(pairing)
}
