//! Subspaces of `ℚⁿ` and where they sit relative to an arrangement: the
//! adjoint stratum of the Plücker vector, the flats complementary to the
//! subspace (`L_U`) or meeting it (`L^U`), and Schubert symbols along flags.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adjoint::{laplace_pairing, AdjointArrangement, KSubsetIndex};
use crate::error::{Error, Result};
use crate::lattice::{Flag, IntersectionLattice};
use crate::linalg::{dot, minor, projective_normalize, q, rank_of, rref, QMatrix, Rational};

const MAX_ATTEMPTS: usize = 1000;

/// A `k`-dimensional subspace stored by the RREF of any spanning basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    k: usize,
    n: usize,
    basis: QMatrix,
}

impl Subspace {
    /// The row space of `rows`, which must be linearly independent.
    pub fn new(rows: &QMatrix) -> Result<Self> {
        let r = rref(rows);
        if r.rank != rows.rows() {
            return Err(Error::InvalidSubspace(format!(
                "{} basis rows span only a {}-dimensional space",
                rows.rows(),
                r.rank
            )));
        }
        let basis = r.rref.select_rows(&(0..r.rank).collect::<Vec<_>>())?;
        Ok(Subspace {
            k: r.rank,
            n: rows.cols(),
            basis,
        })
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Subspace::new(&QMatrix::from_rows(n, rows)?)
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            k: 0,
            n,
            basis: QMatrix::zeros(0, n),
        }
    }

    pub fn whole(n: usize) -> Self {
        Subspace {
            k: n,
            n,
            basis: QMatrix::identity(n),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    /// `dim(U ∩ W) = dim U + dim W − dim(U + W)` for `W` the row space of `w`.
    pub fn intersection_dim(&self, w: &QMatrix) -> Result<usize> {
        let stacked = self.basis.vstack(w)?;
        Ok(self.k + rank_of(w) - rank_of(&stacked))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    pub idx: KSubsetIndex,
    pub coords: Vec<Rational>,
}

/// Raw maximal minors `Δ_I` of the canonical basis, lex over `I`.
pub fn plucker_raw(u: &Subspace) -> Vec<Rational> {
    let idx = KSubsetIndex::new(u.n, u.k);
    let rows: Vec<usize> = (0..u.k).collect();
    idx.subsets()
        .iter()
        .map(|s| {
            let cols: Vec<usize> = s.iter().map(|i| i - 1).collect();
            minor(&u.basis, &rows, &cols).expect("k columns of a k-row basis")
        })
        .collect()
}

pub fn plucker(u: &Subspace) -> PluckerVector {
    let coords = projective_normalize(&plucker_raw(u))
        .expect("a basis of full row rank has a nonzero maximal minor");
    PluckerVector {
        idx: KSubsetIndex::new(u.n, u.k),
        coords,
    }
}

fn check_adjoint_shape(u: &Subspace, adj: &AdjointArrangement) -> Result<()> {
    if u.n != adj.index.n() || u.k != adj.k {
        return Err(Error::Dimension(format!(
            "subspace of dimension {} in ℚ^{} cannot be compared with a {}-adjoint in dimension {}",
            u.k,
            u.n,
            adj.k,
            adj.index.n()
        )));
    }
    Ok(())
}

/// The adjoint stratum of `U`: the flat `P` of `L(𝒜^(k))` with `Δ(U)` in its
/// relative interior. Returns the index of `P` in `adj_lattice`.
pub fn locate_stratum(
    u: &Subspace,
    adj: &AdjointArrangement,
    adj_lattice: &IntersectionLattice,
) -> Result<usize> {
    check_adjoint_shape(u, adj)?;
    adj_lattice.locate_flat(&adj.base, &plucker(u).coords)
}

fn check_flat_rank(u: &Subspace, lat: &IntersectionLattice) -> Result<()> {
    if u.n != lat.dim() {
        return Err(Error::Dimension(format!(
            "subspace in ℚ^{}, lattice in ℚ^{}",
            u.n,
            lat.dim()
        )));
    }
    Ok(())
}

/// `L_U(𝒜)`: rank-k flats `X` with `U ⊕ X = ℚⁿ`, by the rank of `[A_U; A_X]`.
pub fn l_lower(u: &Subspace, lat: &IntersectionLattice) -> Result<Vec<usize>> {
    check_flat_rank(u, lat)?;
    split_by_rank(u, lat, true)
}

/// `L^U(𝒜)`: rank-k flats meeting `U` nontrivially.
pub fn l_upper(u: &Subspace, lat: &IntersectionLattice) -> Result<Vec<usize>> {
    check_flat_rank(u, lat)?;
    split_by_rank(u, lat, false)
}

fn split_by_rank(
    u: &Subspace,
    lat: &IntersectionLattice,
    complementary: bool,
) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &fi in lat.rank_indices(u.k) {
        let stacked = u.basis.vstack(&lat.flat(fi).basis)?;
        if (rank_of(&stacked) == u.n) == complementary {
            out.push(fi);
        }
    }
    Ok(out)
}

/// `L_U(𝒜)` by the Laplace pairing of `U` with each flat.
pub fn l_lower_by_pairing(u: &Subspace, lat: &IntersectionLattice) -> Result<Vec<usize>> {
    check_flat_rank(u, lat)?;
    let mut out = Vec::new();
    for &fi in lat.rank_indices(u.k) {
        if !laplace_pairing(&u.basis, lat.flat(fi))?.is_zero() {
            out.push(fi);
        }
    }
    Ok(out)
}

/// `L_U(𝒜)` as the flats whose adjoint hyperplane misses `Δ(U)`.
pub fn l_lower_by_adjoint(u: &Subspace, adj: &AdjointArrangement) -> Result<Vec<usize>> {
    check_adjoint_shape(u, adj)?;
    let p = plucker(u);
    Ok(adj
        .hyperplanes
        .iter()
        .filter(|h| !dot(&h.coeffs, &p.coords).is_zero())
        .map(|h| h.flat)
        .collect())
}

/// Jump set `{i : dim(U ∩ Fᵢ) > dim(U ∩ Fᵢ₋₁)}` (1-based), always of size `k`.
pub fn schubert_symbol(u: &Subspace, flag: &Flag) -> Result<Vec<usize>> {
    if flag.bases.len() != u.n + 1 {
        return Err(Error::Dimension(format!(
            "flag of length {} in ℚ^{}",
            flag.bases.len(),
            u.n
        )));
    }
    let mut prev = 0;
    let mut jumps = Vec::with_capacity(u.k);
    for i in 1..=u.n {
        let d = u.intersection_dim(&flag.bases[i])?;
        if d > prev {
            jumps.push(i);
        }
        prev = d;
    }
    Ok(jumps)
}

/// Schubert symbols of one subspace against every enumerated flag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchubertSignature {
    pub per_chain: Vec<Vec<usize>>,
}

pub fn refined_signature(u: &Subspace, chains: &[Flag]) -> Result<SchubertSignature> {
    let per_chain = chains
        .iter()
        .map(|f| schubert_symbol(u, f))
        .collect::<Result<_>>()?;
    Ok(SchubertSignature { per_chain })
}

/// Per-sample generator: the seed picks the key, the sample index the stream,
/// so results do not depend on how samples are scheduled.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A `k × n` integer matrix with entries uniform in `[−bound, bound]`,
/// resampled until it has rank `k`.
pub fn random_subspace_with(
    rng: &mut impl Rng,
    k: usize,
    n: usize,
    bound: i64,
) -> Result<Subspace> {
    if k > n {
        return Err(Error::OutOfRange {
            what: "k",
            value: k,
            min: 0,
            max: n,
        });
    }
    if bound < 1 {
        return Err(Error::OutOfRange {
            what: "bound",
            value: bound.max(0) as usize,
            min: 1,
            max: i64::MAX as usize,
        });
    }
    for _ in 0..MAX_ATTEMPTS {
        let rows: Vec<Vec<Rational>> = (0..k)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let m = QMatrix::from_rows(n, rows)?;
        if rank_of(&m) == k {
            return Subspace::new(&m);
        }
    }
    Err(Error::SamplingFailed {
        attempts: MAX_ATTEMPTS,
    })
}

pub fn random_subspace(k: usize, n: usize, bound: i64, seed: u64) -> Result<Subspace> {
    random_subspace_with(&mut ChaCha8Rng::seed_from_u64(seed), k, n, bound)
}
