//! Sampling census of `Gr(k, n)` relative to an arrangement.
//!
//! Every sample is labelled three ways: by its adjoint stratum, by its
//! matroid, and by its Schubert symbols along all maximal chains. The census
//! checks that the three labellings partition the samples identically and that
//! the matroid invariants decrease along the order of the adjoint lattice.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::adjoint::{k_adjoint_with, AdjointArrangement};
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::grassmann::{
    l_lower, l_lower_by_adjoint, l_lower_by_pairing, l_upper, plucker, random_subspace_with,
    refined_signature, sample_rng, SchubertSignature, Subspace,
};
use crate::io::{matrix_to_strings, one_based, rationals_to_strings};
use crate::lattice::{build_lattice, Flag, IntersectionLattice};
use crate::matroid::{
    mask_of, matroid_of_restriction, restricted_arrangement_matroid, MatroidInvariants,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    fn new(check: &str, detail: impl Into<String>) -> Self {
        Violation {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}

/// Everything computed for one sampled subspace.
#[derive(Clone, Debug)]
struct Sample {
    subspace: Subspace,
    plucker: Vec<String>,
    stratum: usize,
    fingerprint: Vec<Vec<usize>>,
    signature: Option<SchubertSignature>,
    invariants: MatroidInvariants,
    restricted_independence: Vec<usize>,
    l_lower: Vec<usize>,
    violations: Vec<Violation>,
}

/// One realized adjoint stratum and what its representatives share.
#[derive(Clone, Debug, Serialize)]
pub struct StratumRecord {
    /// Index of `P` in the lattice of the adjoint arrangement.
    pub stratum_flat: usize,
    pub stratum_rank: usize,
    /// Adjoint hyperplanes containing `P`, 1-based.
    pub stratum_contains: Vec<usize>,
    /// Sample indices, ascending.
    pub representatives: Vec<usize>,
    pub representative_basis: Vec<Vec<String>>,
    pub plucker: Vec<String>,
    /// Bases of the matroid, 1-based and sorted.
    pub matroid_bases: Vec<Vec<usize>>,
    /// Schubert symbol per maximal chain; absent when chains were not enumerated.
    pub schubert: Option<Vec<Vec<usize>>>,
    pub invariants: MatroidInvariants,
    #[serde(rename = "I_groundset_m")]
    pub independence_groundset: Vec<usize>,
    #[serde(rename = "I_restricted")]
    pub independence_restricted: Vec<usize>,
    /// Rank-k flats complementary to the representatives, as 1-based `contains` sets.
    pub l_lower: Vec<Vec<usize>>,
    #[serde(skip)]
    pub representative: Subspace,
    #[serde(skip)]
    l_lower_flats: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionSummary {
    pub by_stratum: usize,
    pub by_matroid: usize,
    pub by_signature: Option<usize>,
    pub identical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub realized: usize,
    pub total_flats: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub arrangement: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub bound: i64,
    pub chain_count: Option<usize>,
    pub warnings: Vec<String>,
    pub partitions: PartitionSummary,
    pub coverage: Coverage,
    pub strata: Vec<StratumRecord>,
    /// Pairs `(i, j)` of positions in `strata` with `Pᵢ ≤ Pⱼ`.
    pub comparable_pairs: Vec<(usize, usize)>,
    pub violations: Vec<Violation>,
}

/// Lattice data shared by every sample of a census.
pub struct CensusContext<'a> {
    pub arrangement: &'a Arrangement,
    pub k: usize,
    pub lattice: IntersectionLattice,
    pub adjoint: AdjointArrangement,
    pub adjoint_lattice: IntersectionLattice,
    pub chains: Option<Vec<Flag>>,
    pub warnings: Vec<String>,
}

impl<'a> CensusContext<'a> {
    pub fn new(a: &'a Arrangement, k: usize, chain_cap: usize) -> Result<Self> {
        let n = a.dim();
        if k == 0 || k >= n {
            return Err(Error::OutOfRange {
                what: "k",
                value: k,
                min: 1,
                max: n.saturating_sub(1),
            });
        }
        let lattice = build_lattice(a);
        let adjoint = k_adjoint_with(a, &lattice, k)?;
        let adjoint_lattice = build_lattice(&adjoint.base);
        let mut warnings = Vec::new();
        let chains = match lattice.maximal_chains(chain_cap) {
            Ok(c) => Some(c),
            Err(Error::BudgetExceeded { reached, cap }) => {
                warnings.push(format!(
                    "maximal chain budget exceeded ({reached} > {cap}); Schubert signatures skipped, comparing stratum and matroid partitions only"
                ));
                None
            }
            Err(e) => return Err(e),
        };
        Ok(CensusContext {
            arrangement: a,
            k,
            lattice,
            adjoint,
            adjoint_lattice,
            chains,
            warnings,
        })
    }

    fn classify(&self, u: Subspace) -> Result<Sample> {
        let a = self.arrangement;
        let p = plucker(&u);
        let stratum = self
            .adjoint_lattice
            .locate_flat(&self.adjoint.base, &p.coords)?;
        let matroid = matroid_of_restriction(a, &u)?;
        let fingerprint = matroid.bases();
        let invariants = MatroidInvariants::of(&matroid, &matroid.natural_order())?;
        let restricted_independence = restricted_arrangement_matroid(a, &u)?.independence_numbers();
        let signature = match &self.chains {
            Some(chains) => Some(refined_signature(&u, chains)?),
            None => None,
        };

        let mut violations = Vec::new();
        let mut lower = l_lower(&u, &self.lattice)?;
        lower.sort_unstable();
        let mut by_pairing = l_lower_by_pairing(&u, &self.lattice)?;
        by_pairing.sort_unstable();
        let mut by_adjoint = l_lower_by_adjoint(&u, &self.adjoint)?;
        by_adjoint.sort_unstable();
        if lower != by_pairing || lower != by_adjoint {
            violations.push(Violation::new(
                "complement_criteria",
                format!("rank test {lower:?}, pairing {by_pairing:?}, adjoint {by_adjoint:?}"),
            ));
        }

        // P ⊆ H(X) exactly for the adjoint hyperplanes listed in P's contains set.
        let p_flat = self.adjoint_lattice.flat(stratum);
        let mut inside: Vec<usize> = p_flat
            .contains
            .iter()
            .map(|&j| self.adjoint.source(j))
            .collect();
        inside.sort_unstable();
        let mut upper = l_upper(&u, &self.lattice)?;
        upper.sort_unstable();
        let mut outside: Vec<usize> = (0..self.adjoint.hyperplanes.len())
            .filter(|j| !p_flat.contains.contains(j))
            .map(|j| self.adjoint.source(j))
            .collect();
        outside.sort_unstable();
        if upper != inside || lower != outside {
            violations.push(Violation::new(
                "stratum_flat_families",
                format!(
                    "L^U {upper:?} vs P ⊆ H(X) {inside:?}; L_U {lower:?} vs P ⊄ H(X) {outside:?}"
                ),
            ));
        }

        for s in (0..a.len()).combinations(self.k) {
            let independent = matroid.is_independent(mask_of(&s));
            let x = self.lattice.flat_of_subset(a, &s);
            let complementary =
                self.lattice.flat(x).rank == self.k && lower.binary_search(&x).is_ok();
            if independent != complementary {
                violations.push(Violation::new(
                    "bases_vs_complements",
                    format!("subset {:?}: independent {independent}, complementary flat {complementary}", one_based(&s)),
                ));
            }
        }

        Ok(Sample {
            plucker: rationals_to_strings(&p.coords),
            subspace: u,
            stratum,
            fingerprint,
            signature,
            invariants,
            restricted_independence,
            l_lower: lower,
            violations,
        })
    }

    /// Classifies the given subspaces in order.
    pub fn classify_all(&self, subspaces: Vec<Subspace>) -> Result<Vec<SampleView>> {
        subspaces
            .into_par_iter()
            .map(|u| self.classify(u).map(SampleView))
            .collect()
    }
}

/// Opaque classification result of one subspace.
#[derive(Clone, Debug)]
pub struct SampleView(Sample);

impl SampleView {
    pub fn stratum(&self) -> usize {
        self.0.stratum
    }

    pub fn invariants(&self) -> &MatroidInvariants {
        &self.0.invariants
    }

    pub fn signature(&self) -> Option<&SchubertSignature> {
        self.0.signature.as_ref()
    }

    pub fn matroid_bases(&self) -> &[Vec<usize>] {
        &self.0.fingerprint
    }
}

/// Class id of every element, numbering classes by first occurrence.
fn partition_of<T: Eq + Hash>(labels: impl IntoIterator<Item = T>) -> Vec<usize> {
    let mut ids: HashMap<T, usize> = HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}

fn class_count(partition: &[usize]) -> usize {
    partition.iter().max().map_or(0, |m| m + 1)
}

/// Draws `count` subspaces of dimension `k` (sample `i` from stream `i` of
/// `seed`) and runs the census over them.
pub fn classify_samples(
    a: &Arrangement,
    id: &str,
    k: usize,
    count: usize,
    seed: u64,
    bound: i64,
    chain_cap: usize,
) -> Result<CensusReport> {
    let ctx = CensusContext::new(a, k, chain_cap)?;
    let n = a.dim();
    let subspaces = (0..count as u64)
        .into_par_iter()
        .map(|i| random_subspace_with(&mut sample_rng(seed, i), k, n, bound))
        .collect::<Result<Vec<_>>>()?;
    let samples = ctx.classify_all(subspaces)?;
    Ok(assemble(
        &ctx,
        id,
        seed,
        bound,
        samples.into_iter().map(|s| s.0).collect(),
    ))
}

fn assemble(
    ctx: &CensusContext,
    id: &str,
    seed: u64,
    bound: i64,
    samples: Vec<Sample>,
) -> CensusReport {
    let mut violations: Vec<Violation> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        for v in &s.violations {
            violations.push(Violation::new(
                &v.check,
                format!("sample {i}: {}", v.detail),
            ));
        }
    }

    let by_stratum = partition_of(samples.iter().map(|s| s.stratum));
    let by_matroid = partition_of(samples.iter().map(|s| s.fingerprint.clone()));
    let by_signature = ctx
        .chains
        .as_ref()
        .map(|_| partition_of(samples.iter().map(|s| s.signature.clone())));
    let mut identical = by_stratum == by_matroid;
    if let Some(sig) = &by_signature {
        identical &= &by_stratum == sig;
    }
    if !identical {
        violations.push(Violation::new(
            "partition_equality",
            format!(
                "{} strata, {} matroids, {} signatures",
                class_count(&by_stratum),
                class_count(&by_matroid),
                by_signature
                    .as_ref()
                    .map_or("unchecked".to_string(), |s| class_count(s).to_string())
            ),
        ));
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        groups.entry(s.stratum).or_default().push(i);
    }
    let mut strata = Vec::with_capacity(groups.len());
    for (&flat, members) in &groups {
        let first = &samples[members[0]];
        for &j in &members[1..] {
            let other = &samples[j];
            if other.fingerprint != first.fingerprint
                || other.signature != first.signature
                || other.invariants != first.invariants
            {
                violations.push(Violation::new(
                    "within_stratum",
                    format!(
                        "samples {} and {j} share stratum {flat} but differ",
                        members[0]
                    ),
                ));
            }
        }
        let p = ctx.adjoint_lattice.flat(flat);
        strata.push(StratumRecord {
            stratum_flat: flat,
            stratum_rank: p.rank,
            stratum_contains: one_based(&p.contains),
            representatives: members.clone(),
            representative_basis: matrix_to_strings(first.subspace.basis()),
            plucker: first.plucker.clone(),
            matroid_bases: first.fingerprint.iter().map(|b| one_based(b)).collect(),
            schubert: first.signature.as_ref().map(|s| s.per_chain.clone()),
            invariants: first.invariants.clone(),
            independence_groundset: first.invariants.independence_numbers.clone(),
            independence_restricted: first.restricted_independence.clone(),
            l_lower: first
                .l_lower
                .iter()
                .map(|&x| one_based(&ctx.lattice.flat(x).contains))
                .collect(),
            representative: first.subspace.clone(),
            l_lower_flats: first.l_lower.clone(),
        });
    }

    let mut report = CensusReport {
        arrangement: id.to_string(),
        n: ctx.arrangement.dim(),
        m: ctx.arrangement.len(),
        k: ctx.k,
        sample_count: samples.len(),
        seed,
        bound,
        chain_count: ctx.chains.as_ref().map(Vec::len),
        warnings: ctx.warnings.clone(),
        partitions: PartitionSummary {
            by_stratum: class_count(&by_stratum),
            by_matroid: class_count(&by_matroid),
            by_signature: by_signature.as_ref().map(|s| class_count(s)),
            identical,
        },
        coverage: Coverage {
            realized: groups.len(),
            total_flats: ctx.adjoint_lattice.len(),
        },
        strata,
        comparable_pairs: Vec::new(),
        violations,
    };
    report.comparable_pairs = comparable_pairs(&report, &ctx.adjoint_lattice);
    report
}

/// Ordered pairs of realized strata `(i, j)` with `Pᵢ ≤ Pⱼ`, equal pairs included.
pub fn comparable_pairs(
    report: &CensusReport,
    adjoint_lattice: &IntersectionLattice,
) -> Vec<(usize, usize)> {
    let s = &report.strata;
    (0..s.len())
        .cartesian_product(0..s.len())
        .filter(|&(i, j)| adjoint_lattice.leq(s[i].stratum_flat, s[j].stratum_flat))
        .collect()
}

fn dominates(lo: &[usize], hi: &[usize]) -> bool {
    lo.len() == hi.len() && lo.iter().zip(hi).all(|(a, b)| a >= b)
}

/// For `P₁ ≤ P₂`: `I_i(U₁) ≥ I_i(U₂)` and `|w_i(U₁)| ≥ |w_i(U₂)|` for all `i`.
pub fn verify_antimonotonicity(report: &CensusReport, pairs: &[(usize, usize)]) -> Vec<Violation> {
    let mut out = Vec::new();
    for &(i, j) in pairs {
        let (lo, hi) = (&report.strata[i].invariants, &report.strata[j].invariants);
        if !dominates(&lo.independence_numbers, &hi.independence_numbers) {
            out.push(Violation::new(
                "independence_antimonotone",
                format!(
                    "strata {i} ≤ {j}: I {:?} vs {:?}",
                    lo.independence_numbers, hi.independence_numbers
                ),
            ));
        }
        let abs = |w: &[i64]| {
            w.iter()
                .map(|x| x.unsigned_abs() as usize)
                .collect::<Vec<_>>()
        };
        if !dominates(&abs(&lo.whitney), &abs(&hi.whitney)) {
            out.push(Violation::new(
                "whitney_antimonotone",
                format!("strata {i} ≤ {j}: w {:?} vs {:?}", lo.whitney, hi.whitney),
            ));
        }
    }
    out
}

/// For `P₁ ≤ P₂`: `L_{U₂} ⊆ L_{U₁}`.
pub fn verify_lower_set_inclusion(
    report: &CensusReport,
    pairs: &[(usize, usize)],
) -> Vec<Violation> {
    pairs
        .iter()
        .filter(|&&(i, j)| {
            let big = &report.strata[i].l_lower_flats;
            !report.strata[j]
                .l_lower_flats
                .iter()
                .all(|x| big.contains(x))
        })
        .map(|&(i, j)| {
            Violation::new(
                "lower_set_inclusion",
                format!(
                    "strata {i} ≤ {j}: {:?} ⊄ {:?}",
                    report.strata[j].l_lower, report.strata[i].l_lower
                ),
            )
        })
        .collect()
}

/// For every loop-free realized matroid: `|w_i|` equals the NBC count under the
/// natural order and under `extra_orders` shuffled orders drawn from `seed`.
pub fn verify_nbc(
    a: &Arrangement,
    report: &CensusReport,
    extra_orders: usize,
    seed: u64,
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let mut rng = sample_rng(seed, u64::MAX);
    let mut orders = vec![(0..a.len()).collect::<Vec<_>>()];
    for _ in 0..extra_orders {
        let mut o = orders[0].clone();
        o.shuffle(&mut rng);
        orders.push(o);
    }
    for (i, s) in report.strata.iter().enumerate() {
        if !s.invariants.loops.is_empty() {
            continue;
        }
        let m = matroid_of_restriction(a, &s.representative)?;
        let w: Vec<usize> = s
            .invariants
            .whitney
            .iter()
            .map(|x| x.unsigned_abs() as usize)
            .collect();
        for order in &orders {
            let nbc = m.nbc_counts(order)?;
            if nbc != w {
                out.push(Violation::new(
                    "nbc_whitney",
                    format!(
                        "stratum {i}, order {:?}: nbc {nbc:?} vs |w| {w:?}",
                        one_based(order)
                    ),
                ));
            }
        }
    }
    Ok(out)
}

/// Anti-monotonicity and lower-set inclusion over the comparable pairs of a census.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub arrangement: String,
    pub k: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub strata: usize,
    pub comparable_pairs: usize,
    pub invariants: Vec<StratumInvariants>,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumInvariants {
    pub stratum_rank: usize,
    pub stratum_contains: Vec<usize>,
    #[serde(rename = "I_groundset_m")]
    pub independence_groundset: Vec<usize>,
    #[serde(rename = "I_restricted")]
    pub independence_restricted: Vec<usize>,
    pub w: Vec<i64>,
    pub nbc: Vec<usize>,
}

pub fn monotonicity_report(report: &CensusReport) -> MonotonicityReport {
    let pairs = &report.comparable_pairs;
    let mut violations = report.violations.clone();
    violations.extend(verify_antimonotonicity(report, pairs));
    violations.extend(verify_lower_set_inclusion(report, pairs));
    MonotonicityReport {
        arrangement: report.arrangement.clone(),
        k: report.k,
        sample_count: report.sample_count,
        seed: report.seed,
        strata: report.strata.len(),
        comparable_pairs: pairs.len(),
        invariants: report
            .strata
            .iter()
            .map(|s| StratumInvariants {
                stratum_rank: s.stratum_rank,
                stratum_contains: s.stratum_contains.clone(),
                independence_groundset: s.independence_groundset.clone(),
                independence_restricted: s.independence_restricted.clone(),
                w: s.invariants.whitney.clone(),
                nbc: s.invariants.nbc.clone(),
            })
            .collect(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_CHAIN_CAP;
    use crate::linalg::QMatrix;

    fn sub(rows: &[&[i64]]) -> Subspace {
        Subspace::new(&QMatrix::from_i64(4, rows)).unwrap()
    }

    fn hand_picked(ctx: &CensusContext, subs: Vec<Subspace>) -> CensusReport {
        let samples = ctx
            .classify_all(subs)
            .unwrap()
            .into_iter()
            .map(|s| s.0)
            .collect();
        assemble(ctx, "B4", 0, 0, samples)
    }

    #[test]
    fn b4_census_is_consistent() {
        let b4 = Arrangement::boolean(4);
        let r = classify_samples(&b4, "B4", 2, 60, 1, 5, DEFAULT_CHAIN_CAP).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.partitions.identical);
        assert_eq!(r.chain_count, Some(24));
        assert!(verify_antimonotonicity(&r, &r.comparable_pairs).is_empty());
        assert!(verify_lower_set_inclusion(&r, &r.comparable_pairs).is_empty());
        assert!(verify_nbc(&b4, &r, 3, 5).unwrap().is_empty());
    }

    #[test]
    fn generic_samples_share_a_record() {
        let b4 = Arrangement::boolean(4);
        let ctx = CensusContext::new(&b4, 2, DEFAULT_CHAIN_CAP).unwrap();
        let r = hand_picked(
            &ctx,
            vec![
                sub(&[&[1, 0, 1, 2], &[0, 1, 1, 1]]),
                sub(&[&[1, 2, 3, 5], &[0, 1, -1, 2]]),
            ],
        );
        assert_eq!(r.strata.len(), 1);
        assert_eq!(r.strata[0].representatives, vec![0, 1]);
        assert_eq!(r.strata[0].stratum_rank, 0);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn hand_picked_pairs() {
        let b4 = Arrangement::boolean(4);
        let ctx = CensusContext::new(&b4, 2, DEFAULT_CHAIN_CAP).unwrap();
        let generic = sub(&[&[1, 0, 1, 2], &[0, 1, 1, 1]]);
        let diagonal = sub(&[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let coordinate = sub(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let r = hand_picked(&ctx, vec![generic, diagonal, coordinate]);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        let ranks: Vec<usize> = r.strata.iter().map(|s| s.stratum_rank).collect();
        let pos = |rank: usize| ranks.iter().position(|&x| x == rank).unwrap();
        let (g, d, c) = (pos(0), pos(2), pos(5));

        assert_eq!(r.strata[g].invariants.independence_numbers, vec![1, 4, 6]);
        assert_eq!(r.strata[d].invariants.independence_numbers, vec![1, 4, 4]);
        assert_eq!(r.strata[d].invariants.whitney, vec![1, -2, 1]);
        assert_eq!(r.strata[c].invariants.independence_numbers, vec![1, 2, 1]);
        assert_eq!(r.strata[d].l_lower.len(), 4);
        assert_eq!(r.strata[c].l_lower, vec![vec![1, 2]]);

        let pairs = &r.comparable_pairs;
        for x in [g, d, c] {
            assert!(pairs.contains(&(g, x)));
            assert!(pairs.contains(&(x, x)));
        }
        assert!(pairs.contains(&(d, c)));
        assert!(!pairs.contains(&(d, g)));
        assert!(verify_antimonotonicity(&r, pairs).is_empty());
        assert!(verify_lower_set_inclusion(&r, pairs).is_empty());
    }

    #[test]
    fn chain_budget_degrades_to_two_way() {
        let b4 = Arrangement::boolean(4);
        let r = classify_samples(&b4, "B4", 2, 20, 3, 5, 5).unwrap();
        assert_eq!(r.chain_count, None);
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.partitions.by_signature, None);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn census_is_deterministic() {
        let b4 = Arrangement::boolean(4);
        let a = serde_json::to_string(
            &classify_samples(&b4, "B4", 2, 30, 9, 3, DEFAULT_CHAIN_CAP).unwrap(),
        )
        .unwrap();
        let b = serde_json::to_string(
            &classify_samples(&b4, "B4", 2, 30, 9, 3, DEFAULT_CHAIN_CAP).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_trivial_k() {
        let b4 = Arrangement::boolean(4);
        assert!(matches!(
            classify_samples(&b4, "B4", 4, 1, 0, 5, DEFAULT_CHAIN_CAP),
            Err(Error::OutOfRange { .. })
        ));
    }
}
