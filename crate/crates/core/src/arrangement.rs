//! Linear hyperplane arrangements in `ℚⁿ`.

use std::collections::HashMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::linalg::{dot, projective_normalize, q, rank_of, QMatrix, Rational};

/// A linear hyperplane `{v : ⟨normal, v⟩ = 0}`.
///
/// The normal is kept in projective normal form (integer entries, gcd 1,
/// first nonzero entry positive), so two hyperplanes are equal iff their
/// normals are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Vec<Rational>,
}

impl Hyperplane {
    /// Returns `None` for the zero vector.
    pub fn new(normal: &[Rational]) -> Option<Self> {
        projective_normalize(normal).map(|normal| Hyperplane { normal })
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn contains_point(&self, point: &[Rational]) -> bool {
        dot(&self.normal, point).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    essential: bool,
}

impl Arrangement {
    /// Builds an essential arrangement; non-essential input is refused.
    pub fn new(dim: usize, normals: &[Vec<Rational>]) -> Result<Self> {
        Self::build(dim, normals, false)
    }

    /// Like [`Arrangement::new`] but accepts non-essential arrangements
    /// (tensor factors, products with empty blocks, the empty `n`-adjoint).
    pub fn new_allow_non_essential(dim: usize, normals: &[Vec<Rational>]) -> Result<Self> {
        Self::build(dim, normals, true)
    }

    fn build(dim: usize, normals: &[Vec<Rational>], allow_non_essential: bool) -> Result<Self> {
        let mut hyperplanes: Vec<Hyperplane> = Vec::with_capacity(normals.len());
        let mut seen: HashMap<Hyperplane, usize> = HashMap::new();
        for (i, normal) in normals.iter().enumerate() {
            if normal.len() != dim {
                return Err(Error::Dimension(format!(
                    "hyperplane {} has {} coordinates, expected {dim}",
                    i + 1,
                    normal.len()
                )));
            }
            let h = Hyperplane::new(normal).ok_or(Error::InvalidHyperplane { index: i + 1 })?;
            if let Some(&first) = seen.get(&h) {
                return Err(Error::DuplicateHyperplane {
                    first: first + 1,
                    second: i + 1,
                });
            }
            seen.insert(h.clone(), i);
            hyperplanes.push(h);
        }
        let rank = normal_rank(dim, &hyperplanes);
        let essential = rank == dim;
        if !essential && !allow_non_essential {
            return Err(Error::NonEssential { rank, dim });
        }
        Ok(Arrangement {
            dim,
            hyperplanes,
            essential,
        })
    }

    /// The Boolean arrangement `{xᵢ = 0 : i ∈ [n]}`.
    pub fn boolean(n: usize) -> Self {
        let normals: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| q(i64::from(i == j))).collect())
            .collect();
        Self::new(n, &normals).expect("coordinate hyperplanes are essential")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn is_essential(&self) -> bool {
        self.essential
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normal(&self, i: usize) -> &[Rational] {
        self.hyperplanes[i].normal()
    }

    /// The `m × n` matrix of normals, one row per hyperplane.
    pub fn normal_matrix(&self) -> QMatrix {
        QMatrix::from_rows(
            self.dim,
            self.hyperplanes.iter().map(|h| h.normal.clone()).collect(),
        )
        .expect("normals have the ambient length")
    }

    /// Normal matrix restricted to the hyperplanes in `subset`.
    pub fn normals_of(&self, subset: &[usize]) -> QMatrix {
        QMatrix::from_rows(
            self.dim,
            subset
                .iter()
                .map(|&i| self.hyperplanes[i].normal.clone())
                .collect(),
        )
        .expect("normals have the ambient length")
    }

    /// Normalized normals sorted, for comparing arrangements as hyperplane sets.
    pub fn sorted_normals(&self) -> Vec<Vec<Rational>> {
        let mut v: Vec<Vec<Rational>> = self.hyperplanes.iter().map(|h| h.normal.clone()).collect();
        v.sort();
        v
    }

    /// Same ambient dimension and same set of hyperplanes, in any order.
    pub fn same_hyperplanes(&self, other: &Arrangement) -> bool {
        self.dim == other.dim && self.sorted_normals() == other.sorted_normals()
    }
}

fn normal_rank(dim: usize, hyperplanes: &[Hyperplane]) -> usize {
    if hyperplanes.is_empty() {
        return 0;
    }
    let m = QMatrix::from_rows(dim, hyperplanes.iter().map(|h| h.normal.clone()).collect())
        .expect("normals have the ambient length");
    rank_of(&m)
}

/// `𝒜|_U` together with how the original hyperplanes map onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restriction {
    /// The restricted arrangement, in coordinates of the chosen basis of `U`.
    pub arrangement: Arrangement,
    /// For each original hyperplane: `Some(j)` for the restricted hyperplane it
    /// becomes, `None` when the hyperplane contains `U`.
    pub index_map: Vec<Option<usize>>,
}

/// Restricts `a` to the row space of `u_basis`.
///
/// Hyperplane `i` becomes the hyperplane of `ℚᵏ` with normal `u_basis · αᵢᵀ`;
/// hyperplanes containing `U` are dropped and proportional images merged.
pub fn restriction(a: &Arrangement, u_basis: &QMatrix) -> Result<Restriction> {
    if u_basis.cols() != a.dim() {
        return Err(Error::Dimension(format!(
            "subspace basis has {} columns, arrangement dimension is {}",
            u_basis.cols(),
            a.dim()
        )));
    }
    let k = u_basis.rows();
    if rank_of(u_basis) != k {
        return Err(Error::InvalidSubspace(format!(
            "the {k} basis rows are linearly dependent"
        )));
    }
    let mut normals: Vec<Vec<Rational>> = Vec::new();
    let mut position: HashMap<Hyperplane, usize> = HashMap::new();
    let mut index_map = Vec::with_capacity(a.len());
    for h in a.hyperplanes() {
        let image = u_basis.mul_vec(h.normal())?;
        match Hyperplane::new(&image) {
            None => index_map.push(None),
            Some(restricted) => {
                let next = normals.len();
                let j = *position.entry(restricted.clone()).or_insert_with(|| {
                    normals.push(restricted.normal.clone());
                    next
                });
                index_map.push(Some(j));
            }
        }
    }
    let arrangement = Arrangement::new_allow_non_essential(k, &normals)?;
    Ok(Restriction {
        arrangement,
        index_map,
    })
}

/// Restriction to a [`Subspace`] using its canonical basis.
pub fn restrict_to(a: &Arrangement, u: &Subspace) -> Result<Restriction> {
    restriction(a, u.basis())
}

/// `𝒜 × ℬ` in `ℚⁿ⁺ᵐ`: normals of `a` padded with `m` zeros, then normals of
/// `b` prefixed with `n` zeros.
pub fn product(a: &Arrangement, b: &Arrangement) -> Arrangement {
    let (n, m) = (a.dim(), b.dim());
    let mut normals = Vec::with_capacity(a.len() + b.len());
    for h in a.hyperplanes() {
        let mut v = h.normal().to_vec();
        v.resize(n + m, Rational::zero());
        normals.push(v);
    }
    for h in b.hyperplanes() {
        let mut v = vec![Rational::zero(); n];
        v.extend(h.normal().iter().cloned());
        normals.push(v);
    }
    Arrangement::new_allow_non_essential(n + m, &normals)
        .expect("blocks of distinct hyperplanes stay distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::a3;
    use crate::linalg::qvec as ints;

    #[test]
    fn boolean_is_essential() {
        let b4 = Arrangement::new(
            4,
            &[
                ints(&[1, 0, 0, 0]),
                ints(&[0, 1, 0, 0]),
                ints(&[0, 0, 1, 0]),
                ints(&[0, 0, 0, 1]),
            ],
        )
        .unwrap();
        assert!(b4.is_essential());
        assert_eq!(b4, Arrangement::boolean(4));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Arrangement::new(2, &[ints(&[1, 0]), ints(&[2, 0])]),
            Err(Error::DuplicateHyperplane {
                first: 1,
                second: 2
            })
        );
        assert_eq!(
            Arrangement::new(3, &[ints(&[1, 0, 0]), ints(&[0, 1, 0])]),
            Err(Error::NonEssential { rank: 2, dim: 3 })
        );
        assert_eq!(
            Arrangement::new(2, &[ints(&[1, 0]), ints(&[0, 0])]),
            Err(Error::InvalidHyperplane { index: 2 })
        );
        assert!(matches!(
            Arrangement::new(2, &[ints(&[1, 0, 0])]),
            Err(Error::Dimension(_))
        ));
        let lax = Arrangement::new_allow_non_essential(3, &[ints(&[1, 0, 0])]).unwrap();
        assert!(!lax.is_essential());
    }

    #[test]
    fn normals_are_normalized() {
        let a = Arrangement::new(2, &[ints(&[-2, 4]), ints(&[0, -3])]).unwrap();
        assert_eq!(a.normal(0), ints(&[1, -2]).as_slice());
        assert_eq!(a.normal(1), ints(&[0, 1]).as_slice());
    }

    #[test]
    fn restriction_to_diagonal_plane() {
        let b4 = Arrangement::boolean(4);
        let u = QMatrix::from_i64(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let r = restriction(&b4, &u).unwrap();
        assert_eq!(r.arrangement.dim(), 2);
        assert_eq!(r.arrangement.len(), 2);
        assert_eq!(r.arrangement.normal(0), ints(&[1, 0]).as_slice());
        assert_eq!(r.arrangement.normal(1), ints(&[0, 1]).as_slice());
        assert_eq!(r.index_map, vec![Some(0), Some(1), Some(0), Some(1)]);
    }

    #[test]
    fn restriction_to_coordinate_plane() {
        let b4 = Arrangement::boolean(4);
        let u = QMatrix::from_i64(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let r = restriction(&b4, &u).unwrap();
        assert_eq!(r.arrangement.len(), 2);
        assert_eq!(r.index_map, vec![Some(0), Some(1), None, None]);
    }

    #[test]
    fn restriction_to_whole_space_is_identity() {
        for a in [Arrangement::boolean(4), a3()] {
            let r = restriction(&a, &QMatrix::identity(a.dim())).unwrap();
            assert_eq!(r.arrangement, a);
            assert_eq!(r.index_map, (0..a.len()).map(Some).collect::<Vec<_>>());
        }
    }

    #[test]
    fn restriction_rejects_dependent_rows() {
        let u = QMatrix::from_i64(4, &[&[1, 0, 1, 0], &[2, 0, 2, 0]]);
        assert!(matches!(
            restriction(&Arrangement::boolean(4), &u),
            Err(Error::InvalidSubspace(_))
        ));
    }

    #[test]
    fn products_of_boolean() {
        let b1 = Arrangement::boolean(1);
        assert_eq!(product(&b1, &b1), Arrangement::boolean(2));
        let b2 = Arrangement::boolean(2);
        assert_eq!(product(&b2, &b2), Arrangement::boolean(4));
        let p = product(&a3(), &b1);
        assert_eq!((p.dim(), p.len()), (4, 5));
        assert!(p.is_essential());
        assert_eq!(p.normal(3), ints(&[1, 1, 1, 0]).as_slice());
        assert_eq!(p.normal(4), ints(&[0, 0, 0, 1]).as_slice());
    }
}
