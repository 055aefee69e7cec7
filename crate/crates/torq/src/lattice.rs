//! Saturated integer lattices: kernels, sums, saturation, membership.
//!
//! A lattice is stored through the Hermite form of its basis, so equal
//! lattices compare equal structurally and every routine downstream is
//! deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lattice {
    ambient_rank: usize,
    /// Basis vectors as rows, in Hermite normal form with zero rows dropped.
    #[serde(with = "crate::ser::big_vec_vec")]
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice::from_rows(
            ambient_rank,
            (0..ambient_rank)
                .map(|i| {
                    let mut v = vec![BigInt::zero(); ambient_rank];
                    v[i] = BigInt::from(1);
                    v
                })
                .collect(),
        )
    }

    /// Span of the given rows, canonicalized. Dependent generators are
    /// merged by the Hermite form, so the stored basis is always
    /// independent.
    pub fn from_rows(ambient_rank: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient_rank));
        if rows.is_empty() {
            return Lattice::zero(ambient_rank);
        }
        let m = IntMatrix::from_rows(rows).expect("checked shape");
        let (h, _) = m.hermite_normal_form();
        let basis = (0..h.rows())
            .map(|r| h.row_vec(r))
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        Lattice {
            ambient_rank,
            basis,
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        if self.basis.is_empty() {
            IntMatrix::zero(0, self.ambient_rank)
        } else {
            IntMatrix::from_rows(self.basis.clone()).expect("stored basis is rectangular")
        }
    }

    /// Exact membership: reduce against the echelon basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.ambient_rank);
        let mut v = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
            if v[pivot].is_zero() {
                continue;
            }
            let (q, r) = v[pivot].div_mod_floor(&row[pivot]);
            if !r.is_zero() {
                return false;
            }
            for (vi, bi) in v.iter_mut().zip(row.iter()) {
                *vi -= &q * bi;
            }
        }
        v.iter().all(Zero::is_zero)
    }

    /// Canonical coset representative of `v` modulo this lattice: each
    /// pivot coordinate is reduced into `[0, pivot)`.
    pub fn reduce_mod(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient_rank);
        let mut v = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("no zero rows");
            let q = v[pivot].div_floor(&row[pivot]);
            if q.is_zero() {
                continue;
            }
            for (vi, bi) in v.iter_mut().zip(row.iter()) {
                *vi -= &q * bi;
            }
        }
        v
    }
}

/// Saturated lattice `{v : M v = 0}`, via the Smith form: the kernel is
/// spanned by the columns of `V` past the rank, and those are primitive
/// because `V` is unimodular.
pub fn kernel_lattice(m: &IntMatrix) -> Lattice {
    let (_, d, v) = m.smith_normal_form();
    let rank = (0..d.rows().min(d.cols()))
        .take_while(|&i| !d.get(i, i).is_zero())
        .count();
    let rows = (rank..m.cols()).map(|c| v.col_vec(c)).collect();
    Lattice::from_rows(m.cols(), rows)
}

/// Largest lattice of the same rank containing `l`: intersect the rational
/// span with the integer lattice by taking the kernel of the kernel.
pub fn saturate(l: &Lattice) -> Lattice {
    let perp = kernel_lattice(&l.basis_matrix());
    kernel_lattice(&perp.basis_matrix())
}

/// Saturation of the span of both bases.
pub fn lattice_sum(a: &Lattice, b: &Lattice) -> Lattice {
    assert_eq!(
        a.ambient_rank(),
        b.ambient_rank(),
        "lattice_sum needs a common ambient lattice"
    );
    let mut rows = a.basis().to_vec();
    rows.extend_from_slice(b.basis());
    saturate(&Lattice::from_rows(a.ambient_rank(), rows))
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive_generator(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert!(kernel_lattice(&IntMatrix::identity(3)).is_zero());
    }

    #[test]
    fn kernel_of_repeated_row() {
        let k = kernel_lattice(&IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]));
        assert_eq!(k.rank(), 1);
        assert!(k.contains(&bv(&[1, -1])));
    }

    #[test]
    fn kernel_is_saturated_and_solves() {
        // Constraint-check oracle: every basis vector must satisfy
        // -2a + 9b + 9c = 0, and the lattice must equal its saturation.
        let m = IntMatrix::from_i64_rows(&[&[-2, 9, 9]]);
        let k = kernel_lattice(&m);
        assert_eq!(k.rank(), 2);
        for row in k.basis() {
            assert!(dot(&bv(&[-2, 9, 9]), row).is_zero());
        }
        assert_eq!(saturate(&k), k);
    }

    #[test]
    fn saturate_scaled_line() {
        let l = Lattice::from_rows(2, vec![bv(&[2, 0])]);
        let s = saturate(&l);
        assert_eq!(s.basis(), &[bv(&[1, 0])]);
    }

    #[test]
    fn saturate_idempotent_edge_shapes() {
        let z = Lattice::zero(3);
        assert_eq!(saturate(&z), z);
        let f = Lattice::full(3);
        assert_eq!(saturate(&f), f);
    }

    #[test]
    fn primitive_generator_examples() {
        assert_eq!(primitive_generator(&bv(&[4, -3])).unwrap(), bv(&[4, -3]));
        assert_eq!(primitive_generator(&bv(&[6, -9])).unwrap(), bv(&[2, -3]));
        assert!(primitive_generator(&bv(&[0, 0])).is_err());
    }

    #[test]
    fn lattice_sum_with_zero() {
        let l = Lattice::from_rows(2, vec![bv(&[2, 1])]);
        let s = lattice_sum(&l, &Lattice::zero(2));
        assert_eq!(s.basis(), &[bv(&[2, 1])]);
    }

    #[test]
    fn membership_and_reduction() {
        let l = Lattice::from_rows(2, vec![bv(&[2, 1]), bv(&[0, 3])]);
        assert!(l.contains(&bv(&[2, 4])));
        assert!(!l.contains(&bv(&[1, 0])));
        let r = l.reduce_mod(&bv(&[5, 2]));
        assert!(r[0] >= BigInt::zero() && r[0] < BigInt::from(2));
        // Representative differs from the input by a lattice element.
        let diff = vec![BigInt::from(5) - &r[0], BigInt::from(2) - &r[1]];
        assert!(l.contains(&diff));
    }

    #[test]
    fn kernel_rank_identity_large_seeded_corpus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31337);
        for _ in 0..1000 {
            let l = rng.gen_range(1..=4usize);
            let n = rng.gen_range(1..=8usize);
            let rows: Vec<Vec<BigInt>> = (0..l)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            let k = kernel_lattice(&m);
            assert_eq!(k.rank(), m.cols() - m.rank());
            for row in k.basis() {
                assert!(m.mul_vec(row).iter().all(Zero::is_zero));
            }
            assert_eq!(saturate(&k), k);
        }
    }

    proptest::proptest! {
        #[test]
        fn kernel_rank_identity(rows in proptest::collection::vec(
            proptest::collection::vec(-9i64..=9, 4), 1..=4)) {
            let m = IntMatrix::from_rows(
                rows.into_iter().map(|r| bv(&r)).collect()).unwrap();
            let k = kernel_lattice(&m);
            proptest::prop_assert_eq!(k.rank(), m.cols() - m.rank());
            for row in k.basis() {
                proptest::prop_assert!(m.mul_vec(row).iter().all(Zero::is_zero));
            }
            // Saturated: the quotient by the kernel is torsion-free, i.e.
            // the basis extends to a basis of the ambient lattice.
            if k.rank() > 0 {
                let factors = k.basis_matrix().invariant_factors();
                proptest::prop_assert!(factors.iter().all(BigInt::is_one));
            }
        }
    }
}
