//! Per-module predicates on a torus weight matrix: faithfulness,
//! modularity index, stability, and the sign normalization that realizes a
//! change of Lagrangian subspace.
//!
//! A rank-`l` torus acting diagonally on `C^n` is encoded by an `l x n`
//! integer matrix `A`; column `i` is the character by which the torus
//! scales the `i`-th coordinate. [`TorusModule`] wraps a matrix that has
//! passed the faithfulness gate, which every theorem downstream assumes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::feasibility::{rational_feasibility, Bound};
use crate::lattice::kernel_lattice;
use crate::mat::IntMatrix;
use crate::util::combinations;

/// Per-column signs realizing a change of Lagrangian subspace: flipping
/// column `i` replaces the coordinate by its dual momentum, which inverts
/// the character. Applying the same vector twice is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn identity(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Shape("sign vector entries must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }
}

/// A faithful diagonal torus module. Construction checks faithfulness and
/// fails with the offending invariant factors; run unfaithful input
/// through [`effectivize`] first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusModule {
    a: IntMatrix,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
}

/// Faithfulness check: the columns must generate the full character
/// lattice, i.e. the Smith form of `A` has `l` invariant factors all equal
/// to one. On failure the offending factors are returned (missing factors
/// count as zero).
pub fn validate_faithful(a: &IntMatrix) -> std::result::Result<(), Vec<BigInt>> {
    let mut factors = a.invariant_factors();
    factors.resize(a.rows(), BigInt::zero());
    let offending: Vec<BigInt> = factors.into_iter().filter(|f| !f.is_one()).collect();
    if offending.is_empty() {
        Ok(())
    } else {
        Err(offending)
    }
}

/// Replace the torus by its image: an `r x n` faithful matrix expressing
/// the same characters in a basis of the column span, returned together
/// with that basis (rows, in the original character lattice).
pub fn effectivize(a: &IntMatrix) -> (TorusModule, IntMatrix) {
    let (h, _) = a.transpose().hermite_normal_form();
    let basis: Vec<Vec<BigInt>> = (0..h.rows())
        .map(|r| h.row_vec(r))
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    let r = basis.len();
    let mut b = IntMatrix::zero(r, a.cols());
    for col in 0..a.cols() {
        let mut v = a.col_vec(col);
        for (k, row) in basis.iter().enumerate() {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if v[pivot].is_zero() {
                continue;
            }
            let (q, rem) = v[pivot].div_mod_floor(&row[pivot]);
            debug_assert!(rem.is_zero(), "column outside its own span");
            for (vi, bi) in v.iter_mut().zip(row.iter()) {
                *vi -= &q * bi;
            }
            b.set(k, col, q);
        }
        debug_assert!(v.iter().all(Zero::is_zero));
    }
    let basis_matrix = if basis.is_empty() {
        IntMatrix::zero(0, a.rows())
    } else {
        IntMatrix::from_rows(basis).expect("rectangular")
    };
    let module = TorusModule::new(b).expect("image action is faithful by construction");
    (module, basis_matrix)
}

/// Stability verdict with per-column witnesses: for each column `i` a
/// nonnegative integer relation `A a = 0` with `a_i >= 1`, or the first
/// column admitting none.
#[derive(Clone, Debug)]
pub enum Stability {
    Stable(Vec<Vec<BigInt>>),
    Unstable { failing_column: usize },
}

impl TorusModule {
    pub fn new(a: IntMatrix) -> Result<Self> {
        match validate_faithful(&a) {
            Ok(()) => Ok(TorusModule { a, labels: None }),
            Err(factors) => Err(Error::NotFaithful(factors)),
        }
    }

    pub fn with_labels(a: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != a.cols() {
            return Err(Error::Shape("one label per column".into()));
        }
        let mut m = Self::new(a)?;
        m.labels = Some(labels);
        Ok(m)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Torus rank `l`.
    pub fn torus_rank(&self) -> usize {
        self.a.rows()
    }

    /// Module dimension `n`.
    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// Largest `k` such that every `l x (n-k)` submatrix has full rank
    /// `l`. Faithful input is always at least 0-modular; the property is
    /// monotone in `k`, so the first failing size settles the index.
    pub fn modularity_index(&self) -> usize {
        let n = self.dim();
        let l = self.torus_rank();
        let mut memo: HashMap<Vec<usize>, usize> = HashMap::new();
        for k in 1..=n.saturating_sub(l) {
            let ok = combinations(n, n - k).into_iter().all(|cols| {
                let r = *memo
                    .entry(cols.clone())
                    .or_insert_with(|| self.a.submatrix_columns(&cols).rank());
                r == l
            });
            if !ok {
                return k - 1;
            }
        }
        n - l
    }

    pub fn is_one_modular(&self) -> bool {
        self.one_modular_witness().is_none()
    }

    /// A column whose removal lowers the rank, if any; `None` exactly when
    /// the module is 1-modular.
    pub fn one_modular_witness(&self) -> Option<usize> {
        let n = self.dim();
        let l = self.torus_rank();
        if n <= l {
            // Removing any column from a square-or-thin faithful matrix
            // drops the rank.
            return if l == 0 { None } else { Some(0) };
        }
        (0..n).find(|&skip| {
            let cols: Vec<usize> = (0..n).filter(|&c| c != skip).collect();
            self.a.submatrix_columns(&cols).rank() < l
        })
    }

    /// An integer kernel relation with every coefficient nonzero, when one
    /// exists. Existence is equivalent to 1-modularity (the dual
    /// criterion), which the tests cross-check.
    pub fn full_support_relation(&self) -> Option<Vec<BigInt>> {
        let kernel = kernel_lattice(&self.a);
        let n = self.dim();
        if kernel.is_zero() {
            return None;
        }
        let mut covered = vec![false; n];
        for row in kernel.basis() {
            for (i, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    covered[i] = true;
                }
            }
        }
        if !covered.iter().all(|&c| c) {
            return None;
        }
        let mut v = kernel.basis()[0].clone();
        for row in &kernel.basis()[1..] {
            // Smallest c >= 0 keeping every touched coordinate nonzero.
            let mut c = BigInt::zero();
            loop {
                let bad = v.iter().zip(row).any(|(vi, bi)| {
                    if bi.is_zero() {
                        false
                    } else {
                        (vi + &c * bi).is_zero()
                    }
                });
                if !bad {
                    break;
                }
                c += 1;
            }
            for (vi, bi) in v.iter_mut().zip(row) {
                *vi += &c * bi;
            }
        }
        debug_assert!(self.a.mul_vec(&v).iter().all(Zero::is_zero));
        debug_assert!(v.iter().all(|x| !x.is_zero()));
        Some(v)
    }

    /// Stability: every column must take part in a nonnegative kernel
    /// relation with its own coefficient positive (there is then a
    /// monomial invariant involving that coordinate).
    pub fn stability(&self) -> Stability {
        let n = self.dim();
        let mut witnesses = Vec::with_capacity(n);
        for i in 0..n {
            let bounds: Vec<Bound> = (0..n)
                .map(|j| {
                    if j == i {
                        Bound::AtLeastOne
                    } else {
                        Bound::NonNegative
                    }
                })
                .collect();
            match rational_feasibility(&self.a, &bounds) {
                Some(w) => witnesses.push(w),
                None => return Stability::Unstable { failing_column: i },
            }
        }
        Stability::Stable(witnesses)
    }

    pub fn is_stable(&self) -> bool {
        matches!(self.stability(), Stability::Stable(_))
    }

    /// A sign vector making the module stable, which exists for every
    /// 1-modular module: flipping the negative coefficients of a
    /// full-support relation turns it into a strictly positive one. The
    /// postcondition is re-checked, never assumed.
    pub fn make_stable_utcls(&self) -> Result<SignVector> {
        if let Some(witness_column) = self.one_modular_witness() {
            return Err(Error::NotOneModular { witness_column });
        }
        if self.is_stable() {
            return Ok(SignVector::identity(self.dim()));
        }
        let relation = self.full_support_relation().ok_or_else(|| {
            Error::InvariantViolation("1-modular module without a full-support relation".into())
        })?;
        let signs: Vec<i8> = relation
            .iter()
            .map(|x| if x.is_negative() { -1 } else { 1 })
            .collect();
        let eps = SignVector(signs);
        let flipped = self.apply_signs(&eps)?;
        if !flipped.is_stable() {
            return Err(Error::InvariantViolation(
                "sign flip along a full-support relation failed to stabilize".into(),
            ));
        }
        Ok(eps)
    }

    pub fn apply_signs(&self, eps: &SignVector) -> Result<TorusModule> {
        if eps.len() != self.dim() {
            return Err(Error::Shape("sign vector length != module dimension".into()));
        }
        TorusModule::new(self.a.scale_columns(eps.signs()))
    }

    /// Dimension of the isotropy group of a point supported exactly on the
    /// given columns: the corank of that column submatrix.
    pub fn isotropy_dimension(&self, support: &[usize]) -> usize {
        self.torus_rank() - self.a.submatrix_columns(support).rank()
    }

    /// `(dim N, dim N // G) = (2n - l, 2(n - l))`.
    pub fn dims(&self) -> (usize, usize) {
        let n = self.dim();
        let l = self.torus_rank();
        (2 * n - l, 2 * (n - l))
    }
}
