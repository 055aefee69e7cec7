//! Slice representations of type O, isotropy classes of closed shell
//! orbits, and the codimension of the shell's singular locus.
//!
//! A type-O slice is witnessed by `n - r - 1` columns of rank `l - r` for
//! some `1 <= r <= l`: the joint kernel of those columns is an `r`-torus
//! acting on the complementary `r + 1` columns with a one-dimensional
//! quotient. No such witness means the module is minimal (singular locus
//! of codimension at least 4).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::feasibility::{rational_feasibility, Bound};
use crate::lattice::{dot, kernel_lattice, Lattice};
use crate::mat::IntMatrix;
use crate::module::{Stability, TorusModule};
use crate::util::{all_subsets, combinations, complement};

/// Witness that the module has a symplectic slice representation of type
/// O: `fixed_columns` has size `n - r - 1` and rank `l - r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeOCertificate {
    pub r: usize,
    pub fixed_columns: Vec<usize>,
    pub moving_columns: Vec<usize>,
}

/// The slice data attached to a certificate: the isotropy subtorus, the
/// positive primitive relation of the moving block, and its weight sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDatum {
    pub certificate: TypeOCertificate,
    pub h0_lattice: Lattice,
    #[serde(with = "crate::ser::big_vec")]
    pub m_vec: Vec<BigInt>,
    #[serde(with = "crate::ser::big")]
    pub m: BigInt,
    pub maximal: bool,
}

/// The cyclic quotient presentation carried by a slice: two generators of
/// degree `m`, one of degree 2, and the single syzygy
/// `f1 * f2 = (h/m)^m * prod_i m_i^{m_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbifoldPresentation {
    #[serde(with = "crate::ser::big")]
    pub m: BigInt,
    pub generator_degrees: (String, String, String),
    /// `prod_i m_i^{m_i}`, the constant multiplying `(h/m)^m`.
    #[serde(with = "crate::ser::big")]
    pub syzygy_coefficient: BigInt,
    /// The same constant expressed against `h^m`, i.e.
    /// `prod m_i^{m_i} / m^m`, as a reduced fraction string.
    pub h_power_coefficient: String,
}

/// Nonzero positions of a shell point: `p` for coordinates, `q` for
/// momenta.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPattern {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

/// Canonical label of an isotropy group: the cocharacter lattice of its
/// identity component plus the elementary divisors of its component
/// group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IsotropySignature {
    pub lattice: Lattice,
    #[serde(with = "crate::ser::big_vec")]
    pub finite_part: Vec<BigInt>,
}

/// One isotropy class of closed shell orbits together with the
/// codimension of its stratum in the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub isotropy_lattice: Lattice,
    #[serde(with = "crate::ser::big_vec")]
    pub finite_part: Vec<BigInt>,
    pub fixed_columns: Vec<usize>,
    pub codim_in_quotient: usize,
}

impl StratumRecord {
    pub fn signature(&self) -> IsotropySignature {
        IsotropySignature {
            lattice: self.isotropy_lattice.clone(),
            finite_part: self.finite_part.clone(),
        }
    }
}

fn subset_rank(a: &IntMatrix, cols: &[usize], memo: &mut HashMap<Vec<usize>, usize>) -> usize {
    if let Some(&r) = memo.get(cols) {
        return r;
    }
    let r = a.submatrix_columns(cols).rank();
    memo.insert(cols.to_vec(), r);
    r
}

/// All type-O certificates, sorted by `(r, fixed_columns)`. Empty exactly
/// when the module is minimal.
pub fn detect_type_o(module: &TorusModule) -> Vec<TypeOCertificate> {
    let a = module.matrix();
    let n = module.dim();
    let l = module.torus_rank();
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for r in 1..=l {
        if r + 1 > n {
            continue;
        }
        for fixed in combinations(n, n - r - 1) {
            if subset_rank(a, &fixed, &mut memo) == l - r {
                let moving = complement(n, &fixed);
                out.push(TypeOCertificate {
                    r,
                    fixed_columns: fixed,
                    moving_columns: moving,
                });
            }
        }
    }
    out.sort();
    out
}

/// Minimality: no type-O slice, equivalently singular-locus codimension
/// at least 4. A rank-0 torus (finite or trivial group) is minimal by
/// convention.
pub fn is_minimal(module: &TorusModule) -> bool {
    module.torus_rank() == 0 || detect_type_o(module).is_empty()
}

/// Compute the slice datum of a certificate. The module must already be
/// stable (run `make_stable_utcls` first); otherwise the relation of the
/// moving block need not be sign-normalizable and this reports an error.
pub fn slice_m_vector(module: &TorusModule, cert: &TypeOCertificate) -> Result<SliceDatum> {
    let a = module.matrix();
    let l = module.torus_rank();

    let fixed_sub = a.submatrix_columns(&cert.fixed_columns);
    let h0 = kernel_lattice(&fixed_sub.transpose());
    if h0.rank() != cert.r {
        return Err(Error::MalformedCertificate(format!(
            "fixed columns have corank {} on the torus, certificate claims r = {}",
            h0.rank(),
            cert.r
        )));
    }

    // Moving columns restricted to the characters of the isotropy torus.
    let mut restricted = IntMatrix::zero(cert.r, cert.moving_columns.len());
    for (k, basis_vec) in h0.basis().iter().enumerate() {
        for (j, &col) in cert.moving_columns.iter().enumerate() {
            restricted.set(k, j, dot(basis_vec, &a.col_vec(col)));
        }
    }
    let rel = kernel_lattice(&restricted);
    if rel.rank() != 1 {
        return Err(Error::MalformedCertificate(format!(
            "moving block has relation rank {} on the slice torus, expected 1",
            rel.rank()
        )));
    }
    let gen = &rel.basis()[0];
    if gen.iter().any(Zero::is_zero) {
        return Err(Error::MalformedCertificate(
            "moving-block relation lacks full support; stability precondition violated".into(),
        ));
    }
    let all_pos = gen.iter().all(Signed::is_positive);
    let all_neg = gen.iter().all(Signed::is_negative);
    if !all_pos && !all_neg {
        return Err(Error::MalformedCertificate(
            "moving-block relation is not sign-normalizable; stability precondition violated"
                .into(),
        ));
    }
    let m_vec: Vec<BigInt> = gen.iter().map(BigInt::abs).collect();
    let m: BigInt = m_vec.iter().sum();

    // Maximality: no certificate with larger isotropy rank whose moving
    // block contains ours.
    let mut memo = HashMap::new();
    let mut maximal = true;
    'outer: for r2 in cert.r + 1..=l {
        let n = module.dim();
        if r2 + 1 > n || n - r2 - 1 > cert.fixed_columns.len() {
            continue;
        }
        for smaller in combinations(cert.fixed_columns.len(), n - r2 - 1) {
            let fixed2: Vec<usize> = smaller.iter().map(|&i| cert.fixed_columns[i]).collect();
            if subset_rank(a, &fixed2, &mut memo) == l - r2 {
                maximal = false;
                break 'outer;
            }
        }
    }

    Ok(SliceDatum {
        certificate: cert.clone(),
        h0_lattice: h0,
        m_vec,
        m,
        maximal,
    })
}

/// The `A_{m-1}` cyclic quotient data carried by a slice.
pub fn orbifold_presentation(datum: &SliceDatum) -> OrbifoldPresentation {
    let mut syzygy = BigInt::one();
    for mi in &datum.m_vec {
        let e = mi.to_u64().expect("m-vector entry exceeds u64");
        let mut p = BigInt::one();
        for _ in 0..e {
            p *= mi;
        }
        syzygy *= p;
    }
    let e = datum.m.to_u64().expect("m exceeds u64");
    let mut m_pow = BigInt::one();
    for _ in 0..e {
        m_pow *= &datum.m;
    }
    let ratio = BigRational::new(syzygy.clone(), m_pow);
    OrbifoldPresentation {
        m: datum.m.clone(),
        generator_degrees: (datum.m.to_string(), datum.m.to_string(), "2".into()),
        syzygy_coefficient: syzygy,
        h_power_coefficient: ratio.to_string(),
    }
}

/// Closed-orbit test for a support pattern: zero must lie in the relative
/// interior of the cone spanned by the involved weights (weights of
/// momenta count negated), and the moment quadrics must vanish on some
/// point with exactly that support.
pub fn closed_orbit_support_test(a: &IntMatrix, pattern: &SupportPattern) -> bool {
    let both: Vec<usize> = pattern
        .p
        .iter()
        .copied()
        .filter(|i| pattern.q.contains(i))
        .collect();

    // (ii) Shell condition: the kernel of the columns carrying nonzero
    // products x_j xi_j must not force any of those products to zero.
    let sub = a.submatrix_columns(&both);
    let full_rank = sub.rank();
    for (j, _) in both.iter().enumerate() {
        let without: Vec<usize> = (0..both.len()).filter(|&k| k != j).collect();
        if sub.submatrix_columns(&without).rank() != full_rank {
            return false;
        }
    }

    // (i) Positive relation among the involved weights.
    if pattern.p.iter().all(|i| pattern.q.contains(i))
        && pattern.q.iter().all(|i| pattern.p.contains(i))
    {
        // Symmetric pattern: coefficients (1,...,1) on both sides cancel.
        return true;
    }
    let gens: Vec<Vec<BigInt>> = pattern
        .p
        .iter()
        .map(|&i| a.col_vec(i))
        .chain(pattern.q.iter().map(|&i| {
            a.col_vec(i).into_iter().map(|x| -x).collect::<Vec<_>>()
        }))
        .collect();
    if gens.is_empty() {
        return true;
    }
    let mut cone = IntMatrix::zero(a.rows(), gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (r, x) in g.iter().enumerate() {
            cone.set(r, j, x.clone());
        }
    }
    rational_feasibility(&cone, &vec![Bound::AtLeastOne; gens.len()]).is_some()
}

/// Does the kernel of the selected columns contain a vector with all
/// coordinates nonzero? Decides whether some closed shell orbit has
/// exactly this set of involved columns.
fn has_full_support_kernel(
    a: &IntMatrix,
    cols: &[usize],
    memo: &mut HashMap<Vec<usize>, usize>,
) -> bool {
    let full = subset_rank(a, cols, memo);
    for skip in 0..cols.len() {
        let without: Vec<usize> = cols
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != skip)
            .map(|(_, &c)| c)
            .collect();
        if subset_rank(a, &without, memo) != full {
            return false;
        }
    }
    true
}

/// Subgroup of the character lattice generated by the selected columns.
pub(crate) fn column_span_lattice(a: &IntMatrix, cols: &[usize]) -> Lattice {
    Lattice::from_rows(a.rows(), cols.iter().map(|&c| a.col_vec(c)).collect())
}

/// Signature of the joint kernel of the selected columns.
pub(crate) fn signature_of_columns(a: &IntMatrix, cols: &[usize]) -> IsotropySignature {
    let sub = a.submatrix_columns(cols);
    let lattice = kernel_lattice(&sub.transpose());
    let finite_part: Vec<BigInt> = sub
        .invariant_factors()
        .into_iter()
        .filter(|f| f > &BigInt::one())
        .collect();
    IsotropySignature {
        lattice,
        finite_part,
    }
}

/// All isotropy classes of closed orbits in the shell, with stratum
/// codimensions. Requires a stable module.
///
/// A column set `S` is the involved set of some closed shell orbit
/// exactly when the kernel of `A_S` contains a full-support vector: such a
/// vector provides the products `x_j xi_j`, and the symmetric pattern
/// `P = Q = S` passes the cone condition with coefficients one. Any
/// asymmetric pattern with union `S` passing the closed-orbit test yields
/// such a kernel vector too, so nothing is missed; the pattern-level
/// reference implementation in the oracle module cross-checks this.
pub fn enumerate_isotropy_classes(module: &TorusModule) -> Result<Vec<StratumRecord>> {
    if let Stability::Unstable { failing_column } = module.stability() {
        return Err(Error::NotStable { failing_column });
    }
    let a = module.matrix();
    let n = module.dim();
    let mut memo = HashMap::new();
    let mut classes: BTreeMap<IsotropySignature, StratumRecord> = BTreeMap::new();
    for s in all_subsets(n) {
        if !has_full_support_kernel(a, &s, &mut memo) {
            continue;
        }
        let sig = signature_of_columns(a, &s);
        if classes.contains_key(&sig) {
            continue;
        }
        let span = column_span_lattice(a, &s);
        let fixed_columns: Vec<usize> = (0..n).filter(|&i| span.contains(&a.col_vec(i))).collect();
        let moving = n - fixed_columns.len();
        let h = sig.lattice.rank();
        debug_assert!(moving >= h);
        let record = StratumRecord {
            isotropy_lattice: sig.lattice.clone(),
            finite_part: sig.finite_part.clone(),
            fixed_columns,
            codim_in_quotient: 2 * (moving - h),
        };
        classes.insert(sig, record);
    }
    let mut out: Vec<StratumRecord> = classes.into_values().collect();
    out.sort_by(|x, y| {
        (x.codim_in_quotient, &x.isotropy_lattice, &x.finite_part)
            .cmp(&(y.codim_in_quotient, &y.isotropy_lattice, &y.finite_part))
    });
    Ok(out)
}

/// Codimension in the shell of its singular locus (the closed set of
/// points with positive-dimensional isotropy), or `None` for a rank-0
/// torus whose shell is smooth.
///
/// Points supported on a column set `S` of rank at most `l - 1` form,
/// inside the shell, a subvariety of dimension `2|S| - rank(S)`: the
/// moment quadrics restricted there impose exactly `rank(S)` conditions.
/// Splitting the support between coordinates and momenta only shrinks the
/// count, so taking both sides full is optimal.
pub fn codim_n_sing(module: &TorusModule) -> Option<usize> {
    let l = module.torus_rank();
    if l == 0 {
        return None;
    }
    let a = module.matrix();
    let n = module.dim();
    let dim_shell = 2 * n - l;
    let mut memo = HashMap::new();
    let mut best: Option<usize> = None;
    for s in all_subsets(n) {
        let rank = subset_rank(a, &s, &mut memo);
        if rank > l - 1 {
            continue;
        }
        let dim = 2 * s.len() - rank;
        best = Some(best.map_or(dim, |b| b.max(dim)));
    }
    best.map(|b| dim_shell - b)
}
