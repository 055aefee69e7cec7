//! Independent verification machinery: truncated Hilbert series of
//! invariant rings by lattice-point counting, exact shell-point sampling,
//! an empirical isotropy census, and deliberately naive re-implementations
//! of the fast criteria for differential testing.
//!
//! The Hilbert series is the universal cross-check: an invariant monomial
//! `x^a xi^b` exists iff `A (a - b) = 0`, and grouping by the difference
//! vector `d = a - b` gives
//!
//! ```text
//! ambient(q) = [ sum over d with A d = 0 of q^{|d|_1} ] * (1 - q^2)^{-n},
//! ```
//!
//! since each coordinate pair contributes `q^{|d_i|} / (1 - q^2)`. The
//! shell series multiplies the ambient one by `(1 - q^2)^l`: the `l`
//! moment quadrics are invariant and cut a complete intersection, so they
//! form a regular sequence in the invariant ring. A negative coefficient
//! along the way is a theory violation and aborts loudly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::feasibility::{rational_feasibility, Bound};
use crate::lattice::kernel_lattice;
use crate::mat::IntMatrix;
use crate::module::TorusModule;
use crate::reduction::ReducedData;
use crate::strata::{
    closed_orbit_support_test, enumerate_isotropy_classes, signature_of_columns,
    IsotropySignature, SupportPattern,
};
use crate::util::combinations;

/// Coefficient list `c_0..c_D` of a graded dimension series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertTruncation {
    pub max_degree: usize,
    #[serde(serialize_with = "ser_u128_vec")]
    pub coefficients: Vec<u128>,
}

fn ser_u128_vec<S: serde::Serializer>(v: &[u128], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(u128::to_string))
}

fn checked_add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b)
        .ok_or_else(|| Error::InvariantViolation("series coefficient overflow".into()))
}

fn checked_mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b)
        .ok_or_else(|| Error::InvariantViolation("series coefficient overflow".into()))
}

/// Counts, per total degree `t <= max_degree`, of integer vectors `d`
/// with `A d = 0` and `|d|_1 = t`.
#[allow(clippy::needless_range_loop)] // degree t drives both table slots
fn kernel_degree_counts(a: &IntMatrix, max_degree: usize) -> Result<Vec<u128>> {
    let l = a.rows();
    let n = a.cols();
    let d_max = max_degree as i128;
    let cols: Vec<Vec<i128>> = (0..n)
        .map(|c| {
            a.col_vec(c)
                .iter()
                .map(|x| {
                    x.to_i128().ok_or_else(|| {
                        Error::Shape("weight entries too large for series computation".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    // Per-column suffix bound on |entry|, for pruning states that can no
    // longer cancel back to weight zero.
    let mut suffix_max = vec![0i128; n + 1];
    for c in (0..n).rev() {
        let m = cols[c].iter().map(|x| x.abs()).max().unwrap_or(0);
        suffix_max[c] = suffix_max[c + 1].max(m);
    }

    let mut table: HashMap<Vec<i128>, Vec<u128>> = HashMap::new();
    let mut zero_counts = vec![0u128; max_degree + 1];
    zero_counts[0] = 1;
    table.insert(vec![0i128; l], zero_counts);

    for (c, col) in cols.iter().enumerate() {
        let rest = suffix_max[c + 1];
        let mut next: HashMap<Vec<i128>, Vec<u128>> = HashMap::new();
        for (w, counts) in &table {
            for d in -d_max..=d_max {
                let step = d.unsigned_abs() as usize;
                let w2: Vec<i128> = w.iter().zip(col).map(|(wi, ci)| wi + d * ci).collect();
                for t in 0..=max_degree.saturating_sub(step) {
                    if counts[t] == 0 {
                        continue;
                    }
                    let t2 = t + step;
                    let budget = (max_degree - t2) as i128;
                    if w2.iter().any(|x| x.abs() > budget * rest) {
                        continue;
                    }
                    let slot = next
                        .entry(w2.clone())
                        .or_insert_with(|| vec![0u128; max_degree + 1]);
                    slot[t2] = checked_add(slot[t2], counts[t])?;
                }
            }
        }
        table = next;
    }
    Ok(table
        .remove(&vec![0i128; l])
        .unwrap_or_else(|| vec![0u128; max_degree + 1]))
}

/// Coefficients of `(1 - q^2)^{-pairs}` up to `max_degree`.
fn geometric_pairs(pairs: usize, max_degree: usize) -> Result<Vec<u128>> {
    let mut out = vec![0u128; max_degree + 1];
    out[0] = 1;
    if pairs == 0 {
        return Ok(out);
    }
    // Binomial C(pairs - 1 + j, j) at degree 2j, built incrementally.
    let mut coeff: u128 = 1;
    let mut j: u128 = 0;
    let mut deg = 2;
    while deg <= max_degree {
        j += 1;
        coeff = checked_mul(coeff, pairs as u128 - 1 + j)? / j;
        out[deg] = coeff;
        deg += 2;
    }
    Ok(out)
}

fn mul_truncated(x: &[u128], y: &[u128], max_degree: usize) -> Result<Vec<u128>> {
    let mut out = vec![0u128; max_degree + 1];
    for (i, &xi) in x.iter().enumerate().take(max_degree + 1) {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate().take(max_degree + 1 - i) {
            if yj == 0 {
                continue;
            }
            out[i + j] = checked_add(out[i + j], checked_mul(xi, yj)?)?;
        }
    }
    Ok(out)
}

/// Dimensions of the invariants of `C[V + V*]` degree by degree: count
/// monomials `x^a xi^b` with `A (a - b) = 0`.
pub fn ambient_invariant_series(a: &IntMatrix, max_degree: usize) -> Result<HilbertTruncation> {
    let kernel = kernel_degree_counts(a, max_degree)?;
    let coefficients = mul_truncated(&kernel, &geometric_pairs(a.cols(), max_degree)?, max_degree)?;
    Ok(HilbertTruncation {
        max_degree,
        coefficients,
    })
}

/// Invariants of the shell: the ambient series times `(1 - q^2)^l`. Any
/// negative intermediate coefficient contradicts the complete-intersection
/// structure and is reported as an invariant violation.
pub fn shell_invariant_series(a: &IntMatrix, max_degree: usize) -> Result<HilbertTruncation> {
    let ambient = ambient_invariant_series(a, max_degree)?;
    let l = a.rows();
    // (1 - q^2)^l expanded with signs.
    let mut signed: Vec<i128> = vec![0; max_degree + 1];
    let mut binom: i128 = 1;
    for k in 0..=l {
        if 2 * k <= max_degree {
            signed[2 * k] = if k % 2 == 0 { binom } else { -binom };
        }
        binom = binom * (l as i128 - k as i128) / (k as i128 + 1);
    }
    let mut out = vec![0i128; max_degree + 1];
    for (i, &c) in ambient.coefficients.iter().enumerate() {
        let ci = i128::try_from(c)
            .map_err(|_| Error::InvariantViolation("series coefficient overflow".into()))?;
        if ci == 0 {
            continue;
        }
        for (j, &sj) in signed.iter().enumerate().take(max_degree + 1 - i) {
            if sj == 0 {
                continue;
            }
            out[i + j] = out[i + j]
                .checked_add(
                    ci.checked_mul(sj).ok_or_else(|| {
                        Error::InvariantViolation("series coefficient overflow".into())
                    })?,
                )
                .ok_or_else(|| Error::InvariantViolation("series coefficient overflow".into()))?;
        }
    }
    let coefficients = out
        .into_iter()
        .map(|c| {
            u128::try_from(c).map_err(|_| {
                Error::InvariantViolation(
                    "negative shell series coefficient: moment quadrics do not form a regular \
                     sequence on this input"
                        .into(),
                )
            })
        })
        .collect::<Result<Vec<u128>>>()?;
    Ok(HilbertTruncation {
        max_degree,
        coefficients,
    })
}

/// Series of one cyclic factor `Z/m` acting on a coordinate line by
/// scalars: degree `t` carries the monomials `x^a xi^b` with `a + b = t`
/// and `a = b mod m`.
fn cyclic_factor_series(m: &BigInt, max_degree: usize) -> Result<Vec<u128>> {
    let m = m
        .to_i128()
        .ok_or_else(|| Error::Shape("cyclic modulus too large".into()))?;
    let mut out = vec![0u128; max_degree + 1];
    for t in 0..=max_degree as i128 {
        let mut count = 0u128;
        for a in 0..=t {
            let b = t - a;
            if (a - b).rem_euclid(m) == 0 {
                count = checked_add(count, 1)?;
            }
        }
        out[t as usize] = count;
    }
    Ok(out)
}

/// Series of reduced data: the quotient is a product, so the series is
/// the truncated product of the cyclic factor series and the torus
/// block's shell series.
pub fn reduced_data_series(d: &ReducedData, max_degree: usize) -> Result<HilbertTruncation> {
    let mut acc = vec![0u128; max_degree + 1];
    acc[0] = 1;
    for m in &d.cyclic_moduli {
        acc = mul_truncated(&acc, &cyclic_factor_series(m, max_degree)?, max_degree)?;
    }
    if let Some(block) = &d.torus_block {
        let shell = shell_invariant_series(block.matrix(), max_degree)?;
        acc = mul_truncated(&acc, &shell.coefficients, max_degree)?;
    }
    Ok(HilbertTruncation {
        max_degree,
        coefficients: acc,
    })
}

/// A shell point in exact rational coordinates together with its moment
/// values and the dimension of its stabilizer (the corank of the columns
/// touched by a nonzero coordinate or momentum). Membership on the shell
/// means all values are exactly zero.
#[derive(Clone, Debug, Serialize)]
pub struct MomentEvaluation {
    #[serde(serialize_with = "ser_rat_vec")]
    pub point: Vec<BigRational>,
    #[serde(serialize_with = "ser_rat_vec")]
    pub values: Vec<BigRational>,
    pub isotropy_dimension: usize,
}

fn ser_rat_vec<S: serde::Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(BigRational::to_string))
}

impl MomentEvaluation {
    pub fn on_shell(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

/// Moment values of an arbitrary point under the diagonal action:
/// `mu_i = sum_j a_ij x_j xi_j`.
pub fn evaluate_moment(a: &IntMatrix, point: &[BigRational]) -> Vec<BigRational> {
    let n = a.cols();
    assert_eq!(point.len(), 2 * n, "point must have 2n coordinates");
    (0..a.rows())
        .map(|i| {
            (0..n)
                .map(|j| {
                    BigRational::from_integer(a.get(i, j).clone()) * &point[j] * &point[n + j]
                })
                .sum()
        })
        .collect()
}

/// Full-support kernel vector of the selected columns, if one exists:
/// greedy combination of a kernel basis.
fn full_support_kernel_vector(a: &IntMatrix, cols: &[usize]) -> Option<Vec<BigInt>> {
    if cols.is_empty() {
        return Some(Vec::new());
    }
    let kernel = kernel_lattice(&a.submatrix_columns(cols));
    if kernel.is_zero() {
        return None;
    }
    let mut covered = vec![false; cols.len()];
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
        let mut c = BigInt::zero();
        loop {
            let bad = v.iter().zip(row).any(|(vi, bi)| {
                !bi.is_zero() && (vi + &c * bi).is_zero()
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
    Some(v)
}

/// Deterministic sampling of exact shell points. A random support pattern
/// is drawn, repaired until the columns carrying nonzero products admit a
/// full-support kernel vector, and the products are read off that vector;
/// free coordinates get small random nonzero values.
pub fn sample_shell_points(a: &IntMatrix, count: usize, seed: u64) -> Vec<MomentEvaluation> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let n = a.cols();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut in_p = vec![false; n];
        let mut in_q = vec![false; n];
        for j in 0..n {
            match rng.gen_range(0..4u8) {
                1 => in_p[j] = true,
                2 => in_q[j] = true,
                3 => {
                    in_p[j] = true;
                    in_q[j] = true;
                }
                _ => {}
            }
        }
        // Demote coordinates whose product is forced to zero until the
        // intersection supports an exact solution.
        loop {
            let both: Vec<usize> = (0..n).filter(|&j| in_p[j] && in_q[j]).collect();
            if both.is_empty() {
                break;
            }
            let sub = a.submatrix_columns(&both);
            let full = sub.rank();
            let forced: Vec<usize> = (0..both.len())
                .filter(|&k| {
                    let keep: Vec<usize> = (0..both.len()).filter(|&x| x != k).collect();
                    sub.submatrix_columns(&keep).rank() != full
                })
                .map(|k| both[k])
                .collect();
            if forced.is_empty() {
                break;
            }
            for j in forced {
                in_q[j] = false;
            }
        }
        let both: Vec<usize> = (0..n).filter(|&j| in_p[j] && in_q[j]).collect();
        let products =
            full_support_kernel_vector(a, &both).expect("repair loop guarantees a witness");

        let mut point = vec![BigRational::zero(); 2 * n];
        for (k, &j) in both.iter().enumerate() {
            point[j] = BigRational::one();
            point[n + j] = BigRational::from_integer(products[k].clone());
        }
        let mut nonzero = || BigRational::from_integer(BigInt::from(rng.gen_range(1..=4i64)));
        for j in 0..n {
            if in_p[j] && !in_q[j] {
                point[j] = nonzero();
            } else if in_q[j] && !in_p[j] {
                point[n + j] = nonzero();
            }
        }
        let values = evaluate_moment(a, &point);
        out.push(MomentEvaluation { point, values });
    }
    out
}

/// Support of the unique closed orbit in the closure of the orbit of a
/// point with the given coordinate supports: a coordinate survives iff
/// its weight lies in the lineality space of the cone spanned by all
/// involved weights, i.e. iff it joins a nonnegative relation with
/// positive own coefficient.
fn closed_orbit_columns(a: &IntMatrix, p: &[usize], q: &[usize]) -> Vec<usize> {
    let weights: Vec<(usize, bool)> = p
        .iter()
        .map(|&j| (j, false))
        .chain(q.iter().map(|&j| (j, true)))
        .collect();
    if weights.is_empty() {
        return Vec::new();
    }
    let mut cone = IntMatrix::zero(a.rows(), weights.len());
    for (k, &(j, neg)) in weights.iter().enumerate() {
        for r in 0..a.rows() {
            let v = a.get(r, j).clone();
            cone.set(r, k, if neg { -v } else { v });
        }
    }
    let mut survivors = BTreeSet::new();
    for k in 0..weights.len() {
        let bounds: Vec<Bound> = (0..weights.len())
            .map(|i| {
                if i == k {
                    Bound::AtLeastOne
                } else {
                    Bound::NonNegative
                }
            })
            .collect();
        if rational_feasibility(&cone, &bounds).is_some() {
            survivors.insert(weights[k].0);
        }
    }
    survivors.into_iter().collect()
}

/// Sample shell points and collect the isotropy signatures of their
/// closed-orbit representatives. Every observed signature must already
/// appear in `enumerate_isotropy_classes`; a missing one is a hard
/// failure of either the enumeration or the closed-orbit combinatorics.
pub fn empirical_isotropy_census(
    module: &TorusModule,
    samples: usize,
    seed: u64,
) -> Result<BTreeSet<IsotropySignature>> {
    let a = module.matrix();
    let known: BTreeSet<IsotropySignature> = enumerate_isotropy_classes(module)?
        .iter()
        .map(|r| r.signature())
        .collect();
    let mut observed = BTreeSet::new();
    let mut cache: HashMap<(Vec<usize>, Vec<usize>), IsotropySignature> = HashMap::new();
    for sample in sample_shell_points(a, samples, seed) {
        let n = a.cols();
        let p: Vec<usize> = (0..n).filter(|&j| !sample.point[j].is_zero()).collect();
        let q: Vec<usize> = (0..n)
            .filter(|&j| !sample.point[n + j].is_zero())
            .collect();
        let sig = cache
            .entry((p.clone(), q.clone()))
            .or_insert_with(|| {
                let cols = closed_orbit_columns(a, &p, &q);
                signature_of_columns(a, &cols)
            })
            .clone();
        if !known.contains(&sig) {
            return Err(Error::InvariantViolation(format!(
                "sampled isotropy signature missing from the enumeration: {sig:?}"
            )));
        }
        observed.insert(sig);
    }
    Ok(observed)
}

/// Rank over the rationals by plain Gaussian elimination; an independent
/// code path from the Hermite-form rank used everywhere else.
#[allow(clippy::needless_range_loop)] // two rows of m are indexed in parallel
pub fn rank_rational_gauss(a: &IntMatrix) -> usize {
    let rows = a.rows();
    let cols = a.cols();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| BigRational::from_integer(a.get(r, c).clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..rows {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..cols {
                let sub = &f * &m[rank][c];
                m[r][c] = &m[r][c] - sub;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Naive k-modularity: literally test every `l x (n-k)` submatrix with
/// the Gaussian rank.
pub fn brute_modularity(a: &IntMatrix, k: usize) -> bool {
    let n = a.cols();
    let l = a.rows();
    if k > n {
        return false;
    }
    combinations(n, n - k)
        .into_iter()
        .all(|cols| rank_rational_gauss(&a.submatrix_columns(&cols)) == l)
}

/// Naive type-O detection straight from the column criterion.
pub fn brute_type_o(a: &IntMatrix) -> bool {
    let n = a.cols();
    let l = a.rows();
    for r in 1..=l {
        if r + 1 > n {
            continue;
        }
        for fixed in combinations(n, n - r - 1) {
            if rank_rational_gauss(&a.submatrix_columns(&fixed)) == l - r {
                return true;
            }
        }
    }
    false
}

/// Reference isotropy enumeration straight from the definition of the support
/// patterns: all `4^n` patterns filtered by `closed_orbit_support_test`,
/// keyed by the joint kernel of the involved columns.
pub fn brute_isotropy_signatures(a: &IntMatrix) -> BTreeSet<IsotropySignature> {
    let n = a.cols();
    let mut out = BTreeSet::new();
    let mut states = vec![0u8; n];
    loop {
        let p: Vec<usize> = (0..n).filter(|&j| states[j] == 1 || states[j] == 3).collect();
        let q: Vec<usize> = (0..n).filter(|&j| states[j] == 2 || states[j] == 3).collect();
        let pattern = SupportPattern { p: p.clone(), q: q.clone() };
        if closed_orbit_support_test(a, &pattern) {
            let involved: Vec<usize> = (0..n).filter(|&j| states[j] != 0).collect();
            out.insert(signature_of_columns(a, &involved));
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            states[k] += 1;
            if states[k] == 4 {
                states[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
    }
}

/// Seeded generation of random modules and scrambles for property suites.
pub mod corpus {
    use super::*;
    use crate::module::SignVector;

    pub fn random_weight_matrix<R: Rng>(rng: &mut R, l: usize, n: usize, bound: i64) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..l)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                    .collect()
            })
            .collect();
        if l == 0 {
            IntMatrix::zero(0, n)
        } else {
            IntMatrix::from_rows(rows).expect("rectangular")
        }
    }

    /// Rejection-sample a faithful 1-modular module with torus rank in
    /// `1..=max_rank` and dimension in `rank+1..=max_dim`. Zero columns
    /// (trivial summands) are rejected: the corpus probes modules with no
    /// fixed subspace.
    pub fn random_faithful_one_modular<R: Rng>(
        rng: &mut R,
        max_rank: usize,
        max_dim: usize,
        bound: i64,
    ) -> TorusModule {
        loop {
            let l = rng.gen_range(1..=max_rank);
            let n = rng.gen_range((l + 1).max(2)..=max_dim);
            let a = random_weight_matrix(rng, l, n, bound);
            if (0..n).any(|c| a.col_vec(c).iter().all(num_traits::Zero::is_zero)) {
                continue;
            }
            if let Ok(m) = TorusModule::new(a) {
                if m.is_one_modular() {
                    return m;
                }
            }
        }
    }

    /// Same, then stabilized by its change-of-Lagrangian sign vector.
    pub fn random_stable_module<R: Rng>(
        rng: &mut R,
        max_rank: usize,
        max_dim: usize,
        bound: i64,
    ) -> TorusModule {
        let m = random_faithful_one_modular(rng, max_rank, max_dim, bound);
        let eps = m.make_stable_utcls().expect("1-modular by construction");
        m.apply_signs(&eps).expect("sign flip preserves faithfulness")
    }

    /// A stable module whose quotient stays within the cyclic-plus-block
    /// classification, i.e. the reduction recipe runs to completion.
    /// About one percent of raw samples reduce to a disconnected
    /// symmetry group and are rejected here.
    pub fn random_reducible_module<R: Rng>(
        rng: &mut R,
        max_rank: usize,
        max_dim: usize,
        bound: i64,
    ) -> TorusModule {
        loop {
            let m = random_stable_module(rng, max_rank, max_dim, bound);
            if crate::reduction::reduce(m.matrix()).is_ok() {
                return m;
            }
        }
    }

    /// Product of random elementary row operations: always unimodular.
    pub fn random_unimodular<R: Rng>(rng: &mut R, size: usize, steps: usize) -> IntMatrix {
        let mut u = IntMatrix::identity(size);
        if size < 2 {
            return u;
        }
        for _ in 0..steps {
            match rng.gen_range(0..3u8) {
                0 => {
                    let i = rng.gen_range(0..size);
                    let j = rng.gen_range(0..size);
                    if i != j {
                        let c = BigInt::from(*[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
                        for col in 0..size {
                            let v = u.get(i, col) + &c * u.get(j, col);
                            u.set(i, col, v);
                        }
                    }
                }
                1 => {
                    let i = rng.gen_range(0..size);
                    let j = rng.gen_range(0..size);
                    if i != j {
                        for col in 0..size {
                            let vi = u.get(i, col).clone();
                            let vj = u.get(j, col).clone();
                            u.set(i, col, vj);
                            u.set(j, col, vi);
                        }
                    }
                }
                _ => {
                    let i = rng.gen_range(0..size);
                    for col in 0..size {
                        let v = -u.get(i, col);
                        u.set(i, col, v);
                    }
                }
            }
        }
        u
    }

    pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            p.swap(i, j);
        }
        p
    }

    pub fn random_sign_vector<R: Rng>(rng: &mut R, n: usize) -> SignVector {
        SignVector::new((0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect())
            .expect("entries are +-1")
    }

    /// `U * A * P * diag(eps)` for random unimodular `U`, permutation `P`
    /// and signs `eps`.
    pub fn scramble<R: Rng>(rng: &mut R, a: &IntMatrix) -> IntMatrix {
        let u = random_unimodular(rng, a.rows(), 12);
        let p = random_permutation(rng, a.cols());
        let e = random_sign_vector(rng, a.cols());
        u.mul(a).apply_column_permutation(&p).scale_columns(e.signs())
    }
}
