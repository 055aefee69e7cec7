//! Dense arbitrary-precision integer matrices with Hermite and Smith
//! normal forms.
//!
//! All arithmetic is exact. Pivot rules are fixed so every decomposition is
//! deterministic across runs and platforms:
//!
//! * Hermite form is row-style: `U * M = H` with `U` unimodular, pivots
//!   positive, entries above a pivot reduced into `[0, pivot)`, pivot
//!   columns strictly increasing.
//! * Smith form is `U * M * V = D` with `D` diagonal, nonnegative, and each
//!   diagonal entry dividing the next.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("rows of unequal length".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Rows given as machine integers; the usual entry point in tests.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    /// An `r x 0` or `0 x c` matrix. Empty shapes come up as reduction
    /// successors and must round-trip everywhere.
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::zero(rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.get(k, c);
                    let cur = out.get(r, c) + add;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * &v[c]).sum())
            .collect()
    }

    /// Columns selected by index, in the order given.
    pub fn submatrix_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// `B[:, j] = A[:, perm[j]]`.
    pub fn apply_column_permutation(&self, perm: &[usize]) -> IntMatrix {
        assert_eq!(perm.len(), self.cols);
        self.submatrix_columns(perm)
    }

    /// Per-column sign flips; `signs[j]` is `+1` or `-1`.
    pub fn scale_columns(&self, signs: &[i8]) -> IntMatrix {
        assert_eq!(signs.len(), self.cols);
        let mut out = self.clone();
        for (j, &s) in signs.iter().enumerate() {
            if s < 0 {
                for r in 0..self.rows {
                    let v = -out.get(r, j);
                    out.set(r, j, v);
                }
            }
        }
        out
    }

    pub fn concat_rows(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// `row[a] -= q * row[b]`
    fn row_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(a, c) - q * self.get(b, c);
            self.set(a, c, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn col_sub_mul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, a) - q * self.get(r, b);
            self.set(r, a, v);
        }
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular
    /// and `U * self = H`.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row >= self.rows {
                break;
            }
            // Euclidean reduction within this column until at most one
            // nonzero entry remains at or below pivot_row.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..self.rows {
                    if h.get(r, col).is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some(r),
                        Some(b) => {
                            if h.get(r, col).abs() < h.get(b, col).abs() {
                                Some(r)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
                let Some(b) = best else { break };
                h.swap_rows(pivot_row, b);
                u.swap_rows(pivot_row, b);
                let p = h.get(pivot_row, col).clone();
                let mut clean = true;
                for r in pivot_row + 1..self.rows {
                    if h.get(r, col).is_zero() {
                        continue;
                    }
                    let q = h.get(r, col) / &p; // truncated: |rem| < |p|
                    h.row_sub_mul(r, pivot_row, &q);
                    u.row_sub_mul(r, pivot_row, &q);
                    if !h.get(r, col).is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if !h.get(pivot_row, col).is_zero() {
                if h.get(pivot_row, col).is_negative() {
                    h.negate_row(pivot_row);
                    u.negate_row(pivot_row);
                }
                let p = h.get(pivot_row, col).clone();
                for r in 0..pivot_row {
                    let q = h.get(r, col).div_floor(&p);
                    h.row_sub_mul(r, pivot_row, &q);
                    u.row_sub_mul(r, pivot_row, &q);
                }
                pivot_row += 1;
            }
        }
        (h, u)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite_normal_form();
        (0..h.rows)
            .filter(|&r| (0..h.cols).any(|c| !h.get(r, c).is_zero()))
            .count()
    }

    /// Smith normal form: returns `(U, D, V)` with `U`, `V` unimodular and
    /// `U * self * V = D`.
    pub fn smith_normal_form(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let bound = self.rows.min(self.cols);
        let mut t = 0;
        while t < bound {
            // Smallest-magnitude nonzero entry of the trailing block; ties
            // broken by (row, col) so the routine is deterministic.
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..self.rows {
                for c in t..self.cols {
                    if d.get(r, c).is_zero() {
                        continue;
                    }
                    pivot = match pivot {
                        None => Some((r, c)),
                        Some((pr, pc)) => {
                            if d.get(r, c).abs() < d.get(pr, pc).abs() {
                                Some((r, c))
                            } else {
                                Some((pr, pc))
                            }
                        }
                    };
                }
            }
            let Some((pr, pc)) = pivot else { break };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let mut settled = false;
            while !settled {
                // Clear column t below the pivot.
                let mut dirty = false;
                for r in t + 1..self.rows {
                    if d.get(r, t).is_zero() {
                        continue;
                    }
                    let q = d.get(r, t) / d.get(t, t);
                    d.row_sub_mul(r, t, &q);
                    u.row_sub_mul(r, t, &q);
                    if !d.get(r, t).is_zero() {
                        dirty = true;
                    }
                }
                // Clear row t to the right of the pivot.
                for c in t + 1..self.cols {
                    if d.get(t, c).is_zero() {
                        continue;
                    }
                    let q = d.get(t, c) / d.get(t, t);
                    d.col_sub_mul(c, t, &q);
                    v.col_sub_mul(c, t, &q);
                    if !d.get(t, c).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // A remainder smaller than the pivot appeared; make it
                    // the new pivot and repeat.
                    let mut best: Option<(usize, usize)> = None;
                    for r in t..self.rows {
                        for c in t..self.cols {
                            if (r > t && c > t) || d.get(r, c).is_zero() {
                                continue;
                            }
                            best = match best {
                                None => Some((r, c)),
                                Some((br, bc)) => {
                                    if d.get(r, c).abs() < d.get(br, bc).abs() {
                                        Some((r, c))
                                    } else {
                                        Some((br, bc))
                                    }
                                }
                            };
                        }
                    }
                    let (br, bc) = best.expect("dirty implies nonzero entry");
                    d.swap_rows(t, br);
                    u.swap_rows(t, br);
                    d.swap_cols(t, bc);
                    v.swap_cols(t, bc);
                    continue;
                }
                // Row and column are clear; enforce divisibility.
                let mut offender: Option<(usize, usize)> = None;
                'search: for r in t + 1..self.rows {
                    for c in t + 1..self.cols {
                        if !d.get(r, c).mod_floor(d.get(t, t)).is_zero() {
                            offender = Some((r, c));
                            break 'search;
                        }
                    }
                }
                match offender {
                    Some((r, _)) => {
                        // Fold the offending row into row t; the next pass
                        // shrinks the pivot to a divisor of both.
                        let minus_one = -BigInt::one();
                        d.row_sub_mul(t, r, &minus_one);
                        u.row_sub_mul(t, r, &minus_one);
                    }
                    None => settled = true,
                }
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        (u, d, v)
    }

    /// Nonzero diagonal entries of the Smith form, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let (_, d, _) = self.smith_normal_form();
        let mut out = Vec::new();
        for i in 0..d.rows.min(d.cols) {
            if d.get(i, i).is_zero() {
                break;
            }
            out.push(d.get(i, i).clone());
        }
        out
    }

    /// Exact inverse of a unimodular matrix, `None` when `|det| != 1`.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let (h, w) = self.hermite_normal_form();
        if h == IntMatrix::identity(self.rows) {
            Some(w)
        } else {
            None
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.inverse_unimodular().is_some()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

// Entries serialize as decimal strings: JSON numbers cannot carry
// arbitrary-precision integers and reports must round-trip losslessly.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IntMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let strings: Vec<String> = self.entries.iter().map(BigInt::to_string).collect();
        st.serialize_field("entries", &strings)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<String>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(serde::de::Error::custom("entry count mismatch"));
        }
        let entries = raw
            .entries
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: raw.rows,
            cols: raw.cols,
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_identity() {
        assert_eq!(IntMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_proportional_rows() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn rank_two_row_block() {
        // Oracle: exact row reduction by hand. Row2 - 0*Row1 keeps two
        // independent rows; no rational multiple of (-1,0,2,2) equals
        // (0,-2,5,5).
        assert_eq!(m(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]).rank(), 2);
    }

    #[test]
    fn snf_gcd_lcm() {
        let (u, d, v) = m(&[&[2, 0], &[0, 3]]).smith_normal_form();
        assert_eq!(d, m(&[&[1, 0], &[0, 6]]));
        assert!(u.is_unimodular() && v.is_unimodular());
    }

    #[test]
    fn snf_zero() {
        let z = IntMatrix::zero(2, 3);
        let (_, d, _) = z.smith_normal_form();
        assert!(d.is_zero());
    }

    fn check_snf(a: &IntMatrix) {
        let (u, d, v) = a.smith_normal_form();
        assert!(u.is_unimodular(), "U not unimodular");
        assert!(v.is_unimodular(), "V not unimodular");
        assert_eq!(u.mul(a).mul(&v), d, "UMV != D");
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                if r != c {
                    assert!(d.get(r, c).is_zero(), "D not diagonal");
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols()))
            .map(|i| d.get(i, i).clone())
            .collect();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility fails");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero on diagonal");
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn snf_product_example() {
        let a = m(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]]);
        let (_, d, _) = a.smith_normal_form();
        assert_eq!(d, m(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
        check_snf(&a);
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = IntMatrix::identity(3).hermite_normal_form();
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_two_by_two() {
        let a = m(&[&[2, 4], &[1, 3]]);
        let (h, u) = a.hermite_normal_form();
        assert!(u.is_unimodular());
        assert_eq!(u.mul(&a), h);
        // Under our convention the entry above the second pivot is reduced
        // mod 2, so the form is [[1,1],[0,2]].
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_single_row_sign() {
        let a = m(&[&[-2, 9, 9]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(h, m(&[&[2, -9, -9]]));
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn hnf_empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let a = IntMatrix::zero(r, c);
            let (h, u) = a.hermite_normal_form();
            assert_eq!(h.rows(), r);
            assert_eq!(h.cols(), c);
            assert_eq!(u.mul(&a), h);
            check_snf(&a);
        }
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let u = m(&[&[1, 2], &[1, 3]]);
        let inv = u.inverse_unimodular().expect("det 1");
        assert_eq!(u.mul(&inv), IntMatrix::identity(2));
        assert_eq!(inv.mul(&u), IntMatrix::identity(2));
        assert!(m(&[&[2, 0], &[0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn serde_roundtrip() {
        let a = m(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]);
        let s = serde_json::to_string(&a).unwrap();
        let b: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    proptest::proptest! {
        #[test]
        fn snf_properties_random(rows in proptest::collection::vec(
            proptest::collection::vec(-9i64..=9, 1..=6), 1..=4)) {
            let c = rows[0].len();
            let rows: Vec<Vec<BigInt>> = rows
                .into_iter()
                .map(|r| {
                    let mut r = r;
                    r.resize(c, 0);
                    r.into_iter().map(BigInt::from).collect()
                })
                .collect();
            let a = IntMatrix::from_rows(rows).unwrap();
            check_snf(&a);
            let (h, u) = a.hermite_normal_form();
            proptest::prop_assert!(u.is_unimodular());
            proptest::prop_assert_eq!(u.mul(&a), h);
        }
    }
}
