//! Canonical forms of reduced data and the isomorphism decision, with
//! explicit verifiable witnesses.
//!
//! Two minimal torus blocks present the same quotient exactly when one is
//! carried to the other by a unimodular change of torus basis, a column
//! permutation, and per-column sign flips (a linear isomorphism of the
//! doubled modules intertwining the groups acts on weight data by exactly
//! these moves). The canonical representative is the orbit minimum under a
//! fixed total order: shape first, then column-major entry lists compared
//! through the integer order |x| ascending with nonnegative before
//! negative. For one-row blocks this minimum is the sorted list of
//! absolute values.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::mat::IntMatrix;
use crate::module::SignVector;
use crate::reduction::ReducedData;
use crate::strata::is_minimal;

/// Normal form of reduced data under the allowed moves, plus a stable
/// digest of its serialized layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    #[serde(with = "crate::ser::big_vec")]
    pub cyclic_moduli: Vec<BigInt>,
    pub canonical_matrix: Option<IntMatrix>,
    pub digest: String,
}

/// An explicit isomorphism of weight data:
/// `row_transform * A1 * P * diag(sign_vector) = A2`, together with a
/// matching of the cyclic moduli.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    pub row_transform: IntMatrix,
    pub column_permutation: Vec<usize>,
    pub sign_vector: SignVector,
    pub moduli_bijection: Vec<usize>,
}

/// First invariant separating two reduced data sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Distinguisher {
    Dims {
        left: (usize, usize),
        right: (usize, usize),
    },
    Moduli,
    CanonicalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum IsoVerdict {
    Isomorphic { witness: IsoWitness },
    NotIsomorphic { distinguisher: Distinguisher },
}

/// Integer order used inside canonical comparisons: by absolute value,
/// nonnegative before negative on ties.
fn cmp_int(a: &BigInt, b: &BigInt) -> Ordering {
    a.abs()
        .cmp(&b.abs())
        .then_with(|| a.is_negative().cmp(&b.is_negative()))
}

fn cmp_column(a: &[BigInt], b: &[BigInt]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = cmp_int(x, y);
        if c != Ordering::Equal {
            return c;
        }
    }
    Ordering::Equal
}

/// The fixed total order on matrices: (rows, cols), then column-major
/// entries under `cmp_int`.
pub(crate) fn matrix_canonical_cmp(a: &IntMatrix, b: &IntMatrix) -> Ordering {
    (a.rows(), a.cols())
        .cmp(&(b.rows(), b.cols()))
        .then_with(|| {
            for c in 0..a.cols() {
                let cc = cmp_column(&a.col_vec(c), &b.col_vec(c));
                if cc != Ordering::Equal {
                    return cc;
                }
            }
            Ordering::Equal
        })
}

/// Compare the first `upto` columns only.
fn cmp_prefix(a: &IntMatrix, b: &IntMatrix, upto: usize) -> Ordering {
    for c in 0..upto {
        let cc = cmp_column(&a.col_vec(c), &b.col_vec(c));
        if cc != Ordering::Equal {
            return cc;
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug)]
pub(crate) struct BlockTransform {
    pub u: IntMatrix,
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

struct Search<'a> {
    a: &'a IntMatrix,
    best: Option<(IntMatrix, Vec<usize>, Vec<i8>)>,
}

impl Search<'_> {
    fn build(&self, chosen: &[(usize, i8)]) -> IntMatrix {
        let mut out = IntMatrix::zero(self.a.rows(), chosen.len());
        for (j, &(col, sign)) in chosen.iter().enumerate() {
            for r in 0..self.a.rows() {
                let v = self.a.get(r, col).clone();
                out.set(r, j, if sign < 0 { -v } else { v });
            }
        }
        out
    }

    #[allow(clippy::needless_range_loop)] // col is data, not just an index
    fn dfs(&mut self, chosen: &mut Vec<(usize, i8)>, used: &mut [bool]) {
        let n = self.a.cols();
        let k = chosen.len();
        if k == n {
            let (h, _) = self.build(chosen).hermite_normal_form();
            let better = match &self.best {
                None => true,
                Some((b, _, _)) => matrix_canonical_cmp(&h, b) == Ordering::Less,
            };
            if better {
                self.best = Some((
                    h,
                    chosen.iter().map(|&(c, _)| c).collect(),
                    chosen.iter().map(|&(_, s)| s).collect(),
                ));
            }
            return;
        }
        // Candidate signed columns, deduplicated by value: identical
        // signed columns generate identical subtrees.
        let mut cands: Vec<(Vec<BigInt>, usize, i8)> = Vec::new();
        for col in 0..n {
            if used[col] {
                continue;
            }
            for sign in [1i8, -1] {
                let v: Vec<BigInt> = self
                    .a
                    .col_vec(col)
                    .into_iter()
                    .map(|x| if sign < 0 { -x } else { x })
                    .collect();
                if !cands.iter().any(|(w, _, _)| w == &v) {
                    cands.push((v, col, sign));
                }
            }
        }
        // Order candidates by the column they induce in the Hermite form
        // of the extended prefix; the prefix columns themselves do not
        // move when a column is appended.
        let mut scored: Vec<(IntMatrix, usize, i8)> = cands
            .into_iter()
            .map(|(_, col, sign)| {
                chosen.push((col, sign));
                let (h, _) = self.build(chosen).hermite_normal_form();
                chosen.pop();
                (h, col, sign)
            })
            .collect();
        scored.sort_by(|x, y| cmp_column(&x.0.col_vec(k), &y.0.col_vec(k)));
        for (partial, col, sign) in scored {
            if let Some((best, _, _)) = &self.best {
                // Lexicographic pruning on the column-major order: a
                // greater prefix cannot recover, and candidates are
                // sorted, so everything after it is greater too.
                if cmp_prefix(&partial, best, k + 1) == Ordering::Greater {
                    break;
                }
            }
            chosen.push((col, sign));
            used[col] = true;
            self.dfs(chosen, used);
            used[col] = false;
            chosen.pop();
        }
    }
}

/// Orbit minimum of a block under row-unimodular moves, column
/// permutations and column sign flips, with the realizing transform.
pub(crate) fn canonical_block(a: &IntMatrix) -> (IntMatrix, BlockTransform) {
    let n = a.cols();
    let (perm, signs): (Vec<usize>, Vec<i8>) = if a.rows() == 1 {
        // One-row rule: sorted absolute values. Sign flips make every
        // entry nonnegative and the permutation sorts; this agrees with
        // the general search under the fixed order.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&i, &j| a.get(0, i).abs().cmp(&a.get(0, j).abs()).then(i.cmp(&j)));
        let signs = idx
            .iter()
            .map(|&i| if a.get(0, i).is_negative() { -1 } else { 1 })
            .collect();
        (idx, signs)
    } else if a.rows() == 0 || n == 0 {
        ((0..n).collect(), vec![1; n])
    } else {
        let mut search = Search { a, best: None };
        search.dfs(&mut Vec::new(), &mut vec![false; n]);
        let (_, perm, signs) = search.best.expect("search visits at least one leaf");
        (perm, signs)
    };
    let arranged = a.apply_column_permutation(&perm).scale_columns(&signs);
    let (h, u) = arranged.hermite_normal_form();
    (
        h,
        BlockTransform {
            u,
            perm,
            signs,
        },
    )
}

#[derive(Serialize)]
struct CanonicalPayload<'a> {
    version: u32,
    cyclic_moduli: Vec<String>,
    canonical_matrix: &'a Option<IntMatrix>,
}

fn digest_of(moduli: &[BigInt], matrix: &Option<IntMatrix>) -> String {
    let payload = CanonicalPayload {
        version: 1,
        cyclic_moduli: moduli.iter().map(BigInt::to_string).collect(),
        canonical_matrix: matrix,
    };
    let json = serde_json::to_string(&payload).expect("serialization cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn canonical_form_with_transform(d: &ReducedData) -> (CanonicalForm, Option<BlockTransform>) {
    let mut moduli = d.cyclic_moduli.clone();
    moduli.sort();
    let block = d
        .torus_block
        .as_ref()
        .filter(|b| !(b.torus_rank() == 0 && b.dim() == 0));
    let (matrix, transform) = match block {
        Some(b) => {
            let (h, t) = canonical_block(b.matrix());
            (Some(h), Some(t))
        }
        None => (None, None),
    };
    let digest = digest_of(&moduli, &matrix);
    (
        CanonicalForm {
            cyclic_moduli: moduli,
            canonical_matrix: matrix,
            digest,
        },
        transform,
    )
}

/// Canonical form of reduced data: sorted moduli plus the orbit-minimal
/// torus block (an empty rank-0 block normalizes to no block at all).
pub fn canonical_form(d: &ReducedData) -> CanonicalForm {
    canonical_form_with_transform(d).0
}

fn dims_of(d: &ReducedData) -> (usize, usize) {
    let (n, l) = d
        .torus_block
        .as_ref()
        .map_or((0, 0), |b| (b.dim(), b.torus_rank()));
    (d.cyclic_moduli.len() + n, l)
}

fn require_minimal(d: &ReducedData, side: &str) -> Result<()> {
    if let Some(b) = &d.torus_block {
        if !is_minimal(b) {
            return Err(Error::NonMinimal(format!(
                "{side} torus block admits a type-O slice; reduce it first"
            )));
        }
    }
    if d.cyclic_moduli.iter().any(|m| m < &BigInt::from(2)) {
        return Err(Error::NonMinimal(format!(
            "{side} cyclic moduli must all be at least 2"
        )));
    }
    Ok(())
}

fn invert_permutation(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

/// Decide isomorphism of two reduced data sets. The verdict is
/// "isomorphic" exactly when the canonical forms agree, in which case a
/// verified witness built from the two normalization paths is returned;
/// otherwise the first distinguishing invariant is reported (total module
/// dimension and torus rank, then moduli, then the canonical block).
pub fn decide_iso(d1: &ReducedData, d2: &ReducedData) -> Result<IsoVerdict> {
    require_minimal(d1, "left")?;
    require_minimal(d2, "right")?;

    let dims1 = dims_of(d1);
    let dims2 = dims_of(d2);
    if dims1 != dims2 {
        return Ok(IsoVerdict::NotIsomorphic {
            distinguisher: Distinguisher::Dims {
                left: dims1,
                right: dims2,
            },
        });
    }
    let (c1, t1) = canonical_form_with_transform(d1);
    let (c2, t2) = canonical_form_with_transform(d2);
    if c1.cyclic_moduli != c2.cyclic_moduli {
        return Ok(IsoVerdict::NotIsomorphic {
            distinguisher: Distinguisher::Moduli,
        });
    }
    if c1.canonical_matrix != c2.canonical_matrix {
        return Ok(IsoVerdict::NotIsomorphic {
            distinguisher: Distinguisher::CanonicalMatrix,
        });
    }

    // Same canonical form: compose the two normalizations,
    //   U1 A1 P1 E1 = C = U2 A2 P2 E2
    //   =>  (U2^-1 U1) A1 (P1 P2^-1) (P2 E1 E2 P2^-1) = A2.
    let witness = match (t1, t2) {
        (Some(t1), Some(t2)) => {
            let u2_inv = t2
                .u
                .inverse_unimodular()
                .ok_or_else(|| Error::InvariantViolation("HNF transform not unimodular".into()))?;
            let u = u2_inv.mul(&t1.u);
            let p2_inv = invert_permutation(&t2.perm);
            let perm: Vec<usize> = (0..t2.perm.len()).map(|j| t1.perm[p2_inv[j]]).collect();
            let signs: Vec<i8> = (0..t2.perm.len())
                .map(|j| t1.signs[p2_inv[j]] * t2.signs[p2_inv[j]])
                .collect();
            IsoWitness {
                row_transform: u,
                column_permutation: perm,
                sign_vector: SignVector::new(signs)?,
                moduli_bijection: (0..c1.cyclic_moduli.len()).collect(),
            }
        }
        (None, None) => IsoWitness {
            row_transform: IntMatrix::identity(0),
            column_permutation: vec![],
            sign_vector: SignVector::identity(0),
            moduli_bijection: (0..c1.cyclic_moduli.len()).collect(),
        },
        _ => {
            return Err(Error::InvariantViolation(
                "equal canonical forms with mismatched block presence".into(),
            ))
        }
    };
    if !verify_witness(d1, d2, &witness) {
        return Err(Error::InvariantViolation(
            "constructed isomorphism witness failed verification".into(),
        ));
    }
    Ok(IsoVerdict::Isomorphic { witness })
}

/// Soundness check of a witness by direct recomputation.
pub fn verify_witness(d1: &ReducedData, d2: &ReducedData, w: &IsoWitness) -> bool {
    // Moduli must match exactly under the bijection.
    let m1 = &d1.cyclic_moduli;
    let m2 = &d2.cyclic_moduli;
    if m1.len() != m2.len() || w.moduli_bijection.len() != m1.len() {
        return false;
    }
    let mut seen = vec![false; m2.len()];
    for (i, &j) in w.moduli_bijection.iter().enumerate() {
        if j >= m2.len() || seen[j] || m1[i] != m2[j] {
            return false;
        }
        seen[j] = true;
    }

    let b1 = d1
        .torus_block
        .as_ref()
        .filter(|b| !(b.torus_rank() == 0 && b.dim() == 0));
    let b2 = d2
        .torus_block
        .as_ref()
        .filter(|b| !(b.torus_rank() == 0 && b.dim() == 0));
    match (b1, b2) {
        (None, None) => {
            w.row_transform.rows() == 0
                && w.column_permutation.is_empty()
                && w.sign_vector.is_empty()
        }
        (Some(a1), Some(a2)) => {
            if a1.torus_rank() != a2.torus_rank()
                || a1.dim() != a2.dim()
                || w.row_transform.rows() != a1.torus_rank()
                || w.row_transform.cols() != a1.torus_rank()
                || w.column_permutation.len() != a1.dim()
                || w.sign_vector.len() != a1.dim()
            {
                return false;
            }
            let mut perm_seen = vec![false; a1.dim()];
            for &p in &w.column_permutation {
                if p >= a1.dim() || perm_seen[p] {
                    return false;
                }
                perm_seen[p] = true;
            }
            if !w.row_transform.is_unimodular() {
                return false;
            }
            let image = w
                .row_transform
                .mul(a1.matrix())
                .apply_column_permutation(&w.column_permutation)
                .scale_columns(w.sign_vector.signs());
            &image == a2.matrix()
        }
        _ => false,
    }
}
