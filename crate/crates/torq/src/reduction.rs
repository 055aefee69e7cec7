//! The reduction recipe: repeatedly quotient out a maximal type-O slice,
//! either emitting a finite cyclic factor (Case 1) or shrinking the torus
//! through a scalar one-parameter subgroup (Case 2), until the module is
//! minimal.
//!
//! Writing `W` for the span of the moving columns and `H` for the joint
//! kernel of the fixed ones, the image of the torus in `GL(W)` either
//! equals the image of `H^0` (Case 1, the moving columns have rank `r`) or
//! the full diagonal torus (Case 2, rank `r + 1`). Case 1 splits off the
//! cyclic group of order `m` and restricts the fixed block to the kernel
//! torus of the moving action. Case 2 replaces the moving block by a
//! single coordinate carrying the common weight of a scalar subgroup `R`,
//! and the torus by the saturation of `R` together with that kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{dot, kernel_lattice, lattice_sum, Lattice};
use crate::mat::IntMatrix;
use crate::module::{SignVector, TorusModule};
use crate::strata::{detect_type_o, is_minimal, slice_m_vector, SliceDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    CaseOne,
    CaseTwo,
}

/// One application of the recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub case: ReductionCase,
    pub slice: SliceDatum,
    /// Case 2 only: cocharacter of the scalar subgroup `R`, reduced
    /// against the kernel lattice.
    #[serde(with = "crate::ser::big_opt_vec", default)]
    pub lambda_r: Option<Vec<BigInt>>,
    /// Case 2 only: the common weight of `R` on every moving column.
    #[serde(with = "crate::ser::big_opt", default)]
    pub common_value: Option<BigInt>,
    /// Cocharacters of the identity component of the kernel of the
    /// moving-block action.
    pub k0_lattice: Lattice,
    /// Case 1 only: the order of the cyclic factor split off.
    #[serde(with = "crate::ser::big_opt", default)]
    pub emitted_modulus: Option<BigInt>,
    pub successor: TorusModule,
}

/// Terminal data of a reduction: cyclic orbifold moduli plus at most one
/// minimal torus block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedData {
    #[serde(with = "crate::ser::big_vec")]
    pub cyclic_moduli: Vec<BigInt>,
    pub torus_block: Option<TorusModule>,
}

/// Full audit record: the input module, the stabilizing sign vector, each
/// step, and the result. Replaying the steps from the initial module
/// reproduces the result; `reduce` is deterministic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub initial: TorusModule,
    pub utcls_sign: SignVector,
    pub steps: Vec<ReductionStep>,
    pub result: ReducedData,
}

/// Pairing of lattice basis vectors against selected matrix columns:
/// entry `(k, j)` is `<basis_k, column_j>`.
fn restrict_columns(lattice: &Lattice, a: &IntMatrix, cols: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zero(lattice.rank(), cols.len());
    for (k, b) in lattice.basis().iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(k, j, dot(b, &a.col_vec(c)));
        }
    }
    out
}

fn check_successor(module: &TorusModule, predecessor_rank: usize) -> Result<()> {
    if module.torus_rank() >= predecessor_rank {
        return Err(Error::InvariantViolation(
            "reduction step failed to shrink the torus".into(),
        ));
    }
    if !module.is_stable() {
        return Err(Error::InvariantViolation(
            "reduction successor is not stable".into(),
        ));
    }
    if !module.is_one_modular() {
        return Err(Error::InvariantViolation(
            "reduction successor is not 1-modular".into(),
        ));
    }
    Ok(())
}

/// Apply one step of the recipe to a stable module with a type-O slice.
/// The slice is chosen deterministically: the maximal certificate with
/// the smallest `r` and lexicographically smallest fixed set.
pub fn reduce_step(module: &TorusModule) -> Result<ReductionStep> {
    let a = module.matrix();
    let l = module.torus_rank();

    let certs = detect_type_o(module);
    if certs.is_empty() {
        return Err(Error::MalformedCertificate(
            "reduce_step called on a minimal module".into(),
        ));
    }
    let mut datum: Option<SliceDatum> = None;
    for cert in &certs {
        let d = slice_m_vector(module, cert)?;
        if d.maximal {
            datum = Some(d);
            break;
        }
    }
    let datum = datum.ok_or_else(|| {
        Error::InvariantViolation("no maximal certificate among a nonempty set".into())
    })?;
    let cert = &datum.certificate;
    let moving = &cert.moving_columns;
    let fixed = &cert.fixed_columns;

    let moving_sub = a.submatrix_columns(moving);
    let moving_rank = moving_sub.rank();
    let k0 = kernel_lattice(&moving_sub.transpose());

    if moving_rank == cert.r {
        // Case 1: the torus is the direct product of the slice torus and
        // the kernel of the moving action; the moving block contributes a
        // cyclic factor of order m.
        if !moving_sub.invariant_factors().iter().all(|f| f == &BigInt::from(1)) {
            return Err(Error::InvariantViolation(
                "kernel of the moving action is disconnected in Case 1".into(),
            ));
        }
        let successor_matrix = restrict_columns(&k0, a, fixed);
        let successor = TorusModule::new(successor_matrix).map_err(|e| {
            Error::InvariantViolation(format!("Case 1 successor not faithful: {e}"))
        })?;
        check_successor(&successor, l)?;
        Ok(ReductionStep {
            case: ReductionCase::CaseOne,
            emitted_modulus: Some(datum.m.clone()),
            lambda_r: None,
            common_value: None,
            k0_lattice: k0,
            successor,
            slice: datum,
        })
    } else if moving_rank == cert.r + 1 {
        // Case 2: pick a cocharacter acting on every moving column by the
        // same nonzero weight and keep the subtorus it generates together
        // with the kernel of the moving action.
        let pivot_col = moving[0];
        let mut diff_rows = Vec::new();
        for &c in &moving[1..] {
            let col0 = a.col_vec(pivot_col);
            let colc = a.col_vec(c);
            diff_rows.push(
                colc.iter()
                    .zip(&col0)
                    .map(|(x, y)| x - y)
                    .collect::<Vec<_>>(),
            );
        }
        let diff = IntMatrix::from_rows(diff_rows)?;
        let equal_value = kernel_lattice(&diff);
        let pivot_vec = a.col_vec(pivot_col);

        // The common-value map is linear on the equal-value lattice with
        // image d*Z; combine a basis by extended gcd to attain d.
        let mut g = BigInt::zero();
        let mut acc = vec![BigInt::zero(); l];
        for basis_vec in equal_value.basis() {
            let v = dot(basis_vec, &pivot_vec);
            let e = g.extended_gcd(&v);
            for (ai, bi) in acc.iter_mut().zip(basis_vec) {
                *ai = &*ai * &e.x + bi * &e.y;
            }
            g = e.gcd;
        }
        if g.is_zero() {
            return Err(Error::InvariantViolation(
                "equal-value lattice pairs to zero with the moving block".into(),
            ));
        }

        // Deterministic representative: reduce against the kernel
        // lattice, then fix the sign by the first nonzero entry.
        let plus = k0.reduce_mod(&acc);
        let minus = k0.reduce_mod(&acc.iter().map(|x| -x).collect::<Vec<_>>());
        let first_nonzero_positive =
            |v: &[BigInt]| v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive());
        let lambda_r = if first_nonzero_positive(&plus) {
            plus
        } else if first_nonzero_positive(&minus) {
            minus
        } else {
            plus.min(minus)
        };
        let common_value = dot(&lambda_r, &pivot_vec);

        let successor_lattice = lattice_sum(&Lattice::from_rows(l, vec![lambda_r.clone()]), &k0);
        if successor_lattice.rank() != k0.rank() + 1 {
            return Err(Error::InvariantViolation(
                "scalar subgroup already lies in the moving-block kernel".into(),
            ));
        }

        // One column for the scalar coordinate, then the fixed block; all
        // moving columns must restrict identically.
        let mut cols = vec![pivot_col];
        cols.extend_from_slice(fixed);
        let successor_matrix = restrict_columns(&successor_lattice, a, &cols);
        for &c in &moving[1..] {
            let col = restrict_columns(&successor_lattice, a, &[c]);
            for k in 0..successor_lattice.rank() {
                if col.get(k, 0) != successor_matrix.get(k, 0) {
                    return Err(Error::InvariantViolation(
                        "moving columns restrict unequally to the successor torus".into(),
                    ));
                }
            }
        }

        // The full preimage of the scalar group can be disconnected: the
        // kernel of the moving action may have components outside the
        // equal-weight subtorus. The quotient by the successor torus
        // agrees with the true quotient exactly when every relation of
        // the successor matrix maps into the integer span of the
        // moving-column differences; otherwise some invariant of the
        // torus quotient is not invariant under the extra components and
        // the quotients differ.
        let diff_span = Lattice::from_rows(
            l,
            moving[1..]
                .iter()
                .map(|&c| {
                    a.col_vec(c)
                        .iter()
                        .zip(&pivot_vec)
                        .map(|(x, y)| x - y)
                        .collect()
                })
                .collect(),
        );
        for relation in kernel_lattice(&successor_matrix).basis() {
            let image: Vec<BigInt> = (0..l)
                .map(|row| {
                    relation
                        .iter()
                        .zip(&cols)
                        .map(|(d, &c)| d * a.get(row, c))
                        .sum()
                })
                .collect();
            if !diff_span.contains(&image) {
                return Err(Error::DisconnectedReduction(
                    "the kernel of the moving-block action has components beyond the \
                     equal-weight subtorus, and they act nontrivially on the reduced quotient"
                        .into(),
                ));
            }
        }
        let successor = TorusModule::new(successor_matrix).map_err(|e| {
            Error::InvariantViolation(format!("Case 2 successor not faithful: {e}"))
        })?;
        check_successor(&successor, l)?;
        Ok(ReductionStep {
            case: ReductionCase::CaseTwo,
            emitted_modulus: None,
            lambda_r: Some(lambda_r),
            common_value: Some(common_value),
            k0_lattice: k0,
            successor,
            slice: datum,
        })
    } else {
        Err(Error::InvariantViolation(format!(
            "moving block of a valid certificate has rank {moving_rank}, expected {} or {}",
            cert.r,
            cert.r + 1
        )))
    }
}

/// Run the full recipe on a weight matrix: stabilize by a change of
/// Lagrangian subspace, then step until minimal. Errors on unfaithful or
/// non-1-modular input.
pub fn reduce(a: &IntMatrix) -> Result<(ReducedData, ReductionTrace)> {
    let initial = TorusModule::new(a.clone())?;
    if let Some(witness_column) = initial.one_modular_witness() {
        return Err(Error::NotOneModular { witness_column });
    }
    let eps = initial.make_stable_utcls()?;
    let mut current = initial.apply_signs(&eps)?;

    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut moduli: Vec<BigInt> = Vec::new();
    while !is_minimal(&current) {
        if steps.len() > initial.torus_rank() {
            return Err(Error::InvariantViolation(
                "reduction exceeded the torus-rank step bound".into(),
            ));
        }
        let step = reduce_step(&current)?;
        if let Some(m) = &step.emitted_modulus {
            if m < &BigInt::from(2) {
                return Err(Error::InvariantViolation(
                    "emitted cyclic modulus below 2".into(),
                ));
            }
            moduli.push(m.clone());
        }
        current = step.successor.clone();
        steps.push(step);
    }
    moduli.sort();

    // A block that is literally empty carries no data; a rank-0 block
    // with coordinates still encodes free linear factors of the quotient
    // and is kept.
    let torus_block = if current.torus_rank() == 0 && current.dim() == 0 {
        None
    } else {
        Some(current)
    };
    if let Some(block) = &torus_block {
        if !is_minimal(block) || !block.is_stable() || !block.is_one_modular() {
            return Err(Error::InvariantViolation(
                "reduced torus block fails its own invariants".into(),
            ));
        }
    }
    let result = ReducedData {
        cyclic_moduli: moduli,
        torus_block,
    };
    let trace = ReductionTrace {
        initial,
        utcls_sign: eps,
        steps,
        result: result.clone(),
    };
    Ok((result, trace))
}

/// The quotient is an orbifold exactly when the reduced group is finite,
/// i.e. no positive-rank torus block remains.
pub fn is_orbifold(d: &ReducedData) -> bool {
    d.torus_block.as_ref().is_none_or(|b| b.torus_rank() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn golden_product_of_two_cyclic_factors() {
        let (data, trace) = reduce(&mat(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]])).unwrap();
        assert_eq!(data.cyclic_moduli, vec![BigInt::from(2), BigInt::from(2)]);
        assert!(data.torus_block.is_none());
        assert_eq!(trace.steps.len(), 2);
        assert!(trace.steps.iter().all(|s| s.case == ReductionCase::CaseOne));
        // First step peels one hyperbolic block; the survivor is the
        // other one, expressed on the kernel torus.
        assert_eq!(
            trace.steps[0].successor.matrix(),
            &mat(&[&[-1, 1]])
        );
        assert!(trace.utcls_sign.is_identity());
    }

    #[test]
    fn golden_case_two_example() {
        let (data, trace) = reduce(&mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]])).unwrap();
        assert!(data.cyclic_moduli.is_empty());
        let block = data.torus_block.as_ref().unwrap();
        assert_eq!(block.matrix(), &mat(&[&[-2, 9, 9]]));
        assert_eq!(trace.steps.len(), 1);
        let step = &trace.steps[0];
        assert_eq!(step.case, ReductionCase::CaseTwo);
        assert_eq!(step.slice.m_vec, vec![BigInt::from(4), BigInt::from(5)]);
        assert_eq!(step.slice.m, BigInt::from(9));
        assert_eq!(
            step.lambda_r.as_ref().unwrap(),
            &vec![BigInt::from(2), BigInt::from(1)]
        );
        assert_eq!(step.common_value.as_ref().unwrap(), &BigInt::from(-2));
    }

    #[test]
    fn golden_disconnected_isotropy_example() {
        let (data, trace) = reduce(&mat(&[&[3, 0, -4, 6], &[1, -3, 0, 0]])).unwrap();
        assert!(data.cyclic_moduli.is_empty());
        let block = data.torus_block.as_ref().unwrap();
        assert_eq!(block.matrix(), &mat(&[&[9, -16, 24]]));
        let step = &trace.steps[0];
        assert_eq!(step.case, ReductionCase::CaseTwo);
        assert_eq!(step.slice.m_vec, vec![BigInt::from(3), BigInt::from(1)]);
        assert_eq!(step.slice.m, BigInt::from(4));
        assert_eq!(
            step.lambda_r.as_ref().unwrap(),
            &vec![BigInt::from(4), BigInt::from(-3)]
        );
        assert_eq!(step.common_value.as_ref().unwrap(), &BigInt::from(9));
    }

    #[test]
    fn identity_reduction_on_minimal_input() {
        let (data, trace) = reduce(&mat(&[&[-2, 9, 9]])).unwrap();
        assert!(data.cyclic_moduli.is_empty());
        assert_eq!(
            data.torus_block.as_ref().unwrap().matrix(),
            &mat(&[&[-2, 9, 9]])
        );
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn zero_column_keeps_free_factor() {
        // A trivial summand survives as a rank-0 block with one
        // coordinate; the hyperbolic pair still emits its modulus.
        let (data, _) = reduce(&mat(&[&[0, 1, -1]])).unwrap();
        assert_eq!(data.cyclic_moduli, vec![BigInt::from(2)]);
        let block = data.torus_block.as_ref().unwrap();
        assert_eq!(block.torus_rank(), 0);
        assert_eq!(block.dim(), 1);
        assert!(is_orbifold(&data));
    }

    #[test]
    fn orbifold_examples() {
        let (d1, _) = reduce(&mat(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]])).unwrap();
        assert!(is_orbifold(&d1));
        let (d2, _) = reduce(&mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]])).unwrap();
        assert!(!is_orbifold(&d2));
        assert!(is_orbifold(&ReducedData {
            cyclic_moduli: vec![],
            torus_block: None
        }));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            reduce(&mat(&[&[2]])),
            Err(Error::NotFaithful(_))
        ));
        assert!(matches!(
            reduce(&mat(&[&[1, 0], &[0, 1]])),
            Err(Error::NotOneModular { .. })
        ));
    }

    #[test]
    fn replay_is_deterministic() {
        let a = mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]);
        let (_, t1) = reduce(&a).unwrap();
        let (_, t2) = reduce(&a).unwrap();
        assert_eq!(t1, t2);
        let (again, _) = reduce(t1.initial.matrix()).unwrap();
        assert_eq!(again, t1.result);
    }

    #[test]
    fn disconnected_successor_is_detected() {
        // The kernel of the moving-block action here has component group
        // Z/4 and only half of it is reachable through the scalar
        // subgroup, so the reduced symmetry group is disconnected: the
        // torus successor would acquire a degree-3 invariant
        // (kernel vector (1,0,-1,1)) although every relation of the
        // input has even coordinate sum. Such quotients admit no
        // cyclic-plus-torus-block presentation at all and are rejected.
        let a = mat(&[
            &[3, -3, 1, -3, -1],
            &[4, -1, -2, 1, -2],
            &[-2, -1, 3, -3, 1],
        ]);
        assert!(matches!(
            reduce(&a),
            Err(Error::DisconnectedReduction(_))
        ));
    }

    #[test]
    fn unstable_inputs_are_stabilized_first() {
        // Same quotient as [-1, 1] after flipping the second column.
        let (data, trace) = reduce(&mat(&[&[-1, -1]])).unwrap();
        assert!(!trace.utcls_sign.is_identity());
        assert_eq!(data.cyclic_moduli, vec![BigInt::from(2)]);
        assert!(data.torus_block.is_none());
    }
}
