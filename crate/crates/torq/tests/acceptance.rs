//! Acceptance suite: golden values from the worked examples plus the
//! property batteries over a seeded random corpus. Each criterion prints
//! one pass/fail line (visible with `--nocapture`) and asserts both its
//! content and its runtime budget.
//!
//! Corpus: 1000 faithful 1-modular stable modules with torus rank <= 3,
//! dimension <= 6, entries in [-4, 4], no zero columns, seeded so every
//! run sees the same matrices.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use torq::isoclass::{canonical_form, decide_iso, verify_witness, IsoVerdict};
use torq::mat::IntMatrix;
use torq::module::TorusModule;
use torq::oracle::{
    brute_modularity, brute_type_o, corpus, empirical_isotropy_census, reduced_data_series,
    shell_invariant_series,
};
use torq::reduction::{is_orbifold, reduce, ReductionCase};
use torq::strata::{codim_n_sing, detect_type_o, enumerate_isotropy_classes};

const CORPUS_SEED: u64 = 0xC0FFEE;
const CORPUS_SIZE: usize = 1000;

// Modules whose reduction completes within the cyclic-plus-torus-block
// classification; roughly one percent of raw samples reduce to a
// disconnected symmetry group instead and are rejected by the generator
// (they have no such presentation, and the library reports them as
// unsupported).
fn corpus_modules() -> Vec<TorusModule> {
    let mut rng = ChaCha20Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| corpus::random_reducible_module(&mut rng, 3, 6, 4))
        .collect()
}

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows)
}

fn report(criterion: &str, passed: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    println!(
        "{criterion}: {} — {detail} ({elapsed:.2?} of {budget:.2?} budget)",
        if passed && within { "PASS" } else { "FAIL" }
    );
    assert!(passed, "{criterion} failed: {detail}");
    assert!(
        within,
        "{criterion} exceeded its runtime budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_1_golden_reductions() {
    let start = Instant::now();

    let t1 = Instant::now();
    let (d1, _) = reduce(&mat(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]])).unwrap();
    assert!(t1.elapsed() < Duration::from_secs(1));
    assert_eq!(d1.cyclic_moduli, vec![BigInt::from(2), BigInt::from(2)]);
    assert!(d1.torus_block.is_none());

    let t2 = Instant::now();
    let (d2, tr2) = reduce(&mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]])).unwrap();
    assert!(t2.elapsed() < Duration::from_secs(1));
    assert!(d2.cyclic_moduli.is_empty());
    let (target2, _) = reduce(&mat(&[&[-2, 9, 9]])).unwrap();
    assert_eq!(canonical_form(&d2), canonical_form(&target2));
    assert_eq!(tr2.steps.len(), 1);
    assert_eq!(tr2.steps[0].slice.m_vec, vec![BigInt::from(4), BigInt::from(5)]);
    assert_eq!(tr2.steps[0].slice.m, BigInt::from(9));

    let t3 = Instant::now();
    let (d3, tr3) = reduce(&mat(&[&[3, 0, -4, 6], &[1, -3, 0, 0]])).unwrap();
    assert!(t3.elapsed() < Duration::from_secs(1));
    let (target3, _) = reduce(&mat(&[&[9, -16, 24]])).unwrap();
    assert_eq!(canonical_form(&d3), canonical_form(&target3));
    assert_eq!(tr3.steps[0].slice.m_vec, vec![BigInt::from(3), BigInt::from(1)]);
    assert_eq!(tr3.steps[0].slice.m, BigInt::from(4));

    report(
        "criterion 1 (golden reductions)",
        true,
        "three worked examples reproduce their reduced data exactly",
        start.elapsed(),
        Duration::from_secs(3),
    );
}

#[test]
fn criterion_2_type_o_goldens() {
    let start = Instant::now();

    let m1 = TorusModule::new(mat(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]])).unwrap();
    let c1 = detect_type_o(&m1);
    assert_eq!(c1.len(), 2);
    assert_eq!(c1[0].fixed_columns, vec![0, 1]);
    assert_eq!(c1[1].fixed_columns, vec![2, 3]);
    assert!(c1.iter().all(|c| c.r == 1));

    let m2 = TorusModule::new(mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]])).unwrap();
    let c2 = detect_type_o(&m2);
    assert_eq!(c2.len(), 1);
    assert_eq!(c2[0].fixed_columns, vec![2, 3]);
    assert_eq!(c2[0].moving_columns, vec![0, 1]);

    let m3 = TorusModule::new(mat(&[&[3, 0, -4, 6], &[1, -3, 0, 0]])).unwrap();
    let c3 = detect_type_o(&m3);
    assert_eq!(c3.len(), 1);
    assert_eq!(c3[0].fixed_columns, vec![2, 3]);

    let minimal = TorusModule::new(mat(&[&[-2, 9, 9]])).unwrap();
    assert!(detect_type_o(&minimal).is_empty());

    report(
        "criterion 2 (type-O goldens)",
        true,
        "certificates match the worked examples, empty on the minimal block",
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_3_codimension_trichotomy() {
    let start = Instant::now();
    let modules = corpus_modules();
    for m in &modules {
        let codim = codim_n_sing(m).expect("corpus ranks are positive");
        let type_o = !detect_type_o(m).is_empty();
        assert!(codim >= 3, "codim {codim} < 3 on {:?}", m.matrix());
        assert_eq!(
            codim == 3,
            type_o,
            "trichotomy violated on {:?}: codim {codim}, type-O {type_o}",
            m.matrix()
        );
    }
    report(
        "criterion 3 (codimension trichotomy)",
        true,
        &format!("codim >= 3 and (codim = 3 <=> type-O) on {CORPUS_SIZE} modules"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_4_hilbert_preservation() {
    let start = Instant::now();
    const DEGREE: usize = 12;

    // Hand-verified instance: the shell invariants of [-1,1] are the
    // Z/2 orbifold series 1 + 3 q^2 + 5 q^4 + ...
    let hand = shell_invariant_series(&mat(&[&[-1, 1]]), DEGREE).unwrap();
    assert_eq!(hand.coefficients[..3], [1, 0, 3]);
    let (hand_data, _) = reduce(&mat(&[&[-1, 1]])).unwrap();
    assert_eq!(
        hand.coefficients,
        reduced_data_series(&hand_data, DEGREE).unwrap().coefficients
    );

    for rows in [
        vec![vec![-1i64, 1, 0, 0], vec![0, 0, -1, 1]],
        vec![vec![-1, 0, 2, 2], vec![0, -2, 5, 5]],
        vec![vec![3, 0, -4, 6], vec![1, -3, 0, 0]],
    ] {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = IntMatrix::from_i64_rows(&refs);
        let (data, _) = reduce(&a).unwrap();
        assert_eq!(
            shell_invariant_series(&a, DEGREE).unwrap().coefficients,
            reduced_data_series(&data, DEGREE).unwrap().coefficients,
            "series not preserved on {a:?}"
        );
    }

    for m in &corpus_modules() {
        let a = m.matrix();
        let (data, _) = reduce(a).unwrap();
        let before = shell_invariant_series(a, DEGREE).unwrap();
        let after = reduced_data_series(&data, DEGREE).unwrap();
        assert_eq!(
            before.coefficients, after.coefficients,
            "series not preserved on {a:?}"
        );
    }

    report(
        "criterion 4 (Hilbert preservation)",
        true,
        &format!("shell series equals reduced series to degree {DEGREE} on the worked examples and {CORPUS_SIZE} corpus modules"),
        start.elapsed(),
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_5_isomorphism_invariance() {
    let start = Instant::now();
    let modules = corpus_modules();
    let mut rng = ChaCha20Rng::seed_from_u64(CORPUS_SEED ^ 0x5CA1AB1E);
    for m in &modules {
        let a = m.matrix();
        let scrambled = corpus::scramble(&mut rng, a);
        let (base, _) = reduce(a).unwrap();
        let (moved, _) = reduce(&scrambled).unwrap();
        assert_eq!(
            canonical_form(&base),
            canonical_form(&moved),
            "canonical form changed under scramble of {a:?}"
        );
        match decide_iso(&base, &moved).unwrap() {
            IsoVerdict::Isomorphic { witness } => {
                assert!(
                    verify_witness(&base, &moved, &witness),
                    "witness failed verification on {a:?}"
                );
            }
            IsoVerdict::NotIsomorphic { distinguisher } => {
                panic!("scramble of {a:?} declared non-isomorphic: {distinguisher:?}")
            }
        }
    }
    report(
        "criterion 5 (isomorphism invariance)",
        true,
        &format!("{CORPUS_SIZE} scramble trials: equal canonical forms and verified witnesses"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_6_dual_criterion_and_differential_agreement() {
    let start = Instant::now();
    for m in &corpus_modules() {
        let a = m.matrix();
        let index = m.modularity_index();
        assert_eq!(
            index >= 1,
            m.full_support_relation().is_some(),
            "dual criterion disagrees on {a:?}"
        );
        for k in 1..=m.dim() - m.torus_rank() {
            assert_eq!(
                brute_modularity(a, k),
                index >= k,
                "modularity routes disagree on {a:?} at k = {k}"
            );
        }
        assert_eq!(
            brute_type_o(a),
            !detect_type_o(m).is_empty(),
            "type-O routes disagree on {a:?}"
        );
    }
    report(
        "criterion 6 (dual criterion and differential agreement)",
        true,
        &format!("submatrix-rank, relation, and brute-force routes agree on {CORPUS_SIZE} modules"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_7_orbifold_decision() {
    let start = Instant::now();
    for m in &corpus_modules() {
        let (data, _) = reduce(m.matrix()).unwrap();
        assert_eq!(
            is_orbifold(&data),
            data.torus_block.is_none(),
            "orbifold decision disagrees with block presence on {:?}",
            m.matrix()
        );
    }
    let (d1, _) = reduce(&mat(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]])).unwrap();
    assert!(is_orbifold(&d1));
    let (d2, _) = reduce(&mat(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]])).unwrap();
    assert!(!is_orbifold(&d2));
    report(
        "criterion 7 (orbifold decision)",
        true,
        &format!("agrees with torus-block absence on {CORPUS_SIZE} modules and both worked examples"),
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_8_census_soundness() {
    let start = Instant::now();
    const SAMPLES: usize = 200;
    for (i, m) in corpus_modules().iter().enumerate() {
        // The census itself hard-fails if a sampled signature is missing
        // from the enumeration; the subset check is re-asserted here.
        let observed = empirical_isotropy_census(m, SAMPLES, CORPUS_SEED ^ (i as u64))
            .unwrap_or_else(|e| panic!("census failed on {:?}: {e}", m.matrix()));
        let known: BTreeSet<_> = enumerate_isotropy_classes(m)
            .unwrap()
            .iter()
            .map(|r| r.signature())
            .collect();
        assert!(
            observed.is_subset(&known),
            "census escaped the enumeration on {:?}",
            m.matrix()
        );
    }
    report(
        "criterion 8 (census soundness)",
        true,
        &format!("{SAMPLES} samples per module, observed signatures always enumerated"),
        start.elapsed(),
        Duration::from_secs(600),
    );
}

// The reduction emits only the two step kinds the theory allows; spot
// check across the corpus that every trace is well-formed, that reduced
// dimensions never grow, and that reducing a reduced block is the
// identity up to canonical form (a cheap extra guard while the corpus is
// in memory, not an acceptance criterion).
#[test]
fn traces_are_well_formed_on_a_sample() {
    let modules = corpus_modules();
    for m in modules.iter().take(100) {
        let (data, trace) = reduce(m.matrix()).unwrap();
        let mut rank = m.torus_rank();
        for step in &trace.steps {
            assert!(step.successor.torus_rank() < rank);
            rank = step.successor.torus_rank();
            match step.case {
                ReductionCase::CaseOne => {
                    assert!(step.emitted_modulus.as_ref().unwrap() >= &BigInt::from(2));
                    assert!(step.lambda_r.is_none());
                }
                ReductionCase::CaseTwo => {
                    assert!(step.emitted_modulus.is_none());
                    assert!(!step.common_value.as_ref().unwrap().is_zero());
                }
            }
        }
        assert!(data.cyclic_moduli.windows(2).all(|w| w[0] <= w[1]));
        if let Some(block) = &data.torus_block {
            assert!(block.torus_rank() <= m.torus_rank());
            assert!(block.dim() <= m.dim());
            let (again, _) = reduce(block.matrix()).unwrap();
            assert!(again.cyclic_moduli.is_empty());
            assert_eq!(canonical_form(&again), canonical_form(&torq::reduction::ReducedData {
                cyclic_moduli: vec![],
                torus_block: Some(block.clone()),
            }));
        }
    }
}

use num_traits::Zero;
