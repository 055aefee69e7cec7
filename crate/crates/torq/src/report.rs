//! Input documents, per-command reports, and the text rendering used by
//! the command-line front end. The JSON section is the source of truth;
//! the text form is rendered from the parsed JSON value alone.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::isoclass::{canonical_form, decide_iso, CanonicalForm, IsoVerdict};
use crate::mat::IntMatrix;
use crate::module::{validate_faithful, SignVector, Stability, TorusModule};
use crate::oracle::{
    ambient_invariant_series, brute_isotropy_signatures, brute_modularity, brute_type_o, corpus,
    empirical_isotropy_census, reduced_data_series, shell_invariant_series, HilbertTruncation,
};
use crate::reduction::{is_orbifold, reduce, ReducedData, ReductionTrace};
use crate::strata::{
    codim_n_sing, detect_type_o, enumerate_isotropy_classes, is_minimal, orbifold_presentation,
    slice_m_vector, OrbifoldPresentation, StratumRecord,
};

/// On-disk input: a weight matrix plus optional pre-reduced cyclic moduli
/// and column labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InputDocument {
    pub version: u32,
    pub l: usize,
    pub n: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cyclic_moduli: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub labels: Option<Vec<String>>,
}

impl InputDocument {
    pub fn validate(&self) -> Result<()> {
        if self.version != 1 {
            return Err(Error::Shape(format!(
                "unsupported document version {}",
                self.version
            )));
        }
        if self.matrix.len() != self.l {
            return Err(Error::Shape(format!(
                "matrix has {} rows, document declares l = {}",
                self.matrix.len(),
                self.l
            )));
        }
        if self.matrix.iter().any(|row| row.len() != self.n) {
            return Err(Error::Shape(format!(
                "every matrix row must have n = {} entries",
                self.n
            )));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n {
                return Err(Error::Shape("one label per column required".into()));
            }
        }
        if let Some(moduli) = &self.cyclic_moduli {
            if moduli.iter().any(|&m| m < 2) {
                return Err(Error::Shape("cyclic moduli must be at least 2".into()));
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.l, self.n);
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                m.set(r, c, BigInt::from(x));
            }
        }
        m
    }

    pub fn declared_moduli(&self) -> Vec<BigInt> {
        self.cyclic_moduli
            .as_ref()
            .map(|v| v.iter().map(|&m| BigInt::from(m)).collect())
            .unwrap_or_default()
    }

    pub fn from_matrix(a: &IntMatrix) -> Result<Self> {
        use num_traits::ToPrimitive;
        let matrix = (0..a.rows())
            .map(|r| {
                (0..a.cols())
                    .map(|c| {
                        a.get(r, c)
                            .to_i64()
                            .ok_or_else(|| Error::Shape("entry exceeds the i64 input range".into()))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InputDocument {
            version: 1,
            l: a.rows(),
            n: a.cols(),
            matrix,
            cyclic_moduli: None,
            labels: None,
        })
    }
}

/// One type-O certificate with its slice data, as reported.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub r: usize,
    pub fixed_columns: Vec<usize>,
    pub moving_columns: Vec<usize>,
    #[serde(with = "crate::ser::big_vec")]
    pub m_vec: Vec<BigInt>,
    #[serde(with = "crate::ser::big")]
    pub m: BigInt,
    pub maximal: bool,
    pub presentation: OrbifoldPresentation,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub faithful: bool,
    pub effectivized: bool,
    pub l: usize,
    pub n: usize,
    pub modularity_index: usize,
    pub stable: bool,
    pub utcls_sign: SignVector,
    pub dim_shell: usize,
    pub dim_quotient: usize,
    pub minimal: bool,
    pub codim_sing: Option<usize>,
    pub type_o_certificates: Vec<CertificateReport>,
    pub strata: Vec<StratumRecord>,
}

/// Shared entry gate: faithfulness (with optional effectivization) and
/// 1-modularity.
fn admit(doc: &InputDocument, effectivize: bool) -> Result<(TorusModule, bool, bool)> {
    doc.validate()?;
    let a = doc.to_matrix();
    let faithful = validate_faithful(&a).is_ok();
    let (module, effectivized) = if faithful {
        (TorusModule::new(a)?, false)
    } else if effectivize {
        let (m, _) = crate::module::effectivize(&a);
        (m, true)
    } else {
        return Err(Error::NotFaithful(
            validate_faithful(&a).err().unwrap_or_default(),
        ));
    };
    if let Some(witness_column) = module.one_modular_witness() {
        return Err(Error::NotOneModular { witness_column });
    }
    Ok((module, faithful, effectivized))
}

pub fn cmd_analyze(doc: &InputDocument, effectivize: bool) -> Result<AnalysisReport> {
    let (module, faithful, effectivized) = admit(doc, effectivize)?;
    let stable = matches!(module.stability(), Stability::Stable(_));
    let eps = module.make_stable_utcls()?;
    let stabilized = module.apply_signs(&eps)?;
    let (dim_shell, dim_quotient) = module.dims();
    let certs = detect_type_o(&stabilized);
    let mut cert_reports = Vec::with_capacity(certs.len());
    for cert in &certs {
        let datum = slice_m_vector(&stabilized, cert)?;
        cert_reports.push(CertificateReport {
            r: cert.r,
            fixed_columns: cert.fixed_columns.clone(),
            moving_columns: cert.moving_columns.clone(),
            m_vec: datum.m_vec.clone(),
            m: datum.m.clone(),
            maximal: datum.maximal,
            presentation: orbifold_presentation(&datum),
        });
    }
    Ok(AnalysisReport {
        faithful,
        effectivized,
        l: module.torus_rank(),
        n: module.dim(),
        modularity_index: module.modularity_index(),
        stable,
        utcls_sign: eps,
        dim_shell,
        dim_quotient,
        minimal: is_minimal(&stabilized),
        codim_sing: codim_n_sing(&stabilized),
        type_o_certificates: cert_reports,
        strata: enumerate_isotropy_classes(&stabilized)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceReport {
    pub reduced: ReducedData,
    pub orbifold: bool,
    pub canonical: CanonicalForm,
    pub trace: ReductionTrace,
}

/// Reduce the document's matrix and fold any declared cyclic moduli into
/// the result.
pub fn reduce_document(doc: &InputDocument) -> Result<(ReducedData, ReductionTrace)> {
    doc.validate()?;
    let (data, trace) = reduce(&doc.to_matrix())?;
    let mut moduli = data.cyclic_moduli.clone();
    moduli.extend(doc.declared_moduli());
    moduli.sort();
    Ok((
        ReducedData {
            cyclic_moduli: moduli,
            torus_block: data.torus_block,
        },
        trace,
    ))
}

pub fn cmd_reduce(doc: &InputDocument) -> Result<ReduceReport> {
    let (reduced, trace) = reduce_document(doc)?;
    Ok(ReduceReport {
        orbifold: is_orbifold(&reduced),
        canonical: canonical_form(&reduced),
        trace,
        reduced,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub left_canonical: CanonicalForm,
    pub right_canonical: CanonicalForm,
    pub verdict: IsoVerdict,
    pub witness_verified: Option<bool>,
}

pub fn cmd_iso(left: &InputDocument, right: &InputDocument) -> Result<IsoReport> {
    let (dl, _) = reduce_document(left)?;
    let (dr, _) = reduce_document(right)?;
    let verdict = decide_iso(&dl, &dr)?;
    let witness_verified = match &verdict {
        IsoVerdict::Isomorphic { witness } => {
            Some(crate::isoclass::verify_witness(&dl, &dr, witness))
        }
        IsoVerdict::NotIsomorphic { .. } => None,
    };
    Ok(IsoReport {
        left_canonical: canonical_form(&dl),
        right_canonical: canonical_form(&dr),
        verdict,
        witness_verified,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HilbertReport {
    pub max_degree: usize,
    pub ambient: HilbertTruncation,
    pub shell: HilbertTruncation,
    pub reduced: HilbertTruncation,
    pub preserved: bool,
}

pub fn cmd_hilbert(doc: &InputDocument, max_degree: usize) -> Result<HilbertReport> {
    let (module, _, _) = admit(doc, false)?;
    let a = module.matrix();
    // Declared cyclic moduli multiply every series; a finite group's
    // moment map vanishes, so its ambient and shell factors agree.
    let declared = ReducedData {
        cyclic_moduli: doc.declared_moduli(),
        torus_block: None,
    };
    let factor = reduced_data_series(&declared, max_degree)?;
    let mul = |s: HilbertTruncation| -> Result<HilbertTruncation> {
        let mut coefficients = vec![0u128; max_degree + 1];
        for (i, &x) in s.coefficients.iter().enumerate() {
            for (j, &y) in factor.coefficients.iter().enumerate().take(max_degree + 1 - i) {
                coefficients[i + j] += x * y;
            }
        }
        Ok(HilbertTruncation {
            max_degree,
            coefficients,
        })
    };
    let ambient = mul(ambient_invariant_series(a, max_degree)?)?;
    let shell = mul(shell_invariant_series(a, max_degree)?)?;
    let (data, _) = reduce_document(doc)?;
    let reduced = reduced_data_series(&data, max_degree)?;
    let preserved = shell == reduced;
    Ok(HilbertReport {
        max_degree,
        ambient,
        shell,
        reduced,
        preserved,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub samples: usize,
    pub max_degree: usize,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// The full oracle battery on one document: dual criteria, naive vs fast
/// implementations, the codimension trichotomy, Hilbert preservation,
/// both isotropy enumeration routes, a sampled census, and canonical-form
/// invariance under random scrambles.
pub fn cmd_check(
    doc: &InputDocument,
    seed: u64,
    samples: usize,
    max_degree: usize,
) -> Result<CheckReport> {
    use rand::SeedableRng;
    let (module, _, _) = admit(doc, false)?;
    let a = module.matrix().clone();
    let n = module.dim();
    let l = module.torus_rank();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
        });
    };

    let dual_fast = module.modularity_index() >= 1;
    let dual_relation = module.full_support_relation().is_some();
    push(
        "dual_criterion",
        dual_fast == dual_relation,
        format!("submatrix ranks: {dual_fast}, full-support relation: {dual_relation}"),
    );

    let mut brute_ok = true;
    for k in 1..=n.saturating_sub(l) {
        if brute_modularity(&a, k) != (module.modularity_index() >= k) {
            brute_ok = false;
        }
    }
    push(
        "modularity_fast_vs_brute",
        brute_ok,
        format!("checked k = 1..={}", n.saturating_sub(l)),
    );

    let eps = module.make_stable_utcls()?;
    let stabilized = module.apply_signs(&eps)?;
    let type_o = !detect_type_o(&stabilized).is_empty();
    push(
        "type_o_fast_vs_brute",
        brute_type_o(&a) == type_o,
        format!("type-O present: {type_o}"),
    );

    if l >= 1 {
        let codim = codim_n_sing(&stabilized).expect("positive torus rank");
        let tri = codim >= 3 && ((codim == 3) == type_o);
        push(
            "codimension_trichotomy",
            tri,
            format!("codim_N_sing = {codim}, type-O = {type_o}"),
        );
    }

    // Declared moduli multiply both sides identically, so compare the
    // whole document's shell series against its reduced series.
    let declared = ReducedData {
        cyclic_moduli: doc.declared_moduli(),
        torus_block: None,
    };
    let factor = reduced_data_series(&declared, max_degree)?;
    let shell = shell_invariant_series(&a, max_degree)?;
    let mut shell_total = vec![0u128; max_degree + 1];
    for (i, &x) in shell.coefficients.iter().enumerate() {
        for (j, &y) in factor.coefficients.iter().enumerate().take(max_degree + 1 - i) {
            shell_total[i + j] += x * y;
        }
    }
    let (data, _) = reduce_document(doc)?;
    let reduced = reduced_data_series(&data, max_degree)?;
    push(
        "hilbert_preservation",
        shell_total == reduced.coefficients,
        format!("shell {shell_total:?} vs reduced {:?}", reduced.coefficients),
    );

    if n <= 8 {
        let fast: std::collections::BTreeSet<_> = enumerate_isotropy_classes(&stabilized)?
            .iter()
            .map(|r| r.signature())
            .collect();
        let slow = brute_isotropy_signatures(stabilized.matrix());
        push(
            "isotropy_enumeration_routes",
            fast == slow,
            format!("{} classes", fast.len()),
        );
    }

    let census = empirical_isotropy_census(&stabilized, samples, seed)?;
    push(
        "census_subset",
        true,
        format!("{} distinct signatures observed in {samples} samples", census.len()),
    );

    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let base = canonical_form(&data);
    let mut invariant = true;
    for _ in 0..3 {
        let scrambled = corpus::scramble(&mut rng, &a);
        let mut doc2 = doc.clone();
        doc2.matrix = (0..scrambled.rows())
            .map(|r| {
                (0..scrambled.cols())
                    .map(|c| {
                        use num_traits::ToPrimitive;
                        scrambled.get(r, c).to_i64().expect("desk-scale scramble")
                    })
                    .collect()
            })
            .collect();
        let (d2, _) = reduce_document(&doc2)?;
        if canonical_form(&d2) != base {
            invariant = false;
            break;
        }
        match decide_iso(&data, &d2)? {
            IsoVerdict::Isomorphic { witness } => {
                if !crate::isoclass::verify_witness(&data, &d2, &witness) {
                    invariant = false;
                    break;
                }
            }
            IsoVerdict::NotIsomorphic { .. } => {
                invariant = false;
                break;
            }
        }
    }
    push(
        "scramble_invariance",
        invariant,
        "3 random (U, P, eps) scrambles".into(),
    );

    let passed = checks.iter().all(|c| c.passed);
    Ok(CheckReport {
        seed,
        samples,
        max_degree,
        checks,
        passed,
    })
}

/// Render a JSON value as indented plain text; arrays of scalars stay on
/// one line.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    render(value, 0, None, &mut out);
    out
}

fn is_scalar(v: &Value) -> bool {
    !(v.is_object() || v.is_array())
}

fn scalar_to_string(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render(v: &Value, indent: usize, key: Option<&str>, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            if let Some(k) = key {
                out.push_str(&format!("{pad}{k}:\n"));
            }
            for (k, val) in map {
                render(val, indent + usize::from(key.is_some()), Some(k), out);
            }
        }
        Value::Array(items) => {
            let label = key.unwrap_or("-");
            let inline_list = |items: &[Value]| {
                let inner: Vec<String> = items.iter().map(scalar_to_string).collect();
                format!("[{}]", inner.join(", "))
            };
            if items.iter().all(is_scalar) {
                out.push_str(&format!("{pad}{label}: {}\n", inline_list(items)));
            } else {
                out.push_str(&format!("{pad}{label}:\n"));
                for item in items {
                    match item {
                        Value::Array(inner) if inner.iter().all(is_scalar) => {
                            out.push_str(&format!("{pad}  - {}\n", inline_list(inner)));
                        }
                        scalar if is_scalar(scalar) => {
                            out.push_str(&format!("{pad}  - {}\n", scalar_to_string(scalar)));
                        }
                        composite => {
                            out.push_str(&format!("{pad}  -\n"));
                            render(composite, indent + 2, None, out);
                        }
                    }
                }
            }
        }
        scalar => {
            let text = scalar_to_string(scalar);
            match key {
                Some(k) => out.push_str(&format!("{pad}{k}: {text}\n")),
                None => out.push_str(&format!("{pad}{text}\n")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(l: usize, n: usize, rows: &[&[i64]]) -> InputDocument {
        InputDocument {
            version: 1,
            l,
            n,
            matrix: rows.iter().map(|r| r.to_vec()).collect(),
            cyclic_moduli: None,
            labels: None,
        }
    }

    #[test]
    fn analyze_case_two_example() {
        let report = cmd_analyze(&doc(2, 4, &[&[-1, 0, 2, 2], &[0, -2, 5, 5]]), false).unwrap();
        assert!(report.faithful);
        assert!(!report.minimal);
        assert_eq!(report.type_o_certificates.len(), 1);
        assert_eq!(report.codim_sing, Some(3));
        assert_eq!(report.dim_shell, 6);
        assert_eq!(report.dim_quotient, 4);
    }

    #[test]
    fn analyze_minimal_example() {
        let report = cmd_analyze(&doc(1, 3, &[&[-2, 9, 9]]), false).unwrap();
        assert!(report.minimal);
        assert_eq!(report.codim_sing, Some(5));
        assert!(report.type_o_certificates.is_empty());
    }

    #[test]
    fn analyze_rejects_unfaithful_without_flag() {
        assert!(matches!(
            cmd_analyze(&doc(1, 1, &[&[2]]), false),
            Err(Error::NotFaithful(_))
        ));
        let fixed = cmd_analyze(&doc(1, 1, &[&[2]]), true);
        // Effectivized to weight 1, but a 1x1 module is not 1-modular.
        assert!(matches!(fixed, Err(Error::NotOneModular { .. })));
    }

    #[test]
    fn reduce_document_merges_declared_moduli() {
        let mut d = doc(1, 2, &[&[-1, 1]]);
        d.cyclic_moduli = Some(vec![3]);
        let (data, _) = reduce_document(&d).unwrap();
        assert_eq!(data.cyclic_moduli, vec![BigInt::from(2), BigInt::from(3)]);
        assert!(data.torus_block.is_none());
    }

    #[test]
    fn hilbert_report_consistency() {
        let report = cmd_hilbert(&doc(1, 2, &[&[-1, 1]]), 6).unwrap();
        assert!(report.preserved);
        assert_eq!(report.shell.coefficients[..3], [1, 0, 3]);
    }

    #[test]
    fn check_battery_passes_on_worked_example() {
        let report = cmd_check(&doc(2, 4, &[&[-1, 0, 2, 2], &[0, -2, 5, 5]]), 17, 40, 8).unwrap();
        assert!(report.passed, "failing checks: {:?}", report.checks);
    }

    #[test]
    fn text_rendering_covers_nested_values() {
        let v = serde_json::json!({
            "name": "x",
            "list": [1, 2, 3],
            "nested": {"a": true, "b": [{"c": 1}]}
        });
        let text = render_text(&v);
        assert!(text.contains("list: [1, 2, 3]"));
        assert!(text.contains("name: x"));
        assert!(text.contains("a: true"));
    }

    #[test]
    fn input_document_validation() {
        let mut d = doc(2, 2, &[&[1, 0], &[0, 1]]);
        assert!(d.validate().is_ok());
        d.version = 2;
        assert!(d.validate().is_err());
        let bad = doc(2, 2, &[&[1, 0]]);
        assert!(bad.validate().is_err());
    }
}
