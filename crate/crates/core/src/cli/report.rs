//! `analyze` and `oracle` reports.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::args::AnalysisArgs;
use super::family::InputDescriptor;
use super::{CliError, CliResult};
use crate::channels::concurrence;
use crate::linalg::psd_from_spectrum;
use crate::minors::{all_principal_minors, principal_minor, IndexSet, MAX_ENUMERATION_DIM};
use crate::moments::{
    default_criteria, default_kmax, pt_moments, tripartite_moments, Criterion, MomentVector,
};
use crate::ptranspose::{negativity_from_spectrum, partial_transpose, SubsystemLabel};
use crate::states::DensityMatrix;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub kmax: usize,
    pub criteria: Vec<Criterion>,
    pub tol: f64,
}

impl AnalyzeOptions {
    pub fn from_args(a: &AnalysisArgs, rho: &DensityMatrix<f64>) -> CliResult<Self> {
        let kmax = a.kmax.unwrap_or_else(|| default_kmax(rho));
        let criteria = if a.criteria.is_empty() {
            default_criteria(kmax)
        } else {
            a.criteria
                .iter()
                .map(|s| s.parse::<Criterion>())
                .collect::<crate::Result<Vec<_>>>()?
        };
        Self::new(kmax, criteria, a.tol.unwrap_or(f64::default_tol()))
    }

    pub fn new(kmax: usize, criteria: Vec<Criterion>, tol: f64) -> CliResult<Self> {
        if kmax == 0 {
            return Err(CliError::Validation("--kmax must be >= 1".into()));
        }
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::Validation(format!(
                "--tol {tol} must be a finite nonnegative number"
            )));
        }
        if let Some(c) = criteria.iter().find(|c| c.moments_needed() > kmax) {
            return Err(CliError::Validation(format!(
                "criterion {} needs kmax >= {}, got {kmax}",
                c.token(),
                c.moments_needed()
            )));
        }
        Ok(Self {
            kmax,
            criteria,
            tol,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentEntry {
    /// `A`, `B`, ... for one transposed factor, `ABC` for the geometric mean.
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictEntry {
    pub moments: String,
    pub criterion: String,
    pub token: String,
    pub margin: f64,
    pub tolerance: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyMinorsReport {
    /// Factor whose partial transpose the minors are taken of.
    pub transposed: String,
    pub values: BTreeMap<String, f64>,
    pub minimum: Option<MinimumMinor>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimumMinor {
    pub index_set: String,
    pub value: f64,
    pub enumerated: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub min_eigenvalue: BTreeMap<String, f64>,
    pub ppt: BTreeMap<String, bool>,
    pub entangled: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiteratureValue {
    pub quantity: String,
    pub condition: String,
    pub computed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: InputDescriptor,
    pub dims: Vec<usize>,
    pub kmax: usize,
    pub tolerance: f64,
    pub moments: Vec<MomentEntry>,
    pub verdicts: Vec<VerdictEntry>,
    pub entangled_by_moments: bool,
    pub negativity: BTreeMap<String, f64>,
    pub key_minors: KeyMinorsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    pub oracle: OracleSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub literature: Vec<LiteratureValue>,
}

fn labels(rho: &DensityMatrix<f64>) -> Vec<SubsystemLabel> {
    (0..rho.num_factors()).map(SubsystemLabel).collect()
}

/// Moment vectors the criteria run on: one per transposed factor, plus the
/// geometric mean for three factors.
pub fn moment_vectors(
    rho: &DensityMatrix<f64>,
    kmax: usize,
) -> CliResult<Vec<(String, MomentVector<f64>)>> {
    let mut out = Vec::new();
    for s in labels(rho) {
        out.push((s.letter().to_string(), pt_moments(rho, s, kmax)?));
    }
    if rho.num_factors() == 3 {
        out.push(("ABC".to_string(), tripartite_moments(rho, kmax)?));
    }
    Ok(out)
}

/// Key minors of `rho^{T_A}`: `[14]`, `[23]` for two qubits; the four
/// anti-diagonal pairs and `[167]` for three.
pub fn key_minor_sets(rho: &DensityMatrix<f64>) -> &'static [&'static str] {
    if rho.is_qubits(2) {
        &["14", "23"]
    } else if rho.is_qubits(3) {
        &["18", "27", "36", "45", "167"]
    } else {
        &[]
    }
}

pub fn key_minors(rho: &DensityMatrix<f64>) -> CliResult<KeyMinorsReport> {
    let pt = partial_transpose(rho, SubsystemLabel::A)?;
    let mut values = BTreeMap::new();
    for label in key_minor_sets(rho) {
        let set = IndexSet::parse(label, pt.dim())?;
        values.insert(label.to_string(), principal_minor(&pt, &set)?);
    }
    let minimum = if pt.dim() <= MAX_ENUMERATION_DIM {
        let report = all_principal_minors(&pt)?;
        Some(MinimumMinor {
            index_set: report.min_index_set.to_string(),
            value: report.min_value,
            enumerated: report.len(),
        })
    } else {
        None
    };
    Ok(KeyMinorsReport {
        transposed: "A".into(),
        values,
        minimum,
    })
}

fn literature(input: &InputDescriptor) -> Vec<LiteratureValue> {
    let family = match input {
        InputDescriptor::Family { family, .. } => family.as_str(),
        InputDescriptor::File { .. } => return Vec::new(),
    };
    let condition = match family {
        "ghz-noise" => "alpha <= 0.571",
        "w-noise" => "beta <= 0.521",
        _ => return Vec::new(),
    };
    vec![LiteratureValue {
        quantity: "genuine multipartite entanglement".into(),
        condition: condition.into(),
        computed: false,
    }]
}

pub fn analyze(
    rho: &DensityMatrix<f64>,
    input: InputDescriptor,
    opts: &AnalyzeOptions,
) -> CliResult<AnalysisReport> {
    let vectors = moment_vectors(rho, opts.kmax)?;
    let mut verdicts = Vec::new();
    for (label, mv) in &vectors {
        for c in &opts.criteria {
            let v = c.evaluate(mv, opts.tol)?;
            verdicts.push(VerdictEntry {
                moments: label.clone(),
                criterion: c.name(),
                token: c.token(),
                margin: v.margin,
                tolerance: v.tolerance,
                violated: v.violated,
            });
        }
    }

    let mut negativity = BTreeMap::new();
    let mut min_eigenvalue = BTreeMap::new();
    let mut ppt = BTreeMap::new();
    for s in labels(rho) {
        let values = partial_transpose(rho, s)?.hermitian_eigenvalues()?;
        let key = s.letter().to_string();
        negativity.insert(key.clone(), negativity_from_spectrum(&values, opts.tol));
        min_eigenvalue.insert(key.clone(), values[0]);
        ppt.insert(key, psd_from_spectrum(&values, opts.tol));
    }

    let concurrence = if rho.is_qubits(2) {
        Some(concurrence(rho)?)
    } else {
        None
    };
    let literature = literature(&input);
    Ok(AnalysisReport {
        dims: rho.dims().to_vec(),
        kmax: opts.kmax,
        tolerance: opts.tol,
        entangled_by_moments: verdicts.iter().any(|v| v.violated),
        moments: vectors
            .into_iter()
            .map(|(label, mv)| MomentEntry {
                label,
                values: mv.values().to_vec(),
            })
            .collect(),
        verdicts,
        negativity,
        key_minors: key_minors(rho)?,
        concurrence,
        oracle: OracleSummary {
            entangled: ppt.values().any(|p| !p),
            min_eigenvalue,
            ppt,
        },
        literature,
        input,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransposeSpectrum {
    pub subsystem: String,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub negativity: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub input: InputDescriptor,
    pub dims: Vec<usize>,
    pub tolerance: f64,
    pub spectrum: Vec<f64>,
    pub partial_transposes: Vec<TransposeSpectrum>,
    pub ppt_all: bool,
}

pub fn oracle(
    rho: &DensityMatrix<f64>,
    input: InputDescriptor,
    tol: f64,
) -> CliResult<OracleReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Validation(format!(
            "--tol {tol} must be a finite nonnegative number"
        )));
    }
    let mut partial_transposes = Vec::new();
    for s in labels(rho) {
        let values = partial_transpose(rho, s)?.hermitian_eigenvalues()?;
        partial_transposes.push(TransposeSpectrum {
            subsystem: s.letter().to_string(),
            min_eigenvalue: values[0],
            negativity: negativity_from_spectrum(&values, tol),
            ppt: psd_from_spectrum(&values, tol),
            eigenvalues: values,
        });
    }
    Ok(OracleReport {
        dims: rho.dims().to_vec(),
        tolerance: tol,
        spectrum: rho.matrix().hermitian_eigenvalues()?,
        ppt_all: partial_transposes.iter().all(|t| t.ppt),
        partial_transposes,
        input,
    })
}

pub fn write_json<S: Serialize>(w: &mut dyn Write, report: &S) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *w, report)
        .map_err(|e| CliError::Validation(format!("cannot write report: {e}")))?;
    w.write_all(b"\n")
        .map_err(|e| CliError::Validation(format!("cannot write report: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::family::FamilySpec;
    use approx::assert_abs_diff_eq;

    fn family(name: &str, params: &[&str]) -> (DensityMatrix<f64>, InputDescriptor) {
        let spec = FamilySpec::parse(
            name,
            &params.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        )
        .unwrap();
        (spec.state().unwrap(), spec.descriptor())
    }

    fn opts(rho: &DensityMatrix<f64>) -> AnalyzeOptions {
        AnalyzeOptions::new(
            default_kmax(rho),
            default_criteria(default_kmax(rho)),
            1e-10,
        )
        .unwrap()
    }

    #[test]
    fn bell_report() {
        let (rho, input) = family("bell", &[]);
        let r = analyze(&rho, input, &opts(&rho)).unwrap();
        let p3 = r
            .verdicts
            .iter()
            .find(|v| v.token == "p3ppt" && v.moments == "A")
            .unwrap();
        assert!(p3.violated);
        assert_abs_diff_eq!(r.negativity["A"], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.key_minors.values["23"], -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(r.concurrence.unwrap(), 1.0, epsilon = 1e-12);
        assert!(r.oracle.entangled);
    }

    #[test]
    fn ghz_separable_point() {
        let (rho, input) = family("ghz-noise", &["alpha=0.9"]);
        let r = analyze(&rho, input, &opts(&rho)).unwrap();
        assert!(r.verdicts.iter().all(|v| !v.violated));
        assert!(r.oracle.ppt.values().all(|&p| p));
        assert_eq!(r.literature.len(), 1);
        assert_eq!(r.key_minors.minimum.as_ref().unwrap().enumerated, 255);
    }

    #[test]
    fn margins_reproducible_from_stored_moments() {
        let (rho, input) = family("w-noise", &["beta=0.7"]);
        let r = analyze(&rho, input, &opts(&rho)).unwrap();
        for v in &r.verdicts {
            let m = r.moments.iter().find(|m| m.label == v.moments).unwrap();
            let mv = MomentVector::new(m.values.clone(), crate::moments::MomentSource::ClosedForm)
                .unwrap();
            let c: Criterion = v.token.parse().unwrap();
            assert_eq!(c.evaluate(&mv, r.tolerance).unwrap().margin, v.margin);
        }
    }

    #[test]
    fn oracle_examples() {
        let (rho, input) = family("ghz-noise", &["alpha=0.5"]);
        let r = oracle(&rho, input, 1e-10).unwrap();
        assert_abs_diff_eq!(
            r.partial_transposes[0].min_eigenvalue,
            -0.1875,
            epsilon = 1e-12
        );
        let mixed = DensityMatrix::<f64>::maximally_mixed(vec![2, 2, 2]);
        let r = oracle(&mixed, InputDescriptor::File { path: "-".into() }, 1e-10).unwrap();
        assert!(r.spectrum.iter().all(|&x| (x - 0.125).abs() < 1e-15));
        assert!(r.ppt_all);
    }

    #[test]
    fn rejects_criterion_beyond_kmax() {
        assert!(AnalyzeOptions::new(3, vec![Criterion::PnPpt(5)], 1e-10).is_err());
        assert!(AnalyzeOptions::new(3, vec![Criterion::P3Ppt], -1.0).is_err());
    }
}
