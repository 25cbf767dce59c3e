//! One-parameter sweeps as CSV.
//!
//! Columns, in order: the varied parameter, `p1..p<kmax>` of `rho^{T_A}`,
//! `margin_<criterion>` for each criterion on those moments, `negativity`
//! and `min_eig_pt` of `rho^{T_A}`, then the key minors of `rho^{T_A}`
//! (`minor_<set>`), `min_minor` over all principal minors, and for two
//! qubits `concurrence`. A footer of `#` lines lists every sign change,
//! located by bisection to `1e-6`.

use std::io::Write;

use rayon::prelude::*;

use super::args::SweepArgs;
use super::family::{Family, FamilySpec};
use super::format::sig;
use super::report::{key_minor_sets, AnalyzeOptions};
use super::{CliError, CliResult};
use crate::channels::concurrence;
use crate::linalg::psd_from_spectrum;
use crate::minors::{all_principal_minors, principal_minor, IndexSet, MAX_ENUMERATION_DIM};
use crate::moments::{default_criteria, default_kmax, pt_moments, Criterion};
use crate::ptranspose::{negativity_from_spectrum, partial_transpose, SubsystemLabel};
use crate::roots::bisect_transition;
use crate::Scalar;

pub const BISECTION_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub spec: FamilySpec,
    pub vary: String,
    pub grid: Vec<f64>,
    pub options: AnalyzeOptions,
}

fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| {
            if i == steps {
                to
            } else {
                from + (to - from) * i as f64 / steps as f64
            }
        })
        .collect()
}

impl SweepConfig {
    pub fn from_args(a: &SweepArgs) -> CliResult<Self> {
        let spec = FamilySpec::parse(&a.family, &a.params)?;
        let vary = match &a.vary {
            Some(v) => v.trim().to_ascii_lowercase(),
            None => spec
                .family
                .default_sweep_parameter()
                .ok_or_else(|| {
                    CliError::Validation(format!("family {} needs --vary", spec.family.name()))
                })?
                .to_string(),
        };
        if !spec.family.accepts(&vary) {
            return Err(CliError::Validation(format!(
                "family {} has no parameter {vary:?}",
                spec.family.name()
            )));
        }
        if spec.params.contains_key(&vary) {
            return Err(CliError::Validation(format!(
                "{vary} is both swept and fixed by --param"
            )));
        }
        for (name, v) in [("--from", a.from), ("--to", a.to)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Validation(format!("{name} {v} outside [0, 1]")));
            }
        }
        if a.from >= a.to {
            return Err(CliError::Validation(format!(
                "empty range [{}, {}]",
                a.from, a.to
            )));
        }
        let steps = match (a.steps, a.step) {
            (Some(n), _) => n,
            (None, Some(h)) => {
                if !(h.is_finite() && h > 0.0) {
                    return Err(CliError::Validation(format!("--step {h} must be positive")));
                }
                ((a.to - a.from) / h - 1e-9).ceil().max(1.0) as usize
            }
            (None, None) => 100,
        };
        if steps == 0 {
            return Err(CliError::Validation("--steps must be >= 1".into()));
        }
        let grid = grid(a.from, a.to, steps);
        let probe = spec.with(&vary, grid[0]).state()?;
        let kmax = a.analysis.kmax.unwrap_or_else(|| default_kmax(&probe));
        let criteria = if a.analysis.criteria.is_empty() {
            default_criteria(kmax)
        } else {
            a.analysis
                .criteria
                .iter()
                .map(|s| s.parse::<Criterion>())
                .collect::<crate::Result<Vec<_>>>()?
        };
        let options =
            AnalyzeOptions::new(kmax, criteria, a.analysis.tol.unwrap_or(f64::default_tol()))?;
        Ok(Self {
            spec,
            vary,
            grid,
            options,
        })
    }

    pub fn new(
        family: Family,
        fixed: &[(&str, f64)],
        vary: &str,
        grid: Vec<f64>,
        options: AnalyzeOptions,
    ) -> Self {
        let mut spec = FamilySpec {
            family,
            params: Default::default(),
        };
        for (k, v) in fixed {
            spec = spec.with(k, *v);
        }
        Self {
            spec,
            vary: vary.to_string(),
            grid,
            options,
        }
    }
}

/// One evaluated grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    /// Values after the parameter column, in header order.
    pub values: Vec<f64>,
    /// Per tracked column: whether the quantity is on its "event" side
    /// (violated criterion, negative eigenvalue or minor, positive concurrence).
    pub flags: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignChange {
    pub column: String,
    pub location: f64,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub parameter: String,
    pub header: Vec<String>,
    /// Header index (into `values`) of each tracked column.
    pub tracked: Vec<usize>,
    pub rows: Vec<SweepRow>,
    pub sign_changes: Vec<SignChange>,
}

struct Layout {
    header: Vec<String>,
    tracked: Vec<usize>,
}

fn layout(cfg: &SweepConfig, two_qubit: bool, minor_sets: &[&str]) -> Layout {
    let mut header: Vec<String> = (1..=cfg.options.kmax).map(|k| format!("p{k}")).collect();
    let mut tracked = Vec::new();
    for c in &cfg.options.criteria {
        tracked.push(header.len());
        header.push(format!("margin_{}", c.token()));
    }
    header.push("negativity".into());
    tracked.push(header.len());
    header.push("min_eig_pt".into());
    for s in minor_sets {
        tracked.push(header.len());
        header.push(format!("minor_{s}"));
    }
    tracked.push(header.len());
    header.push("min_minor".into());
    if two_qubit {
        tracked.push(header.len());
        header.push("concurrence".into());
    }
    Layout { header, tracked }
}

fn evaluate(cfg: &SweepConfig, x: f64) -> CliResult<SweepRow> {
    let rho = cfg.spec.with(&cfg.vary, x).state()?;
    let tol = cfg.options.tol;
    let mv = pt_moments(&rho, SubsystemLabel::A, cfg.options.kmax)?;
    let mut values = mv.values().to_vec();
    let mut flags = Vec::new();
    for c in &cfg.options.criteria {
        let v = c.evaluate(&mv, tol)?;
        values.push(v.margin);
        flags.push(v.violated);
    }
    let pt = partial_transpose(&rho, SubsystemLabel::A)?;
    let spectrum = pt.hermitian_eigenvalues()?;
    values.push(negativity_from_spectrum(&spectrum, tol));
    values.push(spectrum[0]);
    flags.push(!psd_from_spectrum(&spectrum, tol));
    for s in key_minor_sets(&rho) {
        let m = principal_minor(&pt, &IndexSet::parse(s, pt.dim())?)?;
        values.push(m);
        flags.push(m < -tol);
    }
    let min_minor = if pt.dim() <= MAX_ENUMERATION_DIM {
        all_principal_minors(&pt)?.min_value
    } else {
        f64::NAN
    };
    values.push(min_minor);
    flags.push(min_minor < -tol);
    if rho.is_qubits(2) {
        let c = concurrence(&rho)?;
        values.push(c);
        flags.push(c > tol);
    }
    Ok(SweepRow {
        param: x,
        values,
        flags,
    })
}

/// Evaluates the grid in parallel (rows stay in grid order), then bisects
/// every bracket where a tracked flag changes.
pub fn run_sweep(cfg: &SweepConfig) -> CliResult<SweepTable> {
    let probe = cfg.spec.with(&cfg.vary, cfg.grid[0]).state()?;
    let Layout { header, tracked } = layout(cfg, probe.is_qubits(2), key_minor_sets(&probe));

    let rows = cfg
        .grid
        .par_iter()
        .map(|&x| evaluate(cfg, x))
        .collect::<CliResult<Vec<_>>>()?;

    let mut brackets = Vec::new();
    for (t, _) in tracked.iter().enumerate() {
        for w in rows.windows(2) {
            if w[0].flags[t] != w[1].flags[t] {
                brackets.push((t, w[0].param, w[1].param));
            }
        }
    }
    let found = brackets
        .par_iter()
        .map(|&(t, lo, hi)| -> CliResult<Option<SignChange>> {
            let mut failure = None;
            let root = bisect_transition(
                |x| match evaluate(cfg, x) {
                    Ok(r) => r.flags[t],
                    Err(e) => {
                        failure.get_or_insert(e);
                        false
                    }
                },
                lo,
                hi,
                BISECTION_TOL,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(root.map(|location| SignChange {
                column: header[tracked[t]].clone(),
                location,
            }))
        })
        .collect::<CliResult<Vec<_>>>()?;

    Ok(SweepTable {
        parameter: cfg.vary.clone(),
        header,
        tracked,
        rows,
        sign_changes: found.into_iter().flatten().collect(),
    })
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Sign-change locations recorded for one column.
    pub fn changes_in(&self, name: &str) -> Vec<f64> {
        self.sign_changes
            .iter()
            .filter(|s| s.column == name)
            .map(|s| s.location)
            .collect()
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> CliResult<()> {
        let err = |e: String| CliError::Validation(format!("cannot write CSV: {e}"));
        {
            let mut out = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut *w);
            let mut head = vec![self.parameter.clone()];
            head.extend(self.header.iter().cloned());
            out.write_record(&head).map_err(|e| err(e.to_string()))?;
            for row in &self.rows {
                let mut rec = vec![sig(row.param)];
                rec.extend(row.values.iter().map(|&v| sig(v)));
                out.write_record(&rec).map_err(|e| err(e.to_string()))?;
            }
            out.flush().map_err(|e| err(e.to_string()))?;
        }
        writeln!(w, "# sign changes (bisection tolerance {BISECTION_TOL:e})")
            .map_err(|e| err(e.to_string()))?;
        writeln!(w, "# column,{}", self.parameter).map_err(|e| err(e.to_string()))?;
        if self.sign_changes.is_empty() {
            writeln!(w, "# none").map_err(|e| err(e.to_string()))?;
        }
        for s in &self.sign_changes {
            writeln!(w, "# {},{}", s.column, sig(s.location)).map_err(|e| err(e.to_string()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz_config(steps: usize) -> SweepConfig {
        let opts = AnalyzeOptions::new(5, default_criteria(5), 1e-10).unwrap();
        SweepConfig::new(Family::GhzNoise, &[], "alpha", grid(0.0, 1.0, steps), opts)
    }

    #[test]
    fn ghz_sign_changes() {
        let t = run_sweep(&ghz_config(20)).unwrap();
        let b1 = t.changes_in("margin_p3ppt");
        assert_eq!(b1.len(), 1);
        assert!((0.67..0.68).contains(&b1[0]), "{b1:?}");
        let b2 = t.changes_in("margin_p5ppt");
        assert!((b2[0] - 0.8).abs() < 1e-4, "{b2:?}");
        let ppt = t.changes_in("min_eig_pt");
        assert!((ppt[0] - 0.8).abs() < 1e-4, "{ppt:?}");
        assert_eq!(t.rows.len(), 21);
    }

    #[test]
    fn roots_stable_under_grid_change() {
        let a = run_sweep(&ghz_config(10)).unwrap();
        let b = run_sweep(&ghz_config(37)).unwrap();
        for col in ["margin_p3ppt", "margin_p5ppt", "min_eig_pt", "minor_45"] {
            let (x, y) = (a.changes_in(col), b.changes_in(col));
            assert_eq!(x.len(), y.len(), "{col}");
            for (p, q) in x.iter().zip(&y) {
                assert!((p - q).abs() <= 1e-6, "{col}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let t = run_sweep(&ghz_config(4)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "alpha,p1,p2,p3,p4,p5,margin_p3ppt,margin_p3oppt,margin_p5ppt,negativity,min_eig_pt,\
             minor_18,minor_27,minor_36,minor_45,minor_167,min_minor"
        );
        assert!(lines.next().unwrap().starts_with("0,1,1,0.25,"));
        assert!(text.contains("# margin_p3ppt,0.678"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn knoll_concurrence_zero() {
        let opts = AnalyzeOptions::new(6, default_criteria(6), 1e-10).unwrap();
        let cfg = SweepConfig::new(
            Family::Knoll,
            &[("omega", 0.12), ("eta", 0.21)],
            "gamma",
            grid(0.0, 1.0, 20),
            opts,
        );
        let t = run_sweep(&cfg).unwrap();
        let c = t.changes_in("concurrence");
        assert!((c[0] - 0.649).abs() < 0.005, "{c:?}");
        let m = t.changes_in("minor_23");
        assert!((m[0] - c[0]).abs() < 1e-5, "{m:?}");
    }
}
