//! Principal minors: full enumeration, the Sylvester-style PSD test, and the
//! reduced minor structure of two- and three-qubit X-states.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::ptranspose::{partial_transpose, SubsystemLabel};
use crate::scalar::Scalar;
use crate::states::{DensityMatrix, XStateParams};

/// Largest dimension for which all `2^d - 1` minors are enumerated.
pub const MAX_ENUMERATION_DIM: usize = 8;

/// Sorted, 1-based row/column labels of a principal sub-matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut labels: Vec<usize>, dim: usize) -> Result<Self> {
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::InvalidArgument("empty index set".into()));
        }
        if labels[0] == 0 || *labels.last().unwrap() > dim {
            return Err(Error::InvalidArgument(format!(
                "labels {labels:?} must lie in 1..={dim}"
            )));
        }
        Ok(Self(labels))
    }

    /// Parses compact notation such as `"234"` (single-digit labels only).
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let labels = s
            .chars()
            .map(|c| {
                c.to_digit(10).map(|d| d as usize).ok_or_else(|| {
                    Error::InvalidArgument(format!("bad index label {c:?} in {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, dim)
    }

    fn from_mask(mask: u32, dim: usize) -> Self {
        Self(
            (0..dim)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect(),
        )
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|l| l - 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// Size first, then lexicographic: {1} < {2} < ... < {1,2} < {1,3} < ...
impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l < 10) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet({self})")
    }
}

/// Every principal minor of a matrix, keyed by index set, with the minimum.
#[derive(Clone, Debug)]
pub struct MinorReport<T> {
    pub minors: BTreeMap<IndexSet, T>,
    pub min_value: T,
    pub min_index_set: IndexSet,
}

impl<T: Scalar> MinorReport<T> {
    pub fn get(&self, s: &IndexSet) -> Option<T> {
        self.minors.get(s).copied()
    }

    /// Lookup by compact label string, e.g. `report.by_label("14")`.
    pub fn by_label(&self, s: &str) -> Option<T> {
        let set = IndexSet::parse(s, usize::MAX).ok()?;
        self.get(&set)
    }

    pub fn len(&self) -> usize {
        self.minors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.minors.is_empty()
    }
}

/// Determinant of the sub-matrix keeping the rows and columns in `s`.
pub fn principal_minor<T: Scalar>(m: &ComplexMatrix<T>, s: &IndexSet) -> Result<T> {
    if *s.labels().last().unwrap() > m.dim() {
        return Err(Error::InvalidArgument(format!(
            "index set {s} exceeds dimension {}",
            m.dim()
        )));
    }
    m.principal_submatrix(&s.zero_based())?
        .hermitian_determinant()
}

pub fn all_principal_minors<T: Scalar>(m: &ComplexMatrix<T>) -> Result<MinorReport<T>> {
    let dim = m.dim();
    if dim == 0 || dim > MAX_ENUMERATION_DIM {
        return Err(Error::InvalidArgument(format!(
            "full minor enumeration supports dimensions 1..={MAX_ENUMERATION_DIM}, got {dim}"
        )));
    }
    let mut minors = BTreeMap::new();
    for mask in 1u32..(1 << dim) {
        let set = IndexSet::from_mask(mask, dim);
        let value = principal_minor(m, &set)?;
        minors.insert(set, value);
    }
    let (min_index_set, min_value) = minors
        .iter()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(Ordering::Equal))
        .map(|(k, v)| (k.clone(), *v))
        .expect("at least one minor");
    Ok(MinorReport {
        minors,
        min_value,
        min_index_set,
    })
}

/// PSD decision from minors: every `k x k` principal minor must be at least
/// `-tol * max(1, max |m_ij|)^k`.
pub fn psd_via_minors<T: Scalar>(m: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    if tol < T::zero() {
        return Err(Error::InvalidArgument(
            "tolerance must be non-negative".into(),
        ));
    }
    let report = all_principal_minors(m)?;
    let scale = T::one().max(m.max_abs_entry());
    Ok(report
        .minors
        .iter()
        .all(|(set, &v)| v >= -tol * scale.powi(set.len() as i32)))
}

/// The two minors that decide entanglement of a two-qubit X-state:
/// `[14] = rho11 rho44 - |rho23|^2` and `[23] = rho22 rho33 - |rho14|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyMinors<T> {
    pub minor14: T,
    pub minor23: T,
}

impl<T: Scalar> KeyMinors<T> {
    pub fn min(&self) -> T {
        self.minor14.min(self.minor23)
    }
}

pub fn x_state_key_minors<T: Scalar>(p: &XStateParams<T>) -> KeyMinors<T> {
    KeyMinors {
        minor14: p.rho11 * p.rho44 - p.rho23.norm_sqr(),
        minor23: p.rho22 * p.rho33 - p.rho14.norm_sqr(),
    }
}

/// Minors of the two-qubit partial transpose that are non-negative for every
/// state, because they coincide with minors of `rho` itself.
pub const TWO_QUBIT_NONNEGATIVE_MINORS: [&str; 8] = ["1", "2", "3", "4", "12", "13", "24", "34"];

/// The remaining seven, which may be negative.
pub const TWO_QUBIT_CANDIDATE_MINORS: [&str; 7] = ["14", "23", "123", "124", "134", "234", "1234"];

/// Residuals of the five reduction identities for an X-state,
/// `enumerated - closed form`, in the order [123], [124], [134], [234], [1234].
pub fn x_state_minor_relation_residuals<T: Scalar>(p: &XStateParams<T>) -> Result<[T; 5]> {
    let rho = crate::states::x_state(p)?;
    let report = all_principal_minors(&partial_transpose(&rho, SubsystemLabel::A)?)?;
    let k = x_state_key_minors(p);
    let get = |s: &str| report.by_label(s).expect("enumerated");
    Ok([
        get("123") - p.rho11 * k.minor23,
        get("124") - p.rho22 * k.minor14,
        get("134") - p.rho33 * k.minor14,
        get("234") - p.rho44 * k.minor23,
        get("1234") - k.minor14 * k.minor23,
    ])
}

/// True iff the five reduction identities hold within `1e-11` (f64).
pub fn x_state_minor_relations_check<T: Scalar>(p: &XStateParams<T>) -> Result<bool> {
    let tol = T::structural_tol() * T::lit(10.0);
    Ok(x_state_minor_relation_residuals(p)?
        .iter()
        .all(|r| r.abs() <= tol))
}

/// The four 2x2 minors of a three-qubit X-state's partial transpose on A.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThreeQubitXMinors<T> {
    pub m18: T,
    pub m27: T,
    pub m36: T,
    pub m45: T,
}

impl<T: Scalar> ThreeQubitXMinors<T> {
    pub fn as_array(&self) -> [T; 4] {
        [self.m18, self.m27, self.m36, self.m45]
    }

    pub fn product(&self) -> T {
        self.m18 * self.m27 * self.m36 * self.m45
    }
}

/// Rejects anything with an off-diagonal entry outside the anti-diagonal
/// larger than `1e-12`.
pub fn ensure_three_qubit_x_form<T: Scalar>(rho: &DensityMatrix<T>) -> Result<()> {
    if !rho.is_qubits(3) {
        return Err(Error::InvalidArgument(format!(
            "expected a 3-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    let tol = T::structural_tol();
    for i in 0..8 {
        for j in 0..8 {
            if i != j && i + j != 7 {
                let magnitude = rho.entry(i, j).norm();
                if magnitude > tol {
                    return Err(Error::NotXState {
                        row: i + 1,
                        col: j + 1,
                        magnitude: magnitude.to_f64_lossy(),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn three_qubit_x_minors<T: Scalar>(rho: &DensityMatrix<T>) -> Result<ThreeQubitXMinors<T>> {
    ensure_three_qubit_x_form(rho)?;
    let pt = partial_transpose(rho, SubsystemLabel::A)?;
    let minor = |s: &str| principal_minor(&pt, &IndexSet::parse(s, 8).expect("static label"));
    Ok(ThreeQubitXMinors {
        m18: minor("18")?,
        m27: minor("27")?,
        m36: minor("36")?,
        m45: minor("45")?,
    })
}

/// `det(rho^{T_A}) == [18][27][36][45]` within `1e-10` relative.
pub fn three_qubit_full_minor_identity_check<T: Scalar>(rho: &DensityMatrix<T>) -> Result<bool> {
    let minors = three_qubit_x_minors(rho)?;
    let pt = partial_transpose(rho, SubsystemLabel::A)?;
    let det = pt.hermitian_determinant()?;
    let product = minors.product();
    let scale = det.abs().max(product.abs());
    // absolute floor for products that are exactly zero on both sides
    let floor = T::epsilon() * T::lit(16.0);
    Ok((det - product).abs() <= T::lit(1e-10) * scale + floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_phi_plus, ghz_white_noise, random, w_white_noise};
    use approx::assert_abs_diff_eq;

    fn pt_a(rho: &DensityMatrix<f64>) -> ComplexMatrix<f64> {
        partial_transpose(rho, SubsystemLabel::A).unwrap()
    }

    #[test]
    fn index_set_parsing_and_order() {
        let s = IndexSet::parse("32", 4).unwrap();
        assert_eq!(s.labels(), &[2, 3]);
        assert_eq!(s.to_string(), "23");
        assert!(IndexSet::parse("5", 4).is_err());
        assert!(IndexSet::parse("0", 4).is_err());
        assert!(IndexSet::new(vec![], 4).is_err());
        assert!(IndexSet::parse("4", 4).unwrap() < IndexSet::parse("12", 4).unwrap());
    }

    #[test]
    fn minors_match_displayed_expressions() {
        let rho = random::random_density_matrix::<f64>(4, 5).unwrap();
        let pt = pt_a(&rho);
        let r = |i: usize, j: usize| rho.entry(i - 1, j - 1);
        let m4 = principal_minor(&pt, &IndexSet::parse("4", 4).unwrap()).unwrap();
        assert_abs_diff_eq!(m4, r(4, 4).re, epsilon = 1e-15);
        let m23 = principal_minor(&pt, &IndexSet::parse("23", 4).unwrap()).unwrap();
        assert_abs_diff_eq!(
            m23,
            r(2, 2).re * r(3, 3).re - r(1, 4).norm_sqr(),
            epsilon = 1e-15
        );
        let m234 = principal_minor(&pt, &IndexSet::parse("234", 4).unwrap()).unwrap();
        let expected = r(2, 2) * r(3, 3) * r(4, 4)
            - r(2, 2) * r(3, 4).norm_sqr()
            - r(3, 3) * r(2, 4).norm_sqr()
            - r(4, 4) * r(1, 4).norm_sqr()
            + r(1, 4) * r(4, 2) * r(4, 3)
            + r(2, 4) * r(3, 4) * r(4, 1);
        assert_abs_diff_eq!(m234, expected.re, epsilon = 1e-15);
    }

    #[test]
    fn bell_minor() {
        let pt = pt_a(&bell_phi_plus());
        let v = principal_minor(&pt, &IndexSet::parse("23", 4).unwrap()).unwrap();
        assert_abs_diff_eq!(v, -0.25, epsilon = 1e-15);
        let report = all_principal_minors(&pt).unwrap();
        assert_eq!(report.len(), 15);
        assert_abs_diff_eq!(report.min_value, -0.25, epsilon = 1e-15);
        assert_eq!(report.min_index_set.to_string(), "23");
    }

    #[test]
    fn identity_minors() {
        let report = all_principal_minors(&ComplexMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(report.len(), 15);
        assert!(report.minors.values().all(|&v| (v - 1.0).abs() < 1e-15));
        assert_abs_diff_eq!(report.min_value, 1.0);
    }

    #[test]
    fn ghz_full_enumeration_minimum() {
        let report = all_principal_minors(&pt_a(&ghz_white_noise(0.5).unwrap())).unwrap();
        assert_eq!(report.len(), 255);
        let expected = (32.0 * 0.5 - 15.0 * 0.25 - 16.0) / 64.0;
        assert_abs_diff_eq!(report.min_value, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, -0.05859375);
        assert_eq!(report.min_index_set.to_string(), "45");
    }

    #[test]
    fn enumeration_capped_at_eight() {
        assert!(all_principal_minors(&ComplexMatrix::<f64>::identity(9)).is_err());
    }

    #[test]
    fn key_minor_examples() {
        let bell = XStateParams::<f64>::real([0.5, 0.0, 0.0, 0.5], 0.5, 0.0);
        // rho11 rho44 = 1/4 with no 2-3 coherence
        assert_eq!(
            x_state_key_minors(&bell),
            KeyMinors {
                minor14: 0.25,
                minor23: -0.25
            }
        );
        let mixed = XStateParams::<f64>::real([0.25; 4], 0.0, 0.0);
        assert_eq!(
            x_state_key_minors(&mixed),
            KeyMinors {
                minor14: 0.0625,
                minor23: 0.0625
            }
        );
    }

    #[test]
    fn relation_examples() {
        let bell = XStateParams::<f64>::real([0.5, 0.0, 0.0, 0.5], 0.5, 0.0);
        assert!(x_state_minor_relations_check(&bell).unwrap());
        let rho = crate::states::x_state(&bell).unwrap();
        let report = all_principal_minors(&pt_a(&rho)).unwrap();
        assert_abs_diff_eq!(
            report.by_label("1234").unwrap(),
            -1.0 / 16.0,
            epsilon = 1e-16
        );
        let mixed = XStateParams::<f64>::real([0.25; 4], 0.0, 0.0);
        assert!(x_state_minor_relations_check(&mixed).unwrap());
        let rho = crate::states::x_state(&mixed).unwrap();
        let report = all_principal_minors(&pt_a(&rho)).unwrap();
        assert_abs_diff_eq!(
            report.by_label("1234").unwrap(),
            1.0 / 256.0,
            epsilon = 1e-17
        );
        for seed in 0..50 {
            assert!(x_state_minor_relations_check(&random::random_x_state::<f64>(seed)).unwrap());
        }
    }

    #[test]
    fn three_qubit_minors_of_families() {
        for alpha in [0.0, 0.25, 0.5, 0.8, 1.0] {
            let m = three_qubit_x_minors(&ghz_white_noise(alpha).unwrap()).unwrap();
            let expected = (32.0 * alpha - 15.0 * alpha * alpha - 16.0) / 64.0;
            assert_abs_diff_eq!(m.m45, expected, epsilon = 1e-15);
        }
        let m = three_qubit_x_minors(&ghz_white_noise(0.8).unwrap()).unwrap();
        assert_abs_diff_eq!(m.m45, 0.0, epsilon = 1e-15);
        let m =
            three_qubit_x_minors(&DensityMatrix::<f64>::maximally_mixed(vec![2, 2, 2])).unwrap();
        for v in m.as_array() {
            assert_abs_diff_eq!(v, 1.0 / 64.0, epsilon = 1e-17);
        }
    }

    #[test]
    fn full_minor_identity() {
        assert!(three_qubit_full_minor_identity_check(&ghz_white_noise(0.3).unwrap()).unwrap());
        let mixed = DensityMatrix::<f64>::maximally_mixed(vec![2, 2, 2]);
        assert!(three_qubit_full_minor_identity_check(&mixed).unwrap());
        let det = pt_a(&mixed).hermitian_determinant().unwrap();
        assert_abs_diff_eq!(det, (1.0f64 / 64.0).powi(4), epsilon = 1e-22);
    }

    #[test]
    fn w_mixture_is_not_an_x_state() {
        let err = three_qubit_x_minors(&w_white_noise(0.5).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NotXState { row: 2, col: 3, .. }));
        assert!(three_qubit_full_minor_identity_check(&w_white_noise(0.5).unwrap()).is_err());
    }

    #[test]
    fn psd_via_minors_examples() {
        assert!(psd_via_minors(&ComplexMatrix::<f64>::identity(4), 1e-10).unwrap());
        assert!(!psd_via_minors(&pt_a(&bell_phi_plus()), 1e-10).unwrap());
    }
}
