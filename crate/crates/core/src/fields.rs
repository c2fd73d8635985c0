//! Label models and grid-discretized probability-weight fields.
//!
//! A [`ThetaField`] stores, for each of `m` grid cells `I_i = ((i-1)/m, i/m]`,
//! a probability vector over the `N` labels. It stands in for a Young
//! measure with finite support: `ν_x = Σ_k θ_k(x) δ_{ℓ_k}`.

use crate::error::{bail, Result};
use crate::graphon::EXACT_TOL;

/// Label set `ℓ_1..ℓ_N` with a symmetric, nonnegative coupling `f(ℓ_h, ℓ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelModel {
    labels: Vec<f64>,
    coupling: Vec<f64>,
}

impl LabelModel {
    pub fn new(labels: Vec<f64>, coupling: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            bail!(Input, "a label model needs at least one label");
        }
        for i in 0..n {
            for j in 0..i {
                if labels[i] == labels[j] {
                    bail!(Input, "label {} appears twice", labels[i]);
                }
            }
        }
        if coupling.len() != n || coupling.iter().any(|r| r.len() != n) {
            bail!(Input, "coupling matrix must be {n}x{n}");
        }
        let flat: Vec<f64> = coupling.into_iter().flatten().collect();
        if flat.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            bail!(Input, "coupling values must be finite and nonnegative");
        }
        for i in 0..n {
            for j in 0..i {
                if flat[i * n + j] != flat[j * n + i] {
                    bail!(Input, "coupling is not symmetric at ({i}, {j})");
                }
            }
        }
        Ok(LabelModel { labels, coupling: flat })
    }

    pub fn from_fn(labels: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let coupling = labels.iter().map(|&a| labels.iter().map(|&b| f(a, b)).collect()).collect();
        Self::new(labels, coupling)
    }

    /// Labels `(+1, -1)` in that order with `f(λ, μ) = |λ - μ|²`.
    pub fn spin() -> Self {
        Self::from_fn(vec![1.0, -1.0], |a, b| (a - b).powi(2)).expect("spin model")
    }

    /// `N` labels `1..N` with unit penalty between distinct labels.
    pub fn potts(n: usize) -> Result<Self> {
        Self::from_fn((1..=n).map(|k| k as f64).collect(), |a, b| if a == b { 0.0 } else { 1.0 })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    #[inline]
    pub fn f(&self, h: usize, k: usize) -> f64 {
        self.coupling[h * self.labels.len() + k]
    }

    pub fn index_of(&self, label: f64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.len()).all(|k| self.f(k, k) == 0.0)
    }

    /// Whether this is exactly [`LabelModel::spin`].
    pub fn is_spin(&self) -> bool {
        *self == Self::spin()
    }
}

/// Per-cell probability vectors over labels on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaField {
    m: usize,
    n_labels: usize,
    weights: Vec<f64>,
}

impl ThetaField {
    /// Row-major `m × n_labels` weights. Rows must lie in the simplex.
    pub fn new(m: usize, n_labels: usize, weights: Vec<f64>) -> Result<Self> {
        if m == 0 || n_labels == 0 {
            bail!(Input, "a theta field needs at least one cell and one label");
        }
        if weights.len() != m * n_labels {
            bail!(Input, "expected {} weights, got {}", m * n_labels, weights.len());
        }
        for (i, row) in weights.chunks(n_labels).enumerate() {
            if row.iter().any(|&v| !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&v)) {
                bail!(Input, "cell {} has a weight outside [0, 1]", i + 1);
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > EXACT_TOL {
                bail!(Input, "weights of cell {} sum to {s}, expected 1", i + 1);
            }
        }
        Ok(ThetaField { m, n_labels, weights })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            bail!(Input, "rows have different lengths");
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Spin-valued field with cell `i` carrying label index `labels[i]`.
    pub fn from_labels(labels: &[usize], n_labels: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&k| k >= n_labels) {
            bail!(Input, "label index {bad} is out of range for {n_labels} labels");
        }
        let mut weights = vec![0.0; labels.len() * n_labels];
        for (i, &k) in labels.iter().enumerate() {
            weights[i * n_labels + k] = 1.0;
        }
        Self::new(labels.len(), n_labels, weights)
    }

    /// Two-label field with rows `(θ, 1 - θ)`: `θ` is the weight of the
    /// first label (`+1` in the spin model).
    pub fn from_spin_scalar(theta: &[f64]) -> Result<Self> {
        let weights = theta.iter().flat_map(|&t| [t, 1.0 - t]).collect();
        Self::new(theta.len(), 2, weights)
    }

    /// Constant field equal to `row` on `m` cells.
    pub fn constant(m: usize, row: &[f64]) -> Result<Self> {
        Self::new(m, row.len(), row.repeat(m))
    }

    /// Wraps weights known to be valid (solver iterates after projection).
    pub(crate) fn from_raw(m: usize, n_labels: usize, weights: Vec<f64>) -> Self {
        ThetaField { m, n_labels, weights }
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn labels(&self) -> usize {
        self.n_labels
    }

    #[inline]
    pub fn get(&self, cell: usize, label: usize) -> f64 {
        self.weights[cell * self.n_labels + label]
    }

    pub fn row(&self, cell: usize) -> &[f64] {
        &self.weights[cell * self.n_labels..(cell + 1) * self.n_labels]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn column(&self, label: usize) -> Vec<f64> {
        (0..self.m).map(|i| self.get(i, label)).collect()
    }

    /// First-label weights; the scalar `θ` of a spin field.
    pub fn spin_scalar(&self) -> Vec<f64> {
        self.column(0)
    }

    /// `mass_k = (1/m) Σ_i θ_k(i)`.
    pub fn mass(&self) -> Vec<f64> {
        let mut mass = vec![0.0; self.n_labels];
        for row in self.weights.chunks(self.n_labels) {
            for (acc, v) in mass.iter_mut().zip(row) {
                *acc += v;
            }
        }
        mass.iter_mut().for_each(|v| *v /= self.m as f64);
        mass
    }

    /// Per-label cell counts of a spin-valued field.
    pub fn counts(&self) -> Option<Vec<usize>> {
        let labels = self.label_indices()?;
        let mut counts = vec![0; self.n_labels];
        for k in labels {
            counts[k] += 1;
        }
        Some(counts)
    }

    pub fn is_spin_valued(&self) -> bool {
        self.weights.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    /// The label index of each cell, if the field is spin-valued.
    pub fn label_indices(&self) -> Option<Vec<usize>> {
        if !self.is_spin_valued() {
            return None;
        }
        Some(
            self.weights
                .chunks(self.n_labels)
                .map(|r| r.iter().position(|&v| v == 1.0).expect("one-hot row"))
                .collect(),
        )
    }

    /// `Σ_k ℓ_k θ_k(i)`; for the spin model this is `2θ - 1`.
    pub fn mean_field(&self, model: &LabelModel) -> Vec<f64> {
        self.weights
            .chunks(self.n_labels)
            .map(|r| r.iter().zip(model.labels()).map(|(t, l)| t * l).sum())
            .collect()
    }

    /// The same piecewise-constant field on `m · factor` cells.
    pub fn refine(&self, factor: usize) -> ThetaField {
        let mut weights = Vec::with_capacity(self.weights.len() * factor);
        for row in self.weights.chunks(self.n_labels) {
            for _ in 0..factor {
                weights.extend_from_slice(row);
            }
        }
        ThetaField::from_raw(self.m * factor, self.n_labels, weights)
    }
}

/// Indicator field of a label assignment: `θ_k(i) = 1` iff `u(i) = ℓ_k`.
pub fn theta_from_spin(u: &[f64], model: &LabelModel) -> Result<ThetaField> {
    let labels = u
        .iter()
        .enumerate()
        .map(|(i, &l)| match model.index_of(l) {
            Some(k) => Ok(k),
            None => bail!(Input, "cell {} carries unknown label {l}", i + 1),
        })
        .collect::<Result<Vec<_>>>()?;
    ThetaField::from_labels(&labels, model.len())
}

/// Target masses together with integer per-label sizes for a given `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    masses: Vec<f64>,
    sizes: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(masses: Vec<f64>, sizes: Vec<usize>) -> Result<Self> {
        validate_masses(&masses)?;
        if sizes.len() != masses.len() {
            bail!(Parameter, "{} masses but {} sizes", masses.len(), sizes.len());
        }
        Ok(PartitionSpec { masses, sizes })
    }

    /// Sizes `round(n · j_k)` with a largest-remainder correction so that
    /// they sum to `n` (ties go to the lower label index).
    pub fn from_masses(masses: Vec<f64>, n: usize) -> Result<Self> {
        validate_masses(&masses)?;
        let raw: Vec<f64> = masses.iter().map(|j| j * n as f64).collect();
        let mut sizes: Vec<usize> = raw.iter().map(|r| (r + 1e-9).floor() as usize).collect();
        let assigned: usize = sizes.iter().sum();
        let mut order: Vec<usize> = (0..masses.len()).collect();
        order.sort_by(|&a, &b| {
            let (ra, rb) = (raw[a] - raw[a].floor(), raw[b] - raw[b].floor());
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for &k in order.iter().take(n.saturating_sub(assigned)) {
            sizes[k] += 1;
        }
        Ok(PartitionSpec { masses, sizes })
    }

    /// Balanced two-label split of an even `n`.
    pub fn bisection(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            bail!(Parameter, "bisection needs an even node count, got {n}");
        }
        Ok(PartitionSpec { masses: vec![0.5, 0.5], sizes: vec![n / 2, n / 2] })
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }
}

pub(crate) fn validate_masses(masses: &[f64]) -> Result<()> {
    if masses.is_empty() || masses.iter().any(|j| !(*j >= 0.0 && *j <= 1.0)) {
        bail!(Infeasible, "masses must lie in [0, 1]");
    }
    let s: f64 = masses.iter().sum();
    if (s - 1.0).abs() > EXACT_TOL {
        bail!(Infeasible, "masses sum to {s}, expected 1");
    }
    Ok(())
}

const MAX_DENOMINATOR: u64 = 100_000;

/// Smallest `q` with `θ_k q` integral for all labels, and the numerators.
fn rational_row(row: &[f64]) -> Option<(u64, Vec<u64>)> {
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let qf = q as f64;
        let p: Vec<f64> = row.iter().map(|t| (t * qf).round()).collect();
        let close = row.iter().zip(&p).all(|(t, pk)| (t * qf - pk).abs() <= 1e-9 * qf.max(1.0));
        (close && p.iter().sum::<f64>() == qf).then(|| (q, p.iter().map(|&v| v as u64).collect()))
    })
}

/// Spin-valued field on `n` cells whose local label frequencies reproduce
/// a rational piecewise-constant `θ`.
///
/// On each original cell with weights `p_k / q`, fine cell `i` (1-based,
/// residue `r = ((i-1) mod q) + 1`) takes the label `k` with
/// `Σ_{j<k} p_j < r ≤ Σ_{j≤k} p_j`.
pub fn recovery_sequence(theta: &ThetaField, n: usize) -> Result<ThetaField> {
    let m = theta.cells();
    if n == 0 || !n.is_multiple_of(m) {
        bail!(Parameter, "n = {n} is not a multiple of the {m} cells");
    }
    let per_cell = n / m;
    let mut labels = Vec::with_capacity(n);
    for c in 0..m {
        let Some((q, p)) = rational_row(theta.row(c)) else {
            bail!(
                Parameter,
                "weights of cell {} are not rational with denominator <= {MAX_DENOMINATOR}",
                c + 1
            );
        };
        if !(per_cell as u64).is_multiple_of(q) {
            bail!(Parameter, "n = {n} is not divisible by m·q = {}", m as u64 * q);
        }
        let cumulative: Vec<u64> = p
            .iter()
            .scan(0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        for i in c * per_cell..(c + 1) * per_cell {
            let r = (i as u64 % q) + 1;
            let k = cumulative.iter().position(|&hi| r <= hi).expect("r <= q");
            labels.push(k);
        }
    }
    ThetaField::from_labels(&labels, theta.labels())
}

/// Reassigns the fewest cells of a spin-valued field so that label counts
/// match `spec`. Over-full labels give up their lowest-index cells, which
/// go to under-full labels in label order.
pub fn repair_mass(theta: &ThetaField, spec: &PartitionSpec) -> Result<ThetaField> {
    let n = theta.cells();
    if spec.n() != n {
        bail!(Parameter, "target sizes sum to {}, expected {n}", spec.n());
    }
    if spec.sizes().len() != theta.labels() {
        bail!(Parameter, "target has {} labels, field has {}", spec.sizes().len(), theta.labels());
    }
    let Some(mut labels) = theta.label_indices() else {
        bail!(Input, "mass repair needs a spin-valued field");
    };
    let mut counts = theta.counts().expect("spin-valued");
    let target = spec.sizes();
    for cell in labels.iter_mut() {
        let k = *cell;
        if counts[k] <= target[k] {
            continue;
        }
        let to = (0..target.len())
            .find(|&j| counts[j] < target[j])
            .expect("an over-full label implies an under-full one");
        counts[k] -= 1;
        counts[to] += 1;
        *cell = to;
    }
    ThetaField::from_labels(&labels, theta.labels())
}

fn window_cells(m: usize, h: f64) -> Result<usize> {
    let k = h * m as f64;
    let kr = k.round();
    if !(kr >= 1.0) || (k - kr).abs() > 1e-9 || !m.is_multiple_of(kr as usize) {
        bail!(Parameter, "window width {h} is not aligned with {m} cells");
    }
    Ok(kr as usize)
}

/// Mean of a cell sequence over consecutive windows of width `h`.
pub fn window_average_values(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let k = window_cells(values.len(), h)?;
    Ok(values.chunks(k).map(|w| w.iter().sum::<f64>() / k as f64).collect())
}

/// Per-window label masses of a field, normalized by the window width.
pub fn window_average(field: &ThetaField, h: f64) -> Result<Vec<Vec<f64>>> {
    let k = window_cells(field.cells(), h)?;
    let n = field.labels();
    Ok((0..field.cells() / k)
        .map(|w| {
            (0..n).map(|l| (w * k..(w + 1) * k).map(|i| field.get(i, l)).sum::<f64>() / k as f64).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_model_shape() {
        let s = LabelModel::spin();
        assert_eq!(s.labels(), &[1.0, -1.0]);
        assert_eq!(s.f(0, 1), 4.0);
        assert!(s.has_zero_diagonal());
        assert!(s.is_spin());
        assert!(!LabelModel::potts(2).unwrap().is_spin());
    }

    #[test]
    fn label_model_validation() {
        assert!(LabelModel::new(vec![1.0, 1.0], vec![vec![0.0; 2]; 2]).is_err());
        assert!(LabelModel::new(vec![1.0, 2.0], vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(LabelModel::new(vec![1.0, 2.0], vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).is_err());
    }

    #[test]
    fn theta_from_spin_examples() {
        let model = LabelModel::spin();
        let all_up = theta_from_spin(&[1.0; 5], &model).unwrap();
        assert_eq!(all_up.column(0), vec![1.0; 5]);
        let alt = theta_from_spin(&[1.0, -1.0, 1.0, -1.0], &model).unwrap();
        assert_eq!(alt.column(0), vec![1.0, 0.0, 1.0, 0.0]);
        assert!(alt.is_spin_valued());
        assert!(theta_from_spin(&[1.0, 0.0], &model).is_err());
    }

    #[test]
    fn row_validation() {
        assert!(ThetaField::from_rows(vec![vec![0.5, 0.6]]).is_err());
        assert!(ThetaField::from_rows(vec![vec![1.5, -0.5]]).is_err());
        assert!(ThetaField::from_rows(vec![vec![0.25, 0.75]]).is_ok());
    }

    #[test]
    fn recovery_examples() {
        let half = ThetaField::constant(1, &[0.5, 0.5]).unwrap();
        let r = recovery_sequence(&half, 4).unwrap();
        assert_eq!(r.label_indices().unwrap(), vec![0, 1, 0, 1]);

        let e1 = ThetaField::constant(3, &[1.0, 0.0]).unwrap();
        let r = recovery_sequence(&e1, 6).unwrap();
        assert_eq!(r.label_indices().unwrap(), vec![0; 6]);

        let third = ThetaField::constant(1, &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        let r = recovery_sequence(&third, 6).unwrap();
        assert_eq!(r.label_indices().unwrap(), vec![0, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn recovery_errors() {
        let third = ThetaField::constant(1, &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!(matches!(recovery_sequence(&third, 4), Err(crate::Error::Parameter(_))));
        let irr = ThetaField::constant(
            1,
            &[std::f64::consts::FRAC_1_SQRT_2, 1.0 - std::f64::consts::FRAC_1_SQRT_2],
        )
        .unwrap();
        assert!(matches!(recovery_sequence(&irr, 4), Err(crate::Error::Parameter(_))));
        let two = ThetaField::constant(2, &[0.5, 0.5]).unwrap();
        assert!(recovery_sequence(&two, 3).is_err());
    }

    #[test]
    fn repair_examples() {
        let model = LabelModel::spin();
        let feasible = theta_from_spin(&[1.0, -1.0, -1.0, 1.0], &model).unwrap();
        let spec = PartitionSpec::bisection(4).unwrap();
        assert_eq!(repair_mass(&feasible, &spec).unwrap(), feasible);

        let u = [1.0, -1.0, 1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let five = theta_from_spin(&u, &model).unwrap();
        let fixed = repair_mass(&five, &PartitionSpec::bisection(8).unwrap()).unwrap();
        let before = five.label_indices().unwrap();
        let after = fixed.label_indices().unwrap();
        let changed: Vec<usize> = (0..8).filter(|&i| before[i] != after[i]).collect();
        assert_eq!(changed, vec![0]);

        let ones = theta_from_spin(&[1.0; 10], &model).unwrap();
        let fixed = repair_mass(&ones, &PartitionSpec::bisection(10).unwrap()).unwrap();
        assert_eq!(fixed.label_indices().unwrap(), [vec![1; 5], vec![0; 5]].concat());
    }

    #[test]
    fn repair_rejects_infeasible_specs() {
        let f = ThetaField::from_labels(&[0, 1, 0], 2).unwrap();
        let spec = PartitionSpec::new(vec![0.5, 0.5], vec![2, 2]).unwrap();
        assert!(matches!(repair_mass(&f, &spec), Err(crate::Error::Parameter(_))));
        let soft = ThetaField::constant(2, &[0.5, 0.5]).unwrap();
        assert!(repair_mass(&soft, &PartitionSpec::bisection(2).unwrap()).is_err());
    }

    #[test]
    fn partition_sizes_use_largest_remainder() {
        let p = PartitionSpec::from_masses(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 10).unwrap();
        assert_eq!(p.sizes(), &[4, 3, 3]);
        let p = PartitionSpec::from_masses(vec![0.45, 0.35, 0.2], 10).unwrap();
        assert_eq!(p.sizes(), &[5, 3, 2]);
        assert!(PartitionSpec::bisection(7).is_err());
        assert!(PartitionSpec::from_masses(vec![0.5, 0.6], 10).is_err());
    }

    #[test]
    fn window_examples() {
        let c = ThetaField::constant(8, &[0.25, 0.75]).unwrap();
        for w in window_average(&c, 0.25).unwrap() {
            assert_eq!(w, vec![0.25, 0.75]);
        }
        assert!(window_average(&c, 0.3).is_err());
        let r = recovery_sequence(&ThetaField::constant(1, &[0.5, 0.5]).unwrap(), 16).unwrap();
        for w in window_average(&r, 0.125).unwrap() {
            assert_eq!(w, vec![0.5, 0.5]);
        }
        let means = window_average_values(&[1.0, -1.0, 1.0, 1.0], 0.5).unwrap();
        assert_eq!(means, vec![0.0, 1.0]);
    }
}
