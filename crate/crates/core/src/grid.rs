//! Sampled nonnegative functions on uniform grids.

use crate::error::{param, Error, Result};

/// How an axis of the grid is embedded in the real line.
///
/// `Line` means the function lives on all of ℝ along this axis and is zero
/// outside the grid. `HalfLine` means the axis is ℝ₊ anchored at the origin
/// (the situation after rearranging along that axis); shifts along such an
/// axis only integrate over `x ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisDomain {
    Line,
    HalfLine,
}

/// Nonnegative piecewise-constant function on a uniform grid.
///
/// Cell `i` along axis `k` occupies `[origin_k + i c_k, origin_k + (i+1) c_k)`.
/// Values are stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: Vec<usize>,
    cell_sizes: Vec<f64>,
    origin: Vec<f64>,
    domains: Vec<AxisDomain>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Validating constructor. Rejects negative or non-finite values and
    /// nonpositive cell sizes.
    pub fn new(
        shape: Vec<usize>,
        cell_sizes: Vec<f64>,
        origin: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let n = shape.len();
        if n == 0 {
            return Err(Error::Validation("dimension must be positive".into()));
        }
        if cell_sizes.len() != n || origin.len() != n {
            return Err(Error::Validation(format!(
                "shape has {n} axes but cell_sizes has {} and origin {}",
                cell_sizes.len(),
                origin.len()
            )));
        }
        if shape.contains(&0) {
            return Err(Error::Validation("every extent must be positive".into()));
        }
        let count: usize = shape.iter().product();
        if values.len() != count {
            return Err(Error::Validation(format!(
                "expected {count} values, got {}",
                values.len()
            )));
        }
        for (k, &c) in cell_sizes.iter().enumerate() {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Validation(format!("cell size on axis {k} is {c}")));
            }
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::Validation("origin must be finite".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Validation(format!("value {v} at cell {i}")));
        }
        Ok(Self {
            domains: vec![AxisDomain::Line; n],
            shape,
            cell_sizes,
            origin,
            values,
        })
    }

    /// Builds from possibly signed samples by taking absolute values.
    pub fn from_signed(
        shape: Vec<usize>,
        cell_sizes: Vec<f64>,
        origin: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        Self::new(
            shape,
            cell_sizes,
            origin,
            values.into_iter().map(f64::abs).collect(),
        )
    }

    /// Grid anchored at the origin with every axis on ℝ₊.
    pub fn on_positive_orthant(
        shape: Vec<usize>,
        cell_sizes: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let n = shape.len();
        let g = Self::new(shape, cell_sizes, vec![0.0; n], values)?;
        Ok(g.with_domains(vec![AxisDomain::HalfLine; n]))
    }

    pub fn with_domains(mut self, domains: Vec<AxisDomain>) -> Self {
        assert_eq!(domains.len(), self.dims());
        for (k, d) in domains.iter().enumerate() {
            if *d == AxisDomain::HalfLine {
                self.origin[k] = 0.0;
            }
        }
        self.domains = domains;
        self
    }

    /// Same geometry, new values (already validated by the caller's construction).
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }
    pub fn cell_sizes(&self) -> &[f64] {
        &self.cell_sizes
    }
    pub fn origin(&self) -> &[f64] {
        &self.origin
    }
    pub fn domains(&self) -> &[AxisDomain] {
        &self.domains
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_sizes.iter().product()
    }

    pub fn lattice(&self) -> MeasureLattice {
        MeasureLattice::new(self.cell_volume())
    }

    /// Number of cells with a nonzero value.
    pub fn support_cells(&self) -> usize {
        self.values.iter().filter(|v| **v > 0.0).count()
    }

    /// Measure of the support, `v × #nonzero cells`.
    pub fn support_measure(&self) -> f64 {
        self.support_cells() as f64 * self.cell_volume()
    }

    /// Row-major strides.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dims();
        let mut s = vec![1; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.shape[k + 1];
        }
        s
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(self.strides())
            .map(|(i, s)| i * s)
            .sum()
    }

    pub fn multi_index(&self, mut lin: usize) -> Vec<usize> {
        let strides = self.strides();
        strides
            .iter()
            .map(|s| {
                let i = lin / s;
                lin %= s;
                i
            })
            .collect()
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[self.linear_index(idx)]
    }

    /// Start offsets of every 1-D section along `axis`, in increasing order.
    pub fn section_starts(&self, axis: usize) -> Vec<usize> {
        let strides = self.strides();
        let stride = strides[axis];
        let len = self.shape[axis];
        (0..self.len())
            .filter(|&i| (i / stride).is_multiple_of(len))
            .collect()
    }

    /// Copies the section along `axis` that starts at `start`.
    pub fn section(&self, axis: usize, start: usize) -> Vec<f64> {
        let stride = self.strides()[axis];
        (0..self.shape[axis])
            .map(|i| self.values[start + i * stride])
            .collect()
    }

    /// `(Σ value^p · v)^{1/p}`, summed in storage order.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return param(format!("L^p norm needs 1 ≤ p < ∞, got {p}"));
        }
        let s: f64 = self.values.iter().map(|v| v.powf(p)).sum();
        Ok((s * self.cell_volume()).powf(1.0 / p))
    }

    /// Nonincreasing along every axis (membership in the class of
    /// coordinatewise nonincreasing functions).
    pub fn is_nonincreasing(&self) -> bool {
        let strides = self.strides();
        (0..self.dims()).all(|k| {
            let st = strides[k];
            let len = self.shape[k];
            (0..self.len()).all(|i| {
                let pos = (i / st) % len;
                pos + 1 == len || self.values[i] >= self.values[i + st]
            })
        })
    }

    /// Coordinatewise nonincreasing and anchored on ℝ₊ⁿ.
    pub fn is_mdec(&self) -> bool {
        self.domains.iter().all(|d| *d == AxisDomain::HalfLine) && self.is_nonincreasing()
    }

    /// `λ f` with the same geometry.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return param(format!("scale factor {lambda}"));
        }
        Ok(self.with_values(self.values.iter().map(|v| v * lambda).collect()))
    }

    /// `x ↦ f(λ x)`: cell sizes and origin divided by `λ`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return param(format!("dilation factor {lambda}"));
        }
        let mut g = self.clone();
        g.cell_sizes.iter_mut().for_each(|c| *c /= lambda);
        g.origin.iter_mut().for_each(|o| *o /= lambda);
        Ok(g)
    }

    /// Refines every axis by an integer factor, each cell copied into
    /// `factor^n` subcells. The represented function is unchanged.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return param("refinement factor must be positive");
        }
        let n = self.dims();
        let shape: Vec<usize> = self.shape.iter().map(|s| s * factor).collect();
        let count: usize = shape.iter().product();
        let mut fine = GridFunction {
            shape,
            cell_sizes: self.cell_sizes.iter().map(|c| c / factor as f64).collect(),
            origin: self.origin.clone(),
            domains: self.domains.clone(),
            values: vec![0.0; count],
        };
        let mut idx = vec![0; n];
        for lin in 0..count {
            let mut rem = lin;
            let fstrides = fine.strides();
            for k in 0..n {
                idx[k] = (rem / fstrides[k]) / factor;
                rem %= fstrides[k];
            }
            fine.values[lin] = self.get(&idx);
        }
        Ok(fine)
    }
}

/// Admissible set measures `k·v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureLattice {
    pub unit: f64,
}

impl MeasureLattice {
    pub fn new(unit: f64) -> Self {
        Self { unit }
    }

    pub fn measure(&self, cells: usize) -> f64 {
        cells as f64 * self.unit
    }

    /// Cell count for measure `t`; errors when `t` is off the lattice.
    pub fn cells(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t.is_finite()) {
            return param(format!("measure {t} must be finite and nonnegative"));
        }
        let k = (t / self.unit).round();
        if (k * self.unit - t).abs() > 1e-9 * self.unit.max(t) {
            return param(format!("measure {t} is not a multiple of the cell volume {}", self.unit));
        }
        Ok(k as usize)
    }

    /// Like [`Self::cells`] but also requires divisibility by `alignment`.
    pub fn aligned_cells(&self, t: f64, alignment: usize) -> Result<usize> {
        let k = self.cells(t)?;
        if alignment > 0 && k % alignment != 0 {
            return param(format!("measure {t} ({k} cells) is not divisible by {alignment} cells"));
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_block_has_support_four() {
        let g = GridFunction::new(vec![2, 2], vec![1.0, 1.0], vec![0.0, 0.0], vec![1.0; 4]).unwrap();
        assert_eq!(g.support_measure(), 4.0);
    }

    #[test]
    fn zero_function_is_valid() {
        let g = GridFunction::new(vec![3], vec![0.5], vec![0.0], vec![0.0; 3]).unwrap();
        assert_eq!(g.support_measure(), 0.0);
        assert_eq!(g.lp_norm(2.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            GridFunction::new(vec![2], vec![1.0], vec![0.0], vec![1.0, -1.0]),
            Err(Error::Validation(_))
        ));
        assert!(GridFunction::new(vec![2], vec![0.0], vec![0.0], vec![1.0, 1.0]).is_err());
        assert!(GridFunction::new(vec![1], vec![1.0], vec![0.0], vec![f64::NAN]).is_err());
        assert!(GridFunction::new(vec![2], vec![1.0], vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn unit_square_indicator_norm() {
        let g = GridFunction::new(vec![2, 2], vec![0.5, 0.5], vec![0.0, 0.0], vec![1.0; 4]).unwrap();
        assert!((g.lp_norm(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(g.lp_norm(0.5).is_err());
    }

    #[test]
    fn abs_ingestion() {
        let g = GridFunction::from_signed(vec![2], vec![1.0], vec![0.0], vec![-2.0, 3.0]).unwrap();
        assert_eq!(g.values(), &[2.0, 3.0]);
    }

    #[test]
    fn index_round_trip_and_sections() {
        let g = GridFunction::new(vec![2, 3], vec![1.0, 1.0], vec![0.0, 0.0], (0..6).map(f64::from).collect()).unwrap();
        for lin in 0..6 {
            assert_eq!(g.linear_index(&g.multi_index(lin)), lin);
        }
        assert_eq!(g.section_starts(1), vec![0, 3]);
        assert_eq!(g.section(0, 1), vec![1.0, 4.0]);
        assert_eq!(g.section(1, 3), vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn refinement_preserves_norm() {
        let g = GridFunction::new(vec![2, 2], vec![1.0, 0.5], vec![0.0, 0.0], vec![1.0, 2.0, 3.0, 0.0]).unwrap();
        let r = g.refined(4).unwrap();
        assert!((g.lp_norm(3.0).unwrap() - r.lp_norm(3.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn lattice_rejects_off_grid() {
        let l = MeasureLattice::new(0.25);
        assert_eq!(l.cells(1.0).unwrap(), 4);
        assert!(l.cells(0.3).is_err());
        assert!(l.aligned_cells(0.5, 4).is_err());
        assert_eq!(l.aligned_cells(1.0, 4).unwrap(), 4);
    }
}
