//! Polynomial (Neville) extrapolation of a sequence to zero step size.
//!
//! Samples `(h_i, v_i)` are assumed to follow `v(h) = v0 + c1 h^p + c2 h^{2p} + ...`.
//! The tableau is built in the variable `x = h^p` and evaluated at `x = 0`.

/// Neville tableau extrapolated to the origin.
#[derive(Debug, Clone)]
pub struct Tableau {
    rows: Vec<Vec<f64>>,
}

impl Tableau {
    /// Builds the full tableau. `steps` and `values` must have equal, non-zero length
    /// and distinct steps.
    pub fn build(steps: &[f64], values: &[f64], power: i32) -> Self {
        assert_eq!(steps.len(), values.len(), "steps/values length mismatch");
        assert!(!steps.is_empty(), "empty extrapolation input");
        let xs: Vec<f64> = steps.iter().map(|h| h.powi(power)).collect();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(xs.len());
        for (i, &v) in values.iter().enumerate() {
            let mut row = Vec::with_capacity(i + 1);
            row.push(v);
            for j in 1..=i {
                let prev = &rows[i - 1];
                let (xi, xij) = (xs[i], xs[i - j]);
                // P_{i-j..i}(0) from P_{i-j+1..i}(0) and P_{i-j..i-1}(0)
                let next = (xij * row[j - 1] - xi * prev[j - 1]) / (xij - xi);
                row.push(next);
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Entry `T[i][j]`: the extrapolant through samples `i-j ..= i`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    /// Highest-order estimate, using every sample.
    pub fn best(&self) -> f64 {
        let last = self.rows.last().expect("non-empty tableau");
        *last.last().expect("non-empty row")
    }

    /// Estimate of order `order` (degree of the fitted polynomial in `h^p`)
    /// through the final `order + 1` samples.
    pub fn at_order(&self, order: usize) -> f64 {
        let i = self.rows.len() - 1;
        self.rows[i][order.min(i)]
    }

    /// Successive corrections along the final row, `|T[n][j] - T[n][j-1]|` for `j = 1..=order`.
    pub fn final_row_corrections(&self, order: usize) -> Vec<f64> {
        let row = self.rows.last().expect("non-empty tableau");
        let top = order.min(row.len() - 1);
        (1..=top).map(|j| (row[j] - row[j - 1]).abs()).collect()
    }

    /// Corrections along the diagonal, `|T[i][i] - T[i-1][i-1]|`.
    pub fn diagonal_corrections(&self) -> Vec<f64> {
        (1..self.rows.len()).map(|i| (self.rows[i][i] - self.rows[i - 1][i - 1]).abs()).collect()
    }
}
