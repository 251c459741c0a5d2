use super::basis::{powers, MonomialBasis2D};
use crate::{Error, Result};

/// What a row of a least-squares system constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Position,
    GradU,
    GradV,
    Tangent,
}

/// A weighted, geometrically scaled generalized Vandermonde system with
/// one or more right-hand sides.
///
/// Column `c` corresponds to the monomial `terms[c]`; for curve systems the
/// second exponent is always 0. Unknowns are the scaled coefficients
/// `c_jk h^(j+k)`.
#[derive(Debug, Clone)]
pub struct WlsSystem {
    pub nrows: usize,
    pub terms: Vec<(usize, usize)>,
    /// Column-major, `nrows * terms.len()`.
    pub matrix: Vec<f64>,
    /// One vector of length `nrows` per right-hand side.
    pub rhs: Vec<Vec<f64>>,
    pub row_kind: Vec<RowKind>,
    pub row_point: Vec<usize>,
    pub degree: usize,
    pub h: f64,
    /// True when the constant term is fixed to zero and omitted.
    pub interpolatory: bool,
    /// True for curve systems (monomials in `u` only).
    pub univariate: bool,
}

impl WlsSystem {
    pub fn ncols(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.matrix[c * self.nrows + r]
    }

    fn with_capacity(terms: Vec<(usize, usize)>, nrhs: usize, degree: usize, h: f64, interp: bool) -> Self {
        WlsSystem {
            nrows: 0,
            terms,
            matrix: Vec::new(),
            rhs: vec![Vec::new(); nrhs],
            row_kind: Vec::new(),
            row_point: Vec::new(),
            degree,
            h,
            interpolatory: interp,
            univariate: nrhs == 2,
        }
    }

    // Rows are pushed in row-major scratch then transposed in `finish`.
    fn finish(mut self, rows: Vec<f64>) -> Result<Self> {
        let n = self.terms.len();
        let m = self.row_kind.len();
        if m == 0 {
            return Err(Error::Assembly("least-squares system has no rows".into()));
        }
        let mut mat = vec![0.0; m * n];
        for r in 0..m {
            for c in 0..n {
                mat[c * m + r] = rows[r * n + c];
            }
        }
        self.nrows = m;
        self.matrix = mat;
        Ok(self)
    }
}

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Argument(format!("length scale h must be positive (got {h})")));
    }
    Ok(())
}

/// Assembles a surface height-function system.
///
/// Point `i` at `local_uv[i]` contributes a position row with value
/// `heights[i]` and, when `gradients[i]` is present, two gradient rows with
/// the slopes `(f_u, f_v) = (−α/γ, −β/γ)`; gradient rows are scaled by `h`.
/// `weights[i]` multiplies every row of point `i`; zero-weight points are
/// omitted. With `interpolatory`, point 0 is the origin: its position row and
/// the constant column are dropped.
pub fn assemble_system(
    local_uv: &[[f64; 2]],
    heights: &[f64],
    gradients: &[Option<[f64; 2]>],
    weights: &[f64],
    degree: usize,
    h: f64,
    interpolatory: bool,
) -> Result<WlsSystem> {
    check_h(h)?;
    let m = local_uv.len();
    if heights.len() != m || gradients.len() != m || weights.len() != m {
        return Err(Error::Argument("stencil arrays differ in length".into()));
    }
    let basis = MonomialBasis2D::new(degree);
    let first = usize::from(interpolatory);
    let terms: Vec<(usize, usize)> = basis.terms[first..].to_vec();
    let n = terms.len();
    let mut sys = WlsSystem::with_capacity(terms.clone(), 1, degree, h, interpolatory);
    let mut rows: Vec<f64> = Vec::new();

    for i in 0..m {
        let w = weights[i];
        if w < 0.0 || !w.is_finite() {
            return Err(Error::Argument(format!("weight {i} is negative or not finite")));
        }
        if w == 0.0 {
            continue;
        }
        let mu = powers(local_uv[i][0] / h, degree);
        let nu = powers(local_uv[i][1] / h, degree);
        if !(interpolatory && i == 0) {
            rows.extend(terms.iter().map(|&(j, k)| w * mu[j] * nu[k]));
            sys.rhs[0].push(w * heights[i]);
            sys.row_kind.push(RowKind::Position);
            sys.row_point.push(i);
        }
        if let Some([gu, gv]) = gradients[i] {
            rows.extend(
                terms
                    .iter()
                    .map(|&(j, k)| if j == 0 { 0.0 } else { w * j as f64 * mu[j - 1] * nu[k] }),
            );
            sys.rhs[0].push(w * h * gu);
            sys.row_kind.push(RowKind::GradU);
            sys.row_point.push(i);
            rows.extend(
                terms
                    .iter()
                    .map(|&(j, k)| if k == 0 { 0.0 } else { w * k as f64 * mu[j] * nu[k - 1] }),
            );
            sys.rhs[0].push(w * h * gv);
            sys.row_kind.push(RowKind::GradV);
            sys.row_point.push(i);
        }
    }
    debug_assert_eq!(rows.len(), n * sys.row_kind.len());
    sys.finish(rows)
}

/// Assembles a curve system with two right-hand sides (the two height
/// components). Tangent data are the slopes `(β/α, γ/α)`.
pub fn assemble_curve_system(
    local_u: &[f64],
    heights: &[[f64; 2]],
    slopes: &[Option<[f64; 2]>],
    weights: &[f64],
    degree: usize,
    h: f64,
    interpolatory: bool,
) -> Result<WlsSystem> {
    check_h(h)?;
    let m = local_u.len();
    if heights.len() != m || slopes.len() != m || weights.len() != m {
        return Err(Error::Argument("stencil arrays differ in length".into()));
    }
    let first = usize::from(interpolatory);
    let terms: Vec<(usize, usize)> = (first..=degree).map(|q| (q, 0)).collect();
    let n = terms.len();
    let mut sys = WlsSystem::with_capacity(terms.clone(), 2, degree, h, interpolatory);
    let mut rows: Vec<f64> = Vec::new();
    for i in 0..m {
        let w = weights[i];
        if w < 0.0 || !w.is_finite() {
            return Err(Error::Argument(format!("weight {i} is negative or not finite")));
        }
        if w == 0.0 {
            continue;
        }
        let mu = powers(local_u[i] / h, degree);
        if !(interpolatory && i == 0) {
            rows.extend(terms.iter().map(|&(q, _)| w * mu[q]));
            sys.rhs[0].push(w * heights[i][0]);
            sys.rhs[1].push(w * heights[i][1]);
            sys.row_kind.push(RowKind::Position);
            sys.row_point.push(i);
        }
        if let Some([a, b]) = slopes[i] {
            rows.extend(
                terms
                    .iter()
                    .map(|&(q, _)| if q == 0 { 0.0 } else { w * q as f64 * mu[q - 1] }),
            );
            sys.rhs[0].push(w * h * a);
            sys.rhs[1].push(w * h * b);
            sys.row_kind.push(RowKind::Tangent);
            sys.row_point.push(i);
        }
    }
    debug_assert_eq!(rows.len(), n * sys.row_kind.len());
    sys.finish(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_row() {
        let h = 0.3;
        let s = assemble_system(&[[h, 0.0]], &[0.0], &[None], &[1.0], 1, h, false).unwrap();
        assert_eq!(s.nrows, 1);
        assert_eq!((0..3).map(|c| s.get(0, c)).collect::<Vec<_>>(), vec![1.0, 1.0, 0.0]);
    }

    #[test]
    fn gradient_rows_scaled() {
        let h = 0.25;
        let (a, b, g) = (0.2, -0.1, 0.9);
        let s = assemble_system(&[[h, 0.0]], &[0.0], &[Some([-a / g, -b / g])], &[1.0], 2, h, false).unwrap();
        assert_eq!(s.nrows, 3);
        assert_eq!(s.row_kind, vec![RowKind::Position, RowKind::GradU, RowKind::GradV]);
        let row = |r| (0..6).map(|c| s.get(r, c)).collect::<Vec<_>>();
        assert_eq!(row(1), vec![0.0, 1.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(row(2), vec![0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!((s.rhs[0][1] - (-h * a / g)).abs() < 1e-16);
    }

    #[test]
    fn zero_weights_and_interpolation() {
        let uv = [[0.0, 0.0], [0.1, 0.0], [0.0, 0.1], [0.1, 0.1]];
        let s = assemble_system(&uv, &[0.0; 4], &[None; 4], &[1.0, 1.0, 0.0, 1.0], 1, 0.1, true).unwrap();
        assert_eq!(s.nrows, 2);
        assert_eq!(s.ncols(), 2);
        assert_eq!(s.row_point, vec![1, 3]);
        assert!(assemble_system(&uv, &[0.0; 4], &[None; 4], &[0.0; 4], 1, 0.1, false).is_err());
    }
}
