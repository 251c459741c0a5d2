use super::assemble::WlsSystem;
use super::basis::MonomialBasis2D;
use crate::{Error, Result};

/// Solution of a least-squares fit in unscaled coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub degree: usize,
    /// Full monomial list, including the constant and any truncated terms.
    pub terms: Vec<(usize, usize)>,
    /// `coefficients[r][t]` is the coefficient of `terms[t]` for
    /// right-hand side `r`. Truncated terms are exactly zero.
    pub coefficients: Vec<Vec<f64>>,
    /// Largest complete degree that survived truncation.
    pub effective_degree: usize,
    pub truncated_terms: Vec<(usize, usize)>,
    /// 1-norm condition number of the retained triangular factor.
    pub condition_estimate: f64,
}

impl FitResult {
    pub fn coeff(&self, rhs: usize, j: usize, k: usize) -> f64 {
        self.terms
            .iter()
            .position(|&t| t == (j, k))
            .map_or(0.0, |i| self.coefficients[rhs][i])
    }

    /// Height `f(u, v)` of a surface fit.
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let up = super::basis::powers(u, self.degree);
        let vp = super::basis::powers(v, self.degree);
        self.terms
            .iter()
            .zip(&self.coefficients[0])
            .map(|(&(j, k), c)| c * up[j] * vp[k])
            .sum()
    }

    /// Gradient `(f_u, f_v)` of a surface fit.
    pub fn eval_grad(&self, u: f64, v: f64) -> [f64; 2] {
        let up = super::basis::powers(u, self.degree);
        let vp = super::basis::powers(v, self.degree);
        let mut g = [0.0; 2];
        for (&(j, k), c) in self.terms.iter().zip(&self.coefficients[0]) {
            if j > 0 {
                g[0] += c * j as f64 * up[j - 1] * vp[k];
            }
            if k > 0 {
                g[1] += c * k as f64 * up[j] * vp[k - 1];
            }
        }
        g
    }

    /// Both height components `(v(u), w(u))` of a curve fit.
    pub fn eval_curve(&self, u: f64) -> [f64; 2] {
        let up = super::basis::powers(u, self.degree);
        let mut out = [0.0; 2];
        for (r, o) in out.iter_mut().enumerate() {
            *o = self
                .terms
                .iter()
                .zip(&self.coefficients[r])
                .map(|(&(q, _), c)| c * up[q])
                .sum();
        }
        out
    }
}

/// Householder QR of the active columns, stopped at the first column whose
/// inclusion breaks the condition limit.
struct Factor {
    m: usize,
    a: Vec<f64>, // column-major m x na; R above the diagonal, reflectors below
    vhead: Vec<f64>,
    tau: Vec<f64>,
    diag: Vec<f64>,
    perm: Vec<usize>, // local column -> index into `active`
    cond: f64,
}

enum Outcome {
    Done(Factor),
    Truncate(usize),
}

fn factor(sys: &WlsSystem, active: &[usize], cond_limit: f64) -> Outcome {
    let m = sys.nrows;
    let na = active.len();
    let mut a = Vec::with_capacity(m * na);
    for &c in active {
        a.extend_from_slice(&sys.matrix[c * m..(c + 1) * m]);
    }
    let mut perm: Vec<usize> = (0..na).collect();
    let mut vhead = Vec::with_capacity(na);
    let mut tau = Vec::with_capacity(na);
    let mut diag = Vec::with_capacity(na);
    // inverse of the leading triangular block, column-major na x na
    let mut rinv = vec![0.0; na * na];
    let mut r_norm1: f64 = 0.0;
    let mut rinv_norm1: f64 = 0.0;

    for k in 0..na {
        if k >= m {
            return Outcome::Truncate(active[*perm[k..].iter().max().unwrap()]);
        }
        let mut best = k;
        let mut best_norm = -1.0;
        for c in k..na {
            let col = &a[c * m + k..(c + 1) * m];
            let s: f64 = col.iter().map(|x| x * x).sum();
            if s > best_norm {
                best_norm = s;
                best = c;
            }
        }
        if !(best_norm > 0.0) {
            return Outcome::Truncate(active[*perm[k..].iter().max().unwrap()]);
        }
        if best != k {
            for r in 0..m {
                a.swap(k * m + r, best * m + r);
            }
            perm.swap(k, best);
        }

        let norm = best_norm.sqrt();
        let x0 = a[k * m + k];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        let v0 = x0 - alpha;
        // v = [v0, a[k+1..m, k]], H = I - tau v v^T
        let vtv = v0 * v0 + a[k * m + k + 1..(k + 1) * m].iter().map(|x| x * x).sum::<f64>();
        let t = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };
        for c in k + 1..na {
            let mut d = v0 * a[c * m + k];
            for r in k + 1..m {
                d += a[k * m + r] * a[c * m + r];
            }
            let s = t * d;
            a[c * m + k] -= s * v0;
            for r in k + 1..m {
                a[c * m + r] -= s * a[k * m + r];
            }
        }
        a[k * m + k] = alpha;
        vhead.push(v0);
        tau.push(t);
        diag.push(alpha);

        // R column k = a[0..k, k] (rows above diagonal live in column k)
        let mut col_sum = alpha.abs();
        for i in 0..k {
            col_sum += a[k * m + i].abs();
        }
        r_norm1 = r_norm1.max(col_sum);
        let mut inv_sum = 1.0 / alpha.abs();
        for i in (0..k).rev() {
            let mut s = 0.0;
            for j in i..k {
                s += rinv[j * na + i] * a[k * m + j];
            }
            let z = -s / alpha;
            rinv[k * na + i] = z;
            inv_sum += z.abs();
        }
        rinv[k * na + k] = 1.0 / alpha;
        rinv_norm1 = rinv_norm1.max(inv_sum);
        let cond = r_norm1 * rinv_norm1;
        if !(cond <= cond_limit) {
            return Outcome::Truncate(active[perm[k]]);
        }
    }

    Outcome::Done(Factor {
        m,
        a,
        vhead,
        tau,
        diag,
        perm,
        cond: r_norm1 * rinv_norm1,
    })
}

impl Factor {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.m;
        let n = self.diag.len();
        let mut y = b.to_vec();
        for k in 0..n {
            let v0 = self.vhead[k];
            let mut d = v0 * y[k];
            for r in k + 1..m {
                d += self.a[k * m + r] * y[r];
            }
            let s = self.tau[k] * d;
            y[k] -= s * v0;
            for r in k + 1..m {
                y[r] -= s * self.a[k * m + r];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.a[j * m + i] * x[j];
            }
            x[i] = s / self.diag[i];
        }
        x
    }
}

/// Solves the system by QR with column pivoting, truncating ill-conditioned
/// monomials together with every monomial that contains them as a factor,
/// then maps the solution back to unscaled coefficients.
pub fn solve_truncated_qrcp(sys: &WlsSystem, cond_limit: f64) -> Result<FitResult> {
    if !(cond_limit > 1.0) {
        return Err(Error::Argument(format!(
            "condition limit must exceed 1 (got {cond_limit})"
        )));
    }
    let n = sys.ncols();
    let mut active: Vec<usize> = (0..n).collect();
    let mut truncated = vec![false; n];

    let fac = loop {
        if active.is_empty() {
            return Err(Error::DegenerateStencil(format!(
                "all {n} monomials truncated ({} rows)",
                sys.nrows
            )));
        }
        match factor(sys, &active, cond_limit) {
            Outcome::Done(f) => break f,
            Outcome::Truncate(col) => {
                let (j, k) = sys.terms[col];
                for &c in &active {
                    let (jj, kk) = sys.terms[c];
                    if jj >= j && kk >= k {
                        truncated[c] = true;
                    }
                }
                active.retain(|&c| !truncated[c]);
            }
        }
    };

    let full_terms: Vec<(usize, usize)> = if sys.univariate {
        (0..=sys.degree).map(|q| (q, 0)).collect()
    } else {
        MonomialBasis2D::new(sys.degree).terms
    };
    let offset = usize::from(sys.interpolatory);
    let mut coefficients = Vec::with_capacity(sys.rhs.len());
    for b in &sys.rhs {
        let x = fac.solve(b);
        let mut c = vec![0.0; full_terms.len()];
        for (local, &p) in fac.perm.iter().enumerate() {
            let col = active[p];
            let (j, k) = sys.terms[col];
            c[col + offset] = x[local] / sys.h.powi((j + k) as i32);
        }
        coefficients.push(c);
    }

    let truncated_terms: Vec<(usize, usize)> = (0..n).filter(|&c| truncated[c]).map(|c| sys.terms[c]).collect();
    let effective_degree = truncated_terms
        .iter()
        .map(|&(j, k)| j + k)
        .min()
        .map_or(sys.degree, |d| d.saturating_sub(1));

    Ok(FitResult {
        degree: sys.degree,
        terms: full_terms,
        coefficients,
        effective_degree,
        truncated_terms,
        condition_estimate: fac.cond,
    })
}
