/// Number of bivariate monomials of total degree at most `p`.
pub fn monomial_count(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

/// Monomials `u^j v^k` with `j + k <= p` in graded order:
/// `1, u, v, u², uv, v², ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis2D {
    pub degree: usize,
    pub terms: Vec<(usize, usize)>,
}

impl MonomialBasis2D {
    pub fn new(degree: usize) -> Self {
        let mut terms = Vec::with_capacity(monomial_count(degree));
        for q in 0..=degree {
            for k in 0..=q {
                terms.push((q - k, k));
            }
        }
        MonomialBasis2D { degree, terms }
    }

    pub fn count(&self) -> usize {
        self.terms.len()
    }

    /// Position of `(j, k)` in the graded order.
    pub fn index(j: usize, k: usize) -> usize {
        let q = j + k;
        q * (q + 1) / 2 + k
    }

    /// Values of all monomials at `(u, v)`.
    pub fn eval(&self, u: f64, v: f64) -> Vec<f64> {
        let up = powers(u, self.degree);
        let vp = powers(v, self.degree);
        self.terms.iter().map(|&(j, k)| up[j] * vp[k]).collect()
    }
}

/// `[1, x, x², ..., x^p]`.
pub(crate) fn powers(x: f64, p: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(p + 1);
    let mut acc = 1.0;
    for _ in 0..=p {
        out.push(acc);
        acc *= x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_order() {
        let b = MonomialBasis2D::new(2);
        assert_eq!(b.terms, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        for p in 0..9 {
            let b = MonomialBasis2D::new(p);
            assert_eq!(b.count(), monomial_count(p));
            for (i, &(j, k)) in b.terms.iter().enumerate() {
                assert_eq!(MonomialBasis2D::index(j, k), i);
            }
        }
    }
}
