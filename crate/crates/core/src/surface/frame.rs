use nalgebra::Matrix3;

use crate::{Error, Result, Vec3};

/// Orthonormal right-handed frame `[s | t | m]` at `origin`, with `m` the
/// approximate normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub origin: Vec3,
    pub axes: Matrix3<f64>,
}

/// Unit vector orthogonal to `m`, built from the canonical axis least
/// aligned with `m` (first axis wins ties).
pub(crate) fn complete_axis(m: &Vec3) -> Vec3 {
    let mut k = 0;
    for i in 1..3 {
        if m[i].abs() < m[k].abs() {
            k = i;
        }
    }
    let mut e = Vec3::zeros();
    e[k] = 1.0;
    (e - m * e.dot(m)).normalize()
}

/// Builds the frame at `x0` with third axis `m0` (normalized here).
pub fn build_local_frame(x0: Vec3, m0: Vec3) -> Result<LocalFrame> {
    let len = m0.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::Argument("frame normal has zero length".into()));
    }
    let m = m0 / len;
    let s = complete_axis(&m);
    let t = m.cross(&s);
    Ok(LocalFrame {
        origin: x0,
        axes: Matrix3::from_columns(&[s, t, m]),
    })
}

impl LocalFrame {
    pub fn s(&self) -> Vec3 {
        self.axes.column(0).into()
    }

    pub fn t(&self) -> Vec3 {
        self.axes.column(1).into()
    }

    pub fn normal(&self) -> Vec3 {
        self.axes.column(2).into()
    }

    /// Local coordinates `Qᵀ(x − x0)`.
    pub fn to_local(&self, x: Vec3) -> Vec3 {
        self.axes.tr_mul(&(x - self.origin))
    }

    /// A direction expressed in the frame.
    pub fn rotate_in(&self, d: Vec3) -> Vec3 {
        self.axes.tr_mul(&d)
    }

    pub fn to_global(&self, local: Vec3) -> Vec3 {
        self.origin + self.axes * local
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_completion() {
        let f = build_local_frame(Vec3::zeros(), Vec3::z()).unwrap();
        assert_eq!(f.s(), Vec3::x());
        assert_eq!(f.t(), Vec3::y());
        let f = build_local_frame(Vec3::zeros(), -Vec3::z()).unwrap();
        assert!((f.axes.determinant() - 1.0).abs() < 1e-15);
        assert!(build_local_frame(Vec3::zeros(), Vec3::zeros()).is_err());
    }

    #[test]
    fn round_trip() {
        let f = build_local_frame(Vec3::new(1.0, 2.0, 3.0), Vec3::new(0.3, -0.4, 0.8)).unwrap();
        let x = Vec3::new(-0.7, 0.1, 2.2);
        assert!((f.to_global(f.to_local(x)) - x).norm() < 1e-14);
        assert!((f.axes.transpose() * f.axes - Matrix3::identity()).norm() < 1e-15);
    }
}
