//! Complex 2x2 matrices, conjugacy classification, and the irreducibility
//! rank test for pairs.

use num_complex::Complex64;
use std::fmt;

/// Half-width of the trace band around |tr| = 2 treated as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-8;
/// Singular-value cutoff for the rank-4 independence test.
const RANK_SV_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2C {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2C {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2C { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2C::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// diag(e^{i phi}, e^{-i phi}).
    pub fn rotation(phi: f64) -> Self {
        Mat2C::new(
            Complex64::cis(phi),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::cis(-phi),
        )
    }

    pub fn mul(&self, rhs: &Mat2C) -> Mat2C {
        Mat2C::new(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }

    pub fn sub(&self, rhs: &Mat2C) -> Mat2C {
        Mat2C::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c, self.d - rhs.d)
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse assuming det = 1; no division is performed.
    pub fn inverse_unimodular(&self) -> Mat2C {
        Mat2C::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn conj_transpose(&self) -> Mat2C {
        Mat2C::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm())
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.det() - Complex64::new(1.0, 0.0)).norm() <= tol
    }

    /// Deviation from preserving the indefinite form diag(1, -1), plus the
    /// determinant defect.
    pub fn disk_model_defect(&self) -> f64 {
        let eta = Mat2C::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        );
        let form = self.conj_transpose().mul(&eta).mul(self).sub(&eta);
        form.norm() + (self.det() - Complex64::new(1.0, 0.0)).norm()
    }

    /// Deviation from unitarity plus the determinant defect.
    pub fn unitary_defect(&self) -> f64 {
        let prod = self.conj_transpose().mul(self).sub(&Mat2C::identity());
        prod.norm() + (self.det() - Complex64::new(1.0, 0.0)).norm()
    }

    pub fn is_su11(&self, tol: f64) -> bool {
        self.disk_model_defect() <= tol
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// Fractional-linear action z -> (az + b) / (cz + d).
    pub fn apply_mobius(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

impl std::ops::Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        Mat2C::mul(&self, &rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ElementClass::Identity => "identity",
            ElementClass::Elliptic => "elliptic",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(name)
    }
}

/// Classify by real trace with a band of width `band` around |tr| = 2.
/// Matrices within `band` of +-identity report Identity.
pub fn classify(x: &Mat2C, band: f64) -> ElementClass {
    let id = Mat2C::identity();
    if x.sub(&id).max_abs() <= band {
        return ElementClass::Identity;
    }
    let neg = Mat2C::new(-id.a, id.b, id.c, -id.d);
    if x.sub(&neg).max_abs() <= band {
        return ElementClass::Identity;
    }
    classify_trace(x.trace().re, band)
}

/// Classification from a real trace value alone (never Identity).
pub fn classify_trace(tr: f64, band: f64) -> ElementClass {
    if (tr.abs() - 2.0).abs() <= band {
        ElementClass::Parabolic
    } else if tr.abs() < 2.0 {
        ElementClass::Elliptic
    } else {
        ElementClass::Hyperbolic
    }
}

/// True when I, X, Y, XY are linearly independent, i.e. the pair generates
/// an irreducible action (no common eigenvector). Rank is measured through
/// the singular values of the 4x4 matrix whose rows are the vectorized
/// matrices.
pub fn pair_irreducible(x: &Mat2C, y: &Mat2C) -> bool {
    let xy = x.mul(y);
    let rows = [Mat2C::identity(), *x, *y, xy];
    let mut m = nalgebra::Matrix4::<Complex64>::zeros();
    for (i, mat) in rows.iter().enumerate() {
        m[(i, 0)] = mat.a;
        m[(i, 1)] = mat.b;
        m[(i, 2)] = mat.c;
        m[(i, 3)] = mat.d;
    }
    let sv = m.singular_values();
    sv.iter().fold(f64::INFINITY, |acc, s| acc.min(*s)) > RANK_SV_TOL
}
