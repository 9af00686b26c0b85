//! Small complex linear algebra: 3-vectors and 3x3 / 4x4 matrices.
//!
//! The dot product is the *bilinear* one (no conjugation); that is the form
//! under which the complex rotation group G(3) and the complex boosts close.
//! An exact-rational determinant is provided for determinant-level checks.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CVec3 {
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

impl CVec3 {
    pub const fn new(x: C64, y: C64, z: C64) -> Self {
        CVec3 { x, y, z }
    }

    pub fn from_real(x: f64, y: f64, z: f64) -> Self {
        CVec3::new(c64(x, 0.0), c64(y, 0.0), c64(z, 0.0))
    }

    pub fn zero() -> Self {
        CVec3::from_real(0.0, 0.0, 0.0)
    }

    pub fn basis(i: usize) -> Self {
        let mut v = CVec3::zero();
        *v.comp_mut(i) = c64(1.0, 0.0);
        v
    }

    pub fn comp(&self, i: usize) -> C64 {
        match i {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("component index out of range"),
        }
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut C64 {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("component index out of range"),
        }
    }

    /// Bilinear dot product (no conjugation): sum of component products.
    pub fn cdot(&self, other: &CVec3) -> C64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// The bilinear square v.v (a complex scalar, not a norm).
    pub fn csq(&self) -> C64 {
        self.cdot(self)
    }

    /// Complex cross product, extended bilinearly from the real formula.
    pub fn cross(&self, other: &CVec3) -> CVec3 {
        CVec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    /// Euclidean magnitude of the component vector (|re|+|im| norm squared, rooted).
    pub fn norm(&self) -> f64 {
        (self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: C64) -> CVec3 {
        CVec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn add(&self, other: &CVec3) -> CVec3 {
        CVec3::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn sub(&self, other: &CVec3) -> CVec3 {
        CVec3::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn neg(&self) -> CVec3 {
        self.scale(c64(-1.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        [self.x, self.y, self.z].iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// True when all imaginary parts vanish to within `tol` of the overall scale.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.norm().max(1.0);
        [self.x, self.y, self.z].iter().all(|c| c.im.abs() <= tol * scale)
    }

    pub fn re(&self) -> [f64; 3] {
        [self.x.re, self.y.re, self.z.re]
    }
}

impl std::ops::Index<usize> for CVec3 {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("component index out of range"),
        }
    }
}

/// Complex 3x3 matrix, row-major, spatial indices 1..3 mapped to 0..2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat3 {
    pub m: [[C64; 3]; 3],
}

impl CMat3 {
    pub fn zero() -> Self {
        CMat3 { m: [[c64(0.0, 0.0); 3]; 3] }
    }

    pub fn identity() -> Self {
        let mut a = CMat3::zero();
        for i in 0..3 {
            a.m[i][i] = c64(1.0, 0.0);
        }
        a
    }

    pub fn from_rows(r0: CVec3, r1: CVec3, r2: CVec3) -> Self {
        let mut a = CMat3::zero();
        for (i, r) in [r0, r1, r2].iter().enumerate() {
            for j in 0..3 {
                a.m[i][j] = r.comp(j);
            }
        }
        a
    }

    pub fn from_cols(c0: CVec3, c1: CVec3, c2: CVec3) -> Self {
        CMat3::from_rows(c0, c1, c2).transpose()
    }

    pub fn from_real(r: [[f64; 3]; 3]) -> Self {
        let mut a = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                a.m[i][j] = c64(r[i][j], 0.0);
            }
        }
        a
    }

    pub fn diag(d0: C64, d1: C64, d2: C64) -> Self {
        let mut a = CMat3::zero();
        a.m[0][0] = d0;
        a.m[1][1] = d1;
        a.m[2][2] = d2;
        a
    }

    pub fn col(&self, j: usize) -> CVec3 {
        CVec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn row(&self, i: usize) -> CVec3 {
        CVec3::new(self.m[i][0], self.m[i][1], self.m[i][2])
    }

    pub fn transpose(&self) -> CMat3 {
        let mut t = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    pub fn mul(&self, other: &CMat3) -> CMat3 {
        let mut p = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = c64(0.0, 0.0);
                for k in 0..3 {
                    s += self.m[i][k] * other.m[k][j];
                }
                p.m[i][j] = s;
            }
        }
        p
    }

    pub fn apply(&self, v: &CVec3) -> CVec3 {
        CVec3::new(
            self.row(0).cdot(v),
            self.row(1).cdot(v),
            self.row(2).cdot(v),
        )
    }

    pub fn det(&self) -> C64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, s: C64) -> CMat3 {
        let mut a = *self;
        for i in 0..3 {
            for j in 0..3 {
                a.m[i][j] *= s;
            }
        }
        a
    }

    pub fn add(&self, other: &CMat3) -> CMat3 {
        let mut a = *self;
        for i in 0..3 {
            for j in 0..3 {
                a.m[i][j] += other.m[i][j];
            }
        }
        a
    }

    pub fn sub(&self, other: &CMat3) -> CMat3 {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.m[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Inverse via the adjugate; errors if the determinant is small
    /// relative to the matrix scale.
    pub fn inverse(&self) -> Result<CMat3> {
        let d = self.det();
        let scale = self.frobenius().powi(3).max(f64::MIN_POSITIVE);
        if d.norm() <= 1e-13 * scale {
            return Err(Error::SingularMatrix { det_abs: d.norm() });
        }
        let m = &self.m;
        let cof = |i: usize, j: usize| -> C64 {
            let r = [(0usize..3).filter(|&k| k != i).collect::<Vec<_>>()];
            let rows = &r[0];
            let cols: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
                - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        let mut inv = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                inv.m[j][i] = cof(i, j) / d;
            }
        }
        Ok(inv)
    }

    /// Residual of M M^t = I (transpose, not conjugate transpose).
    pub fn orthogonality_residual(&self) -> f64 {
        let e1 = self.mul(&self.transpose()).sub(&CMat3::identity()).frobenius();
        let e2 = self.transpose().mul(self).sub(&CMat3::identity()).frobenius();
        e1.max(e2)
    }
}

/// Complex 4x4 matrix, row-major, index 0 is time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat4 {
    pub m: [[C64; 4]; 4],
}

impl CMat4 {
    pub fn zero() -> Self {
        CMat4 { m: [[c64(0.0, 0.0); 4]; 4] }
    }

    pub fn identity() -> Self {
        let mut a = CMat4::zero();
        for i in 0..4 {
            a.m[i][i] = c64(1.0, 0.0);
        }
        a
    }

    pub fn diag(d: [C64; 4]) -> Self {
        let mut a = CMat4::zero();
        for i in 0..4 {
            a.m[i][i] = d[i];
        }
        a
    }

    pub fn from_real(r: [[f64; 4]; 4]) -> Self {
        let mut a = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                a.m[i][j] = c64(r[i][j], 0.0);
            }
        }
        a
    }

    pub fn transpose(&self) -> CMat4 {
        let mut t = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                t.m[i][j] = self.m[j][i];
            }
        }
        t
    }

    pub fn mul(&self, other: &CMat4) -> CMat4 {
        let mut p = CMat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = c64(0.0, 0.0);
                for k in 0..4 {
                    s += self.m[i][k] * other.m[k][j];
                }
                p.m[i][j] = s;
            }
        }
        p
    }

    pub fn apply(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [c64(0.0, 0.0); 4];
        for i in 0..4 {
            for k in 0..4 {
                out[i] += self.m[i][k] * v[k];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat4 {
        let mut a = *self;
        for i in 0..4 {
            for j in 0..4 {
                a.m[i][j] *= s;
            }
        }
        a
    }

    pub fn add(&self, other: &CMat4) -> CMat4 {
        let mut a = *self;
        for i in 0..4 {
            for j in 0..4 {
                a.m[i][j] += other.m[i][j];
            }
        }
        a
    }

    pub fn sub(&self, other: &CMat4) -> CMat4 {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                s += self.m[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Spatial 3x3 block (indices 1..3).
    pub fn spatial(&self) -> CMat3 {
        let mut b = CMat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                b.m[i][j] = self.m[i + 1][j + 1];
            }
        }
        b
    }

    pub fn det(&self) -> C64 {
        // cofactor expansion along row 0
        let mut d = c64(0.0, 0.0);
        for j in 0..4 {
            let minor = self.minor3(0, j).det();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            d += self.m[0][j] * minor * c64(sign, 0.0);
        }
        d
    }

    fn minor3(&self, i: usize, j: usize) -> CMat3 {
        let rows: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let mut b = CMat3::zero();
        for (bi, &ri) in rows.iter().enumerate() {
            for (bj, &cj) in cols.iter().enumerate() {
                b.m[bi][bj] = self.m[ri][cj];
            }
        }
        b
    }

    /// Gaussian elimination with partial (largest-modulus) pivoting.
    pub fn inverse(&self) -> Result<CMat4> {
        let scale = self.frobenius().powi(4).max(f64::MIN_POSITIVE);
        let d = self.det();
        if d.norm() <= 1e-13 * scale {
            return Err(Error::SingularMatrix { det_abs: d.norm() });
        }
        let mut a = self.m;
        let mut inv = CMat4::identity().m;
        for col in 0..4 {
            let mut piv = col;
            for r in col + 1..4 {
                if a[r][col].norm() > a[piv][col].norm() {
                    piv = r;
                }
            }
            if a[piv][col].norm() == 0.0 {
                return Err(Error::SingularMatrix { det_abs: 0.0 });
            }
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col];
            for j in 0..4 {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for r in 0..4 {
                if r == col {
                    continue;
                }
                let f = a[r][col];
                for j in 0..4 {
                    let acj = a[col][j];
                    let icj = inv[col][j];
                    a[r][j] -= f * acj;
                    inv[r][j] -= f * icj;
                }
            }
        }
        Ok(CMat4 { m: inv })
    }
}

/// Exact determinant of a 4x4 matrix with rational entries.
pub fn det4_rational(m: &[[BigRational; 4]; 4]) -> BigRational {
    fn det3(m: &[[BigRational; 3]; 3]) -> BigRational {
        let a = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
        let b = &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
        let c = &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
        a - b + c
    }
    let mut d = BigRational::from_integer(BigInt::from(0));
    for j in 0..4 {
        let mut sub = [[BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0))],
                       [BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0))],
                       [BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0)), BigRational::from_integer(BigInt::from(0))]];
        let cols: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        for i in 1..4 {
            for (bj, &cj) in cols.iter().enumerate() {
                sub[i - 1][bj] = m[i][cj].clone();
            }
        }
        let term = &m[0][j] * det3(&sub);
        if j % 2 == 0 {
            d += term;
        } else {
            d -= term;
        }
    }
    d
}

/// Convenience for building exact rationals.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Result of a one-sided Jacobi SVD: singular values (descending) with the
/// matching right singular vectors as columns.
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// right singular vectors; `v[k]` is the k-th column (length = ncols)
    pub right_vectors: Vec<Vec<C64>>,
}

impl Svd {
    /// Orthonormal basis of the numerical nullspace: right vectors whose
    /// singular value is below `rel_tol * sigma_max`.
    pub fn nullspace(&self, rel_tol: f64) -> Vec<Vec<C64>> {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .zip(self.right_vectors.iter())
            .filter(|(s, _)| **s <= rel_tol * smax)
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|s| **s > rel_tol * smax).count()
    }
}

/// One-sided Jacobi SVD of a dense complex matrix given as rows.
///
/// Orthogonalizes the columns of A with two-sided complex Jacobi rotations
/// accumulated into V, so that A V has mutually orthogonal columns whose
/// norms are the singular values. Right vectors with tiny singular value
/// span the nullspace of A x = 0 (plain matrix-vector product).
pub fn svd_jacobi(rows: &[Vec<C64>]) -> Svd {
    let nrows = rows.len();
    assert!(nrows > 0, "empty matrix");
    let ncols = rows[0].len();
    // column-major working copy
    let mut a: Vec<Vec<C64>> = (0..ncols)
        .map(|j| (0..nrows).map(|i| rows[i][j]).collect())
        .collect();
    let mut v: Vec<Vec<C64>> = (0..ncols)
        .map(|j| {
            let mut col = vec![c64(0.0, 0.0); ncols];
            col[j] = c64(1.0, 0.0);
            col
        })
        .collect();

    let dot_h = |x: &[C64], y: &[C64]| -> C64 {
        x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
    };

    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0f64;
        for p in 0..ncols {
            for q in p + 1..ncols {
                let app = dot_h(&a[p], &a[p]).re;
                let aqq = dot_h(&a[q], &a[q]).re;
                let apq = dot_h(&a[p], &a[q]);
                let denom = (app * aqq).sqrt();
                if denom <= f64::MIN_POSITIVE || apq.norm() <= 1e-15 * denom {
                    continue;
                }
                off = off.max(apq.norm() / denom);
                // complex Jacobi rotation zeroing the (p,q) Gram entry
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = cth * t;
                let phase = apq / apq.norm();
                for i in 0..nrows {
                    let ap = a[p][i];
                    let aq = a[q][i];
                    a[p][i] = ap * cth - aq * phase.conj() * sth;
                    a[q][i] = ap * phase * sth + aq * cth;
                }
                for i in 0..ncols {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = vp * cth - vq * phase.conj() * sth;
                    v[q][i] = vp * phase * sth + vq * cth;
                }
            }
        }
        if off < 1e-14 {
            break;
        }
    }

    let mut order: Vec<usize> = (0..ncols).collect();
    let norms: Vec<f64> = a.iter().map(|col| dot_h(col, col).re.sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    Svd {
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        right_vectors: order.iter().map(|&k| v[k].clone()).collect(),
    }
}
