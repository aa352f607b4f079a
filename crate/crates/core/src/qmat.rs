//! Fixed-size dense linear algebra: 2x2 and 4x4 complex matrices, 3x3 real
//! matrices, and Jacobi eigensolvers for the Hermitian / symmetric cases.
//!
//! Every type here is `Copy`; every operation is a pure function.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance accepted by the eigensolvers (scaled by `max(1, ||m||_F)`).
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as round-off and clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

#[inline]
pub(crate) fn scale_of(norm: f64) -> f64 {
    if norm > 1.0 {
        norm
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

impl CMat2 {
    pub const fn new(rows: [[C64; 2]; 2]) -> Self {
        CMat2(rows)
    }

    pub const fn identity() -> Self {
        CMat2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Pauli X in the ordered single-qubit basis (|1>, |0>).
    pub const fn sigma_x() -> Self {
        CMat2([[ZERO, ONE], [ONE, ZERO]])
    }

    /// Pauli Y in the ordered single-qubit basis (|1>, |0>), chosen so that
    /// `sigma_x * sigma_y = i sigma_z`.
    pub const fn sigma_y() -> Self {
        CMat2([[ZERO, C64::new(0.0, -1.0)], [I, ZERO]])
    }

    /// Pauli Z = |1><1| - |0><0| in the ordered basis (|1>, |0>).
    pub const fn sigma_z() -> Self {
        CMat2([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x *= k;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        CMat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        CMat2(out)
    }
}

/// A 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CMat4(pub [[C64; 4]; 4]);

impl CMat4 {
    pub const fn zero() -> Self {
        CMat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diag([1.0; 4])
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    /// `|u><v|`
    pub fn outer(u: &[C64; 4], v: &[C64; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = u[i] * v[j].conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (basis dependent).
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for x in row.iter_mut() {
                *x = f(*x);
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|x| x * k)
    }

    pub fn scale_c(&self, k: C64) -> Self {
        self.map(|x| x * k)
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `||m - m^dagger||_F`
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    /// `(m + m^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }

    pub fn commutator(&self, other: &CMat4) -> Self {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.re.is_finite() && x.im.is_finite())
    }

    pub fn apply(&self, v: &[C64; 4]) -> [C64; 4] {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Row-major `(re, im)` interleaved view, 32 reals.
    pub fn to_interleaved(&self) -> [f64; 32] {
        let mut out = [0.0; 32];
        for (k, x) in self.0.iter().flatten().enumerate() {
            out[2 * k] = x.re;
            out[2 * k + 1] = x.im;
        }
        out
    }

    pub fn from_interleaved(v: &[f64; 32]) -> Self {
        let mut m = Self::zero();
        for k in 0..16 {
            m.0[k / 4][k % 4] = C64::new(v[2 * k], v[2 * k + 1]);
        }
        m
    }
}

impl Index<(usize, usize)> for CMat4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(mut self, rhs: CMat4) -> CMat4 {
        self += rhs;
        self
    }
}

impl AddAssign for CMat4 {
    fn add_assign(&mut self, rhs: CMat4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(mut self, rhs: CMat4) -> CMat4 {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Neg for CMat4 {
    type Output = CMat4;
    fn neg(self) -> CMat4 {
        self.map(|x| -x)
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        let mut out = [[ZERO; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            let a = &self.0[i];
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[0] * rhs.0[0][j] + a[1] * rhs.0[1][j] + a[2] * rhs.0[2][j] + a[3] * rhs.0[3][j];
            }
        }
        CMat4(out)
    }
}

/// A 3x3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMat3(pub [[f64; 3]; 3]);

impl RMat3 {
    pub const fn zero() -> Self {
        RMat3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 3])
    }

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::zero();
        for (i, x) in d.into_iter().enumerate() {
            m.0[i][i] = x;
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().flatten().map(|x| x * x).sum::<f64>())
    }
}

impl Mul for RMat3 {
    type Output = RMat3;
    fn mul(self, rhs: RMat3) -> RMat3 {
        let mut out = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

/// Kronecker product `a (x) b`; `a` acts on the left tensor factor (qubit 1).
pub fn kron2(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut m = CMat4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    m
}

/// Spectral decomposition of a Hermitian 4x4 matrix.
///
/// `values` ascend; `vectors[k]` is the unit eigenvector for `values[k]`, with
/// its first non-negligible component rotated to be real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermEigen4 {
    pub values: [f64; 4],
    pub vectors: [[C64; 4]; 4],
}

impl HermEigen4 {
    /// `sum_k f(lambda_k) |v_k><v_k|`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMat4 {
        let mut m = CMat4::zero();
        for (lambda, v) in self.values.iter().zip(self.vectors.iter()) {
            m += CMat4::outer(v, v).scale(f(*lambda));
        }
        m
    }

    pub fn reconstruct(&self) -> CMat4 {
        self.reconstruct_with(|x| x)
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }
}

fn off_diagonal_norm(a: &CMat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a.0[i][j].norm_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// Real Jacobi rotation parameters `(c, s)` that annihilate the off-diagonal
/// entry `g` of the symmetric block `[[app, g], [g, aqq]]`.
fn jacobi_rotation(app: f64, aqq: f64, g: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * g);
    let t = if libm::fabs(theta) > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    (c, t * c)
}

/// Eigendecomposition of a Hermitian 4x4 matrix by cyclic complex Jacobi
/// rotations. The input is symmetrized as `(m + m^dagger)/2` first.
pub fn herm_eigen(m: &CMat4) -> Result<HermEigen4> {
    let norm = m.frobenius_norm();
    let defect = m.hermiticity_defect();
    if !m.is_finite() || defect > HERMITIAN_TOL * scale_of(norm) {
        return Err(Error::NonHermitianInput { defect });
    }
    let mut a = m.hermitian_part();
    let mut v = CMat4::identity();
    let tol = JACOBI_OFF_TOL * scale_of(norm);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let z = a.0[p][q];
                let az = z.norm();
                if az == 0.0 {
                    continue;
                }
                let phase = (z / az).conj();
                let (c, s) = jacobi_rotation(a.0[p][p].re, a.0[q][q].re, az);
                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] embedded at (p, q).
                let mut g = CMat4::identity();
                g.0[p][p] = C64::new(c, 0.0);
                g.0[p][q] = C64::new(s, 0.0);
                g.0[q][p] = phase * (-s);
                g.0[q][q] = phase * c;
                a = g.adjoint() * a * g;
                v = v * g;
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[i][i].re.total_cmp(&a.0[j][j].re));

    let mut values = [0.0; 4];
    let mut vectors = [[ZERO; 4]; 4];
    for (k, &idx) in order.iter().enumerate() {
        values[k] = a.0[idx][idx].re;
        let mut vec = [v.0[0][idx], v.0[1][idx], v.0[2][idx], v.0[3][idx]];
        fix_phase(&mut vec);
        vectors[k] = vec;
    }
    Ok(HermEigen4 { values, vectors })
}

fn fix_phase(v: &mut [C64; 4]) {
    if let Some(lead) = v.iter().copied().find(|x| x.norm() > 1e-12) {
        let rot = lead.conj() / lead.norm();
        for x in v.iter_mut() {
            *x *= rot;
        }
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-10 * max(1, ||m||), 0)` are clamped to zero; anything
/// more negative is an error.
pub fn psd_sqrt(m: &CMat4) -> Result<CMat4> {
    let eig = herm_eigen(m)?;
    check_psd(&eig, m.frobenius_norm())?;
    Ok(eig.reconstruct_with(|x| libm::sqrt(x.max(0.0))))
}

pub(crate) fn check_psd(eig: &HermEigen4, norm: f64) -> Result<()> {
    let min = eig.min_value();
    if min < -PSD_CLAMP * scale_of(norm) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(())
}

/// Eigenvalues of a real symmetric 3x3 matrix, descending.
pub fn sym3_eigen(m: &RMat3) -> Result<[f64; 3]> {
    let norm = m.frobenius_norm();
    let mut defect = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let d = m.0[i][j] - m.0[j][i];
            defect += d * d;
        }
    }
    let defect = libm::sqrt(defect);
    if !m.0.iter().flatten().all(|x| x.is_finite()) || defect > HERMITIAN_TOL * scale_of(norm) {
        return Err(Error::AsymmetricInput { defect });
    }
    let mut a = RMat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            a.0[i][j] = 0.5 * (m.0[i][j] + m.0[j][i]);
        }
    }
    let tol = JACOBI_OFF_TOL * scale_of(norm);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let (x, y, z) = (a.0[0][1], a.0[0][2], a.0[1][2]);
        let off = libm::sqrt(2.0 * (x * x + y * y + z * z));
        if off < tol {
            break;
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                let g = a.0[p][q];
                if g == 0.0 {
                    continue;
                }
                let (c, s) = jacobi_rotation(a.0[p][p], a.0[q][q], g);
                let mut r = RMat3::identity();
                r.0[p][p] = c;
                r.0[p][q] = s;
                r.0[q][p] = -s;
                r.0[q][q] = c;
                a = r.transpose() * a * r;
            }
        }
    }
    let mut vals = [a.0[0][0], a.0[1][1], a.0[2][2]];
    vals.sort_by(|x, y| y.total_cmp(x));
    Ok(vals)
}
