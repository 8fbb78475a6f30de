//! Dense complex-matrix kernel for small multi-qubit systems.
//!
//! Matrices are stored row-major. Multi-qubit operators use the convention
//! that tensor slot 0 is the most significant bit of the computational-basis
//! index; every subsystem operation resolves particle labels to slots through
//! a [`QubitIndexMap`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum tolerated `max |H - H†|` for a matrix to count as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Jacobi convergence threshold on the off-diagonal Frobenius mass.
pub const EIG_TOL: f64 = 1e-13;
/// Eigenvalues down to `-PSD_TOL` are accepted as non-negative.
pub const PSD_TOL: f64 = 1e-10;
/// Unit-trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Hard cap on cyclic Jacobi sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 100;
/// Largest supported register (64 x 64 operators).
pub const MAX_QUBITS: usize = 6;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Outer product `|v><v|`.
    pub fn projector(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `U * self * U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> Result<C64> {
        if self.cols != rhs.rows || self.rows != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "Tr({}x{} * {}x{})",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |H - H†|`, infinite for non-square input.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// Number of qubits if the matrix is a square operator of dimension 2^n.
    pub fn qubit_count(&self) -> Option<usize> {
        if self.is_square() && self.rows.is_power_of_two() {
            Some(self.rows.trailing_zeros() as usize)
        } else {
            None
        }
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} {op} {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "+")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "-")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch; use the `try_*`/`matmul` methods
// when the shapes are not known to conform.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix shapes must conform")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix shapes must conform")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shapes must conform")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `a` occupies the more significant index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let s = a[(ia, ja)];
            if s == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                let r = ia * b.rows + ib;
                for jb in 0..b.cols {
                    out[(r, ja * b.cols + jb)] = s * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Option<ComplexMatrix> {
    factors.into_iter().fold(None, |acc, m| match acc {
        None => Some(m.clone()),
        Some(a) => Some(kron(&a, m)),
    })
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ZERO, ONE, ONE, ZERO] }
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ZERO, -I, I, ZERO] }
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix { rows: 2, cols: 2, data: vec![ONE, ZERO, ZERO, -ONE] }
}

/// `[σx, σy, σz]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// Ordered list of particle labels; position in the list is the tensor slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QubitIndexMap {
    labels: Vec<u32>,
}

impl QubitIndexMap {
    pub fn new(labels: impl Into<Vec<u32>>) -> Result<Self> {
        let labels = labels.into();
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(Error::InvalidSubsystem(format!(
                "register of {} qubits (supported 1..={MAX_QUBITS})",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidSubsystem(format!("duplicate label {l}")));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn contains(&self, label: u32) -> bool {
        self.labels.contains(&label)
    }

    pub fn slot(&self, label: u32) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::InvalidSubsystem(format!("label {label} not in {:?}", self.labels)))
    }

    /// Basis-index bit mask of the qubit carrying `label`.
    pub fn bit(&self, label: u32) -> Result<usize> {
        Ok(1 << (self.len() - 1 - self.slot(label)?))
    }

    /// Map over the labels not listed in `removed`, order preserved.
    pub fn without(&self, removed: &[u32]) -> Result<Self> {
        for &l in removed {
            self.slot(l)?;
        }
        let rest: Vec<u32> = self.labels.iter().copied().filter(|l| !removed.contains(l)).collect();
        Self::new(rest)
    }

    fn check_operator(&self, rho: &ComplexMatrix) -> Result<()> {
        if !rho.is_square() || rho.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator on a {}-qubit register",
                rho.rows(),
                rho.cols(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Basis index in the full register for each assignment of the qubits in
    /// `subset` (subset[0] is the most significant bit of the assignment).
    fn subset_offsets(&self, subset: &[u32]) -> Result<Vec<usize>> {
        let bits: Vec<usize> = subset.iter().map(|&l| self.bit(l)).collect::<Result<_>>()?;
        let k = bits.len();
        Ok((0..1usize << k)
            .map(|r| {
                bits.iter().enumerate().filter(|(j, _)| (r >> (k - 1 - j)) & 1 == 1).fold(0, |acc, (_, &b)| acc | b)
            })
            .collect())
    }

    fn check_distinct(&self, subset: &[u32]) -> Result<()> {
        for (i, l) in subset.iter().enumerate() {
            self.slot(*l)?;
            if subset[..i].contains(l) {
                return Err(Error::InvalidSubsystem(format!("label {l} repeated")));
            }
        }
        Ok(())
    }
}

/// Trace out every qubit not in `keep`. The result's qubits follow the order
/// of `keep`, so this also reorders a register when `keep` lists all labels.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[u32], map: &QubitIndexMap) -> Result<ComplexMatrix> {
    map.check_operator(rho)?;
    map.check_distinct(keep)?;
    if keep.is_empty() {
        return ComplexMatrix::new(1, 1, vec![rho.trace()]);
    }
    let traced: Vec<u32> = map.labels().iter().copied().filter(|l| !keep.contains(l)).collect();
    let kept_off = map.subset_offsets(keep)?;
    let traced_off = map.subset_offsets(&traced)?;
    let d = kept_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for (r, &kr) in kept_off.iter().enumerate() {
        for (c, &kc) in kept_off.iter().enumerate() {
            out[(r, c)] = traced_off.iter().map(|&t| rho[(kr | t, kc | t)]).sum();
        }
    }
    Ok(out)
}

/// Transpose the indices of the single qubit carrying `label`.
pub fn partial_transpose(rho: &ComplexMatrix, label: u32, map: &QubitIndexMap) -> Result<ComplexMatrix> {
    map.check_operator(rho)?;
    let m = map.bit(label)?;
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let si = (i & !m) | (j & m);
            let sj = (j & !m) | (i & m);
            out[(i, j)] = rho[(si, sj)];
        }
    }
    Ok(out)
}

/// Lift a single-qubit operator acting on `label` to the whole register.
pub fn embed_local(op: &ComplexMatrix, label: u32, map: &QubitIndexMap) -> Result<ComplexMatrix> {
    if op.rows() != 2 || op.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("{}x{} local operator", op.rows(), op.cols())));
    }
    let slot = map.slot(label)?;
    let id = ComplexMatrix::identity(2);
    let factors: Vec<&ComplexMatrix> = (0..map.len()).map(|s| if s == slot { op } else { &id }).collect();
    Ok(kron_all(factors).expect("register is non-empty"))
}

/// Contract the qubits in `on` with the pure state `v` on both sides:
/// returns `<v| rho |v>` as an (unnormalized) operator on the remaining
/// qubits, together with their index map. `v` is indexed with `on[0]` as the
/// most significant bit.
pub fn project_onto(
    rho: &ComplexMatrix,
    on: &[u32],
    v: &[C64],
    map: &QubitIndexMap,
) -> Result<(ComplexMatrix, QubitIndexMap)> {
    map.check_operator(rho)?;
    map.check_distinct(on)?;
    if v.len() != 1 << on.len() {
        return Err(Error::DimensionMismatch(format!("{}-entry vector for {} measured qubits", v.len(), on.len())));
    }
    let rest = map.without(on)?;
    let proj_off = map.subset_offsets(on)?;
    let rest_off = map.subset_offsets(rest.labels())?;
    let d = rest_off.len();
    let mut out = ComplexMatrix::zeros(d, d);
    for (r, &br) in rest_off.iter().enumerate() {
        for (c, &bc) in rest_off.iter().enumerate() {
            let mut acc = ZERO;
            for (s, &ps) in proj_off.iter().enumerate() {
                let vs = v[s].conj();
                if vs == ZERO {
                    continue;
                }
                for (t, &pt) in proj_off.iter().enumerate() {
                    if v[t] == ZERO {
                        continue;
                    }
                    acc += vs * rho[(br | ps, bc | pt)] * v[t];
                }
            }
            out[(r, c)] = acc;
        }
    }
    Ok((out, rest))
}

/// Ascending eigenvalues of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let herr = h.hermiticity_error();
    if herr > HERMITICITY_TOL {
        return Err(Error::ContractViolation(format!("matrix is not Hermitian (max |H - H†| = {herr:e})")));
    }
    let n = h.rows();
    let mut a = h.clone();
    // symmetrize so the rotations act on an exactly Hermitian matrix
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let scale = a.frobenius_norm().max(1.0);
    let off_mass = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_mass(&a);
        if off < EIG_TOL * scale {
            break;
        }
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
    }

    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

/// Annihilate `a[p][q]` with `A <- J† A J`, where `J` combines the phase
/// rotation `diag(1, e^{-iφ})` on `q` with a real Givens rotation.
fn jacobi_rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] restricted to (p, q)
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;
    let n = a.rows();
    // A <- A J (columns p, q)
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A <- J† A (rows p, q)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
