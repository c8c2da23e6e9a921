//! General complex eigensolver: diagonal balancing, Householder reduction to
//! upper Hessenberg form, implicitly shifted single-shift QR to complex Schur
//! form, then eigenvectors by back substitution on the triangular factor.

use super::{default_reality_tolerance, ComplexMatrix, Spectrum, C64, ONE, ZERO};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues and right eigenvectors (unit 2-norm columns) of a square
/// matrix with finite entries.
pub fn diagonalize_general(m: &ComplexMatrix) -> Result<Spectrum> {
    diagonalize_general_with(m, true)
}

pub fn diagonalize_general_with(m: &ComplexMatrix, vectors: bool) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::shape(
            "square matrix",
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    if !m.is_finite() {
        return Err(Error::ContractViolation(
            "matrix has non-finite entries".into(),
        ));
    }
    let n = m.rows();
    let tol = default_reality_tolerance(m.max_abs());
    if n == 0 {
        return Ok(Spectrum::new(
            Vec::new(),
            vectors.then(|| ComplexMatrix::zeros(0, 0)),
            tol,
        ));
    }

    let mut work = Work::new(m);
    let scale = work.balance();
    let mut z = vectors.then(|| identity(n));
    work.hessenberg(z.as_deref_mut());
    work.schur(z.as_deref_mut())?;

    let eigenvalues: Vec<C64> = (0..n).map(|i| work.at(i, i)).collect();
    let eigenvectors = z.map(|z| {
        let mut cols = work.triangular_eigenvectors(&z);
        for col in &mut cols {
            for (x, s) in col.iter_mut().zip(&scale) {
                *x *= s;
            }
            let nrm = super::norm2(col);
            if nrm > 0.0 {
                col.iter_mut().for_each(|x| *x /= nrm);
            }
        }
        ComplexMatrix::from_columns(&cols).expect("eigenvector columns share a length")
    });
    Ok(Spectrum::new(eigenvalues, eigenvectors, tol))
}

fn identity(n: usize) -> Vec<C64> {
    let mut z = vec![ZERO; n * n];
    for i in 0..n {
        z[i * n + i] = ONE;
    }
    z
}

/// |re| + |im|, the cheap modulus LAPACK uses for deflation tests.
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

struct Work {
    n: usize,
    a: Vec<C64>,
}

impl Work {
    fn new(m: &ComplexMatrix) -> Self {
        Work {
            n: m.rows(),
            a: m.as_slice().to_vec(),
        }
    }

    #[inline]
    fn at(&self, i: usize, k: usize) -> C64 {
        self.a[i * self.n + k]
    }

    #[inline]
    fn set(&mut self, i: usize, k: usize, v: C64) {
        self.a[i * self.n + k] = v;
    }

    /// Parlett–Reinsch balancing by powers of two. Returns the diagonal D with
    /// A_balanced = D⁻¹·A·D, so eigenvectors of A are D·y.
    fn balance(&mut self) -> Vec<f64> {
        const RADIX: f64 = 2.0;
        let n = self.n;
        let mut scale = vec![1.0; n];
        let mut done = false;
        while !done {
            done = true;
            for i in 0..n {
                let mut c = 0.0;
                let mut r = 0.0;
                for k in 0..n {
                    if k != i {
                        c += abs1(self.at(k, i));
                        r += abs1(self.at(i, k));
                    }
                }
                if c == 0.0 || r == 0.0 {
                    continue;
                }
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= RADIX * RADIX;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= RADIX * RADIX;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    scale[i] *= f;
                    for k in 0..n {
                        self.a[i * n + k] /= f;
                        self.a[k * n + i] *= f;
                    }
                }
            }
        }
        scale
    }

    /// Householder reduction to upper Hessenberg form, accumulating the
    /// orthogonal factor into `z` when present.
    fn hessenberg(&mut self, mut z: Option<&mut [C64]>) {
        let n = self.n;
        if n < 3 {
            return;
        }
        let mut v = vec![ZERO; n];
        for k in 0..n - 2 {
            let len = n - k - 1;
            let mut xnorm = 0.0;
            for i in 0..len {
                v[i] = self.at(k + 1 + i, k);
                xnorm += v[i].norm_sqr();
            }
            let xnorm = xnorm.sqrt();
            let tail: f64 = v[1..len].iter().map(|x| x.norm_sqr()).sum();
            if xnorm == 0.0 || tail == 0.0 {
                continue;
            }
            let x0 = v[0];
            let phase = if x0.norm() == 0.0 {
                ONE
            } else {
                x0 / x0.norm()
            };
            let alpha = -phase * xnorm;
            v[0] -= alpha;
            let vnorm = super::norm2(&v[..len]);
            v[..len].iter_mut().for_each(|x| *x /= vnorm);
            let v = &v[..len];

            // Left: rows k+1.., columns k..
            for col in k..n {
                let mut dot = ZERO;
                for i in 0..len {
                    dot += v[i].conj() * self.a[(k + 1 + i) * n + col];
                }
                if dot != ZERO {
                    let two_dot = dot * 2.0;
                    for i in 0..len {
                        self.a[(k + 1 + i) * n + col] -= v[i] * two_dot;
                    }
                }
            }
            // Right: all rows, columns k+1..
            for row in 0..n {
                let r = &mut self.a[row * n + k + 1..row * n + n];
                let dot: C64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
                if dot != ZERO {
                    let two_dot = dot * 2.0;
                    for (a, b) in r.iter_mut().zip(v) {
                        *a -= two_dot * b.conj();
                    }
                }
            }
            if let Some(z) = z.as_deref_mut() {
                for row in 0..n {
                    let r = &mut z[row * n + k + 1..row * n + n];
                    let dot: C64 = r.iter().zip(v).map(|(a, b)| a * b).sum();
                    if dot != ZERO {
                        let two_dot = dot * 2.0;
                        for (a, b) in r.iter_mut().zip(v) {
                            *a -= two_dot * b.conj();
                        }
                    }
                }
            }
            self.set(k + 1, k, alpha);
            for i in k + 2..n {
                self.set(i, k, ZERO);
            }
        }
    }

    /// Single-shift implicit QR iteration on the Hessenberg matrix until it is
    /// upper triangular (complex Schur form). Transformations go into `z`.
    fn schur(&mut self, mut z: Option<&mut [C64]>) -> Result<()> {
        let n = self.n;
        let norm = self.a.iter().map(|x| abs1(*x)).fold(0.0, f64::max);
        if norm == 0.0 {
            return Ok(());
        }
        let max_total = MAX_SWEEPS_PER_EIGENVALUE * n.max(1);
        let mut total = 0usize;
        let mut since_deflation = 0usize;
        let mut hi = n - 1;
        while hi > 0 {
            let mut lo = hi;
            while lo > 0 {
                let mut s = abs1(self.at(lo - 1, lo - 1)) + abs1(self.at(lo, lo));
                if s == 0.0 {
                    s = norm;
                }
                if abs1(self.at(lo, lo - 1)) <= EPS * s {
                    self.set(lo, lo - 1, ZERO);
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                hi -= 1;
                since_deflation = 0;
                continue;
            }
            total += 1;
            since_deflation += 1;
            if total > max_total {
                return Err(Error::NoConvergence { iterations: total });
            }

            let shift = if since_deflation.is_multiple_of(10) {
                // exceptional shift to break cycles
                self.at(hi, hi) + abs1(self.at(hi, hi - 1)) * 0.75
            } else {
                wilkinson_shift(
                    self.at(hi - 1, hi - 1),
                    self.at(hi - 1, hi),
                    self.at(hi, hi - 1),
                    self.at(hi, hi),
                )
            };
            self.qr_sweep(lo, hi, shift, z.as_deref_mut());
        }
        Ok(())
    }

    fn qr_sweep(&mut self, lo: usize, hi: usize, shift: C64, mut z: Option<&mut [C64]>) {
        let n = self.n;
        for k in lo..hi {
            let (x, y) = if k == lo {
                (self.at(lo, lo) - shift, self.at(lo + 1, lo))
            } else {
                (self.at(k, k - 1), self.at(k + 1, k - 1))
            };
            let (c, s) = givens(x, y);
            if c == 1.0 && s == ZERO {
                continue;
            }
            // rows k, k+1 ← G·rows
            let first_col = if k == lo { lo } else { k - 1 };
            for col in first_col..n {
                let t1 = self.a[k * n + col];
                let t2 = self.a[(k + 1) * n + col];
                self.a[k * n + col] = t1 * c + s * t2;
                self.a[(k + 1) * n + col] = -s.conj() * t1 + t2 * c;
            }
            // columns k, k+1 ← cols·Gᴴ
            let last_row = (k + 2).min(hi);
            for row in 0..=last_row {
                let t1 = self.a[row * n + k];
                let t2 = self.a[row * n + k + 1];
                self.a[row * n + k] = t1 * c + t2 * s.conj();
                self.a[row * n + k + 1] = -t1 * s + t2 * c;
            }
            if let Some(z) = z.as_deref_mut() {
                for row in 0..n {
                    let t1 = z[row * n + k];
                    let t2 = z[row * n + k + 1];
                    z[row * n + k] = t1 * c + t2 * s.conj();
                    z[row * n + k + 1] = -t1 * s + t2 * c;
                }
            }
            if k > lo {
                self.set(k + 1, k - 1, ZERO);
            }
        }
    }

    /// Eigenvectors of the original (balanced) matrix: solve the triangular
    /// system for each Schur vector and rotate back with `z`.
    fn triangular_eigenvectors(&self, z: &[C64]) -> Vec<Vec<C64>> {
        let n = self.n;
        let tnorm = self.a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let smin = (EPS * tnorm).max(f64::MIN_POSITIVE);
        let mut out = Vec::with_capacity(n);
        let mut x = vec![ZERO; n];
        for k in 0..n {
            let lambda = self.at(k, k);
            x[..=k].iter_mut().for_each(|v| *v = ZERO);
            x[k] = ONE;
            for i in (0..k).rev() {
                let mut s = ZERO;
                for l in i + 1..=k {
                    s += self.at(i, l) * x[l];
                }
                let mut d = self.at(i, i) - lambda;
                if d.norm() < smin {
                    d = C64::new(smin, 0.0);
                }
                x[i] = -s / d;
                let big = x[i].norm();
                if big > 1e100 {
                    for v in &mut x[i..=k] {
                        *v /= big;
                    }
                }
            }
            let col: Vec<C64> = (0..n)
                .map(|row| (0..=k).map(|l| z[row * n + l] * x[l]).sum())
                .collect();
            out.push(col);
        }
        out
    }
}

/// Unitary G = [[c, s], [−s̄, c]] with real c such that G·(x, y)ᵀ = (r, 0)ᵀ.
fn givens(x: C64, y: C64) -> (f64, C64) {
    if y == ZERO {
        return (1.0, ZERO);
    }
    let ax = x.norm();
    let ay = y.norm();
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    (ax / r, phase * y.conj() / r)
}

/// Eigenvalue of [[a, b], [c, d]] closer to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
