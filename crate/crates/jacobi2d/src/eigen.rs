//! Deterministic dense Hermitian eigenvalue computation.
//!
//! The solver reduces a complex Hermitian matrix to real symmetric
//! tridiagonal form with Householder reflections (values only, no transform
//! accumulation) and then runs implicit-shift QL iteration on the
//! tridiagonal. Both stages are plain sequential floating-point code, so the
//! same input bits always produce the same output bits regardless of thread
//! count or call site.
//!
//! Only eigenvalues are exposed; nothing in this crate needs eigenvectors.
//! Degenerate eigenvalues are returned with multiplicity.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;
use crate::{tol, Error};

/// Eigenvalues of a Hermitian matrix, ascending, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumList {
    values: Vec<f64>,
}

impl SpectrumList {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest eigenvalue. Panics on an empty list.
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// Largest eigenvalue. Panics on an empty list.
    pub fn max(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }
}

/// All eigenvalues of a Hermitian matrix, sorted ascending.
///
/// The input must be Hermitian within `tol::HERMITICITY_REL` relative to its
/// largest entry; it is then symmetrized exactly before reduction, so tiny
/// asymmetries cannot leak into the result.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<SpectrumList, Error> {
    let n = m.size();
    if !m.all_finite() {
        return Err(Error::NonFinite {
            context: "matrix",
            row: 0,
            col: 0,
        });
    }
    let defect = m.hermiticity_defect();
    let herm_tol = tol::HERMITICITY_REL * m.max_abs();
    if defect > herm_tol {
        return Err(Error::NotHermitian {
            defect,
            tol: herm_tol,
        });
    }

    // Symmetrized working copy, row-major.
    let mut a = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let z = 0.5 * (m.entry(i, j) + m.entry(j, i).conj());
            a[i * n + j] = if i == j { Complex64::new(z.re, 0.0) } else { z };
        }
    }

    let (mut d, mut e) = householder_tridiagonalize(&mut a, n);
    ql_implicit_shift(&mut d, &mut e)?;
    d.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(SpectrumList { values: d })
}

/// Smallest eigenvalue; equals `hermitian_eigenvalues(m).min()`.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64, Error> {
    Ok(hermitian_eigenvalues(m)?.min())
}

/// Householder reduction of a Hermitian matrix to tridiagonal form, keeping
/// only the real diagonal `d` and the subdiagonal magnitudes `e` (`e[k]`
/// couples `d[k]` and `d[k+1]`; `e[n-1]` stays zero as a sentinel).
///
/// The complex tridiagonal produced by the reflections is diagonally
/// unitarily equivalent to the real one with `|subdiagonal|`, so taking
/// magnitudes loses nothing.
fn householder_tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        // Column segment x = a[k+1.., k], scaled for safety.
        let mut scale = 0.0;
        for i in k + 1..n {
            let z = a[i * n + k];
            scale += z.re.abs() + z.im.abs();
        }
        if scale == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let mut xnorm2 = 0.0;
        let mut tail2 = 0.0;
        for i in k + 1..n {
            let z = a[i * n + k] / scale;
            xnorm2 += z.norm_sqr();
            if i > k + 1 {
                tail2 += z.norm_sqr();
            }
        }
        let xnorm = scale * xnorm2.sqrt();
        if tail2 == 0.0 {
            // Already tridiagonal at this column; the phase of the
            // subdiagonal is irrelevant to the eigenvalues.
            e[k] = xnorm;
            continue;
        }

        let x0 = a[(k + 1) * n + k];
        let phi = if x0 == Complex64::ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };

        // Reflector v = x + phi*‖x‖*e1 sends x to -phi*‖x‖*e1.
        let r = n - k - 1;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        v[0] += phi * xnorm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Two-sided update of the trailing block:
        //   p = tau·A·v,  w = p - (tau/2)(v*·p)·v,  A ← A - v w* - w v*.
        let mut p = vec![Complex64::ZERO; r];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = (k + 1 + i) * n;
            let mut acc = Complex64::ZERO;
            for (j, vj) in v.iter().enumerate() {
                acc += a[row + k + 1 + j] * vj;
            }
            *pi = tau * acc;
        }
        let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let mu = 0.5 * tau * vp;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - mu * vi).collect();

        for i in 0..r {
            for j in 0..=i {
                let delta = v[i] * w[j].conj() + w[i] * v[j].conj();
                let idx = (k + 1 + i) * n + (k + 1 + j);
                let nv = a[idx] - delta;
                if i == j {
                    a[idx] = Complex64::new(nv.re, 0.0);
                } else {
                    a[idx] = nv;
                    a[(k + 1 + j) * n + (k + 1 + i)] = nv.conj();
                }
            }
        }

        e[k] = xnorm;
    }

    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    for i in 0..n {
        d[i] = a[i * n + i].re;
    }
    (d, e)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix.
/// `e[i]` couples `d[i]` and `d[i+1]`; `e` is destroyed. On return `d` holds
/// the eigenvalues in no particular order.
fn ql_implicit_shift(d: &mut [f64], e: &mut [f64]) -> Result<(), Error> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    const MAX_ITER: usize = 64;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Smallest m >= l with a negligible coupling after it.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::NoConvergence);
            }

            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0_f64;
            let mut c = 1.0_f64;
            let mut p = 0.0_f64;
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate without finishing the sweep.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
