//! Assembly of the Floquet-Bloch fiber matrices.
//!
//! For quasimomentum `(x, y)` the fiber `J(x, y)` is a `p1·p2 × p1·p2`
//! Hermitian matrix in `p1 × p1` blocks of size `p2`:
//!
//! * diagonal blocks `B̂_n(x)` — the in-layer Jacobi matrices with the `x`
//!   phase on their wrap-around corner;
//! * super-diagonal blocks `Â_n(x)` coupling layer `n` to layer `n+1`
//!   (sub-diagonal blocks are their conjugate transposes);
//! * corner blocks `e^{-iy} Â_{p1}(x)` at `(p1, 1)` and `e^{iy} Â_{p1}(x)^*`
//!   at `(1, p1)` closing the layer ring.
//!
//! Splitting each small matrix into its corner-free part and its wrap-around
//! corner part gives `J = J0 + J1`: `J0` is block tridiagonal and independent
//! of `(x, y)`; `J1` carries every phase. The diagonal comparison matrix `C`
//! dominates `J1` in the sense `-C ≤ J1 ≤ C`, which is what makes the
//! envelope bounds in [`crate::bounds`] work.
//!
//! All assemblies write conjugate entry pairs from a single source value, so
//! Hermiticity is exact, and `J0 + J1 == J` holds entrywise exactly.

use num_complex::Complex64;

use crate::coefficients::CoefficientField;
use crate::matrix::ComplexMatrix;

/// A fiber matrix, tagged with the quasimomentum it was assembled at
/// (`None` for momentum-independent matrices such as `J0`).
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMatrix {
    matrix: ComplexMatrix,
    quasimomentum: Option<(f64, f64)>,
}

impl FiberMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn quasimomentum(&self) -> Option<(f64, f64)> {
        self.quasimomentum
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.entry(i, j)
    }

    /// Entrywise difference, keeping this matrix's quasimomentum tag.
    pub fn sub(&self, other: &FiberMatrix) -> FiberMatrix {
        FiberMatrix {
            matrix: self.matrix.sub(&other.matrix),
            quasimomentum: self.quasimomentum,
        }
    }

    pub fn add(&self, other: &FiberMatrix) -> FiberMatrix {
        FiberMatrix {
            matrix: self.matrix.add(&other.matrix),
            quasimomentum: self.quasimomentum,
        }
    }
}

/// The nonnegative diagonal of the comparison matrix `C`, flattened in block
/// order. Independent of quasimomentum by construction: it is built from
/// coefficient moduli only.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonDiagonal {
    values: Vec<f64>,
}

impl ComparisonDiagonal {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.values)
    }

    /// A scaled copy; used by adversarial tests that deliberately weaken `C`.
    pub fn scaled(&self, factor: f64) -> ComparisonDiagonal {
        ComparisonDiagonal {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

/// In-layer coupling matrix `Â_n(x)`: diagonal `a1[n][m]`, subdiagonal
/// `(m+1, m) = a0[n][m]`, superdiagonal `(m, m+1) = conj(a0[n][m])`, and
/// wrap-around corners `(1, p2) = e^{ix} a0[n][p2]`, `(p2, 1)` its conjugate.
pub fn assemble_a_hat(field: &CoefficientField, n: usize, x: f64) -> ComplexMatrix {
    band_matrix(field.p2(), x, |m| field.a1(n, m), |m| field.a0(n, m), true)
}

/// Corner-free part `Â_n^0` of [`assemble_a_hat`]; independent of `x`.
pub fn assemble_a_hat0(field: &CoefficientField, n: usize) -> ComplexMatrix {
    band_matrix(field.p2(), 0.0, |m| field.a1(n, m), |m| field.a0(n, m), false)
}

/// In-layer Jacobi matrix `B̂_n(x)`; same band pattern as [`assemble_a_hat`]
/// with `(b0, b1)` in place of `(a0, a1)`. Exactly Hermitian since `b1` is
/// real.
pub fn assemble_b_hat(field: &CoefficientField, n: usize, x: f64) -> ComplexMatrix {
    band_matrix(
        field.p2(),
        x,
        |m| Complex64::new(field.b1(n, m), 0.0),
        |m| field.b0(n, m),
        true,
    )
}

/// Corner-free part `B̂_n^0` of [`assemble_b_hat`].
pub fn assemble_b_hat0(field: &CoefficientField, n: usize) -> ComplexMatrix {
    band_matrix(
        field.p2(),
        0.0,
        |m| Complex64::new(field.b1(n, m), 0.0),
        |m| field.b0(n, m),
        false,
    )
}

fn band_matrix(
    p2: usize,
    x: f64,
    diag: impl Fn(usize) -> Complex64,
    off: impl Fn(usize) -> Complex64,
    corners: bool,
) -> ComplexMatrix {
    let mut m = ComplexMatrix::zero(p2);
    for j in 1..=p2 {
        m.set(j - 1, j - 1, diag(j));
    }
    for j in 1..p2 {
        let v = off(j);
        m.set(j, j - 1, v);
        m.set(j - 1, j, v.conj());
    }
    if corners {
        let v = Complex64::from_polar(1.0, x) * off(p2);
        m.set(0, p2 - 1, v);
        m.set(p2 - 1, 0, v.conj());
    }
    m
}

/// The full fiber `J(x, y)`.
pub fn assemble_j(field: &CoefficientField, x: f64, y: f64) -> FiberMatrix {
    let (p1, p2) = (field.p1(), field.p2());
    let mut m = ComplexMatrix::zero(p1 * p2);
    for n in 1..=p1 {
        m.write_block(n - 1, n - 1, p2, &assemble_b_hat(field, n, x));
    }
    for n in 1..p1 {
        // layer n couples forward to layer n+1 through Â_n
        m.write_block_conj_pair(n - 1, n, p2, &assemble_a_hat(field, n, x));
    }
    let corner = assemble_a_hat(field, p1, x).scaled(Complex64::from_polar(1.0, -y));
    m.write_block_conj_pair(p1 - 1, 0, p2, &corner);
    FiberMatrix {
        matrix: m,
        quasimomentum: Some((x, y)),
    }
}

/// The corner-free block tridiagonal `J0`; independent of `(x, y)`.
pub fn assemble_j0(field: &CoefficientField) -> FiberMatrix {
    let (p1, p2) = (field.p1(), field.p2());
    let mut m = ComplexMatrix::zero(p1 * p2);
    for n in 1..=p1 {
        m.write_block(n - 1, n - 1, p2, &assemble_b_hat0(field, n));
    }
    for n in 1..p1 {
        m.write_block_conj_pair(n - 1, n, p2, &assemble_a_hat0(field, n));
    }
    FiberMatrix {
        matrix: m,
        quasimomentum: None,
    }
}

/// The phase-carrying remainder `J1(x, y) = J(x, y) - J0`, entrywise exact.
pub fn assemble_j1(field: &CoefficientField, x: f64, y: f64) -> FiberMatrix {
    assemble_j(field, x, y).sub(&assemble_j0(field))
}

/// The comparison diagonal `C = diag(C_1, ..., C_{p1})`.
///
/// Interior blocks `n ∈ [2, p1-1]` are `diag(c_n, 0, .., 0, c_n)` with
/// `c_n = |b0[n][p2]| + |a0[n][p2]| + |a0[n-1][p2]|`. The first and last
/// blocks carry the same corner weight built from their own wrap terms plus
/// the full diagonal `D`, `D_m = |a1[p1][m]| + |a0[p1][m]| + |a0[p1][m-1]|`
/// (`m-1` cyclic), which dominates the corner blocks `e^{∓iy} Â_{p1}`.
pub fn assemble_c(field: &CoefficientField) -> ComparisonDiagonal {
    let (p1, p2) = (field.p1(), field.p2());
    let mut values = vec![0.0; p1 * p2];

    let d: Vec<f64> = (1..=p2)
        .map(|m| {
            let prev = if m == 1 { p2 } else { m - 1 };
            field.a1(p1, m).norm() + field.a0(p1, m).norm() + field.a0(p1, prev).norm()
        })
        .collect();

    for n in 1..=p1 {
        let base = (n - 1) * p2;
        if n == 1 {
            let corner = field.b0(1, p2).norm() + field.a0(1, p2).norm();
            values[base] += corner;
            values[base + p2 - 1] += corner;
            for (m, dv) in d.iter().enumerate() {
                values[base + m] += dv;
            }
        } else if n == p1 {
            let corner = field.b0(p1, p2).norm() + field.a0(p1 - 1, p2).norm();
            values[base] += corner;
            values[base + p2 - 1] += corner;
            for (m, dv) in d.iter().enumerate() {
                values[base + m] += dv;
            }
        } else {
            let c_n = field.b0(n, p2).norm() + field.a0(n, p2).norm() + field.a0(n - 1, p2).norm();
            values[base] = c_n;
            values[base + p2 - 1] = c_n;
        }
    }

    ComparisonDiagonal { values }
}
