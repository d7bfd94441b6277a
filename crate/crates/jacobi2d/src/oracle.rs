//! Brute-force verification against the operator on a finite torus.
//!
//! Restricting the operator to `N1` periods of layers and `N2` periods
//! within each layer, with periodic identification in both directions, gives
//! a finite Hermitian matrix whose spectrum is exactly the union of the
//! fiber spectra at the discrete momenta compatible with the torus: the
//! in-layer translation by `p2` has order `N2`, so `x ∈ {2πj/N2}`, and the
//! layer translation by `p1` has order `N1`, so `y ∈ {2πk/N1}`.
//!
//! That turns the direct-integral decomposition into a bit-level testable
//! statement: sorted torus eigenvalues must equal the pooled sorted fiber
//! eigenvalues elementwise. Every sign, phase, and index convention in
//! [`crate::fiber`] is exercised by this comparison; nothing else in the
//! crate is trusted until it passes.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::coefficients::CoefficientField;
use crate::eigen::hermitian_eigenvalues;
use crate::fiber::assemble_j;
use crate::matrix::ComplexMatrix;
use crate::spectrum::{Interval, IntervalSet};
use crate::{defaults, tol, Error};

/// The operator restricted to an `N1 × N2`-period torus.
#[derive(Debug, Clone)]
pub struct TorusOperator {
    matrix: ComplexMatrix,
    n1: usize,
    n2: usize,
    p1: usize,
    p2: usize,
}

impl TorusOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.size()
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn p1(&self) -> usize {
        self.p1
    }

    pub fn p2(&self) -> usize {
        self.p2
    }
}

/// Builds the torus operator with the default dimension cap.
pub fn build_torus(
    field: &CoefficientField,
    n1: usize,
    n2: usize,
) -> Result<TorusOperator, Error> {
    build_torus_with_cap(field, n1, n2, defaults::DIMENSION_CAP)
}

/// Builds the torus operator, refusing dimensions above `cap` (dense solves
/// beyond desk scale are not this module's job).
///
/// Sites are `(n, m)` with `n ∈ [1, p1·N1]`, `m ∈ [1, p2·N2]`, flattened
/// layer-major like the fiber blocks. Row `(n, m)` carries the on-site term
/// `b1`, the in-layer couplings to `m ± 1` from `b0`, and the couplings to
/// layer `n + 1` at columns `m - 1, m, m + 1` from `a0, a1, a0` — the matrix
/// elements of the layer-hopping Jacobi operator. Hermitian mirrors close
/// the backward couplings; all indices wrap.
pub fn build_torus_with_cap(
    field: &CoefficientField,
    n1: usize,
    n2: usize,
    cap: usize,
) -> Result<TorusOperator, Error> {
    assert!(n1 >= 1 && n2 >= 1, "period counts must be positive");
    let (p1, p2) = (field.p1(), field.p2());
    let rows = p1 * n1;
    let cols = p2 * n2;
    let dim = rows * cols;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }

    let idx = |n: usize, m: usize| (n - 1) * cols + (m - 1);
    let wrap = |v: usize, len: usize| (v - 1) % len + 1; // 1-based cyclic

    let mut matrix = ComplexMatrix::zero(dim);
    for n in 1..=rows {
        for m in 1..=cols {
            let (rn, rm) = field.reduce(n as i64, m as i64);
            let here = idx(n, m);

            matrix.set(here, here, Complex64::new(field.b1(rn, rm), 0.0));

            // in-layer bond m -> m+1 carries conj(b0[n][m])
            let m_next = wrap(m + 1, cols);
            matrix.set_pair(here, idx(n, m_next), field.b0(rn, rm).conj());

            // layer bond n -> n+1: matrix elements of A_n
            let n_next = wrap(n + 1, rows);
            matrix.set_pair(here, idx(n_next, m), field.a1(rn, rm));
            matrix.set_pair(here, idx(n_next, m_next), field.a0(rn, rm).conj());
            let m_prev = wrap(m + cols - 1, cols);
            let (_, rm_prev) = field.reduce(rn as i64, m as i64 - 1);
            matrix.set_pair(here, idx(n_next, m_prev), field.a0(rn, rm_prev));
        }
    }

    Ok(TorusOperator {
        matrix,
        n1,
        n2,
        p1,
        p2,
    })
}

/// The discrete momenta compatible with an `N1 × N2` torus, and the sorted
/// fiber eigenvalues pooled over all of them.
fn pooled_fiber_eigenvalues(
    field: &CoefficientField,
    n1: usize,
    n2: usize,
) -> Result<Vec<f64>, Error> {
    let mut pooled = Vec::with_capacity(field.fiber_dimension() * n1 * n2);
    for j in 0..n2 {
        let x = TAU * j as f64 / n2 as f64;
        for k in 0..n1 {
            let y = TAU * k as f64 / n1 as f64;
            let ev = hermitian_eigenvalues(assemble_j(field, x, y).matrix())?;
            pooled.extend_from_slice(ev.values());
        }
    }
    pooled.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(pooled)
}

/// Matrix dimensions involved in a direct-integral comparison.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DirectIntegralDims {
    pub torus: usize,
    pub fiber: usize,
    pub n1: usize,
    pub n2: usize,
}

/// Outcome of the torus-vs-fibers multiset comparison.
#[derive(Debug, Clone, Serialize)]
pub struct DirectIntegralReport {
    pub pass: bool,
    pub max_abs_diff: f64,
    pub tol: f64,
    pub dimensions: DirectIntegralDims,
}

/// Compares sorted torus eigenvalues to pooled sorted fiber eigenvalues
/// elementwise. `tol` defaults to
/// `tol::DIRECT_INTEGRAL_REL · (1 + ‖torus‖_F)`.
pub fn verify_direct_integral(
    field: &CoefficientField,
    n1: usize,
    n2: usize,
    tol_abs: Option<f64>,
) -> Result<DirectIntegralReport, Error> {
    let torus = build_torus(field, n1, n2)?;
    let torus_ev = hermitian_eigenvalues(torus.matrix())?;
    let fiber_ev = pooled_fiber_eigenvalues(field, n1, n2)?;
    debug_assert_eq!(torus_ev.len(), fiber_ev.len());

    let max_abs_diff = torus_ev
        .values()
        .iter()
        .zip(&fiber_ev)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let tol = tol_abs
        .unwrap_or_else(|| tol::DIRECT_INTEGRAL_REL * (1.0 + torus.matrix().frobenius_norm()));

    Ok(DirectIntegralReport {
        pass: max_abs_diff <= tol,
        max_abs_diff,
        tol,
        dimensions: DirectIntegralDims {
            torus: torus.dimension(),
            fiber: field.fiber_dimension(),
            n1,
            n2,
        },
    })
}

/// Coarse spectrum estimate from discrete momenta only: per-fiber sorted
/// eigenvalues grouped by band index, hulled across fibers, unioned. Always
/// contained in any grid estimate whose grid includes these momenta.
pub fn brute_measure(
    field: &CoefficientField,
    n1: usize,
    n2: usize,
) -> Result<IntervalSet, Error> {
    // Respect the same cap as the torus build: this is the same desk-scale
    // budget even though only fibers are solved here.
    let dim = field.fiber_dimension() * n1 * n2;
    if dim > defaults::DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: defaults::DIMENSION_CAP,
        });
    }
    let bands = field.fiber_dimension();
    let mut hulls = vec![
        Interval {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        };
        bands
    ];
    for j in 0..n2 {
        let x = TAU * j as f64 / n2 as f64;
        for k in 0..n1 {
            let y = TAU * k as f64 / n1 as f64;
            let ev = hermitian_eigenvalues(assemble_j(field, x, y).matrix())?;
            for (hull, v) in hulls.iter_mut().zip(ev.values()) {
                hull.lo = hull.lo.min(*v);
                hull.hi = hull.hi.max(*v);
            }
        }
    }
    Ok(IntervalSet::from_unsorted(hulls))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{spectrum_estimate, MomentumGrid};

    #[test]
    fn zero_field_torus_is_zero() {
        let mut raw = CoefficientField::shifted_schrodinger(3, 3).unwrap().to_raw();
        for n in 0..3 {
            for m in 0..3 {
                raw.b0[n][m] = [0.0, 0.0];
                raw.b1[n][m] = crate::coefficients::RealEntry::Real(0.0);
            }
        }
        let f = CoefficientField::validate(&raw).unwrap();
        let t = build_torus(&f, 2, 2).unwrap();
        assert_eq!(t.matrix().max_abs(), 0.0);
        assert!(verify_direct_integral(&f, 2, 2, None).unwrap().pass);
    }

    #[test]
    fn single_period_torus_equals_fiber_at_origin() {
        let f = CoefficientField::random(3, 3, 6).unwrap();
        let t = build_torus(&f, 1, 1).unwrap();
        let j00 = assemble_j(&f, 0.0, 0.0);
        let diff = t.matrix().sub(j00.matrix()).max_abs();
        assert!(diff <= 1e-15, "torus(1,1) vs J(0,0): {diff}");
    }

    #[test]
    fn torus_is_exactly_hermitian_and_banded() {
        let f = CoefficientField::random(3, 3, 14).unwrap();
        let t = build_torus(&f, 2, 2).unwrap();
        assert_eq!(t.matrix().hermiticity_defect(), 0.0);

        // nonzeros only on-site, in-layer to m±1, and between adjacent layers
        // at m-1, m, m+1 (everything cyclic)
        let (rows, cols) = (6_i64, 6_i64);
        for i in 0..t.dimension() {
            for j in 0..t.dimension() {
                if t.matrix().entry(i, j) == Complex64::ZERO {
                    continue;
                }
                let (ni, mi) = ((i / 6) as i64, (i % 6) as i64);
                let (nj, mj) = ((j / 6) as i64, (j % 6) as i64);
                let dn = (ni - nj).rem_euclid(rows).min((nj - ni).rem_euclid(rows));
                let dm = (mi - mj).rem_euclid(cols).min((mj - mi).rem_euclid(cols));
                let ok = (dn == 0 && dm <= 1) || (dn == 1 && dm <= 1);
                assert!(ok, "unexpected nonzero at ({i}, {j})");
            }
        }
    }

    #[test]
    fn torus_trace_identity() {
        let f = CoefficientField::random(3, 4, 25).unwrap();
        let t = build_torus(&f, 2, 2).unwrap();
        let mut cell_sum = 0.0;
        for n in 1..=3 {
            for m in 1..=4 {
                cell_sum += f.b1(n, m);
            }
        }
        let tr = t.matrix().trace();
        assert!(tr.im == 0.0);
        assert!(
            (tr.re - 4.0 * cell_sum).abs() <= 1e-12 * (1.0 + tr.re.abs()),
            "trace {} vs {}",
            tr.re,
            4.0 * cell_sum
        );
    }

    #[test]
    fn direct_integral_shifted_schrodinger() {
        let f = CoefficientField::shifted_schrodinger(3, 3).unwrap();
        let report = verify_direct_integral(&f, 3, 3, None).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.dimensions.torus, 81);
        assert_eq!(report.dimensions.fiber, 9);
    }

    #[test]
    fn direct_integral_random_fields() {
        for seed in [0, 1, 2] {
            let f = CoefficientField::random(3, 3, seed).unwrap();
            let report = verify_direct_integral(&f, 2, 2, None).unwrap();
            assert!(report.pass, "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn direct_integral_asymmetric_period_counts() {
        // N1 ≠ N2 pins the momentum-to-direction assignment: x momenta come
        // from N2, y momenta from N1. Swapping them fails this test.
        for seed in [3, 4] {
            let f = CoefficientField::random(3, 3, seed).unwrap();
            for (n1, n2) in [(1, 3), (3, 1), (2, 3)] {
                let report = verify_direct_integral(&f, n1, n2, None).unwrap();
                assert!(report.pass, "seed {seed} N=({n1},{n2}): {report:?}");
            }
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let f = CoefficientField::random(3, 3, 0).unwrap();
        assert!(matches!(
            build_torus_with_cap(&f, 3, 3, 80).unwrap_err(),
            Error::DimensionCap { dim: 81, cap: 80 }
        ));
        assert!(build_torus_with_cap(&f, 3, 3, 81).is_ok());
    }

    #[test]
    fn brute_measure_contained_in_grid_estimate() {
        let f = CoefficientField::shifted_schrodinger(3, 3).unwrap();
        let brute = brute_measure(&f, 4, 4).unwrap();
        // 16x16 grid contains the 4x4 discrete momenta
        let grid = MomentumGrid::new(16, 16).unwrap();
        let full = spectrum_estimate(&f, &grid).unwrap();
        assert!(brute.contained_in(&full, 1e-9));
        assert!(brute.min().unwrap() >= 2.0 - 1e-9);
        assert!(brute.max().unwrap() <= 14.0 + 1e-9);

        for seed in [5, 6] {
            let g = CoefficientField::random(3, 3, seed).unwrap();
            let b = brute_measure(&g, 4, 4).unwrap();
            let s = spectrum_estimate(&g, &MomentumGrid::new(8, 8).unwrap()).unwrap();
            assert!(b.contained_in(&s, 1e-9), "seed {seed}");
        }
    }
}
