//! Band envelopes and measure-of-spectrum bounds.
//!
//! Because `-C ≤ J1(x, y) ≤ C` uniformly in quasimomentum, the eigenvalues of
//! the momentum-independent matrices `J0 - C` and `J0 + C` bracket every band
//! function: `λ_n^- ≤ λ_n(x, y) ≤ λ_n^+`. Summing the bracket widths bounds
//! the Lebesgue measure of the spectrum, and that sum collapses to the closed
//! form `2 Tr C = r(p1, p2)`, evaluable directly from coefficient moduli.
//!
//! `r(α, β)` is the same closed form after relabeling cell `(α, β)` to the
//! base position, so minimizing it over one fundamental cell gives the best
//! bound this route can produce. A cruder bound `2‖J‖`-style estimate
//! ([`norm_bound`]) and a sharper two-term bound for the diagonal-hopping
//! case ([`schrodinger_bound`]) are provided for comparison; notably,
//! `r` does not depend on the on-site terms `b1` at all, while the norm
//! bound does.

use serde::Serialize;

use crate::coefficients::CoefficientField;
use crate::eigen::hermitian_eigenvalues;
use crate::fiber::{assemble_c, assemble_j0};
use crate::Error;

/// The envelope eigenvalues `λ_n^±`: `lower` from `J0 - C`, `upper` from
/// `J0 + C`, both ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct BandEnvelope {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BandEnvelope {
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }
}

/// Location and value of the minimal `r(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RMin {
    pub alpha: usize,
    pub beta: usize,
    pub value: f64,
}

/// Everything the bound machinery can say about one field.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub r_table: Vec<Vec<f64>>,
    pub r_min: RMin,
    pub norm_bound: f64,
    pub schrodinger_bound: Option<f64>,
    pub envelope_sum: f64,
}

/// Envelope eigenvalues of `J0 ∓ C`. Independent of quasimomentum.
pub fn band_envelope(field: &CoefficientField) -> Result<BandEnvelope, Error> {
    let j0 = assemble_j0(field);
    let c = assemble_c(field);
    let lower = hermitian_eigenvalues(&j0.matrix().sub_real_diagonal(c.values()))?;
    let upper = hermitian_eigenvalues(&j0.matrix().add_real_diagonal(c.values()))?;
    Ok(BandEnvelope {
        lower: lower.into_values(),
        upper: upper.into_values(),
    })
}

/// `Σ_n (λ_n^+ - λ_n^-)`, the total envelope width. Equals `2 Tr C` up to
/// eigensolver rounding.
pub fn envelope_sum(envelope: &BandEnvelope) -> f64 {
    envelope
        .upper
        .iter()
        .zip(&envelope.lower)
        .map(|(u, l)| u - l)
        .sum()
}

/// The measure bound evaluated at cell `(alpha, beta)`:
///
/// ```text
/// r(α, β) = 4 Σ_n |b0[n][β]| + 8 Σ_n |a0[n][β]| - 8 |a0[α][β]|
///         + 8 Σ_m |a0[α][m]| + 4 Σ_m |a1[α][m]|
/// ```
///
/// Sums run left to right in index order so results are reproducible.
pub fn r_value(field: &CoefficientField, alpha: usize, beta: usize) -> Result<f64, Error> {
    let (p1, p2) = (field.p1(), field.p2());
    if alpha < 1 || alpha > p1 || beta < 1 || beta > p2 {
        return Err(Error::IndexOutOfRange {
            alpha,
            beta,
            p1,
            p2,
        });
    }
    let mut b0_col = 0.0;
    let mut a0_col = 0.0;
    for n in 1..=p1 {
        b0_col += field.b0(n, beta).norm();
        a0_col += field.a0(n, beta).norm();
    }
    let mut a0_row = 0.0;
    let mut a1_row = 0.0;
    for m in 1..=p2 {
        a0_row += field.a0(alpha, m).norm();
        a1_row += field.a1(alpha, m).norm();
    }
    Ok(4.0 * b0_col + 8.0 * a0_col - 8.0 * field.a0(alpha, beta).norm() + 8.0 * a0_row
        + 4.0 * a1_row)
}

/// The full `p1 × p2` table of `r(α, β)`.
pub fn r_table(field: &CoefficientField) -> Vec<Vec<f64>> {
    (1..=field.p1())
        .map(|alpha| {
            (1..=field.p2())
                .map(|beta| r_value(field, alpha, beta).expect("indices in range"))
                .collect()
        })
        .collect()
}

/// Exhaustive minimum of `r` over one fundamental cell (periodicity makes
/// that the global minimum). Ties break to the smallest `alpha`, then `beta`.
pub fn r_min(field: &CoefficientField) -> RMin {
    let mut best = RMin {
        alpha: 1,
        beta: 1,
        value: r_value(field, 1, 1).expect("indices in range"),
    };
    for alpha in 1..=field.p1() {
        for beta in 1..=field.p2() {
            let value = r_value(field, alpha, beta).expect("indices in range");
            if value < best.value {
                best = RMin { alpha, beta, value };
            }
        }
    }
    best
}

/// The explicit operator-norm bound
/// `max_n(8 max_m|a0| + 4 max_m|a1|) + max_n(4 max_m|b0| + 2 max_m|b1|)`.
///
/// Unlike `r`, this depends on the on-site terms `b1`, so it degrades badly
/// when they are large.
pub fn norm_bound(field: &CoefficientField) -> f64 {
    let (p1, p2) = (field.p1(), field.p2());
    let mut a_part = 0.0_f64;
    let mut b_part = 0.0_f64;
    for n in 1..=p1 {
        let mut a0_max = 0.0_f64;
        let mut a1_max = 0.0_f64;
        let mut b0_max = 0.0_f64;
        let mut b1_max = 0.0_f64;
        for m in 1..=p2 {
            a0_max = a0_max.max(field.a0(n, m).norm());
            a1_max = a1_max.max(field.a1(n, m).norm());
            b0_max = b0_max.max(field.b0(n, m).norm());
            b1_max = b1_max.max(field.b1(n, m).abs());
        }
        a_part = a_part.max(8.0 * a0_max + 4.0 * a1_max);
        b_part = b_part.max(4.0 * b0_max + 2.0 * b1_max);
    }
    a_part + b_part
}

/// The diagonal-hopping bound
/// `4 min_β Σ_n |b0[n][β]| + 4 min_α Σ_m |a1[α][m]|`.
///
/// Requires `a0 ≡ 0` exactly (layer hopping diagonal).
pub fn schrodinger_bound(field: &CoefficientField) -> Result<f64, Error> {
    if let Some((n, m, z)) = field.first_nonzero_a0() {
        return Err(Error::NotDiagonalHopping {
            n,
            m,
            re: z.re,
            im: z.im,
        });
    }
    let (p1, p2) = (field.p1(), field.p2());
    let mut b0_min = f64::INFINITY;
    for beta in 1..=p2 {
        let mut sum = 0.0;
        for n in 1..=p1 {
            sum += field.b0(n, beta).norm();
        }
        b0_min = b0_min.min(sum);
    }
    let mut a1_min = f64::INFINITY;
    for alpha in 1..=p1 {
        let mut sum = 0.0;
        for m in 1..=p2 {
            sum += field.a1(alpha, m).norm();
        }
        a1_min = a1_min.min(sum);
    }
    Ok(4.0 * b0_min + 4.0 * a1_min)
}

/// Relabels the field so the argmin of `r` sits at the base cell, then
/// computes the envelope there. The returned envelope satisfies
/// `envelope_sum == r_min` up to rounding, which is the sharp form of the
/// measure bound.
pub fn sharp_band_envelope(field: &CoefficientField) -> Result<(RMin, BandEnvelope), Error> {
    let best = r_min(field);
    let relabeled = field.relabel(best.alpha, best.beta)?;
    Ok((best, band_envelope(&relabeled)?))
}

/// Assembles the complete [`BoundReport`] for one field.
pub fn bound_report(field: &CoefficientField) -> Result<BoundReport, Error> {
    let envelope = band_envelope(field)?;
    Ok(BoundReport {
        r_table: r_table(field),
        r_min: r_min(field),
        norm_bound: norm_bound(field),
        schrodinger_bound: schrodinger_bound(field).ok(),
        envelope_sum: envelope_sum(&envelope),
    })
}
