//! Brillouin-zone sweeps, interval unions, and numerical verification.
//!
//! A [`MomentumGrid`] samples the quasimomentum square at `x_k = 2πk/nx`,
//! `y_l = 2πl/ny` (endpoint excluded — the fibers are periodic). Sweeping the
//! grid gives a [`BandTable`] of sorted fiber eigenvalues; per-band min/max
//! hulls union into an [`IntervalSet`] whose measure approximates the
//! Lebesgue measure of the spectrum from inside, monotonically in grid
//! refinement.
//!
//! Two verification routines turn the structural facts behind the envelope
//! bounds into numbers: [`check_sandwich`] samples seeded random momenta and
//! confirms `C ± J1 ⪰ 0`, and [`check_enclosure`] confirms that every
//! sampled band value sits inside its envelope slot.

use serde::Serialize;
use std::f64::consts::TAU;

use crate::bounds::BandEnvelope;
use crate::coefficients::CoefficientField;
use crate::eigen::{hermitian_eigenvalues, min_eigenvalue};
use crate::fiber::{assemble_c, assemble_j, assemble_j1, ComparisonDiagonal};
use crate::{rng, tol, Error};

/// Uniform sampling of `[0, 2π)²` with `nx × ny` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentumGrid {
    nx: usize,
    ny: usize,
}

impl MomentumGrid {
    pub fn new(nx: usize, ny: usize) -> Result<Self, Error> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid { nx, ny });
        }
        Ok(Self { nx, ny })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// `x_k = 2πk / nx`. Computed as `(τ·k)/nx` so that refining the grid by
    /// a power of two reuses the exact same sample values.
    pub fn x(&self, k: usize) -> f64 {
        TAU * k as f64 / self.nx as f64
    }

    pub fn y(&self, l: usize) -> f64 {
        TAU * l as f64 / self.ny as f64
    }
}

/// Sampled band functions: `value(k, l, n)` is the `n`-th eigenvalue of the
/// fiber at `(x_k, y_l)`, ascending in `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTable {
    grid: MomentumGrid,
    n_bands: usize,
    values: Vec<f64>,
}

impl BandTable {
    pub fn grid(&self) -> MomentumGrid {
        self.grid
    }

    pub fn n_bands(&self) -> usize {
        self.n_bands
    }

    #[inline]
    pub fn value(&self, k: usize, l: usize, n: usize) -> f64 {
        self.values[(k * self.grid.ny + l) * self.n_bands + n]
    }

    /// All bands of the fiber at grid node `(k, l)`, ascending.
    pub fn fiber(&self, k: usize, l: usize) -> &[f64] {
        let base = (k * self.grid.ny + l) * self.n_bands;
        &self.values[base..base + self.n_bands]
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// CSV export: header `x,y,band,lambda`, one row per `(k, l, n)` in
    /// lexicographic order, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,band,lambda\n");
        for k in 0..self.grid.nx {
            for l in 0..self.grid.ny {
                for n in 0..self.n_bands {
                    out.push_str(&format!(
                        "{:.11e},{:.11e},{},{:.11e}\n",
                        self.grid.x(k),
                        self.grid.y(l),
                        n + 1,
                        self.value(k, l, n)
                    ));
                }
            }
        }
        out
    }
}

/// A closed real interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Sorted, pairwise disjoint closed intervals.
///
/// Construction merges overlapping intervals and intervals whose gap is below
/// `tol::INTERVAL_MERGE_REL` relative to the local endpoint scale: band edges
/// attained at shared grid momenta agree only to eigensolver rounding, and
/// spectra are closed sets, so near-touching hulls are one interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn from_unsorted(mut items: Vec<Interval>) -> Self {
        items.retain(|iv| iv.lo.is_finite() && iv.hi.is_finite());
        items.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite endpoints"));
        let mut merged: Vec<Interval> = Vec::with_capacity(items.len());
        for iv in items {
            debug_assert!(iv.lo <= iv.hi);
            match merged.last_mut() {
                Some(last) => {
                    let gap_tol =
                        tol::INTERVAL_MERGE_REL * (1.0 + last.hi.abs().max(iv.lo.abs()));
                    if iv.lo <= last.hi + gap_tol {
                        last.hi = last.hi.max(iv.hi);
                    } else {
                        merged.push(iv);
                    }
                }
                None => merged.push(iv),
            }
        }
        IntervalSet { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length `Σ (hi - lo)`.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }

    pub fn min(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.lo)
    }

    pub fn max(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.hi)
    }

    /// True if every interval of `self` lies inside some interval of `other`,
    /// allowing `slack` at both ends.
    pub fn contained_in(&self, other: &IntervalSet, slack: f64) -> bool {
        self.intervals.iter().all(|iv| {
            other
                .intervals
                .iter()
                .any(|ov| ov.lo - slack <= iv.lo && iv.hi <= ov.hi + slack)
        })
    }
}

/// Solves every fiber on the grid. Fibers are independent; the loop is
/// sequential so the table layout is schedule-free by construction.
pub fn sweep_bands(field: &CoefficientField, grid: &MomentumGrid) -> Result<BandTable, Error> {
    let n_bands = field.fiber_dimension();
    let mut values = Vec::with_capacity(grid.nx * grid.ny * n_bands);
    for k in 0..grid.nx {
        let x = grid.x(k);
        for l in 0..grid.ny {
            let fiber = assemble_j(field, x, grid.y(l));
            let ev = hermitian_eigenvalues(fiber.matrix())?;
            values.extend_from_slice(ev.values());
        }
    }
    Ok(BandTable {
        grid: *grid,
        n_bands,
        values,
    })
}

/// Min/max hull of each band function over the grid.
pub fn band_intervals(table: &BandTable) -> Vec<Interval> {
    let mut hulls = vec![
        Interval {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        };
        table.n_bands
    ];
    for k in 0..table.grid.nx {
        for l in 0..table.grid.ny {
            for (n, hull) in hulls.iter_mut().enumerate() {
                let v = table.value(k, l, n);
                hull.lo = hull.lo.min(v);
                hull.hi = hull.hi.max(v);
            }
        }
    }
    hulls
}

/// Grid estimate of the spectrum: the union of all band hulls. Converges to
/// the true spectrum from inside as the grid refines.
pub fn spectrum_estimate(
    field: &CoefficientField,
    grid: &MomentumGrid,
) -> Result<IntervalSet, Error> {
    let table = sweep_bands(field, grid)?;
    Ok(IntervalSet::from_unsorted(band_intervals(&table)))
}

/// Outcome of the `C ± J1 ⪰ 0` sampling check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub pass: bool,
    pub samples: usize,
    pub seed: u64,
    /// Smallest eigenvalue seen over all samples and both signs.
    pub worst_min_eigenvalue: f64,
    /// Tolerance in force at the worst sample.
    pub worst_tol: f64,
    pub worst_x: f64,
    pub worst_y: f64,
    /// Which side produced the worst value: `"C+J1"` or `"C-J1"`.
    pub worst_side: String,
}

/// Samples `sample_count` seeded momenta and checks that `C + J1` and
/// `C - J1` stay positive semidefinite within `tol::PSD_REL`.
pub fn check_sandwich(
    field: &CoefficientField,
    sample_count: usize,
    seed: u64,
) -> Result<SandwichReport, Error> {
    check_sandwich_with(field, &assemble_c(field), sample_count, seed, tol::PSD_REL)
}

/// [`check_sandwich`] against an explicit comparison diagonal and relative
/// tolerance. Exposed so tests can demonstrate that a weakened diagonal
/// breaks the sandwich.
pub fn check_sandwich_with(
    field: &CoefficientField,
    comparison: &ComparisonDiagonal,
    sample_count: usize,
    seed: u64,
    tol_rel: f64,
) -> Result<SandwichReport, Error> {
    assert!(sample_count >= 1, "sample_count must be at least 1");
    let mut gen = rng::seeded(seed);
    let cmat = comparison.to_matrix();
    let cmax = comparison.max_value();

    let mut report = SandwichReport {
        pass: true,
        samples: sample_count,
        seed,
        worst_min_eigenvalue: f64::INFINITY,
        worst_tol: 0.0,
        worst_x: 0.0,
        worst_y: 0.0,
        worst_side: String::new(),
    };
    let mut worst_margin = f64::INFINITY;

    for _ in 0..sample_count {
        let x = TAU * rng::unit_f64(&mut gen);
        let y = TAU * rng::unit_f64(&mut gen);
        let j1 = assemble_j1(field, x, y);
        let psd_tol = tol_rel * (1.0 + cmax + j1.matrix().max_abs());
        for (side, m) in [
            ("C+J1", cmat.add(j1.matrix())),
            ("C-J1", cmat.sub(j1.matrix())),
        ] {
            let min_ev = min_eigenvalue(&m)?;
            let margin = min_ev + psd_tol;
            if margin < worst_margin {
                worst_margin = margin;
                report.worst_min_eigenvalue = min_ev;
                report.worst_tol = psd_tol;
                report.worst_x = x;
                report.worst_y = y;
                report.worst_side = side.to_string();
            }
        }
    }
    report.pass = worst_margin >= 0.0;
    Ok(report)
}

/// Outcome of the envelope-enclosure check.
#[derive(Debug, Clone, Serialize)]
pub struct EnclosureReport {
    pub pass: bool,
    /// Smallest of `value - lower[n]` and `upper[n] - value` over the table;
    /// negative means a value escaped its envelope slot by that much.
    pub worst_margin: f64,
    pub tol: f64,
    pub grid: [usize; 2],
    pub bands: usize,
}

/// Checks `lower[n] - tol ≤ λ_n(x_k, y_l) ≤ upper[n] + tol` for every table
/// entry, with `tol = tol::ENCLOSURE_REL · (1 + max|value|)`.
pub fn check_enclosure(
    table: &BandTable,
    envelope: &BandEnvelope,
) -> Result<EnclosureReport, Error> {
    check_enclosure_with(table, envelope, tol::ENCLOSURE_REL)
}

/// [`check_enclosure`] with an explicit relative tolerance.
pub fn check_enclosure_with(
    table: &BandTable,
    envelope: &BandEnvelope,
    tol_rel: f64,
) -> Result<EnclosureReport, Error> {
    if envelope.len() != table.n_bands() {
        return Err(Error::DimensionMismatch {
            expected: table.n_bands(),
            got: envelope.len(),
        });
    }
    let env_scale = envelope
        .lower()
        .iter()
        .chain(envelope.upper())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let tol = tol_rel * (1.0 + table.max_abs_value().max(env_scale));

    let mut worst = f64::INFINITY;
    for k in 0..table.grid().nx() {
        for l in 0..table.grid().ny() {
            for n in 0..table.n_bands() {
                let v = table.value(k, l, n);
                let margin = (v - envelope.lower()[n]).min(envelope.upper()[n] - v);
                worst = worst.min(margin);
            }
        }
    }
    Ok(EnclosureReport {
        pass: worst >= -tol,
        worst_margin: worst,
        tol,
        grid: [table.grid().nx(), table.grid().ny()],
        bands: table.n_bands(),
    })
}
