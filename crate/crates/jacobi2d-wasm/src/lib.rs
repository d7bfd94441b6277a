//! Browser bindings for the interactive demo page.
//!
//! Every export takes and returns JSON strings: coefficient fields use the
//! same file format as the CLI, results serialize the library's own report
//! types, and failures come back as `{"error": "..."}` so the page never
//! deals with exceptions. The functions are ordinary Rust underneath and are
//! unit-tested on the host.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use jacobi2d::{bounds, fiber, oracle, spectrum, CoefficientField, MomentumGrid};

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn ok_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).unwrap_or_else(err_json)
}

fn build_example(name: &str, p1: usize, p2: usize, seed: u32) -> Result<CoefficientField, String> {
    match name {
        "shifted-schrodinger" => CoefficientField::shifted_schrodinger(p1, p2),
        "diagonal-hopping" => CoefficientField::diagonal_hopping(p1, p2),
        "random" => CoefficientField::random(p1, p2, seed as u64),
        other => return Err(format!("unknown example {other:?}")),
    }
    .map_err(|e| e.to_string())
}

/// Coefficient file contents for one of the named examples
/// (`shifted-schrodinger`, `diagonal-hopping`, `random`).
#[wasm_bindgen]
pub fn example_field(name: &str, p1: usize, p2: usize, seed: u32) -> String {
    match build_example(name, p1, p2, seed) {
        Ok(field) => field.to_json(),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct BandSlice {
    x: Vec<f64>,
    /// `bands[n][k]` = n-th band at `x[k]`, fixed `y`.
    bands: Vec<Vec<f64>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    y: f64,
}

fn band_slice_impl(field_json: &str, nx: usize, y: f64) -> Result<BandSlice, String> {
    let field = CoefficientField::from_json(field_json).map_err(|e| e.to_string())?;
    if nx == 0 || nx > 1024 {
        return Err(format!("nx must be in [1, 1024], got {nx}"));
    }
    let dim = field.fiber_dimension();
    let grid = MomentumGrid::new(nx, 1).map_err(|e| e.to_string())?;
    let mut x = Vec::with_capacity(nx);
    let mut bands = vec![Vec::with_capacity(nx); dim];
    for k in 0..nx {
        let xk = grid.x(k);
        x.push(xk);
        let fiber_matrix = fiber::assemble_j(&field, xk, y);
        let ev = jacobi2d::hermitian_eigenvalues(fiber_matrix.matrix()).map_err(|e| e.to_string())?;
        for (n, v) in ev.values().iter().enumerate() {
            bands[n].push(*v);
        }
    }
    let envelope = bounds::band_envelope(&field).map_err(|e| e.to_string())?;
    Ok(BandSlice {
        x,
        bands,
        lower: envelope.lower().to_vec(),
        upper: envelope.upper().to_vec(),
        y,
    })
}

/// Band functions `λ_n(x, y)` along the `x` axis at fixed `y`, plus the
/// momentum-independent envelope `[λ_n^-, λ_n^+]` for shading.
#[wasm_bindgen]
pub fn band_slice(field_json: &str, nx: usize, y: f64) -> String {
    match band_slice_impl(field_json, nx, y) {
        Ok(slice) => ok_json(&slice),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct SpectrumSummary {
    intervals: Vec<[f64; 2]>,
    measure: f64,
    r_min: bounds::RMin,
    envelope_sum: f64,
    norm_bound: f64,
    schrodinger_bound: Option<f64>,
    grid: [usize; 2],
}

fn spectrum_report_impl(field_json: &str, nx: usize, ny: usize) -> Result<SpectrumSummary, String> {
    let field = CoefficientField::from_json(field_json).map_err(|e| e.to_string())?;
    if nx * ny > 64 * 64 {
        return Err(format!("grid {nx}x{ny} too large for the demo (max 4096 nodes)"));
    }
    let grid = MomentumGrid::new(nx, ny).map_err(|e| e.to_string())?;
    let set = spectrum::spectrum_estimate(&field, &grid).map_err(|e| e.to_string())?;
    let envelope = bounds::band_envelope(&field).map_err(|e| e.to_string())?;
    Ok(SpectrumSummary {
        intervals: set.intervals().iter().map(|iv| [iv.lo, iv.hi]).collect(),
        measure: set.measure(),
        r_min: bounds::r_min(&field),
        envelope_sum: bounds::envelope_sum(&envelope),
        norm_bound: bounds::norm_bound(&field),
        schrodinger_bound: bounds::schrodinger_bound(&field).ok(),
        grid: [nx, ny],
    })
}

/// Spectrum estimate (interval union and measure) together with every bound,
/// for the number-line plot.
#[wasm_bindgen]
pub fn spectrum_report(field_json: &str, nx: usize, ny: usize) -> String {
    match spectrum_report_impl(field_json, nx, ny) {
        Ok(summary) => ok_json(&summary),
        Err(e) => err_json(e),
    }
}

#[derive(Serialize)]
struct VerifySummary {
    enclosure_check: spectrum::EnclosureReport,
    sandwich_check: spectrum::SandwichReport,
    direct_integral_check: oracle::DirectIntegralReport,
    pass: bool,
}

fn verify_report_impl(
    field_json: &str,
    n1: usize,
    n2: usize,
    seed: u32,
) -> Result<VerifySummary, String> {
    let field = CoefficientField::from_json(field_json).map_err(|e| e.to_string())?;
    if !(1..=6).contains(&n1) || !(1..=6).contains(&n2) {
        return Err(format!("torus periods must be in [1, 6], got ({n1}, {n2})"));
    }
    let grid = MomentumGrid::new(16, 16).map_err(|e| e.to_string())?;
    let table = spectrum::sweep_bands(&field, &grid).map_err(|e| e.to_string())?;
    let envelope = bounds::band_envelope(&field).map_err(|e| e.to_string())?;
    let enclosure = spectrum::check_enclosure(&table, &envelope).map_err(|e| e.to_string())?;
    let sandwich =
        spectrum::check_sandwich(&field, 100, seed as u64).map_err(|e| e.to_string())?;
    let integral =
        oracle::verify_direct_integral(&field, n1, n2, None).map_err(|e| e.to_string())?;
    let pass = enclosure.pass && sandwich.pass && integral.pass;
    Ok(VerifySummary {
        enclosure_check: enclosure,
        sandwich_check: sandwich,
        direct_integral_check: integral,
        pass,
    })
}

/// Runs the three verification checks (envelope enclosure on a 16x16 grid,
/// `C ± J1` positivity at 100 seeded momenta, torus-vs-fibers multiset
/// comparison) and reports each outcome.
#[wasm_bindgen]
pub fn verify_report(field_json: &str, n1: usize, n2: usize, seed: u32) -> String {
    match verify_report_impl(field_json, n1, n2, seed) {
        Ok(summary) => ok_json(&summary),
        Err(e) => err_json(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_fields_parse_back() {
        for name in ["shifted-schrodinger", "diagonal-hopping", "random"] {
            let json = example_field(name, 3, 3, 7);
            assert!(!json.contains("\"error\""), "{name}: {json}");
            assert!(CoefficientField::from_json(&json).is_ok());
        }
        assert!(example_field("nope", 3, 3, 0).contains("\"error\""));
        assert!(example_field("random", 2, 3, 0).contains("PeriodTooSmall"));
    }

    #[test]
    fn band_slice_shape_and_envelope() {
        let field = example_field("shifted-schrodinger", 3, 3, 0);
        let slice = band_slice_impl(&field, 32, 0.5).unwrap();
        assert_eq!(slice.x.len(), 32);
        assert_eq!(slice.bands.len(), 9);
        assert_eq!(slice.lower.len(), 9);
        for band in &slice.bands {
            assert_eq!(band.len(), 32);
        }
        // every sample inside its envelope slot
        for (n, band) in slice.bands.iter().enumerate() {
            for v in band {
                assert!(slice.lower[n] - 1e-9 <= *v && *v <= slice.upper[n] + 1e-9);
            }
        }
        assert!(band_slice(&field, 0, 0.0).contains("\"error\""));
    }

    #[test]
    fn spectrum_report_matches_known_measure() {
        let field = example_field("shifted-schrodinger", 3, 3, 0);
        let report = spectrum_report_impl(&field, 64, 64).unwrap();
        assert_eq!(report.intervals.len(), 1);
        assert!((report.measure - 12.0).abs() < 1e-6);
        assert_eq!(report.r_min.value, 12.0);
        assert_eq!(report.schrodinger_bound, Some(12.0));
        assert_eq!(report.norm_bound, 28.0);
    }

    #[test]
    fn verify_report_passes_on_random_field() {
        let field = example_field("random", 3, 3, 11);
        let report = verify_report_impl(&field, 2, 2, 0).unwrap();
        assert!(report.pass);
        assert!(report.enclosure_check.pass);
        assert!(report.sandwich_check.pass);
        assert!(report.direct_integral_check.pass);
        assert!(verify_report(&field, 9, 2, 0).contains("\"error\""));
    }

    #[test]
    fn malformed_field_reports_error_string() {
        let out = spectrum_report("{bad", 8, 8);
        assert!(out.contains("\"error\""));
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_string());
    }
}
