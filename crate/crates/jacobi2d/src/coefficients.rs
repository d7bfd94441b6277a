//! Doubly periodic coefficient data defining the operator.
//!
//! One fundamental cell of each of the four coefficient arrays is stored:
//! `a0`, `a1` (layer-to-layer hopping), `b0`, `b1` (in-layer hopping and
//! on-site terms), each of shape `p1 × p2`. Periodicity extends them to all
//! of `ℤ²`, so the cell is sufficient for every assembly routine. Indices are
//! 1-based on the public surface, matching the conventional labeling
//! `n ∈ [1, p1]`, `m ∈ [1, p2]`; the internal layout is row-major
//! `(n-1)·p2 + (m-1)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::Error;

/// A validated fundamental cell of coefficients.
///
/// Immutable after construction; all operations on it are pure, so values may
/// be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    p1: usize,
    p2: usize,
    a0: Vec<Complex64>,
    a1: Vec<Complex64>,
    b0: Vec<Complex64>,
    b1: Vec<f64>,
}

/// Serialization image of a coefficient file.
///
/// Complex entries are `[re, im]` pairs; `b1` entries are plain reals but a
/// `[re, im]` pair is accepted on input so that a complex value there can be
/// rejected with a precise diagnostic rather than a generic parse error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCoefficients {
    pub p1: usize,
    pub p2: usize,
    pub a0: Vec<Vec<[f64; 2]>>,
    pub a1: Vec<Vec<[f64; 2]>>,
    pub b0: Vec<Vec<[f64; 2]>>,
    pub b1: Vec<Vec<RealEntry>>,
}

/// A `b1` file entry: either a plain real or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealEntry {
    Real(f64),
    Pair([f64; 2]),
}

impl CoefficientField {
    /// Validates raw coefficient data into a field.
    ///
    /// Checks periods (`p1, p2 >= 3`), array shapes, finiteness of every
    /// entry, and realness of `b1`.
    pub fn validate(raw: &RawCoefficients) -> Result<Self, Error> {
        let (p1, p2) = (raw.p1, raw.p2);
        if p1 < 3 || p2 < 3 {
            return Err(Error::PeriodTooSmall { p1, p2 });
        }

        let complex_array = |name: &'static str,
                             rows: &Vec<Vec<[f64; 2]>>|
         -> Result<Vec<Complex64>, Error> {
            check_shape(name, rows.len(), rows.iter().map(|r| r.len()), p1, p2)?;
            let mut out = Vec::with_capacity(p1 * p2);
            for (n, row) in rows.iter().enumerate() {
                for (m, &[re, im]) in row.iter().enumerate() {
                    if !re.is_finite() || !im.is_finite() {
                        return Err(Error::NonFinite {
                            context: name,
                            row: n + 1,
                            col: m + 1,
                        });
                    }
                    out.push(Complex64::new(re, im));
                }
            }
            Ok(out)
        };

        let a0 = complex_array("a0", &raw.a0)?;
        let a1 = complex_array("a1", &raw.a1)?;
        let b0 = complex_array("b0", &raw.b0)?;

        check_shape("b1", raw.b1.len(), raw.b1.iter().map(|r| r.len()), p1, p2)?;
        let mut b1 = Vec::with_capacity(p1 * p2);
        for (n, row) in raw.b1.iter().enumerate() {
            for (m, entry) in row.iter().enumerate() {
                let value = match *entry {
                    RealEntry::Real(v) => v,
                    RealEntry::Pair([re, im]) => {
                        if im != 0.0 {
                            return Err(Error::NonRealDiagonal {
                                n: n + 1,
                                m: m + 1,
                                im,
                            });
                        }
                        re
                    }
                };
                if !value.is_finite() {
                    return Err(Error::NonFinite {
                        context: "b1",
                        row: n + 1,
                        col: m + 1,
                    });
                }
                b1.push(value);
            }
        }

        Ok(Self {
            p1,
            p2,
            a0,
            a1,
            b0,
            b1,
        })
    }

    /// The shifted-Schrödinger example: no layer hopping, in-layer hopping 1,
    /// on-site term `4n` constant along each layer. Its spectrum is the
    /// stacked union of the layer spectra `[4n-2, 4n+2]`, a single interval
    /// `[2, 2 + 4·p1]` of measure `4·p1`.
    pub fn shifted_schrodinger(p1: usize, p2: usize) -> Result<Self, Error> {
        if p1 < 3 || p2 < 3 {
            return Err(Error::PeriodTooSmall { p1, p2 });
        }
        let cells = p1 * p2;
        let mut b1 = vec![0.0; cells];
        for n in 1..=p1 {
            for m in 1..=p2 {
                b1[(n - 1) * p2 + (m - 1)] = 4.0 * n as f64;
            }
        }
        Ok(Self {
            p1,
            p2,
            a0: vec![Complex64::ZERO; cells],
            a1: vec![Complex64::ZERO; cells],
            b0: vec![Complex64::new(1.0, 0.0); cells],
            b1,
        })
    }

    /// The diagonal-hopping example: identity layer hopping, purely diagonal
    /// layers with on-site values `4m mod 4·p2`. Its spectrum has measure
    /// `4·p2`.
    pub fn diagonal_hopping(p1: usize, p2: usize) -> Result<Self, Error> {
        if p1 < 3 || p2 < 3 {
            return Err(Error::PeriodTooSmall { p1, p2 });
        }
        let cells = p1 * p2;
        let mut b1 = vec![0.0; cells];
        for n in 1..=p1 {
            for m in 1..=p2 {
                // standard nonnegative remainder: m = p2 maps to 0
                b1[(n - 1) * p2 + (m - 1)] = ((4 * m) % (4 * p2)) as f64;
            }
        }
        Ok(Self {
            p1,
            p2,
            a0: vec![Complex64::ZERO; cells],
            a1: vec![Complex64::new(1.0, 0.0); cells],
            b0: vec![Complex64::ZERO; cells],
            b1,
        })
    }

    /// A seeded random field with entries uniform in `[-1, 1)` (complex
    /// entries componentwise). Deterministic: same `(p1, p2, seed)` gives the
    /// same field on every platform.
    pub fn random(p1: usize, p2: usize, seed: u64) -> Result<Self, Error> {
        if p1 < 3 || p2 < 3 {
            return Err(Error::PeriodTooSmall { p1, p2 });
        }
        let cells = p1 * p2;
        let mut rng = rng::seeded(seed);
        let a0: Vec<_> = (0..cells).map(|_| rng::symmetric_complex(&mut rng)).collect();
        let a1: Vec<_> = (0..cells).map(|_| rng::symmetric_complex(&mut rng)).collect();
        let b0: Vec<_> = (0..cells).map(|_| rng::symmetric_complex(&mut rng)).collect();
        let b1: Vec<_> = (0..cells).map(|_| rng::symmetric_f64(&mut rng)).collect();
        Ok(Self {
            p1,
            p2,
            a0,
            a1,
            b0,
            b1,
        })
    }

    /// Cyclically shifts indices so that cell `(alpha, beta)` moves to
    /// position `(p1, p2)`: the new entry at `(n, m)` is the old entry at
    /// `(n + alpha, m + beta)` cyclically. `relabel(p1, p2)` is the identity.
    ///
    /// A relabeled field describes the same operator up to a lattice
    /// translation, so all spectral quantities of the full operator are
    /// unchanged; the envelope bounds, however, depend on which cell sits at
    /// `(p1, p2)`, which is exactly why this map exists.
    pub fn relabel(&self, alpha: usize, beta: usize) -> Result<Self, Error> {
        if alpha < 1 || alpha > self.p1 || beta < 1 || beta > self.p2 {
            return Err(Error::IndexOutOfRange {
                alpha,
                beta,
                p1: self.p1,
                p2: self.p2,
            });
        }
        let (p1, p2) = (self.p1, self.p2);
        let shift = |src: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::ZERO; p1 * p2];
            for n0 in 0..p1 {
                for m0 in 0..p2 {
                    out[n0 * p2 + m0] = src[((n0 + alpha) % p1) * p2 + (m0 + beta) % p2];
                }
            }
            out
        };
        let mut b1 = vec![0.0; p1 * p2];
        for n0 in 0..p1 {
            for m0 in 0..p2 {
                b1[n0 * p2 + m0] = self.b1[((n0 + alpha) % p1) * p2 + (m0 + beta) % p2];
            }
        }
        Ok(Self {
            p1,
            p2,
            a0: shift(&self.a0),
            a1: shift(&self.a1),
            b0: shift(&self.b0),
            b1,
        })
    }

    /// The relabel parameters that undo `relabel(alpha, beta)`.
    pub fn inverse_relabel(&self, alpha: usize, beta: usize) -> (usize, usize) {
        let inv = |a: usize, p: usize| if a == p { p } else { p - a };
        (inv(alpha, self.p1), inv(beta, self.p2))
    }

    pub fn p1(&self) -> usize {
        self.p1
    }

    pub fn p2(&self) -> usize {
        self.p2
    }

    /// Fiber dimension `p1 · p2`.
    pub fn fiber_dimension(&self) -> usize {
        self.p1 * self.p2
    }

    #[inline]
    fn at(&self, n: usize, m: usize) -> usize {
        debug_assert!((1..=self.p1).contains(&n) && (1..=self.p2).contains(&m));
        (n - 1) * self.p2 + (m - 1)
    }

    /// `a0` at 1-based `(n, m)`.
    #[inline]
    pub fn a0(&self, n: usize, m: usize) -> Complex64 {
        self.a0[self.at(n, m)]
    }

    #[inline]
    pub fn a1(&self, n: usize, m: usize) -> Complex64 {
        self.a1[self.at(n, m)]
    }

    #[inline]
    pub fn b0(&self, n: usize, m: usize) -> Complex64 {
        self.b0[self.at(n, m)]
    }

    #[inline]
    pub fn b1(&self, n: usize, m: usize) -> f64 {
        self.b1[self.at(n, m)]
    }

    /// Reduces an arbitrary 1-based lattice index into the fundamental cell.
    #[inline]
    pub fn reduce(&self, n: i64, m: i64) -> (usize, usize) {
        let rn = (n - 1).rem_euclid(self.p1 as i64) as usize + 1;
        let rm = (m - 1).rem_euclid(self.p2 as i64) as usize + 1;
        (rn, rm)
    }

    /// True when `a0 ≡ 0`, the diagonal-layer-hopping (Schrödinger-type) case.
    pub fn is_diagonal_hopping(&self) -> bool {
        self.a0.iter().all(|z| *z == Complex64::ZERO)
    }

    /// First nonzero `a0` entry as `(n, m, value)`, if any.
    pub fn first_nonzero_a0(&self) -> Option<(usize, usize, Complex64)> {
        self.a0.iter().enumerate().find_map(|(k, z)| {
            (*z != Complex64::ZERO).then(|| (k / self.p2 + 1, k % self.p2 + 1, *z))
        })
    }

    /// The serialization image of this field. `b1` is emitted as plain reals.
    pub fn to_raw(&self) -> RawCoefficients {
        let complex_rows = |src: &[Complex64]| -> Vec<Vec<[f64; 2]>> {
            (0..self.p1)
                .map(|n0| {
                    (0..self.p2)
                        .map(|m0| {
                            let z = src[n0 * self.p2 + m0];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect()
        };
        RawCoefficients {
            p1: self.p1,
            p2: self.p2,
            a0: complex_rows(&self.a0),
            a1: complex_rows(&self.a1),
            b0: complex_rows(&self.b0),
            b1: (0..self.p1)
                .map(|n0| {
                    (0..self.p2)
                        .map(|m0| RealEntry::Real(self.b1[n0 * self.p2 + m0]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Parses and validates a coefficient file.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let raw: RawCoefficients =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::validate(&raw)
    }

    /// Pretty-printed coefficient file contents.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("serializable");
        s.push('\n');
        s
    }
}

fn check_shape(
    array: &'static str,
    rows: usize,
    cols: impl Iterator<Item = usize>,
    p1: usize,
    p2: usize,
) -> Result<(), Error> {
    let mut bad_cols = None;
    for c in cols {
        if c != p2 {
            bad_cols = Some(c);
        }
    }
    if rows != p1 || bad_cols.is_some() {
        return Err(Error::ShapeMismatch {
            array,
            rows,
            cols: bad_cols.unwrap_or(p2),
            p1,
            p2,
        });
    }
    Ok(())
}
