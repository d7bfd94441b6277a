//! Dense complex square matrices, row-major.
//!
//! Fibers are small (`p1·p2` rows) and torus operators are capped, so a plain
//! dense layout is used everywhere; the banded structure is exploited only
//! during assembly. Hermitian matrices are built through [`ComplexMatrix::set_pair`]
//! and [`ComplexMatrix::write_block_conj_pair`], which write each entry and its
//! mirror from one source value, so Hermiticity holds exactly, not just to
//! rounding.

use num_complex::Complex64;
use std::ops::Index;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    size: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            entries: vec![Complex64::ZERO; size * size],
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zero(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.size && j < self.size);
        i * self.size + j
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let k = self.idx(i, j);
        self.entries[k] = v;
    }

    /// Writes `(i, j) = v` and `(j, i) = conj(v)` from the single source `v`.
    #[inline]
    pub fn set_pair(&mut self, i: usize, j: usize, v: Complex64) {
        let a = self.idx(i, j);
        let b = self.idx(j, i);
        self.entries[a] = v;
        self.entries[b] = v.conj();
    }

    /// Copies `block` into block position `(bi, bj)` of a matrix partitioned
    /// into `bs × bs` blocks.
    pub fn write_block(&mut self, bi: usize, bj: usize, bs: usize, block: &ComplexMatrix) {
        assert_eq!(block.size(), bs);
        for r in 0..bs {
            for c in 0..bs {
                self.set(bi * bs + r, bj * bs + c, block.entry(r, c));
            }
        }
    }

    /// Writes `block` at block position `(bi, bj)` and its conjugate
    /// transpose at `(bj, bi)`, entry-paired.
    pub fn write_block_conj_pair(&mut self, bi: usize, bj: usize, bs: usize, block: &ComplexMatrix) {
        assert_eq!(block.size(), bs);
        assert_ne!(bi, bj, "conjugate block pair must be off-diagonal");
        for r in 0..bs {
            for c in 0..bs {
                self.set_pair(bi * bs + r, bj * bs + c, block.entry(r, c));
            }
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.size, other.size);
        ComplexMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.size, other.size);
        ComplexMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            size: self.size,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    /// `self + diag(d)` for a real diagonal `d`.
    pub fn add_real_diagonal(&self, diag: &[f64]) -> ComplexMatrix {
        assert_eq!(diag.len(), self.size);
        let mut m = self.clone();
        for (i, &v) in diag.iter().enumerate() {
            let k = m.idx(i, i);
            m.entries[k] += v;
        }
        m
    }

    /// `self - diag(d)` for a real diagonal `d`.
    pub fn sub_real_diagonal(&self, diag: &[f64]) -> ComplexMatrix {
        assert_eq!(diag.len(), self.size);
        let mut m = self.clone();
        for (i, &v) in diag.iter().enumerate() {
            let k = m.idx(i, i);
            m.entries[k] -= v;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.size).map(|i| self.entry(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |M_ij - conj(M_ji)|`; zero for matrices assembled via paired writes.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.size {
            for j in 0..=i {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Number of entries with modulus above `threshold`.
    pub fn count_nonzero(&self, threshold: f64) -> usize {
        self.entries.iter().filter(|z| z.norm() > threshold).count()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.size + j]
    }
}
