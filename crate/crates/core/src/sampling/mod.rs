//! Ginibre matrices, their spectra, and the Kostlan moduli sampler.

mod seed;

use std::sync::Once;

use faer::{c64, Mat};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::Serialize;

use crate::deviation::Beta;
use crate::error::{Error, Result};
use crate::kernels::ComplexPoint;

pub use seed::SeedSpec;

/// A dense square matrix from either ensemble.
#[derive(Debug, Clone)]
pub enum Matrix {
    Real(Mat<f64>),
    Complex(Mat<c64>),
}

impl Matrix {
    pub fn n(&self) -> usize {
        match self {
            Matrix::Real(m) => m.nrows(),
            Matrix::Complex(m) => m.nrows(),
        }
    }

    pub fn ensemble(&self) -> Beta {
        match self {
            Matrix::Real(_) => Beta::Real,
            Matrix::Complex(_) => Beta::Complex,
        }
    }

    pub fn trace(&self) -> c64 {
        match self {
            Matrix::Real(m) => c64::new((0..m.nrows()).map(|i| m[(i, i)]).sum(), 0.0),
            Matrix::Complex(m) => (0..m.nrows()).map(|i| m[(i, i)]).sum(),
        }
    }
}

/// Draws an `n x n` Ginibre matrix with entries of variance `1/n`.
///
/// Entries are generated row by row; complex entries draw the real part
/// before the imaginary part, each with variance `1/(2n)`.
pub fn sample_ginibre(beta: Beta, n: usize, seed: SeedSpec) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::invalid("matrix size must be positive"));
    }
    let mut rng = seed.rng();
    let sd = (n as f64).sqrt().recip();
    Ok(match beta {
        Beta::Real => {
            let v: Vec<f64> = (0..n * n)
                .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
                .collect();
            Matrix::Real(Mat::from_fn(n, n, |i, j| v[i * n + j]))
        }
        Beta::Complex => {
            let s = sd * std::f64::consts::FRAC_1_SQRT_2;
            let v: Vec<c64> = (0..n * n)
                .map(|_| {
                    let re = s * rng.sample::<f64, _>(StandardNormal);
                    let im = s * rng.sample::<f64, _>(StandardNormal);
                    c64::new(re, im)
                })
                .collect();
            Matrix::Complex(Mat::from_fn(n, n, |i, j| v[i * n + j]))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub n: usize,
    pub ensemble: Beta,
    /// Real eigenvalues (real ensemble only).
    pub real_eigs: Vec<f64>,
    /// One representative with `im > 0` per conjugate pair (real ensemble only).
    pub complex_pairs: Vec<ComplexPoint>,
    /// All eigenvalues (complex ensemble only).
    pub points: Vec<ComplexPoint>,
}

impl Spectrum {
    /// Every eigenvalue, with conjugate pairs expanded.
    pub fn all(&self) -> Vec<ComplexPoint> {
        match self.ensemble {
            Beta::Complex => self.points.clone(),
            Beta::Real => {
                let mut v: Vec<ComplexPoint> = self
                    .real_eigs
                    .iter()
                    .map(|&x| ComplexPoint::new(x, 0.0))
                    .collect();
                for p in &self.complex_pairs {
                    v.push(*p);
                    v.push(ComplexPoint::new(p.re, -p.im));
                }
                v
            }
        }
    }
}

fn sequential_faer() {
    static ONCE: Once = Once::new();
    // trials are parallelized one level up; keep each solve single-threaded
    // so results do not depend on the worker count
    ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

/// Diagonal similarity scaling by powers of two (Parlett-Reinsch) so that
/// row and column norms are comparable. Eigenvalues are unchanged.
fn balance<T: Copy>(m: &Mat<T>, abs: impl Fn(T) -> f64, scale: impl Fn(T, f64) -> T) -> Mat<T> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs(a[(j, i)]);
                    r += abs(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let (mut c2, r2) = (c, r);
            while c2 < r2 / 2.0 {
                c2 *= 2.0;
                f *= 2.0;
            }
            while c2 >= r2 * 2.0 {
                c2 /= 2.0;
                f /= 2.0;
            }
            let c_new = c * f;
            let r_new = r / f;
            if (c_new + r_new) < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] = scale(a[(i, j)], 1.0 / f);
                    a[(j, i)] = scale(a[(j, i)], f);
                }
            }
        }
    }
    a
}

fn solve(m: &Matrix) -> std::result::Result<Vec<c64>, faer::linalg::evd::EvdError> {
    match m {
        Matrix::Real(a) => a.eigenvalues(),
        Matrix::Complex(a) => a.eigenvalues(),
    }
}

fn balanced(m: &Matrix) -> Matrix {
    match m {
        Matrix::Real(a) => Matrix::Real(balance(a, f64::abs, |x, f| x * f)),
        Matrix::Complex(a) => Matrix::Complex(balance(a, |z: c64| z.norm(), |z, f| z * f)),
    }
}

/// Eigenvalues of `m`, partitioned into real eigenvalues and conjugate
/// pairs for the real ensemble.
///
/// For real input the solver's real Schur form returns eigenvalues of 1x1
/// blocks with an imaginary part of exactly zero and 2x2 blocks as
/// `±` pairs, so the partition needs no tolerance. If that structure is
/// not found, eigenvalues with `|Im σ| <= 1e-8 (1 + |σ|)` count as real.
pub fn eigenvalues(m: &Matrix) -> Result<Spectrum> {
    eigenvalues_inner(m, None)
}

fn eigenvalues_inner(m: &Matrix, seed: Option<SeedSpec>) -> Result<Spectrum> {
    sequential_faer();
    let n = m.n();
    let finite = match m {
        Matrix::Real(a) => (0..n).all(|j| (0..n).all(|i| a[(i, j)].is_finite())),
        Matrix::Complex(a) => {
            (0..n).all(|j| (0..n).all(|i| a[(i, j)].re.is_finite() && a[(i, j)].im.is_finite()))
        }
    };
    if !finite {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let vals = match solve(m) {
        Ok(v) => v,
        Err(_) => solve(&balanced(m)).map_err(|_| Error::Numerical {
            message: "eigensolver did not converge (also after balancing)".into(),
            achieved_bound: None,
            seed: seed.map(|s| (s.master_seed, s.trial_index)),
        })?,
    };
    Ok(partition(n, m.ensemble(), &vals))
}

fn partition(n: usize, ensemble: Beta, vals: &[c64]) -> Spectrum {
    let mut s = Spectrum {
        n,
        ensemble,
        real_eigs: Vec::new(),
        complex_pairs: Vec::new(),
        points: Vec::new(),
    };
    if ensemble == Beta::Complex {
        s.points = vals.iter().map(|z| ComplexPoint::new(z.re, z.im)).collect();
        return s;
    }
    let pos = vals.iter().filter(|z| z.im > 0.0).count();
    let neg = vals.iter().filter(|z| z.im < 0.0).count();
    if pos == neg {
        for z in vals {
            if z.im == 0.0 {
                s.real_eigs.push(z.re);
            } else if z.im > 0.0 {
                s.complex_pairs.push(ComplexPoint::new(z.re, z.im));
            }
        }
        return s;
    }
    // tolerance fallback
    let tol = |z: &c64| z.im.abs() <= 1e-8 * (1.0 + z.norm());
    for z in vals {
        if tol(z) {
            s.real_eigs.push(z.re);
        } else if z.im > 0.0 {
            s.complex_pairs.push(ComplexPoint::new(z.re, z.im));
        }
    }
    s
}

/// Samples a Ginibre matrix and returns its spectrum; solver failures carry
/// the seed.
pub fn sample_spectrum(beta: Beta, n: usize, seed: SeedSpec) -> Result<Spectrum> {
    let m = sample_ginibre(beta, n, seed)?;
    eigenvalues_inner(&m, Some(seed))
}

/// Eigenvalue moduli of the complex ensemble in Kostlan's representation:
/// `sqrt(G_k / n)`, `G_k ~ Gamma(k, 1)`, `k = 1..n` (unsorted, in `k` order).
pub fn kostlan_sample_moduli(n: usize, seed: SeedSpec) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let mut rng = seed.rng();
    let nf = n as f64;
    (1..=n)
        .map(|k| {
            let g = Gamma::new(k as f64, 1.0).map_err(|e| Error::invalid(e.to_string()))?;
            Ok((g.sample(&mut rng) / nf).sqrt())
        })
        .collect()
}

/// One draw of the complex-ensemble spectral radius in `O(n)` time.
pub fn kostlan_sample_radius(n: usize, seed: SeedSpec) -> Result<f64> {
    Ok(kostlan_sample_moduli(n, seed)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalStats {
    pub radius: f64,
    pub rightmost: f64,
    pub real_max: Option<f64>,
    pub complex_max_modulus: Option<f64>,
}

pub fn extremal_stats(s: &Spectrum) -> ExtremalStats {
    let all = s.all();
    let radius = all.iter().map(ComplexPoint::abs).fold(0.0, f64::max);
    let rightmost = all.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let (real_max, complex_max_modulus) = match s.ensemble {
        Beta::Complex => (None, None),
        Beta::Real => (
            s.real_eigs.iter().copied().reduce(f64::max),
            s.complex_pairs
                .iter()
                .map(ComplexPoint::abs)
                .reduce(f64::max),
        ),
    };
    ExtremalStats {
        radius,
        rightmost,
        real_max,
        complex_max_modulus,
    }
}
