//! Closed-form tail of the continued fraction for a K-periodic chain.
//!
//! For exactly periodic coefficients the tail `T(z)` is a fixed point of the
//! period map `T -> φ_1(φ_2(...φ_K(T)))` with `φ_k(w) = -1/(z - A_k + B_k² w)`,
//! which reduces to a quadratic `q2 T² + q1 T + q0 = 0` whose coefficients are
//! polynomials in `z`. The discriminant `q1² - 4 q2 q0` is negative exactly on
//! the K bands.
//!
//! Branch selection: the physical root is the attracting fixed point of the
//! period map. For `Im z != 0` that is the root with `Im T` of the same sign as
//! `Im z`; on the real axis inside a band the roots are a conjugate pair and
//! `side` picks the limit from above or below; elsewhere on the real axis it is
//! the real root whose Floquet multiplier `c T + d` (from the 2x2 transfer
//! matrix of one period) is larger in magnitude. That root behaves as `-1/z`
//! for large `|z|`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coefficients::{asymptotics, Asymptotics, CoefficientModel, TailLimit};
use crate::error::{Error, Result};
use crate::poly::Poly;

/// `|q2(z)|` below which the quadratic is treated as linear.
pub const TOL_Q2: f64 = 1e-12;
/// Gaps narrower than this are reported as merged.
pub const MERGE_WIDTH: f64 = 1e-10;
const GRID_POINTS: usize = 10_000;
const BISECTION_TOL: f64 = 1e-12;

/// Which side of the real axis a real energy is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Quadratic `q2 T² + q1 T + q0 = 0` satisfied by the terminator.
#[derive(Debug, Clone)]
pub struct TerminatorQuadratic {
    asym: Asymptotics,
    q2: Poly,
    q1: Poly,
    q0: Poly,
}

type Matrix = [[Complex64; 2]; 2];

fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

impl TerminatorQuadratic {
    pub fn new(asym: &Asymptotics) -> Self {
        let a = asym.a();
        let b2: Vec<f64> = asym.b().iter().map(|b| b * b).collect();
        let f: Vec<Poly> = a.iter().map(|&ak| Poly::shifted_identity(ak)).collect();
        let (q2, q1, q0) = match asym.period() {
            1 => (Poly::constant(b2[0]), f[0].clone(), Poly::constant(1.0)),
            2 => {
                let f12 = &f[0] * &f[1];
                (
                    f[0].scale(b2[1]),
                    &f12 + &Poly::constant(b2[1] - b2[0]),
                    f[1].clone(),
                )
            }
            3 => {
                let f12 = &f[0] * &f[1];
                let f23 = &f[1] * &f[2];
                let f123 = &f12 * &f[2];
                let alpha = (&Poly::constant(b2[0]) - &f12).scale(b2[2]);
                let beta =
                    &(&(&f[0].scale(b2[1]) - &f[1].scale(b2[2])) + &f[2].scale(b2[0])) - &f123;
                let gamma = &Poly::constant(b2[1]) - &f23;
                (alpha, beta, gamma)
            }
            _ => unreachable!("Asymptotics enforces 1 <= K <= 3"),
        };
        TerminatorQuadratic {
            asym: asym.clone(),
            q2,
            q1,
            q0,
        }
    }

    pub fn asymptotics(&self) -> &Asymptotics {
        &self.asym
    }

    /// `(q2, q1, q0)` at `z`.
    pub fn coefficients(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        (
            self.q2.eval_complex(z),
            self.q1.eval_complex(z),
            self.q0.eval_complex(z),
        )
    }

    /// `q1(E)² - 4 q2(E) q0(E)`.
    pub fn discriminant(&self, e: f64) -> f64 {
        let (q2, q1, q0) = (self.q2.eval(e), self.q1.eval(e), self.q0.eval(e));
        q1 * q1 - 4.0 * q2 * q0
    }

    pub(crate) fn discriminant_poly(&self) -> Poly {
        &(&self.q1 * &self.q1) - &(&self.q2 * &self.q0).scale(4.0)
    }

    /// Real zeros of `q2`, where one root of the quadratic escapes to infinity.
    pub(crate) fn q2_real_roots(&self) -> Vec<f64> {
        let c = &self.q2.0;
        match self.q2.degree() {
            1 => vec![-c[0] / c[1]],
            2 => {
                let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
                if disc < 0.0 {
                    return Vec::new();
                }
                let q = -0.5 * (c[1] + c[1].signum() * disc.sqrt());
                let mut roots = vec![q / c[2]];
                if q != 0.0 {
                    roots.push(c[0] / q);
                }
                roots.sort_by(f64::total_cmp);
                roots
            }
            _ => Vec::new(),
        }
    }

    /// Transfer matrix of one period acting on `(T, 1)` by Möbius action.
    fn period_matrix(&self, z: Complex64) -> Matrix {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut m = [[one, zero], [zero, one]];
        for (ak, bk) in self.asym.a().iter().zip(self.asym.b()) {
            let step = [[zero, -one], [Complex64::new(bk * bk, 0.0), z - ak]];
            m = mat_mul(&m, &step);
        }
        m
    }

    /// Physical root at `z`. `side` only matters for real `z` inside a band.
    pub fn solve(&self, z: Complex64, side: Side) -> Result<Complex64> {
        let (q2, q1, q0) = self.coefficients(z);
        let m = self.period_matrix(z);
        let multiplier = |t: Complex64| (m[1][0] * t + m[1][1]).norm();

        if q2.norm() < TOL_Q2 {
            if q1.norm() == 0.0 {
                return Err(Error::DegenerateQuadratic);
            }
            let t = -q0 / q1;
            // the other fixed point is at infinity with multiplier m[0][0]
            return if multiplier(t) >= m[0][0].norm() {
                Ok(t)
            } else {
                Err(Error::DegenerateQuadratic)
            };
        }

        if z.im == 0.0 {
            let (q2, q1, q0) = (q2.re, q1.re, q0.re);
            let d = q1 * q1 - 4.0 * q2 * q0;
            if d < 0.0 {
                let re = -q1 / (2.0 * q2);
                let im = ((-d).sqrt() / (2.0 * q2)).abs();
                return Ok(match side {
                    Side::Above => Complex64::new(re, im),
                    Side::Below => Complex64::new(re, -im),
                });
            }
            let s = d.sqrt();
            let q = -0.5 * (q1 + if q1 >= 0.0 { s } else { -s });
            if q == 0.0 {
                // q1 = 0 and d = 0 force q0 = 0: double root at zero
                return Ok(Complex64::new(0.0, 0.0));
            }
            let r1 = Complex64::new(q / q2, 0.0);
            let r2 = Complex64::new(q0 / q, 0.0);
            return Ok(if multiplier(r1) >= multiplier(r2) {
                r1
            } else {
                r2
            });
        }

        let mut sq = (q1 * q1 - q2 * q0 * 4.0).sqrt();
        if (q1.conj() * sq).re < 0.0 {
            sq = -sq;
        }
        let q = (q1 + sq) * -0.5;
        if q.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let r1 = q / q2;
        let r2 = q0 / q;
        let want = z.im.signum();
        let s1 = r1.im.signum() == want && r1.im != 0.0;
        let s2 = r2.im.signum() == want && r2.im != 0.0;
        Ok(match (s1, s2) {
            (true, false) => r1,
            (false, true) => r2,
            // roundoff put both roots on the same side; fall back to the multiplier
            _ => {
                if multiplier(r1) >= multiplier(r2) {
                    r1
                } else {
                    r2
                }
            }
        })
    }

    /// `dT/dz` at a point where `T` solves the quadratic.
    pub fn derivative(&self, z: Complex64, t: Complex64) -> Complex64 {
        let (q2, q1, _) = self.coefficients(z);
        let d2 = self.q2.derivative().eval_complex(z);
        let d1 = self.q1.derivative().eval_complex(z);
        let d0 = self.q0.derivative().eval_complex(z);
        -(d2 * t * t + d1 * t + d0) / (q2 * t * 2.0 + q1)
    }
}

/// Terminator `T(z)` for the periodic limits `asym`.
pub fn terminator(asym: &Asymptotics, z: Complex64, side: Side) -> Result<Complex64> {
    TerminatorQuadratic::new(asym).solve(z, side)
}

/// Discriminant of the terminator quadratic at real `e`: negative inside bands.
pub fn discriminant(asym: &Asymptotics, e: f64) -> f64 {
    TerminatorQuadratic::new(asym).discriminant(e)
}

/// Where a real energy sits relative to the bands (indices are zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Band(usize),
    Gap(usize),
    Exterior,
}

/// The 2K band edges `E_1 < ... < E_2K`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    boundaries: Vec<f64>,
    merged_gaps: Vec<usize>,
    unbounded: bool,
}

impl BandStructure {
    pub(crate) fn from_sorted(boundaries: Vec<f64>, unbounded: bool) -> Self {
        let merged_gaps = (0..boundaries.len() / 2 - 1)
            .filter(|&j| boundaries[2 * j + 2] - boundaries[2 * j + 1] < MERGE_WIDTH)
            .collect();
        BandStructure {
            boundaries,
            merged_gaps,
            unbounded,
        }
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn period(&self) -> usize {
        self.boundaries.len() / 2
    }

    /// Closed intervals `[E_{2j-1}, E_{2j}]`.
    pub fn bands(&self) -> Vec<(f64, f64)> {
        self.boundaries.chunks(2).map(|p| (p[0], p[1])).collect()
    }

    /// Open intervals `(E_{2j}, E_{2j+1})`.
    pub fn gaps(&self) -> Vec<(f64, f64)> {
        (0..self.period() - 1)
            .map(|j| (self.boundaries[2 * j + 1], self.boundaries[2 * j + 2]))
            .collect()
    }

    /// Gaps narrower than [`MERGE_WIDTH`].
    pub fn merged_gaps(&self) -> &[usize] {
        &self.merged_gaps
    }

    /// Outer edges at ±infinity.
    pub fn is_unbounded(&self) -> bool {
        self.unbounded
    }

    /// Classifies `e`; points within `edge_tol` of a band count as in the band.
    pub fn locate(&self, e: f64, edge_tol: f64) -> Region {
        for (j, (lo, hi)) in self.bands().into_iter().enumerate() {
            if e >= lo - edge_tol && e <= hi + edge_tol {
                return Region::Band(j);
            }
        }
        for (j, (lo, hi)) in self.gaps().into_iter().enumerate() {
            if e > lo && e < hi {
                return Region::Gap(j);
            }
        }
        Region::Exterior
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= BISECTION_TOL * 0.01 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Band edges from the periodic limits.
///
/// K = 1: `A ± 2B`. K = 2: closed form
/// `(A1+A2)/2 ± ½√((A1-A2)² + 4(B1 ± B2)²)`. K = 3: the six real roots of the
/// expanded degree-6 discriminant, bracketed on a uniform grid and refined by
/// bisection.
pub fn band_boundaries(asym: &Asymptotics) -> Result<BandStructure> {
    let a = asym.a();
    let b = asym.b();
    let boundaries = match asym.period() {
        1 => vec![a[0] - 2.0 * b[0], a[0] + 2.0 * b[0]],
        2 => {
            let mid = 0.5 * (a[0] + a[1]);
            let da2 = (a[0] - a[1]).powi(2);
            let outer = 0.5 * (da2 + 4.0 * (b[0] + b[1]).powi(2)).sqrt();
            let inner = 0.5 * (da2 + 4.0 * (b[0] - b[1]).powi(2)).sqrt();
            vec![mid - outer, mid - inner, mid + inner, mid + outer]
        }
        3 => {
            let p = TerminatorQuadratic::new(asym).discriminant_poly();
            let bmax = b.iter().copied().fold(0.0, f64::max);
            let amin = a.iter().copied().fold(f64::INFINITY, f64::min);
            let amax = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = amin - 2.0 * bmax - 1.0;
            let hi = amax + 2.0 * bmax + 1.0;
            let step = (hi - lo) / GRID_POINTS as f64;
            let mut roots = Vec::new();
            let mut x0 = lo;
            let mut f0 = p.eval(x0);
            for i in 1..=GRID_POINTS {
                let x1 = lo + step * i as f64;
                let f1 = p.eval(x1);
                if f0 == 0.0 {
                    roots.push(x0);
                } else if f0 * f1 < 0.0 {
                    roots.push(bisect(|x| p.eval(x), x0, x1, f0));
                }
                x0 = x1;
                f0 = f1;
            }
            if f0 == 0.0 {
                roots.push(x0);
            }
            if roots.len() != 6 {
                return Err(Error::MergedBands { roots });
            }
            roots
        }
        k => return Err(Error::UnsupportedPeriod { period: k }),
    };
    Ok(BandStructure::from_sorted(boundaries, false))
}

/// Band structure of a model. Unbounded models get outer edges at ±infinity
/// and inner edges at the `B_1 = B_2 -> infinity` limit of the K = 2 formula,
/// i.e. the sorted diagonal limits.
pub fn band_structure(model: &CoefficientModel) -> Result<BandStructure> {
    match asymptotics(model) {
        TailLimit::Periodic(asym) => band_boundaries(&asym),
        TailLimit::Unbounded { mut a } => {
            a.sort_by(f64::total_cmp);
            let mut boundaries = Vec::with_capacity(a.len() + 2);
            boundaries.push(f64::NEG_INFINITY);
            boundaries.extend(a);
            boundaries.push(f64::INFINITY);
            Ok(BandStructure::from_sorted(boundaries, true))
        }
    }
}
