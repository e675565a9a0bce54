//! `G00(z)` by truncated continued fraction, densities of states, pole
//! residues and the normalization sum rule.
//!
//! Convention: `G00(z) = [(H - z)^{-1}]_00`, evaluated bottom-up as
//! `w = -1/(z - a_{N-1} + b_{N-1}² T(z))`, then `w <- -1/(z - a_n + b_n² w)`.
//! `Im G00 > 0` in the upper half plane and `ρ(E) = Im G00(E + i0) / π`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::coefficients::{
    asymptotics, coefficients, Asymptotics, CoefficientModel, CoefficientTable, TailLimit,
};
use crate::error::{Error, Result};
use crate::terminator::{band_boundaries, BandStructure, Region, Side, TerminatorQuadratic};

/// Denominators below this magnitude count as a breakdown.
const PIVOT_FLOOR: f64 = 1e-300;
/// Negative densities of at most this magnitude are roundoff and clamp to 0.
const CLAMP: f64 = 1e-10;
const NEGATIVE_WEIGHT_TOL: f64 = 1e-8;
/// Continuum quadrature panels per band.
pub const PANELS_PER_BAND: usize = 10_000;
/// Grid points closer than this to a pole are nudged.
const POLE_COLLISION: f64 = 1e-9;

/// A model truncated at depth N and closed with a terminator.
#[derive(Debug, Clone)]
pub struct Resolvent {
    a: Vec<f64>,
    b: Vec<f64>,
    closure: TerminatorQuadratic,
    bands: BandStructure,
    label: String,
}

impl Resolvent {
    /// Periodic tails are closed with the limits rotated to the phase of index
    /// `depth`. Unbounded tails are closed with the local coefficients
    /// `A_k = a_{N+k-1}`, `B_k = b_{N+k-1}`. Custom models are never truncated
    /// inside their head.
    pub fn new(model: &CoefficientModel, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1"));
        }
        let depth = depth.max(model.head_len());
        let (table, asym) = match asymptotics(model) {
            TailLimit::Periodic(asym) => {
                (CoefficientTable::new(model, depth)?, asym.rotated(depth))
            }
            TailLimit::Unbounded { a } => {
                let k = a.len();
                let mut table = CoefficientTable::new(model, depth + k)?;
                let local = Asymptotics::new(table.a[depth..].to_vec(), table.b[depth..].to_vec())?;
                table.a.truncate(depth);
                table.b.truncate(depth);
                (table, local)
            }
        };
        let bands = band_boundaries(&asym)?;
        Ok(Resolvent {
            a: table.a,
            b: table.b,
            closure: TerminatorQuadratic::new(&asym),
            bands,
            label: model.label(),
        })
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// The terminator used below depth N.
    pub fn closure(&self) -> &TerminatorQuadratic {
        &self.closure
    }

    /// Bands of the closure; poles of `G00` on the real axis lie outside them.
    pub fn bands(&self) -> &BandStructure {
        &self.bands
    }

    pub fn model_label(&self) -> &str {
        &self.label
    }

    /// `T(z)`, or `None` where the physical root is at infinity.
    fn tail(&self, z: Complex64, side: Side) -> Result<Option<Complex64>> {
        match self.closure.solve(z, side) {
            Ok(t) => Ok(Some(t)),
            Err(Error::DegenerateQuadratic) => Ok(None),
            Err(e) => Err(e),
        }
    }

    pub fn g00(&self, z: Complex64, side: Side) -> Result<Complex64> {
        let n = self.depth();
        let (mut w, start) = match self.tail(z, side)? {
            Some(t) => {
                let d = z - self.a[n - 1] + t * (self.b[n - 1] * self.b[n - 1]);
                if d.norm() < PIVOT_FLOOR {
                    return Err(Error::PivotBreakdown { index: n - 1 });
                }
                (-d.inv(), n - 1)
            }
            // the tail pole decouples the last site entirely
            None => (Complex64::new(0.0, 0.0), n),
        };
        for k in (0..start).rev() {
            let d = z - self.a[k] + w * (self.b[k] * self.b[k]);
            if d.norm() < PIVOT_FLOOR {
                return Err(Error::PivotBreakdown { index: k });
            }
            w = -d.inv();
        }
        Ok(w)
    }

    /// `Im G00(E + i0) / π` with roundoff clamping.
    pub fn density(&self, e: f64) -> Result<f64> {
        let g = self.g00(Complex64::new(e, 0.0), Side::Above)?;
        clamp_density(e, g.im / PI)
    }

    /// Number of eigenvalues below `e` of the energy-dependent matrix
    /// `J_N - b_{N-1}² T(e) e_N e_Nᵀ`, which jumps by one at each real pole of
    /// `G00` outside the bands. `None` at a pole of `T`.
    fn count(&self, e: f64) -> Option<usize> {
        let t = self
            .closure
            .solve(Complex64::new(e, 0.0), Side::Above)
            .ok()?
            .re;
        let n = self.depth();
        let mut neg = 0;
        let mut d = 1.0;
        for k in 0..n {
            let coupling = if k == 0 {
                0.0
            } else {
                self.b[k - 1] * self.b[k - 1] / d
            };
            d = self.a[k] - e - coupling;
            if k == n - 1 {
                d -= self.b[k] * self.b[k] * t;
            }
            if d.abs() < PIVOT_FLOOR {
                d = -1e-14 * (1.0 + e.abs());
            }
            if d < 0.0 {
                neg += 1;
            }
        }
        Some(neg)
    }

    fn count_near(&self, e: f64, toward: f64) -> (f64, usize) {
        let mut x = e;
        for _ in 0..60 {
            if let Some(c) = self.count(x) {
                return (x, c);
            }
            x += (toward - x) * 1e-6;
        }
        (x, 0)
    }

    /// Exact residue weight `1/D_0'(E)` at a real pole, where
    /// `G00 = -1/D_0`; the derivative is carried bottom-up through the fraction.
    pub fn pole_weight(&self, e: f64) -> Result<f64> {
        let z = Complex64::new(e, 0.0);
        let n = self.depth();
        let (mut w, mut dw, start) = match self.tail(z, Side::Above)? {
            Some(t) => {
                let dt = self.closure.derivative(z, t).re;
                let b2 = self.b[n - 1] * self.b[n - 1];
                let d = e - self.a[n - 1] + b2 * t.re;
                let dd = 1.0 + b2 * dt;
                if n == 1 {
                    return Ok(1.0 / dd);
                }
                (-1.0 / d, dd / (d * d), n - 1)
            }
            None => (0.0, 0.0, n),
        };
        for k in (1..start).rev() {
            let b2 = self.b[k] * self.b[k];
            let d = e - self.a[k] + b2 * w;
            let dd = 1.0 + b2 * dw;
            w = -1.0 / d;
            dw = dd / (d * d);
        }
        Ok(1.0 / (1.0 + self.b[0] * self.b[0] * dw))
    }

    /// Gershgorin bound on the spectrum, plus a margin.
    fn spectral_radius(&self) -> f64 {
        let asym = self.closure.asymptotics();
        let amax = self
            .a
            .iter()
            .chain(asym.a())
            .fold(0.0f64, |m, a| m.max(a.abs()));
        let bmax = self.b.iter().chain(asym.b()).fold(0.0f64, |m, &b| m.max(b));
        amax + 2.0 * bmax + 1.0
    }

    /// All real poles of `G00` with their residue weights.
    pub fn poles(&self) -> Result<Vec<Pole>> {
        let edges = self.bands.boundaries();
        let r = self.spectral_radius();
        let mut segments = Vec::new();
        segments.push((-r, edges[0]));
        for (lo, hi) in self.bands.gaps() {
            segments.push((lo, hi));
        }
        segments.push((edges[edges.len() - 1], r));
        let splits = self.closure.q2_real_roots();

        let mut energies = Vec::new();
        for (lo, hi) in segments {
            if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
                continue;
            }
            let mut cuts = Vec::new();
            cuts.push(lo);
            cuts.extend(splits.iter().copied().filter(|&x| x > lo && x < hi));
            cuts.push(hi);
            for w in cuts.windows(2) {
                let delta = 1e-12 * (1.0 + w[0].abs().max(w[1].abs()));
                if w[1] - w[0] <= 2.0 * delta {
                    continue;
                }
                let (x0, c0) = self.count_near(w[0] + delta, w[1]);
                let (x1, c1) = self.count_near(w[1] - delta, w[0]);
                self.isolate(x0, c0, x1, c1, &mut energies);
            }
        }
        energies.sort_by(f64::total_cmp);
        energies
            .into_iter()
            .map(|e| {
                let weight = self.pole_weight(e)?;
                if weight < -NEGATIVE_WEIGHT_TOL {
                    return Err(Error::NegativeWeight { energy: e, weight });
                }
                Ok(Pole {
                    energy: e,
                    weight: weight.max(0.0),
                    region: self.bands.locate(e, 0.0),
                })
            })
            .collect()
    }

    fn isolate(&self, lo: f64, c_lo: usize, hi: f64, c_hi: usize, out: &mut Vec<f64>) {
        if c_hi <= c_lo {
            return;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-15 * (1.0 + mid.abs()) {
            out.extend(core::iter::repeat(mid).take(c_hi - c_lo));
            return;
        }
        let (mid, c_mid) = self.count_near(mid, hi);
        let c_mid = c_mid.clamp(c_lo, c_hi);
        self.isolate(lo, c_lo, mid, c_mid, out);
        self.isolate(mid, c_mid, hi, c_hi, out);
    }
}

fn clamp_density(e: f64, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity { energy: e, value })
    }
}

/// A real pole of `G00`: a discrete state carrying spectral weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub energy: f64,
    pub weight: f64,
    pub region: Region,
}

/// `G00(z)` truncated at `depth` and closed with the terminator.
pub fn g00(model: &CoefficientModel, z: Complex64, depth: usize, side: Side) -> Result<Complex64> {
    Resolvent::new(model, depth)?.g00(z, side)
}

/// Density of states `ρ(E)`.
pub fn density(model: &CoefficientModel, e: f64, depth: usize) -> Result<f64> {
    Resolvent::new(model, depth)?.density(e)
}

/// Real poles of `G00` at the given depth.
pub fn real_poles(model: &CoefficientModel, depth: usize) -> Result<Vec<Pole>> {
    Resolvent::new(model, depth)?.poles()
}

/// Sampled density on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    /// Points moved off a pole by half a grid step.
    pub flagged: Vec<bool>,
    pub depth: usize,
    pub model_label: String,
    /// Limits used to close the fraction.
    pub closure: Asymptotics,
}

fn check_grid(e_min: f64, e_max: f64, points: usize) -> Result<()> {
    if !(e_min.is_finite() && e_max.is_finite() && e_min < e_max) {
        return Err(Error::InvalidArgument(
            "energy range must satisfy e_min < e_max",
        ));
    }
    if points < 2 {
        return Err(Error::InvalidArgument("grid needs at least two points"));
    }
    Ok(())
}

fn sample(
    res: &Resolvent,
    e_min: f64,
    e_max: f64,
    points: usize,
    eval: impl Fn(f64) -> Result<f64>,
) -> Result<DensityCurve> {
    check_grid(e_min, e_max, points)?;
    let step = (e_max - e_min) / (points - 1) as f64;
    let poles: Vec<f64> = res.poles()?.into_iter().map(|p| p.energy).collect();
    let near_pole = |e: f64| poles.iter().any(|p| (p - e).abs() < POLE_COLLISION);
    let mut grid = Vec::with_capacity(points);
    let mut rho = Vec::with_capacity(points);
    let mut flagged = Vec::with_capacity(points);
    for i in 0..points {
        let e = if i == points - 1 {
            e_max
        } else {
            e_min + step * i as f64
        };
        let shift = if i == points - 1 {
            -0.5 * step
        } else {
            0.5 * step
        };
        let (e, value, flag) = if near_pole(e) {
            (e + shift, eval(e + shift)?, true)
        } else {
            match eval(e) {
                Ok(v) => (e, v, false),
                Err(Error::PivotBreakdown { .. }) => (e + shift, eval(e + shift)?, true),
                Err(err) => return Err(err),
            }
        };
        grid.push(e);
        rho.push(value);
        flagged.push(flag);
    }
    Ok(DensityCurve {
        grid,
        rho,
        flagged,
        depth: res.depth(),
        model_label: String::from(res.model_label()),
        closure: res.closure().asymptotics().clone(),
    })
}

/// `ρ(E)` on `points` equally spaced energies from `e_min` to `e_max`.
pub fn density_curve(
    model: &CoefficientModel,
    e_min: f64,
    e_max: f64,
    points: usize,
    depth: usize,
) -> Result<DensityCurve> {
    let res = Resolvent::new(model, depth)?;
    sample(&res, e_min, e_max, points, |e| res.density(e))
}

/// Alternative first polynomial `P̂_1(E) = (s E + t)/b_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondKindSeed {
    pub s: f64,
    pub t: f64,
}

impl SecondKindSeed {
    /// The seed that reproduces the first kind, `(E - a_0)/b_0`.
    pub fn first_kind(a0: f64) -> Self {
        SecondKindSeed { s: 1.0, t: -a0 }
    }
}

fn second_kind_value(g: Complex64, e: f64, a0: f64, seed: SecondKindSeed) -> Result<f64> {
    let rho = clamp_density(e, g.im / PI)?;
    // b_0 (P_1 - P̂_1) = (1 - s) E - a_0 - t
    let shift = (1.0 - seed.s) * e - a0 - seed.t;
    let denom = (g * shift + 1.0).norm_sqr();
    if denom < PIVOT_FLOOR {
        return Err(Error::DivideByZero);
    }
    Ok(rho / denom)
}

/// Second-kind density `ρ̂ = ρ / |1 + b_0 (P_1 - P̂_1) G00(E + i0)|²`.
pub fn density_second_kind(
    model: &CoefficientModel,
    seed: SecondKindSeed,
    e: f64,
    depth: usize,
) -> Result<f64> {
    let res = Resolvent::new(model, depth)?;
    let g = res.g00(Complex64::new(e, 0.0), Side::Above)?;
    second_kind_value(g, e, res.a[0], seed)
}

/// Second-kind density sampled on a uniform grid.
pub fn density_curve_second_kind(
    model: &CoefficientModel,
    seed: SecondKindSeed,
    e_min: f64,
    e_max: f64,
    points: usize,
    depth: usize,
) -> Result<DensityCurve> {
    let res = Resolvent::new(model, depth)?;
    let a0 = res.a[0];
    sample(&res, e_min, e_max, points, |e| {
        let g = res.g00(Complex64::new(e, 0.0), Side::Above)?;
        second_kind_value(g, e, a0, seed)
    })
}

/// Weight `lim ε Im G00(E_b + iε)` by Richardson extrapolation over
/// `ε = 1e-4, 1e-5, 1e-6`. Close to zero when `E_b` is not a pole.
pub fn bound_state_weight(model: &CoefficientModel, e_b: f64, depth: usize) -> Result<f64> {
    let res = Resolvent::new(model, depth)?;
    let f =
        |eps: f64| -> Result<f64> { Ok(eps * res.g00(Complex64::new(e_b, eps), Side::Above)?.im) };
    let (f0, f1, f2) = (f(1e-4)?, f(1e-5)?, f(1e-6)?);
    let r0 = (10.0 * f1 - f0) / 9.0;
    let r1 = (10.0 * f2 - f1) / 9.0;
    let w = (100.0 * r1 - r0) / 99.0;
    if w < -NEGATIVE_WEIGHT_TOL {
        return Err(Error::NegativeWeight {
            energy: e_b,
            weight: w,
        });
    }
    Ok(w.max(0.0))
}

/// Split of the total spectral weight of site 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub continuum: f64,
    pub discrete: f64,
    pub poles: Vec<Pole>,
}

impl Normalization {
    pub fn total(&self) -> f64 {
        self.continuum + self.discrete
    }
}

/// Integrates `ρ` over every band (sine substitution `E = m + h sin θ`,
/// composite trapezoid) and adds the residues of all real poles. Fails with
/// [`Error::SumRuleViolated`] if the total misses one by more than `quad_tol`.
pub fn normalization(
    model: &CoefficientModel,
    depth: usize,
    quad_tol: f64,
) -> Result<Normalization> {
    if model.is_unbounded() {
        return Err(Error::UnboundedTail);
    }
    let res = Resolvent::new(model, depth)?;
    let mut continuum = 0.0;
    for (lo, hi) in res.bands().bands() {
        let m = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let dtheta = PI / PANELS_PER_BAND as f64;
        let mut sum = 0.0;
        // endpoint terms vanish with cos θ
        for i in 1..PANELS_PER_BAND {
            let theta = -0.5 * PI + dtheta * i as f64;
            sum += res.density(m + h * theta.sin())? * h * theta.cos();
        }
        continuum += sum * dtheta;
    }
    let poles = res.poles()?;
    let discrete = poles.iter().fold(0.0, |acc, p| acc + p.weight);
    let out = Normalization {
        continuum,
        discrete,
        poles,
    };
    if (out.total() - 1.0).abs() > quad_tol {
        return Err(Error::SumRuleViolated {
            continuum,
            discrete,
        });
    }
    Ok(out)
}

/// First diagonal element, needed for second-kind seeds written in terms of `a_0`.
pub fn leading_diagonal(model: &CoefficientModel) -> Result<f64> {
    Ok(coefficients(model, 0)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::CustomModel;
    use alloc::vec;
    use proptest::prelude::*;

    fn free_chain() -> CoefficientModel {
        CoefficientModel::Custom(CustomModel::constant(0.0, 0.5).unwrap())
    }

    fn semicircle(e: f64) -> f64 {
        if e.abs() >= 1.0 {
            0.0
        } else {
            2.0 / PI * (1.0 - e * e).sqrt()
        }
    }

    const TWO_BAND: CoefficientModel = CoefficientModel::TwoBand {
        alpha: 0.7,
        beta: 0.8,
        gamma: 0.3,
    };

    #[test]
    fn free_chain_matches_terminator() {
        let z = Complex64::new(0.0, 0.5);
        let t = crate::terminator::terminator(
            &Asymptotics::new(vec![0.0], vec![0.5]).unwrap(),
            z,
            Side::Above,
        )
        .unwrap();
        for depth in [1, 7, 100] {
            let g = g00(&free_chain(), z, depth, Side::Above).unwrap();
            assert!((g - t).norm() < 1e-14);
        }
        let g = g00(&free_chain(), Complex64::new(0.0, 0.0), 5, Side::Above).unwrap();
        assert!((g - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }

    #[test]
    fn semicircle_oracle() {
        let res = Resolvent::new(&free_chain(), 3).unwrap();
        for i in 0..=200 {
            let e = -1.2 + 2.4 * i as f64 / 200.0;
            assert!(
                (res.density(e).unwrap() - semicircle(e)).abs() < 1e-12,
                "E = {e}"
            );
        }
        assert_eq!(density(&free_chain(), 2.0, 10).unwrap(), 0.0);
    }

    #[test]
    fn curve_on_coarse_grid() {
        let c = density_curve(&free_chain(), -1.2, 1.2, 5, 10).unwrap();
        let expected = [0.0, semicircle(-0.6), 2.0 / PI, semicircle(0.6), 0.0];
        for (r, x) in c.rho.iter().zip(expected) {
            assert!((r - x).abs() < 1e-12);
        }
        assert!(c.flagged.iter().all(|f| !f));
        assert_eq!(c.depth, 10);
    }

    #[test]
    fn gap_is_real() {
        let g = g00(&TWO_BAND, Complex64::new(0.5, 0.0), 2000, Side::Above).unwrap();
        assert_eq!(g.im, 0.0);
    }

    #[test]
    fn three_band_density_positive_in_left_band() {
        assert!(density(&CoefficientModel::ThreeBand, -0.9, 3000).unwrap() > 0.0);
    }

    #[test]
    fn second_kind_reduces_and_matches_hand_value() {
        let seed = SecondKindSeed { s: 1.0, t: 0.1 };
        let v = density_second_kind(&free_chain(), seed, 0.0, 4).unwrap();
        assert!((v - 2.0 / PI / 1.04).abs() < 1e-14);
        let m = CoefficientModel::ThreeBand;
        let a0 = leading_diagonal(&m).unwrap();
        for e in [-0.9, -0.1, 0.8] {
            let r = density(&m, e, 500).unwrap();
            let r2 = density_second_kind(&m, SecondKindSeed::first_kind(a0), e, 500).unwrap();
            assert!((r - r2).abs() <= 1e-12);
        }
    }

    #[test]
    fn no_weight_off_poles() {
        assert!(bound_state_weight(&free_chain(), 2.0, 50).unwrap() < 1e-10);
        assert!(real_poles(&free_chain(), 50).unwrap().is_empty());
    }

    #[test]
    fn single_pole_of_impurity_chain() {
        // a_0 = 1.5 on a free chain: one bound state above the band. Oracle:
        // G00 = 1/(a_0 - z - T(z)/4) with T the free terminator, so the pole
        // solves E = 1.5 - T(E)/4 and the residue is 1/(1 + T'(E)/4).
        let tail = Asymptotics::new(vec![0.0], vec![0.5]).unwrap();
        let m = CoefficientModel::Custom(CustomModel::new(vec![(1.5, 0.5)], tail.clone()));
        let poles = real_poles(&m, 1).unwrap();
        assert_eq!(poles.len(), 1);
        let e = poles[0].energy;
        let t = crate::terminator::terminator(&tail, Complex64::new(e, 0.0), Side::Above)
            .unwrap()
            .re;
        assert!((e - 1.5 + 0.25 * t).abs() < 1e-12);
        // closed form: T(E) = 2(-E + sqrt(E² - 1)), T' = 2(-1 + E/sqrt(E² - 1))
        let dt = 2.0 * (-1.0 + e / (e * e - 1.0).sqrt());
        assert!((poles[0].weight - 1.0 / (1.0 + 0.25 * dt)).abs() < 1e-12);
        assert_eq!(poles[0].region, Region::Exterior);
        let rich = bound_state_weight(&m, e, 1).unwrap();
        assert!((rich - poles[0].weight).abs() < 1e-6);
        // the pole sits off the band, the rest of the weight is continuum
        let n = normalization(&m, 1, 1e-6).unwrap();
        assert!((n.discrete - poles[0].weight).abs() < 1e-15);
    }

    #[test]
    fn free_chain_normalization() {
        let n = normalization(&free_chain(), 5, 1e-6).unwrap();
        assert!((n.continuum - 1.0).abs() < 1e-6);
        assert_eq!(n.discrete, 0.0);
    }

    #[test]
    fn pivot_breakdown_at_exact_pole() {
        let tail = Asymptotics::new(vec![0.0], vec![0.5]).unwrap();
        let m = CoefficientModel::Custom(CustomModel::new(vec![(1.5, 0.5)], tail));
        let p = real_poles(&m, 1).unwrap()[0].energy;
        let res = Resolvent::new(&m, 1).unwrap();
        // at the bisected pole G00 is either huge or breaks down
        match res.g00(Complex64::new(p, 0.0), Side::Above) {
            Ok(g) => assert!(g.norm() > 1e8),
            Err(e) => assert!(matches!(e, Error::PivotBreakdown { index: 0 })),
        }
        let c = density_curve(&m, p - 0.1, p, 2, 1).unwrap();
        assert!(c.flagged[1]);
        assert!(c.grid[1] < p);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            Resolvent::new(&free_chain(), 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(density_curve(&free_chain(), 1.0, 0.0, 10, 5).is_err());
        assert!(density_curve(&free_chain(), 0.0, 1.0, 1, 5).is_err());
        let unbounded = CoefficientModel::UnboundedTwoBand {
            alpha: 1.0,
            beta: 0.2,
            gamma: 0.8,
        };
        assert_eq!(
            normalization(&unbounded, 100, 1e-3),
            Err(Error::UnboundedTail)
        );
    }

    #[test]
    fn custom_depth_never_cuts_head() {
        let tail = Asymptotics::new(vec![0.0], vec![0.5]).unwrap();
        let m = CoefficientModel::Custom(CustomModel::new(vec![(0.2, 0.3), (-0.1, 0.6)], tail));
        assert_eq!(Resolvent::new(&m, 1).unwrap().depth(), 2);
        let z = Complex64::new(0.1, 0.3);
        let a = g00(&m, z, 1, Side::Above).unwrap();
        let b = g00(&m, z, 40, Side::Above).unwrap();
        assert!((a - b).norm() < 1e-14);
    }

    fn builtins() -> Vec<CoefficientModel> {
        vec![
            CoefficientModel::SingleBand {
                alpha: 0.7,
                beta: 0.5,
                gamma: -0.7,
            },
            TWO_BAND,
            CoefficientModel::ThreeBand,
            CoefficientModel::UnboundedTwoBand {
                alpha: 1.0,
                beta: 0.2,
                gamma: 0.8,
            },
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn herglotz(idx in 0usize..4, re in -2.0f64..2.0, im in 1e-6f64..1.0) {
            let m = &builtins()[idx];
            let g = g00(m, Complex64::new(re, im), 300, Side::Above).unwrap();
            prop_assert!(g.im > 0.0);
        }

        #[test]
        fn density_nonnegative_for_random_custom(
            head in proptest::collection::vec((-1.0f64..1.0, 0.1f64..1.0), 0..8),
            a in proptest::collection::vec(-0.5f64..0.5, 1..=3),
            b_seed in proptest::collection::vec(0.2f64..0.8, 3),
            e in -3.0f64..3.0,
        ) {
            let b = b_seed[..a.len()].to_vec();
            let tail = Asymptotics::new(a, b).unwrap();
            let m = CoefficientModel::Custom(CustomModel::new(head, tail));
            match density(&m, e, 20) {
                Ok(r) => prop_assert!(r >= 0.0),
                Err(Error::PivotBreakdown { .. }) => {}
                Err(Error::MergedBands { .. }) => {}
                Err(other) => prop_assert!(false, "{other}"),
            }
        }
    }
}
