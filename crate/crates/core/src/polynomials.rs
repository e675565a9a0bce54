//! Orthogonal polynomials of the chain, their zeros, and bound states read off
//! from gap zeros that do not move as the order grows.
//!
//! Recursion: `b_n P_{n+1} = (E - a_n) P_n - b_{n-1} P_{n-1}` with `P_0 = 1`.
//! The zeros of `P_N` are the eigenvalues of the leading N x N block of the
//! Jacobi matrix.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coefficients::{CoefficientModel, CoefficientTable};
use crate::error::{Error, Result};
use crate::greens::{bound_state_weight, SecondKindSeed};
use crate::terminator::{band_structure, BandStructure, Region};
use crate::DEFAULT_DEPTH;

/// Label attached to each zero.
pub type ZeroLabel = Region;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolynomialKind {
    /// `P_1 = (E - a_0)/b_0`.
    First,
    /// `P̂_1 = (s E + t)/b_0`.
    Second(SecondKindSeed),
}

/// `mantissa · 2^exponent`, with the derivative sharing the exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub derivative: f64,
    pub exponent: i32,
}

impl ScaledValue {
    /// The value as a plain float (may overflow to infinity).
    pub fn value(&self) -> f64 {
        scale_pow2(self.mantissa, self.exponent)
    }

    pub fn derivative_value(&self) -> f64 {
        scale_pow2(self.derivative, self.exponent)
    }
}

fn scale_pow2(x: f64, mut e: i32) -> f64 {
    let mut x = x;
    while e > 0 {
        let s = e.min(1000);
        x *= 2f64.powi(s);
        e -= s;
    }
    while e < 0 {
        let s = (-e).min(1000);
        x *= 2f64.powi(-s);
        e += s;
    }
    x
}

const RESCALE_BITS: i32 = 256;

/// `P_n(E)` and `P_n'(E)` by forward recursion with exponent tracking.
pub fn evaluate_scaled(
    model: &CoefficientModel,
    kind: PolynomialKind,
    n: usize,
    e: f64,
) -> Result<ScaledValue> {
    let table = CoefficientTable::new(model, n.max(1))?;
    Ok(evaluate_with(&table, kind, n, e))
}

fn evaluate_with(table: &CoefficientTable, kind: PolynomialKind, n: usize, e: f64) -> ScaledValue {
    let (a, b) = (&table.a, &table.b);
    if n == 0 {
        return ScaledValue {
            mantissa: 1.0,
            derivative: 0.0,
            exponent: 0,
        };
    }
    let (s, t) = match kind {
        PolynomialKind::First => (1.0, -a[0]),
        PolynomialKind::Second(seed) => (seed.s, seed.t),
    };
    let (mut p0, mut d0) = (1.0, 0.0);
    let (mut p1, mut d1) = ((s * e + t) / b[0], s / b[0]);
    let mut exponent = 0;
    let big = 2f64.powi(RESCALE_BITS);
    let small = 2f64.powi(-RESCALE_BITS);
    for k in 1..n {
        let p2 = ((e - a[k]) * p1 - b[k - 1] * p0) / b[k];
        let d2 = (p1 + (e - a[k]) * d1 - b[k - 1] * d0) / b[k];
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
        let m = p1.abs().max(d1.abs());
        if m > big {
            p0 *= small;
            d0 *= small;
            p1 *= small;
            d1 *= small;
            exponent += RESCALE_BITS;
        } else if m < small && m > 0.0 {
            p0 *= big;
            d0 *= big;
            p1 *= big;
            d1 *= big;
            exponent -= RESCALE_BITS;
        }
    }
    ScaledValue {
        mantissa: p1,
        derivative: d1,
        exponent,
    }
}

/// `P_n(E)` as a plain float.
pub fn evaluate(model: &CoefficientModel, kind: PolynomialKind, n: usize, e: f64) -> Result<f64> {
    Ok(evaluate_scaled(model, kind, n, e)?.value())
}

/// Number of eigenvalues of the leading block below `x` (negative pivots of
/// `J - x`).
fn sturm_count(a: &[f64], b: &[f64], x: f64) -> usize {
    let mut neg = 0;
    let mut d = 1.0;
    for k in 0..a.len() {
        let coupling = if k == 0 { 0.0 } else { b[k - 1] * b[k - 1] / d };
        d = a[k] - x - coupling;
        if d.abs() < 1e-300 {
            d = 1e-14 * (1.0 + x.abs());
        }
        if d < 0.0 {
            neg += 1;
        }
    }
    neg
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `a` and
/// off-diagonal `b[..a.len()-1]`, ascending, by Sturm bisection.
pub(crate) fn tridiagonal_eigenvalues(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..n {
        let r = if k > 0 { b[k - 1].abs() } else { 0.0 } + if k + 1 < n { b[k].abs() } else { 0.0 };
        lo = lo.min(a[k] - r);
        hi = hi.max(a[k] + r);
    }
    let pad = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    let mut lower = vec![lo - pad; n];
    let mut upper = vec![hi + pad; n];
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut l, mut u) = (lower[k], upper[k]);
        loop {
            let mid = 0.5 * (l + u);
            if u - l <= 1e-13 || mid <= l || mid >= u {
                break;
            }
            let c = sturm_count(a, b, mid);
            // share the bracket information with the other eigenvalues
            for j in k..n {
                if j < c {
                    upper[j] = upper[j].min(mid);
                } else {
                    lower[j] = lower[j].max(mid);
                }
            }
            if c > k {
                u = mid;
            } else {
                l = mid;
            }
        }
        out.push(0.5 * (l + u));
    }
    out
}

/// The `order` zeros of `P_order`, ascending.
pub fn zeros(model: &CoefficientModel, order: usize) -> Result<Vec<f64>> {
    if order == 0 {
        return Err(Error::InvalidArgument(
            "polynomial order must be at least 1",
        ));
    }
    let table = CoefficientTable::new(model, order)?;
    Ok(tridiagonal_eigenvalues(&table.a, &table.b[..order - 1]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroReport {
    pub order: usize,
    pub zeros: Vec<f64>,
    pub labels: Vec<ZeroLabel>,
    pub gap_zero_count: usize,
}

impl ZeroReport {
    /// `(zero, gap index)` for zeros inside gaps.
    pub fn gap_zeros(&self) -> Vec<(f64, usize)> {
        self.zeros
            .iter()
            .zip(&self.labels)
            .filter_map(|(&z, l)| match l {
                Region::Gap(j) => Some((z, *j)),
                _ => None,
            })
            .collect()
    }

    /// Zeros outside every band and every gap.
    pub fn exterior_count(&self) -> usize {
        self.labels
            .iter()
            .filter(|l| **l == Region::Exterior)
            .count()
    }
}

/// Labels zeros against the bands; zeros within `edge_tol` of a band count as
/// in the band.
pub fn classify_zeros(zeros: &[f64], bands: &BandStructure, edge_tol: f64) -> ZeroReport {
    let labels: Vec<ZeroLabel> = zeros.iter().map(|&z| bands.locate(z, edge_tol)).collect();
    let gap_zero_count = labels
        .iter()
        .filter(|l| matches!(l, Region::Gap(_)))
        .count();
    ZeroReport {
        order: zeros.len(),
        zeros: zeros.to_vec(),
        labels,
        gap_zero_count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateOptions {
    pub base_order: usize,
    /// Orders per residue class.
    pub steps: usize,
    pub tol_stab: f64,
    pub edge_tol: f64,
    /// Depth used for the spectral weights.
    pub depth: usize,
}

impl Default for BoundStateOptions {
    fn default() -> Self {
        BoundStateOptions {
            base_order: 300,
            steps: 4,
            tol_stab: 1e-6,
            edge_tol: 1e-8,
            depth: DEFAULT_DEPTH,
        }
    }
}

/// A gap zero followed through the orders of one residue class.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Position at the highest order.
    pub energy: f64,
    pub gap: usize,
    /// Residue class `order mod K`.
    pub class: usize,
    /// `(order, zero)` from lowest to highest order.
    pub history: Vec<(usize, f64)>,
    /// Largest pairwise distance within the history.
    pub spread: f64,
    pub stable: bool,
}

/// A stable gap zero shared by every residue class.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub gap: usize,
    pub weight: f64,
    /// Index into [`BoundStateReport::candidates`] for each class.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateReport {
    pub period: usize,
    /// Orders examined, per residue class.
    pub orders: Vec<Vec<usize>>,
    pub candidates: Vec<Candidate>,
    pub system_bound_states: Vec<BoundState>,
}

impl BoundStateReport {
    /// Stable candidates that are not part of a system bound state.
    pub fn class_only(&self) -> Vec<&Candidate> {
        let used: Vec<usize> = self
            .system_bound_states
            .iter()
            .flat_map(|s| s.members.iter().copied())
            .collect();
        self.candidates
            .iter()
            .enumerate()
            .filter(|(i, c)| c.stable && !used.contains(i))
            .map(|(_, c)| c)
            .collect()
    }

    /// Number of stable gap zeros in each residue class.
    pub fn stable_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.period];
        for c in self.candidates.iter().filter(|c| c.stable) {
            counts[c.class] += 1;
        }
        counts
    }
}

/// Follows gap zeros through orders `N0 + jK + r` (`j < steps`, `r < K`) and
/// reports those that stay put. A gap zero is stable in its class when its
/// nearest-neighbour history has spread below `tol_stab`; a system bound state
/// is a stable zero found in every class within `tol_stab`.
pub fn bound_states(
    model: &CoefficientModel,
    opts: &BoundStateOptions,
) -> Result<BoundStateReport> {
    if opts.steps == 0 {
        return Err(Error::InvalidArgument(
            "at least one order per class is required",
        ));
    }
    if opts.base_order == 0 {
        return Err(Error::InvalidArgument("base order must be at least 1"));
    }
    let bands = band_structure(model)?;
    let k = bands.period();
    let mut report = BoundStateReport {
        period: k,
        orders: Vec::new(),
        candidates: Vec::new(),
        system_bound_states: Vec::new(),
    };
    if k == 1 {
        return Ok(report);
    }
    let max_order = opts.base_order + (opts.steps - 1) * k + (k - 1);
    let table = CoefficientTable::new(model, max_order)?;
    for r in 0..k {
        let orders: Vec<usize> = (0..opts.steps)
            .map(|j| opts.base_order + j * k + r)
            .collect();
        let reports: Vec<ZeroReport> = orders
            .iter()
            .map(|&n| {
                let z = tridiagonal_eigenvalues(&table.a[..n], &table.b[..n - 1]);
                classify_zeros(&z, &bands, opts.edge_tol)
            })
            .collect();
        let class = orders[0] % k;
        let last = reports.last().expect("steps >= 1");
        for (energy, gap) in last.gap_zeros() {
            let mut history = Vec::with_capacity(orders.len());
            let mut complete = true;
            for (rep, &n) in reports.iter().zip(&orders) {
                let nearest = rep
                    .gap_zeros()
                    .into_iter()
                    .filter(|&(_, g)| g == gap)
                    .map(|(z, _)| z)
                    .min_by(|x, y| (x - energy).abs().total_cmp(&(y - energy).abs()));
                match nearest {
                    Some(z) => history.push((n, z)),
                    None => complete = false,
                }
            }
            let (lo, hi) = history
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &(_, z)| {
                    (l.min(z), h.max(z))
                });
            let spread = hi - lo;
            report.candidates.push(Candidate {
                energy,
                gap,
                class,
                history,
                spread,
                stable: complete && spread < opts.tol_stab,
            });
        }
        report.orders.push(orders);
    }

    // match stable candidates across all classes
    let mut used = vec![false; report.candidates.len()];
    for i in 0..report.candidates.len() {
        let ci = &report.candidates[i];
        if !ci.stable || used[i] || ci.class != report.orders[0][0] % k {
            continue;
        }
        let mut members = vec![i];
        for r in 1..k {
            let class = report.orders[r][0] % k;
            let best = report
                .candidates
                .iter()
                .enumerate()
                .filter(|(j, c)| {
                    c.stable
                        && !used[*j]
                        && c.class == class
                        && c.gap == ci.gap
                        && (c.energy - ci.energy).abs() < opts.tol_stab
                })
                .min_by(|(_, x), (_, y)| {
                    (x.energy - ci.energy)
                        .abs()
                        .total_cmp(&(y.energy - ci.energy).abs())
                })
                .map(|(j, _)| j);
            match best {
                Some(j) => members.push(j),
                None => break,
            }
        }
        if members.len() == k {
            for &m in &members {
                used[m] = true;
            }
            let energy = members
                .iter()
                .map(|&m| report.candidates[m].energy)
                .sum::<f64>()
                / k as f64;
            let weight = bound_state_weight(model, energy, opts.depth)?;
            report.system_bound_states.push(BoundState {
                energy,
                gap: ci.gap,
                weight,
                members,
            });
        }
    }
    Ok(report)
}
