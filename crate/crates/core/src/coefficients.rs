//! Coefficient models: rules `n -> (a_n, b_n)` for the diagonal and
//! off-diagonal of the tridiagonal Hamiltonian, and their K-periodic limits.
//!
//! Indexing starts at `n = 0` for both sequences. The periodic convention is
//! `a_{Kn+k-1} -> A_k`, `b_{Kn+k-1} -> B_k`, so index `n` belongs to phase
//! `n mod K`.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest index whose value is exactly representable in the `f64` formulas.
pub const MAX_INDEX: usize = 1 << 53;

/// Default length of the prefix scanned by [`validate_model`].
pub const DEFAULT_VALIDATION_PREFIX: usize = 10_000;

/// Periodic limits `{A_k, B_k}`, `k = 1..K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Asymptotics {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Asymptotics {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidModel {
                index: None,
                reason: "asymptotic A and B lists differ in length",
            });
        }
        if !(1..=3).contains(&a.len()) {
            return Err(Error::UnsupportedPeriod { period: a.len() });
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidModel {
                index: None,
                reason: "asymptotic values must be finite",
            });
        }
        if b.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidModel {
                index: None,
                reason: "asymptotic off-diagonal limits must be positive",
            });
        }
        Ok(Asymptotics { a, b })
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// Limits of the tail that starts at an index of phase `shift`, i.e.
    /// `A'_k = A_{((shift + k - 1) mod K) + 1}`.
    pub fn rotated(&self, shift: usize) -> Asymptotics {
        let k = self.period();
        let s = shift % k;
        let a = (0..k).map(|i| self.a[(s + i) % k]).collect();
        let b = (0..k).map(|i| self.b[(s + i) % k]).collect();
        Asymptotics { a, b }
    }
}

/// What the coefficients do as `n -> infinity`.
#[derive(Debug, Clone, PartialEq)]
pub enum TailLimit {
    Periodic(Asymptotics),
    /// Diagonal limits exist but the off-diagonal elements diverge.
    Unbounded {
        a: Vec<f64>,
    },
}

impl TailLimit {
    pub fn period(&self) -> usize {
        match self {
            TailLimit::Periodic(asym) => asym.period(),
            TailLimit::Unbounded { a } => a.len(),
        }
    }
}

/// User-supplied model: explicit head values followed by an exactly periodic
/// tail.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomModel {
    pub head: Vec<(f64, f64)>,
    pub tail: Asymptotics,
}

impl CustomModel {
    pub fn new(head: Vec<(f64, f64)>, tail: Asymptotics) -> Self {
        CustomModel { head, tail }
    }

    /// Constant chain `a_n = a`, `b_n = b` with no head.
    pub fn constant(a: f64, b: f64) -> Result<Self> {
        Ok(CustomModel {
            head: Vec::new(),
            tail: Asymptotics::new(alloc::vec![a], alloc::vec![b])?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientModel {
    /// Single band: `a_n = γ(δ_{n,0} + δ_{n,1})`,
    /// `b_n = ½ |(n+α)/(n+α-1)|^β`. Limits `A = 0`, `B = ½`.
    SingleBand {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// Two bands: `a_{2n} = γ`, `a_{2n+1} = 1-γ`,
    /// `b_{2n} = (β/2)((n+1/α)/(n+α))^γ`, `b_{2n+1} = (α/2)((n+β)/(n+1/β))^{1-γ}`.
    TwoBand {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    /// Three bands with fixed coefficients: `a = (-1/5, 1/4, 0)` per period and
    /// `b_{3n} = ½√((2n+1)/(3n+1))`, `b_{3n+1} = ½`, `b_{3n+2} = ½√((3n+1)/(2n+1))`.
    ThreeBand,
    /// Two bands extending to infinity: diagonal as in [`TwoBand`](Self::TwoBand),
    /// `b_{2n} = γ√(2n+α)`, `b_{2n+1} = γ√(2n+β)`.
    UnboundedTwoBand {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    Custom(CustomModel),
}

impl CoefficientModel {
    pub fn name(&self) -> &'static str {
        match self {
            CoefficientModel::SingleBand { .. } => "single-band",
            CoefficientModel::TwoBand { .. } => "two-band",
            CoefficientModel::ThreeBand => "three-band",
            CoefficientModel::UnboundedTwoBand { .. } => "unbounded-two-band",
            CoefficientModel::Custom(_) => "custom",
        }
    }

    /// Short human-readable identifier including parameters.
    pub fn label(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from(self.name());
        match self {
            CoefficientModel::SingleBand { alpha, beta, gamma }
            | CoefficientModel::TwoBand { alpha, beta, gamma }
            | CoefficientModel::UnboundedTwoBand { alpha, beta, gamma } => {
                let _ = write!(s, "(alpha={alpha}, beta={beta}, gamma={gamma})");
            }
            CoefficientModel::ThreeBand => {}
            CoefficientModel::Custom(c) => {
                let _ = write!(s, "(head={}, K={})", c.head.len(), c.tail.period());
            }
        }
        s
    }

    pub fn period(&self) -> usize {
        match self {
            CoefficientModel::SingleBand { .. } => 1,
            CoefficientModel::TwoBand { .. } | CoefficientModel::UnboundedTwoBand { .. } => 2,
            CoefficientModel::ThreeBand => 3,
            CoefficientModel::Custom(c) => c.tail.period(),
        }
    }

    /// Number of leading indices that do not follow the periodic tail exactly
    /// (only meaningful for custom models; builtins return 0).
    pub fn head_len(&self) -> usize {
        match self {
            CoefficientModel::Custom(c) => c.head.len(),
            _ => 0,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, CoefficientModel::UnboundedTwoBand { .. })
    }

    fn check_params(&self) -> Result<()> {
        let params: &[f64] = match self {
            CoefficientModel::SingleBand { alpha, beta, gamma }
            | CoefficientModel::TwoBand { alpha, beta, gamma }
            | CoefficientModel::UnboundedTwoBand { alpha, beta, gamma } => &[*alpha, *beta, *gamma],
            CoefficientModel::ThreeBand => &[],
            CoefficientModel::Custom(c) => {
                if c.head.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
                    return Err(Error::InvalidModel {
                        index: None,
                        reason: "head values must be finite",
                    });
                }
                &[]
            }
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidModel {
                index: None,
                reason: "parameters must be finite",
            });
        }
        match *self {
            CoefficientModel::SingleBand { alpha, .. } if alpha <= 0.0 => {
                Err(Error::InvalidModel {
                    index: None,
                    reason: "alpha must be positive",
                })
            }
            CoefficientModel::TwoBand { alpha, beta, gamma }
                if alpha <= 0.0 || beta <= 0.0 || gamma <= 0.0 =>
            {
                Err(Error::InvalidModel {
                    index: None,
                    reason: "alpha, beta and gamma must be positive",
                })
            }
            CoefficientModel::UnboundedTwoBand { alpha, beta, gamma }
                if alpha <= 0.0 || beta <= 0.0 || gamma <= 0.0 =>
            {
                Err(Error::InvalidModel {
                    index: None,
                    reason: "alpha, beta and gamma must be positive",
                })
            }
            _ => Ok(()),
        }
    }

    fn raw(&self, n: usize) -> (f64, f64) {
        let x = n as f64;
        match *self {
            CoefficientModel::SingleBand { alpha, beta, gamma } => {
                let a = if n < 2 { gamma } else { 0.0 };
                let b = 0.5 * ((x + alpha) / (x + alpha - 1.0)).abs().powf(beta);
                (a, b)
            }
            CoefficientModel::TwoBand { alpha, beta, gamma } => {
                let m = (n / 2) as f64;
                if n % 2 == 0 {
                    let b = 0.5 * beta * ((m + 1.0 / alpha) / (m + alpha)).powf(gamma);
                    (gamma, b)
                } else {
                    let b = 0.5 * alpha * ((m + beta) / (m + 1.0 / beta)).powf(1.0 - gamma);
                    (1.0 - gamma, b)
                }
            }
            CoefficientModel::ThreeBand => {
                let m = (n / 3) as f64;
                match n % 3 {
                    0 => (-0.2, 0.5 * ((2.0 * m + 1.0) / (3.0 * m + 1.0)).sqrt()),
                    1 => (0.25, 0.5),
                    _ => (0.0, 0.5 * ((3.0 * m + 1.0) / (2.0 * m + 1.0)).sqrt()),
                }
            }
            CoefficientModel::UnboundedTwoBand { alpha, beta, gamma } => {
                let m = (n / 2) as f64;
                if n % 2 == 0 {
                    (gamma, gamma * (2.0 * m + alpha).sqrt())
                } else {
                    (1.0 - gamma, gamma * (2.0 * m + beta).sqrt())
                }
            }
            CoefficientModel::Custom(ref c) => match c.head.get(n) {
                Some(&pair) => pair,
                None => {
                    let k = n % c.tail.period();
                    (c.tail.a[k], c.tail.b[k])
                }
            },
        }
    }
}

fn checked(n: usize, (a, b): (f64, f64)) -> Result<(f64, f64)> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidModel {
            index: Some(n),
            reason: "non-finite coefficient",
        });
    }
    if b <= 0.0 {
        return Err(Error::InvalidModel {
            index: Some(n),
            reason: "off-diagonal element must be positive",
        });
    }
    Ok((a, b))
}

/// `(a_n, b_n)` of the model.
pub fn coefficients(model: &CoefficientModel, n: usize) -> Result<(f64, f64)> {
    if n > MAX_INDEX {
        return Err(Error::IndexOverflow { index: n });
    }
    model.check_params()?;
    checked(n, model.raw(n))
}

/// Analytic limits for builtins, declared limits for custom models.
pub fn asymptotics(model: &CoefficientModel) -> TailLimit {
    let periodic = |a: Vec<f64>, b: Vec<f64>| TailLimit::Periodic(Asymptotics { a, b });
    match *model {
        CoefficientModel::SingleBand { .. } => periodic(alloc::vec![0.0], alloc::vec![0.5]),
        CoefficientModel::TwoBand { alpha, beta, gamma } => periodic(
            alloc::vec![gamma, 1.0 - gamma],
            alloc::vec![0.5 * beta, 0.5 * alpha],
        ),
        CoefficientModel::ThreeBand => periodic(
            alloc::vec![-0.2, 0.25, 0.0],
            alloc::vec![
                0.5 * (2.0f64 / 3.0).sqrt(),
                0.5,
                0.5 * (3.0f64 / 2.0).sqrt()
            ],
        ),
        CoefficientModel::UnboundedTwoBand { gamma, .. } => TailLimit::Unbounded {
            a: alloc::vec![gamma, 1.0 - gamma],
        },
        CoefficientModel::Custom(ref c) => TailLimit::Periodic(c.tail.clone()),
    }
}

/// Result of numerically probing a model's periodic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub asymptotics: Asymptotics,
    /// Largest componentwise change between the probed period and the next one.
    pub change: f64,
}

/// Reads `A_k ≈ a_{K·n_probe+k-1}`, `B_k ≈ b_{K·n_probe+k-1}` and checks that
/// the following period differs by less than `tol` in every component.
pub fn estimate_asymptotics(
    model: &CoefficientModel,
    period: usize,
    n_probe: usize,
    tol: f64,
) -> Result<Estimate> {
    if !(1..=3).contains(&period) {
        return Err(Error::UnsupportedPeriod { period });
    }
    let base = n_probe
        .checked_mul(period)
        .ok_or(Error::IndexOverflow { index: n_probe })?;
    let mut a = Vec::with_capacity(period);
    let mut b = Vec::with_capacity(period);
    let mut change = 0.0f64;
    for k in 0..period {
        let n = base + k;
        let next = n
            .checked_add(period)
            .ok_or(Error::IndexOverflow { index: n })?;
        let (an, bn) = coefficients(model, n)?;
        let (an1, bn1) = coefficients(model, next)?;
        change = change.max((an1 - an).abs()).max((bn1 - bn).abs());
        a.push(an);
        b.push(bn);
    }
    if change >= tol {
        return Err(Error::NotConverged { period, change });
    }
    Ok(Estimate {
        asymptotics: Asymptotics::new(a, b)?,
        change,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Number of leading indices checked.
    pub checked: usize,
    pub notes: Vec<&'static str>,
}

/// Checks finiteness and `b_n > 0` for `n < prefix`.
pub fn validate_model(model: &CoefficientModel, prefix: usize) -> Result<ValidationReport> {
    model.check_params()?;
    if let CoefficientModel::Custom(c) = model {
        // re-validate the tail in case the struct was built by hand
        Asymptotics::new(c.tail.a.clone(), c.tail.b.clone())?;
    }
    let checked_len = prefix.max(model.head_len());
    for n in 0..checked_len {
        checked(n, model.raw(n))?;
    }
    let mut notes = Vec::new();
    if let CoefficientModel::SingleBand { alpha, .. } = *model {
        if alpha > 0.0 && alpha < 1.0 {
            notes.push(
                "alpha < 1: b_0 uses |(n+alpha)/(n+alpha-1)|^beta because the ratio is negative; limits unaffected",
            );
        }
    }
    if model.is_unbounded() {
        notes.push("off-diagonal elements grow without bound; closure uses local coefficients");
    }
    Ok(ValidationReport {
        checked: checked_len,
        notes,
    })
}

/// Precomputed `a_0..a_{len-1}`, `b_0..b_{len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl CoefficientTable {
    pub fn new(model: &CoefficientModel, len: usize) -> Result<Self> {
        if len > MAX_INDEX {
            return Err(Error::IndexOverflow { index: len });
        }
        model.check_params()?;
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        for n in 0..len {
            let (an, bn) = checked(n, model.raw(n))?;
            a.push(an);
            b.push(bn);
        }
        Ok(CoefficientTable { a, b })
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}
