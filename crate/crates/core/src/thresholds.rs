//! Closed-form domination thresholds for the multitype contact process.
//!
//! The MCP family studied here has type-2 parameters `beta2 = c*beta`,
//! `delta2 = 1` and type-1 parameters `beta1 = beta*alpha`, `delta1 = alpha`
//! on the `d`-dimensional lattice. [`lambda_bar_mcp`] evaluates the dominated
//! contact-process rate `lambda_bar(beta, c, alpha)`; type 2 survives
//! strongly whenever that value exceeds the contact-process critical value.
//! [`lambda_bar_broman`] is the analogous bound for a two-state
//! background-modulated Poisson process, and [`cpree_broman_params`] is the
//! exact parameter mapping that makes the two coincide.

use crate::math;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Violation of a parameter-domain precondition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("{name} must be strictly positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite and nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("lattice dimension must be at least 1")]
    BadDimension,
    #[error("p must lie strictly inside (0, 1), got {value}")]
    ProbabilityOpen { value: f64 },
    #[error("{name} must be a probability in [0, 1], got {value}")]
    ProbabilityClosed { name: &'static str, value: f64 },
    #[error("alpha1 must be at least alpha0, got alpha0={alpha0}, alpha1={alpha1}")]
    RateOrder { alpha0: f64, alpha1: f64 },
    #[error("c_star requires alpha > 1/(2d-1) = {bound}, got alpha = {alpha}")]
    CStar { alpha: f64, bound: f64 },
    #[error(
        "sufficient_c_bound requires alpha > 2/d and beta > 2/d = {bound}, \
         got alpha = {alpha}, beta = {beta}"
    )]
    SufficientBound { alpha: f64, beta: f64, bound: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, DomainError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(DomainError::NotPositive { name, value })
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<f64, DomainError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(DomainError::Negative { name, value })
    }
}

/// The four-parameter MCP family: `beta2 = c*beta`, `delta2 = 1`,
/// `beta1 = beta*alpha`, `delta1 = alpha` in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct McpParams {
    beta: f64,
    c: f64,
    alpha: f64,
    dim: u32,
}

impl McpParams {
    pub fn new(beta: f64, c: f64, alpha: f64, dim: u32) -> Result<Self, DomainError> {
        positive("beta", beta)?;
        positive("c", c)?;
        positive("alpha", alpha)?;
        if dim == 0 {
            return Err(DomainError::BadDimension);
        }
        Ok(Self { beta, c, alpha, dim })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Type-1 birth rate per occupied neighbor, `beta * alpha`.
    pub fn beta1(&self) -> f64 {
        self.beta * self.alpha
    }

    /// Type-2 birth rate per occupied neighbor, `c * beta`.
    pub fn beta2(&self) -> f64 {
        self.c * self.beta
    }

    /// Type-1 death rate, `alpha`.
    pub fn delta1(&self) -> f64 {
        self.alpha
    }

    /// Type-2 death rate, normalized to 1.
    pub fn delta2(&self) -> f64 {
        1.0
    }

    /// The generic rate table of this parameterization.
    pub fn rates(&self) -> GenericMcpRates {
        GenericMcpRates {
            b1: self.beta1(),
            d1: self.delta1(),
            b2: self.beta2(),
            d2: self.delta2(),
            dim: self.dim,
        }
    }
}

/// Two-state background-modulated point process: the background flips
/// `0 -> 1` at rate `gamma * p` and `1 -> 0` at rate `gamma * (1 - p)`;
/// arrivals occur at rate `alpha0` while the background is 0 and `alpha1`
/// while it is 1.
///
/// `p` is restricted to the open interval `(0, 1)`: at the endpoints the
/// background never flips and the threshold formula degenerates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct BromanParams {
    alpha0: f64,
    alpha1: f64,
    gamma: f64,
    p: f64,
}

impl BromanParams {
    pub fn new(alpha0: f64, alpha1: f64, gamma: f64, p: f64) -> Result<Self, DomainError> {
        nonnegative("alpha0", alpha0)?;
        nonnegative("alpha1", alpha1)?;
        if alpha1 < alpha0 {
            return Err(DomainError::RateOrder { alpha0, alpha1 });
        }
        positive("gamma", gamma)?;
        if !(p.is_finite() && p > 0.0 && p < 1.0) {
            return Err(DomainError::ProbabilityOpen { value: p });
        }
        Ok(Self { alpha0, alpha1, gamma, p })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Stationary mean arrival rate `p*alpha1 + (1-p)*alpha0`.
    pub fn mean_rate(&self) -> f64 {
        self.p * self.alpha1 + (1.0 - self.p) * self.alpha0
    }
}

/// A general MCP rate table (births per occupied neighbor, deaths per site),
/// for constructions outside the `McpParams` normalization, e.g. the
/// perturbed-death coupling where `d1` is the extra type-1 death rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct GenericMcpRates {
    b1: f64,
    d1: f64,
    b2: f64,
    d2: f64,
    dim: u32,
}

impl GenericMcpRates {
    pub fn new(b1: f64, d1: f64, b2: f64, d2: f64, dim: u32) -> Result<Self, DomainError> {
        nonnegative("b1", b1)?;
        nonnegative("d1", d1)?;
        nonnegative("b2", b2)?;
        nonnegative("d2", d2)?;
        if dim == 0 {
            return Err(DomainError::BadDimension);
        }
        Ok(Self { b1, d1, b2, d2, dim })
    }

    /// Rates for a standard contact process with birth rate `lambda`:
    /// arrows on the type-1 stream, death marks on the all-type stream.
    pub fn standard_cp(lambda: f64, dim: u32) -> Result<Self, DomainError> {
        Self::new(lambda, 0.0, 0.0, 1.0, dim)
    }

    /// Same table with the type-1 death stream replaced by `d1`.
    pub fn with_d1(mut self, d1: f64) -> Result<Self, DomainError> {
        nonnegative("d1", d1)?;
        self.d1 = d1;
        Ok(self)
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
}

/// The dominated contact-process rate for the MCP family:
///
/// `lambda_bar = (c*b + a + 2*d*b*a - sqrt((c*b - a - 2*d*b*a)^2 + 8*d*a*c*b^2)) / 2`
///
/// with `b = beta`, `a = alpha`. Strictly below `min(alpha, c*beta/(1+2*d*beta))`,
/// strictly increasing in both `c` and `alpha`.
#[must_use]
pub fn lambda_bar_mcp(p: &McpParams) -> f64 {
    let d = f64::from(p.dim);
    let cb = p.beta2();
    let a = p.alpha;
    let two_dba = 2.0 * d * p.beta * a;
    let sum = cb + a + two_dba;
    let gap = cb - a - two_dba;
    // Sum of two nonnegative terms; the clamp only guards round-off.
    let disc = (gap * gap + 8.0 * d * a * p.c * p.beta * p.beta).max(0.0);
    // sum^2 - disc = 4*alpha*c*beta exactly, so (sum - sqrt(disc)) / 2 can be
    // evaluated without cancellation; the subtraction form loses the strict
    // bounds in f64 once c or alpha get large.
    let out = 2.0 * a * p.c * p.beta / (sum + math::sqrt(disc));
    debug_assert!(out.is_finite());
    out
}

/// The maximal Poisson rate dominated by the modulated process:
///
/// `lambda_bar = (a1 + a0 + g - sqrt((a1 - a0 - g)^2 + 4*g*(1-p)*(a1 - a0))) / 2`
///
/// The exact value lies in `[alpha0, p*alpha1 + (1-p)*alpha0]`; the result is
/// clamped into that interval to absorb last-ulp round-off.
#[must_use]
pub fn lambda_bar_broman(b: &BromanParams) -> f64 {
    let sum = b.alpha1 + b.alpha0 + b.gamma;
    let gap = b.alpha1 - b.alpha0 - b.gamma;
    let disc = (gap * gap + 4.0 * b.gamma * (1.0 - b.p) * (b.alpha1 - b.alpha0)).max(0.0);
    // sum^2 - disc = 4*(alpha1*alpha0 + gamma*mean_rate); same
    // cancellation-free evaluation as the MCP bound.
    let raw = 2.0 * (b.alpha1 * b.alpha0 + b.gamma * b.mean_rate()) / (sum + math::sqrt(disc));
    raw.clamp(b.alpha0, b.mean_rate())
}

/// The modulated-process parameters realized by the unblocked 2-arrow stream
/// of the MCP graphical construction:
/// `alpha0 = 0`, `alpha1 = c*beta`, `gamma = alpha*(1 + 2*d*beta)`,
/// `p = 1/(1 + 2*d*beta)`.
///
/// `lambda_bar_broman(cpree_broman_params(p)) == lambda_bar_mcp(p)` up to
/// round-off, since `4*gamma*(1-p)*(alpha1-alpha0) = 8*d*alpha*c*beta^2`.
#[must_use]
pub fn cpree_broman_params(p: &McpParams) -> BromanParams {
    let two_db = 2.0 * f64::from(p.dim) * p.beta;
    BromanParams {
        alpha0: 0.0,
        alpha1: p.beta2(),
        gamma: p.alpha * (1.0 + two_db),
        p: 1.0 / (1.0 + two_db),
    }
}

/// The multiplier solving `lambda_bar = 1/(2d-1)`:
///
/// `c* = (alpha*(1+2*d*beta)*(2d-1) - 1) / (beta*(2d-1)*(alpha*(2d-1) - 1))`
///
/// `c > c*` is necessary for `lambda_bar` to exceed the rigorous lower bound
/// `1/(2d-1)` on the critical value; `c*` is always greater than 1 on its
/// domain `alpha > 1/(2d-1)`.
pub fn c_star(alpha: f64, beta: f64, dim: u32) -> Result<f64, DomainError> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    if dim == 0 {
        return Err(DomainError::BadDimension);
    }
    let d = f64::from(dim);
    let two_d_minus_1 = 2.0 * d - 1.0;
    let bound = 1.0 / two_d_minus_1;
    if alpha <= bound {
        return Err(DomainError::CStar { alpha, bound });
    }
    let numer = alpha * (1.0 + 2.0 * d * beta) * two_d_minus_1 - 1.0;
    let denom = beta * two_d_minus_1 * (alpha * two_d_minus_1 - 1.0);
    Ok(numer / denom)
}

/// The sufficient multiplier bound `2/(beta*d) + 4*d*alpha/(d*alpha - 2)`:
/// any `c` strictly above it gives `lambda_bar >= 2/d`, an upper bound on
/// the critical value in every dimension. Requires `alpha > 2/d` and
/// `beta > 2/d`.
pub fn sufficient_c_bound(alpha: f64, beta: f64, dim: u32) -> Result<f64, DomainError> {
    positive("alpha", alpha)?;
    positive("beta", beta)?;
    if dim == 0 {
        return Err(DomainError::BadDimension);
    }
    let d = f64::from(dim);
    let bound = 2.0 / d;
    if alpha <= bound || beta <= bound {
        return Err(DomainError::SufficientBound { alpha, beta, bound });
    }
    Ok(2.0 / (beta * d) + 4.0 * d * alpha / (d * alpha - 2.0))
}

/// `true` iff `lambda_bar_mcp(p)` exceeds the supplied critical-value
/// reference. The crate never hardcodes a critical value; callers choose the
/// reference (rigorous bounds `1/(2d-1)` and `2/d`, or an external estimate).
pub fn survival_sufficient(p: &McpParams, lambda_c_ref: f64) -> Result<bool, DomainError> {
    positive("lambda_c_ref", lambda_c_ref)?;
    Ok(lambda_bar_mcp(p) > lambda_c_ref)
}
