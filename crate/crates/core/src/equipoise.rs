//! Beta-Prime models of pre-study clinical equipoise.
//!
//! Pre-study odds `R = P(H1) / P(H0)` follow a Beta-Prime(a, b) law, which is
//! the same as `P(H1) ~ Beta(a, b)`. BP(1,1) is the uniform-on-`P(H0)` case,
//! BP(0.5,0.5) puts the Jeffreys arcsine law on `P(H0)`, and BP(1,2) has
//! mean odds one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    find_root, integrate, ln_beta, regularized_incomplete_beta, regularized_incomplete_beta_complement,
};

const LOG_ODDS_MIN: f64 = -27.631_021_115_928_547; // ln 1e-12
const LOG_ODDS_MAX: f64 = 27.631_021_115_928_547; // ln 1e12

/// Beta-Prime(a, b) distribution over pre-study odds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquipoiseModel {
    a: f64,
    b: f64,
}

impl EquipoiseModel {
    /// Uniform `P(H0)`.
    pub const BP11: EquipoiseModel = EquipoiseModel { a: 1.0, b: 1.0 };
    /// Arcsine (Jeffreys) `P(H0)`.
    pub const BP0505: EquipoiseModel = EquipoiseModel { a: 0.5, b: 0.5 };
    /// Mean pre-study odds of one.
    pub const BP12: EquipoiseModel = EquipoiseModel { a: 1.0, b: 2.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::domain(format!(
                "Beta-Prime shapes must be positive and finite, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Short label such as `BP(1,1)`.
    pub fn label(&self) -> String {
        format!("BP({},{})", self.a, self.b)
    }

    fn is_bp11(&self) -> bool {
        self.a == 1.0 && self.b == 1.0
    }

    /// Mean odds `a / (b − 1)`; infinite for `b ≤ 1`.
    pub fn mean(&self) -> f64 {
        if self.b > 1.0 {
            self.a / (self.b - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn odds_pdf(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain(format!("odds density needs r > 0, got {r}")));
        }
        if r == f64::INFINITY {
            return Ok(0.0);
        }
        let ln = (self.a - 1.0) * r.ln() - (self.a + self.b) * r.ln_1p() - ln_beta(self.a, self.b);
        Ok(ln.exp())
    }

    /// `P(R ≤ r)`; `r = +∞` gives one.
    pub fn odds_cdf(&self, r: f64) -> f64 {
        if r.is_nan() || r <= 0.0 {
            return 0.0;
        }
        if r == f64::INFINITY {
            return 1.0;
        }
        if self.is_bp11() {
            return r / (1.0 + r);
        }
        if r <= 1.0 {
            regularized_incomplete_beta(self.a, self.b, r / (1.0 + r)).expect("shapes validated")
        } else {
            1.0 - regularized_incomplete_beta(self.b, self.a, 1.0 / (1.0 + r)).expect("shapes validated")
        }
    }

    /// `P(R > r)`, accurate in the upper tail.
    pub fn odds_sf(&self, r: f64) -> f64 {
        if r.is_nan() || r <= 0.0 {
            return 1.0;
        }
        if r == f64::INFINITY {
            return 0.0;
        }
        if self.is_bp11() {
            return 1.0 / (1.0 + r);
        }
        if r <= 1.0 {
            regularized_incomplete_beta_complement(self.a, self.b, r / (1.0 + r)).expect("shapes validated")
        } else {
            regularized_incomplete_beta(self.b, self.a, 1.0 / (1.0 + r)).expect("shapes validated")
        }
    }

    /// Odds `r` with `P(R ≤ r) = p`.
    pub fn odds_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("odds quantile needs p in (0,1), got {p}")));
        }
        if self.is_bp11() {
            return Ok(p / (1.0 - p));
        }
        let q = 1.0 - p;
        let f = |u: f64| {
            let r = u.exp();
            if p <= 0.5 {
                self.odds_cdf(r) - p
            } else {
                q - self.odds_sf(r)
            }
        };
        log_bracket_root(f).map(f64::exp)
    }

    /// Inverse-CDF transform of a uniform draw, with closed forms when one
    /// of the shapes is one.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        if self.a == 1.0 && self.b == 1.0 {
            u / (1.0 - u)
        } else if self.a == 1.0 {
            // F(r) = 1 − (1 + r)^{−b}
            (1.0 - u).powf(-1.0 / self.b) - 1.0
        } else if self.b == 1.0 {
            // F(r) = (r / (1 + r))^a
            let x = u.powf(1.0 / self.a);
            x / (1.0 - x)
        } else {
            self.odds_quantile(u).expect("uniform draw lies in (0,1)")
        }
    }

    /// CDF evaluated along a strictly increasing odds grid.
    pub fn figure1_curve(&self, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("odds grid must be strictly increasing"));
        }
        if let Some(&first) = grid.first() {
            if !(first > 0.0) {
                return Err(Error::domain("odds grid must be positive"));
            }
        }
        Ok(grid.iter().map(|&r| (r, self.odds_cdf(r))).collect())
    }
}

/// Brent search over log-odds with the bracket widened geometrically up to
/// `[1e-12, 1e12]`.
fn log_bracket_root<F: FnMut(f64) -> f64>(mut f: F) -> Result<f64> {
    let (mut lo, mut hi) = (-1.0, 1.0);
    while f(lo) > 0.0 {
        if lo <= LOG_ODDS_MIN {
            return Err(Error::domain("quantile lies below odds 1e-12"));
        }
        lo = (2.0 * lo).max(LOG_ODDS_MIN);
    }
    while f(hi) < 0.0 {
        if hi >= LOG_ODDS_MAX {
            return Err(Error::domain("quantile lies above odds 1e12"));
        }
        hi = (2.0 * hi).min(LOG_ODDS_MAX);
    }
    find_root(f, lo, hi, 1e-14)
}

/// Two independent equipoise models, one per study of a development plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointEquipoiseModel {
    pub phase2: EquipoiseModel,
    pub phase3: EquipoiseModel,
}

impl Default for JointEquipoiseModel {
    fn default() -> Self {
        Self::BP11_SQUARED
    }
}

impl JointEquipoiseModel {
    pub const BP11_SQUARED: JointEquipoiseModel =
        JointEquipoiseModel { phase2: EquipoiseModel::BP11, phase3: EquipoiseModel::BP11 };

    pub fn new(phase2: EquipoiseModel, phase3: EquipoiseModel) -> Self {
        Self { phase2, phase3 }
    }

    pub fn is_bp11_squared(&self) -> bool {
        self.phase2.is_bp11() && self.phase3.is_bp11()
    }

    /// `P(R₂·R₃ ≤ c)`. Closed form for BP(1,1)², one-dimensional quadrature
    /// otherwise.
    pub fn product_cdf(&self, c: f64) -> Result<f64> {
        if self.is_bp11_squared() {
            bp11_product_cdf(c)
        } else {
            self.product_cdf_by_quadrature(c)
        }
    }

    /// `∫₀¹ Beta(x; a₂, b₂) · F₃(c (1 − x) / x) dx`, i.e. conditioning on the
    /// phase-2 odds `x / (1 − x)`.
    pub fn product_cdf_by_quadrature(&self, c: f64) -> Result<f64> {
        if !(c > 0.0) {
            return Err(Error::domain(format!("product CDF needs c > 0, got {c}")));
        }
        let (a, b) = (self.phase2.a, self.phase2.b);
        let ln_norm = ln_beta(a, b);
        let m3 = self.phase3;
        let integrand = |x: f64| {
            if x <= 0.0 || x >= 1.0 {
                return 0.0;
            }
            let dens = ((a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_norm).exp();
            dens * m3.odds_cdf(c * (1.0 - x) / x)
        };
        // Split at the point where the conditional odds cross one so the
        // kink in F₃ lands on a panel edge.
        let mid = c / (1.0 + c);
        let left = integrate(integrand, 0.0, mid, 1e-11)?;
        let right = integrate(integrand, mid, 1.0, 1e-11)?;
        Ok((left + right).clamp(0.0, 1.0))
    }

    /// Threshold `c` with `P(R₂·R₃ ≤ c) = p`.
    pub fn product_quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("product quantile needs p in (0,1), got {p}")));
        }
        if self.is_bp11_squared() && p == 0.5 {
            return Ok(1.0);
        }
        let mut failure = None;
        let f = |u: f64| match self.product_cdf(u.exp()) {
            Ok(v) => v - p,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let root = log_bracket_root(f);
        if let Some(e) = failure {
            return Err(e);
        }
        root.map(f64::exp)
    }
}

/// Closed-form `P(R₂·R₃ ≤ c)` for two independent BP(1,1) odds:
/// `c·((c − 1) − ln c) / (c − 1)²`, with its series `1/2 + h/6 − h²/12`
/// in `h = c − 1` near the removable singularity.
pub fn bp11_product_cdf(c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::domain(format!("product CDF needs c > 0, got {c}")));
    }
    if c == f64::INFINITY {
        return Ok(1.0);
    }
    let h = c - 1.0;
    if h.abs() < 1e-4 {
        return Ok(0.5 + h / 6.0 - h * h / 12.0);
    }
    Ok(c * (h - c.ln()) / (h * h))
}
