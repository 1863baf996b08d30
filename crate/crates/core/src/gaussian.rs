//! Gaussian half-duplex cooperative MAC: closed-form bounds `I2..I10`,
//! power bookkeeping, and a quadrature cross-check of the closed forms.
//!
//! Slot-3 signals:
//!
//! ```text
//! X13 = √P13·X̌13 + √(c2·PU)·U + √(c3·PV)·V
//! X23 = √P23·X̌23 + √(d3·PU)·U + √(d2·PV)·V
//! ```

use std::num::NonZeroUsize;
use std::str::FromStr;
use std::sync::OnceLock;

use gauss_quad::hermite::GaussHermite;
use serde::{Deserialize, Serialize};

use crate::region::{IBounds, SlotSchedule};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaussianError {
    #[error("C(x) is undefined for x = {0}")]
    Domain(f64),
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("unsupported bound `{0}` (expected one of i2, i4, i5, i6, i7)")]
    UnsupportedBound(String),
}

/// `C(x) = ½·log2(1 + x)`.
pub fn capacity_c(x: f64) -> Result<f64, GaussianError> {
    if x.is_nan() || x < 0.0 {
        return Err(GaussianError::Domain(x));
    }
    Ok(c(x))
}

#[inline]
pub(crate) fn c(x: f64) -> f64 {
    0.5 * x.ln_1p() / std::f64::consts::LN_2
}

/// Gains, noise variances and average power budgets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianParams {
    pub k10: f64,
    pub k20: f64,
    pub k12: f64,
    pub k21: f64,
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl GaussianParams {
    /// Unit noise, equal gains per link type and equal budgets.
    pub fn symmetric(direct: f64, inter: f64, power: f64) -> Self {
        Self { k10: direct, k20: direct, k12: inter, k21: inter, n0: 1.0, n1: 1.0, n2: 1.0, p1: power, p2: power }
    }

    pub fn validate(&self) -> Result<(), GaussianError> {
        for (name, value) in [("k10", self.k10), ("k20", self.k20), ("k12", self.k12), ("k21", self.k21)] {
            if !value.is_finite() {
                return Err(GaussianError::InvalidParameter { name, value });
            }
        }
        for (name, value) in [("n0", self.n0), ("n1", self.n1), ("n2", self.n2)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(GaussianError::InvalidParameter { name, value });
            }
        }
        for (name, value) in [("p1", self.p1), ("p2", self.p2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(GaussianError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// The same channel with the users' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            k10: self.k20,
            k20: self.k10,
            k12: self.k21,
            k21: self.k12,
            n0: self.n0,
            n1: self.n2,
            n2: self.n1,
            p1: self.p2,
            p2: self.p1,
        }
    }
}

/// Per-slot component powers and slot-3 cooperative factors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerPolicy {
    pub p10: f64,
    #[serde(rename = "pU")]
    pub p_u: f64,
    pub p20: f64,
    #[serde(rename = "pV")]
    pub p_v: f64,
    pub p13: f64,
    pub p23: f64,
    pub c2: f64,
    pub c3: f64,
    pub d2: f64,
    pub d3: f64,
}

impl PowerPolicy {
    pub fn mu1(&self) -> f64 {
        self.p10 + self.p_u
    }

    pub fn mu2(&self) -> f64 {
        self.p20 + self.p_v
    }

    pub fn entries(&self) -> [(&'static str, f64); 10] {
        [
            ("p10", self.p10),
            ("pU", self.p_u),
            ("p20", self.p20),
            ("pV", self.p_v),
            ("p13", self.p13),
            ("p23", self.p23),
            ("c2", self.c2),
            ("c3", self.c3),
            ("d2", self.d2),
            ("d3", self.d3),
        ]
    }

    pub fn validate(&self) -> Result<(), GaussianError> {
        for (name, value) in self.entries() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(GaussianError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// Component powers multiplied by `k`; the factors are unchanged, so
    /// consumption scales by `k` as well.
    pub fn scaled(&self, k: f64) -> Self {
        let mut out = *self;
        for v in [
            &mut out.p10,
            &mut out.p_u,
            &mut out.p20,
            &mut out.p_v,
            &mut out.p13,
            &mut out.p23,
        ] {
            *v *= k;
        }
        out
    }

    /// User 1 and user 2 exchanged (matches [`GaussianParams::swapped`]).
    pub fn swapped(&self) -> Self {
        Self {
            p10: self.p20,
            p_u: self.p_v,
            p20: self.p10,
            p_v: self.p_u,
            p13: self.p23,
            p23: self.p13,
            c2: self.d2,
            c3: self.d3,
            d2: self.c2,
            d3: self.c3,
        }
    }
}

/// Result of [`power_feasible`]; slacks are budget minus consumption.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCheck {
    pub feasible: bool,
    pub slack1: f64,
    pub slack2: f64,
}

/// Average power spent by each user over the three slots.
pub fn consumption(policy: &PowerPolicy, slots: SlotSchedule) -> (f64, f64) {
    let (a1, a2, a3) = (slots.alpha1(), slots.alpha2(), slots.alpha3());
    let user1 = a1 * policy.mu1() + a3 * (policy.p13 + policy.c2 * policy.p_u + policy.c3 * policy.p_v);
    let user2 = a2 * policy.mu2() + a3 * (policy.p23 + policy.d3 * policy.p_u + policy.d2 * policy.p_v);
    (user1, user2)
}

/// Checks both power constraints as equalities within `tol`.
pub fn power_feasible(policy: &PowerPolicy, slots: SlotSchedule, params: &GaussianParams, tol: f64) -> PowerCheck {
    let (u1, u2) = consumption(policy, slots);
    let slack1 = params.p1 - u1;
    let slack2 = params.p2 - u2;
    PowerCheck { feasible: slack1.abs() <= tol && slack2.abs() <= tol, slack1, slack2 }
}

/// Received-power terms (before dividing by `N0`) of slot 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotThreeTerms {
    /// `K10²P13 + K20²P23`
    pub private: f64,
    /// `(K10√c2 + K20√d3)²·PU`
    pub coherent_u: f64,
    /// `(K10√c3 + K20√d2)²·PV`
    pub coherent_v: f64,
}

impl SlotThreeTerms {
    pub fn new(params: &GaussianParams, policy: &PowerPolicy) -> Self {
        let (k10, k20) = (params.k10, params.k20);
        let cu = k10 * policy.c2.sqrt() + k20 * policy.d3.sqrt();
        let cv = k10 * policy.c3.sqrt() + k20 * policy.d2.sqrt();
        Self {
            private: k10 * k10 * policy.p13 + k20 * k20 * policy.p23,
            coherent_u: cu * cu * policy.p_u,
            coherent_v: cv * cv * policy.p_v,
        }
    }
}

/// Closed-form `I2..I10` in bits; `I1` and `I3` have no closed form here.
pub fn compute_bounds(params: &GaussianParams, policy: &PowerPolicy, slots: SlotSchedule) -> Result<IBounds, GaussianError> {
    params.validate()?;
    policy.validate()?;
    Ok(bounds_unchecked(params, policy, slots))
}

pub(crate) fn bounds_unchecked(params: &GaussianParams, policy: &PowerPolicy, slots: SlotSchedule) -> IBounds {
    let (a1, a2, a3) = (slots.alpha1(), slots.alpha2(), slots.alpha3());
    let n0 = params.n0;
    let t = SlotThreeTerms::new(params, policy);
    let direct1 = a1 * c(params.k10 * params.k10 * policy.mu1() / n0);
    let direct2 = a2 * c(params.k20 * params.k20 * policy.mu2() / n0);
    IBounds {
        i1: None,
        i2: a1 * c(params.k12 * params.k12 * policy.mu1() / params.n1),
        i3: None,
        i4: a2 * c(params.k21 * params.k21 * policy.mu2() / params.n2),
        i5: a3 * c(params.k10 * params.k10 * policy.p13 / n0),
        i6: a3 * c(params.k20 * params.k20 * policy.p23 / n0),
        i7: a3 * c(t.private / n0),
        i8: direct1 + a3 * c((t.private + t.coherent_u) / n0),
        i9: direct2 + a3 * c((t.private + t.coherent_v) / n0),
        i10: direct1 + direct2 + a3 * c((t.private + t.coherent_u + t.coherent_v) / n0),
        slots,
    }
}

/// Bounds with a numeric cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckedBound {
    I2,
    I4,
    I5,
    I6,
    I7,
}

impl FromStr for CheckedBound {
    type Err = GaussianError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i2" => Ok(Self::I2),
            "i4" => Ok(Self::I4),
            "i5" => Ok(Self::I5),
            "i6" => Ok(Self::I6),
            "i7" => Ok(Self::I7),
            _ => Err(GaussianError::UnsupportedBound(s.to_string())),
        }
    }
}

/// `(closed_form, numeric)` for one bound. The numeric value is
/// `α·(h(Y) − h(Z))` with both differential entropies integrated by
/// Gauss–Hermite quadrature from the component variances of `Y`.
pub fn quadrature_mi_check(
    params: &GaussianParams,
    policy: &PowerPolicy,
    slots: SlotSchedule,
    bound: CheckedBound,
) -> Result<(f64, f64), GaussianError> {
    let b = compute_bounds(params, policy, slots)?;
    let sq = |x: f64| x * x;
    let (closed, alpha, signal, noise) = match bound {
        CheckedBound::I2 => (b.i2, slots.alpha1(), vec![sq(params.k12) * policy.p10, sq(params.k12) * policy.p_u], params.n1),
        CheckedBound::I4 => (b.i4, slots.alpha2(), vec![sq(params.k21) * policy.p20, sq(params.k21) * policy.p_v], params.n2),
        CheckedBound::I5 => (b.i5, slots.alpha3(), vec![sq(params.k10) * policy.p13], params.n0),
        CheckedBound::I6 => (b.i6, slots.alpha3(), vec![sq(params.k20) * policy.p23], params.n0),
        CheckedBound::I7 => {
            (b.i7, slots.alpha3(), vec![sq(params.k10) * policy.p13, sq(params.k20) * policy.p23], params.n0)
        }
    };
    let mut output = signal;
    output.push(noise);
    let numeric = alpha * (differential_entropy(&output) - differential_entropy(&[noise]));
    Ok((closed, numeric))
}

const NODE_COUNTS: [usize; 3] = [64, 128, 256];
const ADAPT_TOL: f64 = 1e-9;

fn rule(level: usize) -> &'static GaussHermite {
    static RULES: [OnceLock<GaussHermite>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    RULES[level].get_or_init(|| GaussHermite::new(NonZeroUsize::new(NODE_COUNTS[level]).expect("nonzero")))
}

/// `E[g(T)]` for `T ~ N(0, var)` by Gauss–Hermite.
fn gaussian_expectation(rule: &GaussHermite, var: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
    let scale = (2.0 * var).sqrt();
    rule.integrate(|x| g(scale * x)) / std::f64::consts::PI.sqrt()
}

fn normal_pdf(x: f64, var: f64) -> f64 {
    (-x * x / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// Density at `y` of a sum of independent zero-mean Gaussians with the given
/// variances (sorted ascending), by nested convolution integrals. The
/// narrowest component is integrated out first so the remaining density is
/// smooth on the scale of the quadrature nodes.
fn convolved_density(rule: &GaussHermite, y: f64, vars: &[f64]) -> f64 {
    match vars {
        [] => unreachable!("at least one component"),
        [v] => normal_pdf(y, *v),
        [v, rest @ ..] => gaussian_expectation(rule, *v, |t| convolved_density(rule, y - t, rest)),
    }
}

/// `h(Y)` in bits for `Y` a sum of independent zero-mean Gaussians.
///
/// `-E[log2 p(Y)]` with `p` from [`convolved_density`] and the expectation
/// over the law of `Y` (variance `Σ var`), integrated with 64, 128 and 256
/// nodes until two consecutive estimates agree. Taking the expectation under
/// the true law keeps the tails of the numeric density harmless: they enter
/// only through a logarithm multiplied by negligible weights.
pub fn differential_entropy(variances: &[f64]) -> f64 {
    let mut vars: Vec<f64> = variances.iter().copied().filter(|v| *v > 0.0).collect();
    assert!(!vars.is_empty(), "entropy of a point mass");
    vars.sort_by(f64::total_cmp);
    let total: f64 = vars.iter().sum();
    let estimate = |level: usize| {
        let r = rule(level);
        gaussian_expectation(r, total, |y| -convolved_density(r, y, &vars).max(f64::MIN_POSITIVE).log2())
    };
    let mut previous = estimate(0);
    for level in 1..NODE_COUNTS.len() {
        let next = estimate(level);
        if (next - previous).abs() <= ADAPT_TOL {
            return next;
        }
        previous = next;
    }
    previous
}
