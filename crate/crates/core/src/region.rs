//! Slot schedules, the ten information bounds, and the `(R1, R2)` region
//! they induce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::polytope::cooperative::{region_template, RegionForm, BOUND_PARAMETERS};
use crate::polytope::{rational_on_grid, HalfPlane, Polygon, RationalInequalitySystem};

/// Grid on which numeric bounds are turned into rationals.
pub const RATIONAL_GRID: i64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegionError {
    #[error("slot durations must satisfy alpha1, alpha2 >= 0 and alpha1 + alpha2 <= 1 (got {alpha1}, {alpha2})")]
    InvalidSchedule { alpha1: f64, alpha2: f64 },
    #[error("bound {name} is {value}; bounds must be finite and non-negative")]
    InvalidBound { name: &'static str, value: f64 },
}

/// Durations `(α1, α2, α3)` of the three slots, `α3 = 1 − α1 − α2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule", into = "RawSchedule")]
pub struct SlotSchedule {
    alpha1: f64,
    alpha2: f64,
}

#[derive(Serialize, Deserialize)]
struct RawSchedule {
    alpha1: f64,
    alpha2: f64,
}

impl TryFrom<RawSchedule> for SlotSchedule {
    type Error = RegionError;
    fn try_from(raw: RawSchedule) -> Result<Self, Self::Error> {
        SlotSchedule::new(raw.alpha1, raw.alpha2)
    }
}

impl From<SlotSchedule> for RawSchedule {
    fn from(s: SlotSchedule) -> Self {
        RawSchedule { alpha1: s.alpha1, alpha2: s.alpha2 }
    }
}

impl SlotSchedule {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self, RegionError> {
        let ok = alpha1.is_finite() && alpha2.is_finite() && alpha1 >= 0.0 && alpha2 >= 0.0 && alpha1 + alpha2 <= 1.0 + 1e-12;
        if ok {
            Ok(Self { alpha1, alpha2 })
        } else {
            Err(RegionError::InvalidSchedule { alpha1, alpha2 })
        }
    }

    /// Everything in slot 3: the classical MAC.
    pub fn mac() -> Self {
        Self { alpha1: 0.0, alpha2: 0.0 }
    }

    /// Half the block per user, no cooperative slot.
    pub fn tdma() -> Self {
        Self { alpha1: 0.5, alpha2: 0.5 }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn alpha3(&self) -> f64 {
        (1.0 - self.alpha1 - self.alpha2).max(0.0)
    }
}

/// `I1..I10` in bits. `i1` and `i3` are absent when no model for them is
/// available (the Gaussian closed forms); no region row uses them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IBounds {
    pub i1: Option<f64>,
    pub i2: f64,
    pub i3: Option<f64>,
    pub i4: f64,
    pub i5: f64,
    pub i6: f64,
    pub i7: f64,
    pub i8: f64,
    pub i9: f64,
    pub i10: f64,
    pub slots: SlotSchedule,
}

impl IBounds {
    /// Values in `I1..I10` order; absent entries are reported as `None`.
    pub fn values(&self) -> [Option<f64>; 10] {
        [
            self.i1,
            Some(self.i2),
            self.i3,
            Some(self.i4),
            Some(self.i5),
            Some(self.i6),
            Some(self.i7),
            Some(self.i8),
            Some(self.i9),
            Some(self.i10),
        ]
    }

    fn validate(&self) -> Result<(), RegionError> {
        for (name, v) in BOUND_PARAMETERS.iter().zip(self.values()) {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return Err(RegionError::InvalidBound { name, value: v });
                }
            }
        }
        Ok(())
    }

    /// Parameter map for the symbolic templates; absent bounds map to 0,
    /// which no template row reads.
    pub fn parameter_map(&self) -> BTreeMap<String, f64> {
        BOUND_PARAMETERS.iter().zip(self.values()).map(|(k, v)| (k.to_string(), v.unwrap_or(0.0))).collect()
    }

    /// Structural relations every admissible distribution satisfies:
    /// `i1 <= i2`, `i3 <= i4`, `max(i5, i6) <= i7 <= i5 + i6`.
    pub fn check_invariants(&self, tol: f64) -> Result<(), String> {
        if let Some(i1) = self.i1 {
            if i1 > self.i2 + tol {
                return Err(format!("i1 = {i1} exceeds i2 = {}", self.i2));
            }
        }
        if let Some(i3) = self.i3 {
            if i3 > self.i4 + tol {
                return Err(format!("i3 = {i3} exceeds i4 = {}", self.i4));
            }
        }
        if self.i5.max(self.i6) > self.i7 + tol {
            return Err(format!("max(i5, i6) = {} exceeds i7 = {}", self.i5.max(self.i6), self.i7));
        }
        if self.i7 > self.i5 + self.i6 + tol {
            return Err(format!("i7 = {} exceeds i5 + i6 = {}", self.i7, self.i5 + self.i6));
        }
        Ok(())
    }
}

/// The six closed-form rows as an exact system over `(R1, R2)`, with
/// right-hand sides rounded to multiples of 10⁻¹².
pub fn region_from_bounds(bounds: &IBounds) -> Result<RationalInequalitySystem, RegionError> {
    region_from_bounds_with(bounds, RegionForm::SixRow)
}

pub fn region_from_bounds_with(bounds: &IBounds, form: RegionForm) -> Result<RationalInequalitySystem, RegionError> {
    bounds.validate()?;
    let values = bounds
        .parameter_map()
        .into_iter()
        .map(|(k, v)| (k, rational_on_grid(v, RATIONAL_GRID)))
        .collect();
    Ok(region_template(form).substitute(&values).expect("template parameters are I1..I10"))
}

/// One numeric row `a·R1 + b·R2 <= bound` with a readable label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub label: String,
    pub r1: f64,
    pub r2: f64,
    pub bound: f64,
}

/// Numeric rows of the chosen form, in template order.
pub fn rate_rows(bounds: &IBounds, form: RegionForm) -> Result<Vec<RegionRow>, RegionError> {
    bounds.validate()?;
    let template = region_template(form);
    let polygon = template.instantiate(&bounds.parameter_map()).expect("all parameters supplied");
    Ok(template
        .rows()
        .iter()
        .zip(polygon.planes)
        .map(|(row, p)| RegionRow { label: template.format_row(row), r1: p.a, r2: p.b, bound: p.c })
        .collect())
}

/// `{R1, R2 >= 0, R1 <= r1_max, R2 <= r2_max, R1 + R2 <= sum_max}`.
///
/// Every region form reduces to this shape once the rows with equal
/// normals are merged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pentagon {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
}

impl Pentagon {
    pub fn from_bounds(b: &IBounds, form: RegionForm) -> Self {
        let mut r1_max = b.i2 + b.i5;
        let mut r2_max = b.i4 + b.i6;
        if form == RegionForm::NonNegativeSplit {
            r1_max = r1_max.min(b.i8);
            r2_max = r2_max.min(b.i9);
        }
        let sum_max = (b.i7 + b.i2 + b.i4).min(b.i10).min(b.i4 + b.i8).min(b.i2 + b.i9);
        Self { r1_max, r2_max, sum_max }
    }

    /// Maximizer of `μ·R1 + (1 − μ)·R2`. For `μ >= 1/2` R1 is filled first,
    /// otherwise R2, so the tie at `μ = 1/2` resolves towards R1.
    pub fn best(&self, mu: f64) -> (f64, f64) {
        let a = self.r1_max.max(0.0);
        let b = self.r2_max.max(0.0);
        let s = self.sum_max.max(0.0);
        if mu >= 0.5 {
            let r1 = a.min(s);
            (r1, b.min(s - r1))
        } else {
            let r2 = b.min(s);
            (a.min(s - r2), r2)
        }
    }

    pub fn weighted(&self, mu: f64) -> f64 {
        let (r1, r2) = self.best(mu);
        mu * r1 + (1.0 - mu) * r2
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::new(vec![
            HalfPlane { a: 1.0, b: 0.0, c: self.r1_max },
            HalfPlane { a: 0.0, b: 1.0, c: self.r2_max },
            HalfPlane { a: 1.0, b: 1.0, c: self.sum_max },
            HalfPlane { a: -1.0, b: 0.0, c: 0.0 },
            HalfPlane { a: 0.0, b: -1.0, c: 0.0 },
        ])
    }

    /// Corner points, sorted by `r1`.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        self.polygon().vertices()
    }
}
