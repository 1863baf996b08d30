//! The split-rate system of the three-slot cooperative scheme, its known
//! projections onto `(R1, R2)`, and the parameter cone used to prune them.
//!
//! Split rates: `R10, R12, R13` for user 1 (direct private in slot 1, public
//! relayed through user 2, private in slot 3) and `R20, R21, R23` for user 2.
//! Parameters `I1..I10` stand for the ten mutual-information bounds.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Inequality, PolytopeError, Rational, RationalInequalitySystem, SideRelationCone};

pub const SPLIT_RATES: [&str; 6] = ["R10", "R12", "R13", "R20", "R21", "R23"];
pub const BOUND_PARAMETERS: [&str; 10] = ["I1", "I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I10"];

const SPLIT_SYSTEM: &str = "
vars: R1, R2, R10, R12, R13, R20, R21, R23
params: I1, I2, I3, I4, I5, I6, I7, I8, I9, I10
R10 <= I1
R10 + R12 <= I2
R20 <= I3
R20 + R21 <= I4
R13 <= I5
R23 <= I6
R13 + R23 <= I7
R1 + R23 <= I8
R2 + R13 <= I9
R1 + R2 <= I10
# aggregate rates as paired inequalities
R1 <= R10 + R12 + R13
R10 + R12 + R13 <= R1
R2 <= R20 + R21 + R23
R20 + R21 + R23 <= R2
";

const SPLIT_NONNEGATIVE: &str = "
0 <= R10
0 <= R12
0 <= R13
0 <= R20
0 <= R21
0 <= R23
";

const SIX_ROW_REGION: &str = "
vars: R1, R2
params: I1, I2, I3, I4, I5, I6, I7, I8, I9, I10
R1 <= I2 + I5
R2 <= I4 + I6
R1 + R2 <= I7 + I2 + I4
R1 + R2 <= I10
R1 + R2 <= I4 + I8
R1 + R2 <= I2 + I9
";

const NONNEGATIVE_EXTRA: &str = "
R1 <= I8
R2 <= I9
0 <= R1
0 <= R2
";

// Each relation holds for every admissible input distribution
// p(x10,u)p(x20,v)p(x13|u,v)p(x23|u,v) and every slot schedule.
const STANDARD_CONE: &str = "
params: I1, I2, I3, I4, I5, I6, I7, I8, I9, I10
# mutual informations are non-negative
0 <= I1
0 <= I2
0 <= I3
0 <= I4
0 <= I5
0 <= I6
0 <= I7
0 <= I8
0 <= I9
0 <= I10
# U - X10 - Y12 is Markov: I(X10;Y12|U) <= I(X10,U;Y12) = I(X10;Y12)
I1 <= I2
# V - X20 - Y21 likewise
I3 <= I4
# chain rule: I(X13,X23;Y3|U,V) = I(X23;Y3|U,V) + I(X13;Y3|U,V,X23)
I5 <= I7
I6 <= I7
# X13 and X23 are independent given (U,V)
I7 <= I5 + I6
# (U,V) - (X13,X23) - Y3: conditioning on fewer of U, V never lowers the slot-3 term
I7 <= I8
I7 <= I9
I8 <= I10
I9 <= I10
";

/// Whether the six split rates are constrained to be non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitRates {
    /// The ten bound rows plus the aggregate-rate identities, nothing else.
    Unconstrained,
    /// Additionally `R10, R12, R13, R20, R21, R23 >= 0`.
    NonNegative,
}

/// Which closed form of the `(R1, R2)` region to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionForm {
    /// Six sum/individual rows (projection with unconstrained split rates).
    SixRow,
    /// The six rows plus `R1 <= I8`, `R2 <= I9`, `R1, R2 >= 0`
    /// (projection with non-negative split rates).
    #[default]
    NonNegativeSplit,
}

fn parse(text: &str) -> RationalInequalitySystem {
    text.parse().expect("built-in system parses")
}

/// The ten bound rows over split and aggregate rates.
pub fn split_rate_system(split: SplitRates) -> RationalInequalitySystem {
    match split {
        SplitRates::Unconstrained => parse(SPLIT_SYSTEM),
        SplitRates::NonNegative => parse(&format!("{SPLIT_SYSTEM}{SPLIT_NONNEGATIVE}")),
    }
}

/// Closed-form `(R1, R2)` region, symbolic in `I1..I10`.
pub fn region_template(form: RegionForm) -> RationalInequalitySystem {
    match form {
        RegionForm::SixRow => parse(SIX_ROW_REGION),
        RegionForm::NonNegativeSplit => parse(&format!("{SIX_ROW_REGION}{NONNEGATIVE_EXTRA}")),
    }
}

/// The template matching a given split-rate convention.
pub fn expected_form(split: SplitRates) -> RegionForm {
    match split {
        SplitRates::Unconstrained => RegionForm::SixRow,
        SplitRates::NonNegative => RegionForm::NonNegativeSplit,
    }
}

/// Relations among `I1..I10` valid for every admissible input distribution.
pub fn standard_cone() -> SideRelationCone {
    SideRelationCone::new(parse(STANDARD_CONE)).expect("cone has no variables")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Pruned projection and template have identical rows.
    Match,
    /// Every template row survives, but further non-redundant rows do too.
    ExtraRows,
    /// Some template row is absent from the pruned projection.
    Mismatch,
}

#[derive(Debug, Clone)]
pub struct ProjectionReport {
    pub split: SplitRates,
    pub form: RegionForm,
    pub projected: RationalInequalitySystem,
    pub pruned: RationalInequalitySystem,
    pub template: RationalInequalitySystem,
    /// Pruned rows absent from the template.
    pub extra: Vec<Inequality>,
    /// Template rows absent from the pruned projection.
    pub missing: Vec<Inequality>,
    pub verdict: Verdict,
}

impl ProjectionReport {
    pub fn extra_rows_text(&self) -> Vec<String> {
        self.extra.iter().map(|r| self.pruned.format_row(r)).collect()
    }

    pub fn missing_rows_text(&self) -> Vec<String> {
        self.missing.iter().map(|r| self.template.format_row(r)).collect()
    }
}

/// Projects the split system onto `(R1, R2)`, prunes it under `cone` and
/// compares the result row-by-row with the closed form for `form`.
pub fn verify_projection(
    split: SplitRates,
    form: RegionForm,
    cone: &SideRelationCone,
    row_limit: usize,
) -> Result<ProjectionReport, PolytopeError> {
    let system = split_rate_system(split);
    let projected = system.eliminate_with_limit(&SPLIT_RATES, row_limit)?;
    let pruned = projected.remove_redundant(cone)?;
    let template = region_template(form).remove_redundant(cone)?;

    let pruned_rows: BTreeSet<&Inequality> = pruned.rows().iter().collect();
    let template_rows: BTreeSet<&Inequality> = template.rows().iter().collect();
    let extra: Vec<Inequality> = pruned_rows.difference(&template_rows).map(|r| (*r).clone()).collect();
    let missing: Vec<Inequality> = template_rows.difference(&pruned_rows).map(|r| (*r).clone()).collect();
    let verdict = match (extra.is_empty(), missing.is_empty()) {
        (true, true) => Verdict::Match,
        (false, true) => Verdict::ExtraRows,
        _ => Verdict::Mismatch,
    };
    Ok(ProjectionReport { split, form, projected, pruned, template, extra, missing, verdict })
}

/// Random exact point of [`standard_cone`], built so every relation holds.
/// Values are multiples of 1/6 in `[0, 5]` before summation; zeros occur
/// often enough to exercise degenerate regions.
pub fn sample_standard_cone<R: Rng + ?Sized>(rng: &mut R) -> BTreeMap<String, Rational> {
    let mut u = || Rational::new(rng.gen_range(0..=30).into(), 6.into());
    let (i2, i4, i5, i6) = (u(), u(), u(), u());
    let (d8, d9, d10) = (u(), u(), u());
    let mut t = || Rational::new(rng.gen_range(0..=4).into(), 4.into());
    let (t1, t3, t7) = (t(), t(), t());
    let lo = i5.clone().max(i6.clone());
    let hi = &i5 + &i6;
    let i7 = &lo + &t7 * (&hi - &lo);
    let i8 = &i7 + d8;
    let i9 = &i7 + d9;
    let i10 = i8.clone().max(i9.clone()) + d10;
    let i1 = &i2 * t1;
    let i3 = &i4 * t3;
    BOUND_PARAMETERS
        .iter()
        .zip([i1, i2, i3, i4, i5, i6, i7, i8, i9, i10])
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Per-assignment comparison of two `(R1, R2)` systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SampleAgreement {
    pub samples: usize,
    /// Identical exact vertex sets.
    pub same_vertices: usize,
    /// Identical feasible sets (mutual row implication).
    pub same_region: usize,
}

impl SampleAgreement {
    pub fn all_agree(&self) -> bool {
        self.same_vertices == self.samples && self.same_region == self.samples
    }
}

pub fn compare_on_samples(
    left: &RationalInequalitySystem,
    right: &RationalInequalitySystem,
    samples: &[BTreeMap<String, Rational>],
) -> Result<SampleAgreement, PolytopeError> {
    let mut out = SampleAgreement { samples: samples.len(), ..Default::default() };
    for values in samples {
        let a = left.instantiate_exact(values)?;
        let b = right.instantiate_exact(values)?;
        if a.vertices() == b.vertices() {
            out.same_vertices += 1;
        }
        if a.same_region(&b) {
            out.same_region += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn samples_lie_in_the_cone() {
        let cone = standard_cone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let s = sample_standard_cone(&mut rng);
            let v: Vec<Rational> = BOUND_PARAMETERS.iter().map(|k| s[*k].clone()).collect();
            assert!(cone.contains(&v));
        }
    }

    #[test]
    fn templates_have_expected_sizes() {
        assert_eq!(region_template(RegionForm::SixRow).len(), 6);
        assert_eq!(region_template(RegionForm::NonNegativeSplit).len(), 10);
        assert_eq!(split_rate_system(SplitRates::Unconstrained).len(), 14);
        assert_eq!(split_rate_system(SplitRates::NonNegative).len(), 20);
    }
}
