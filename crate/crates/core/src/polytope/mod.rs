//! Exact linear-inequality systems over rate variables.
//!
//! A row reads `Σ aᵢ·xᵢ <= c + Σ bⱼ·Iⱼ`: the left side ranges over the
//! declared variables, the right side is affine in the symbolic parameters.
//! Every coefficient is a [`Rational`]; nothing in this module touches
//! floating point except [`RationalInequalitySystem::instantiate`], which
//! converts at the very end.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

pub mod cooperative;
pub mod lp;
mod planar;
mod text;

pub use num_rational::BigRational as Rational;
pub use planar::{ExactPolygon, HalfPlane, Polygon};

/// Rows allowed at any point of an elimination before giving up.
pub const DEFAULT_ROW_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolytopeError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown name `{0}` (neither a declared variable nor a parameter)")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("row has {found} coefficients, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("elimination would hold {count} rows, above the limit of {limit}")]
    RowLimit { limit: usize, count: usize },
    #[error("the side-relation cone is infeasible")]
    ConeInfeasible,
    #[error("cone and system disagree on parameters")]
    ParameterMismatch,
    #[error("no value for parameter `{0}`")]
    MissingParameter(String),
    #[error("parameter `{name}` has non-finite or negative value {value}")]
    InvalidParameter { name: String, value: f64 },
    #[error("expected a system over two variables, found {0}")]
    NotPlanar(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One row `coefficients·x <= constant + parameters·I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub coefficients: Vec<Rational>,
    pub parameters: Vec<Rational>,
    pub constant: Rational,
}

impl Inequality {
    pub fn new(coefficients: Vec<Rational>, parameters: Vec<Rational>, constant: Rational) -> Self {
        Self { coefficients, parameters, constant }
    }

    fn is_homogeneous_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero) && self.parameters.iter().all(Zero::is_zero)
    }

    /// `0 <= c` with `c >= 0` and nothing symbolic.
    pub fn is_trivially_true(&self) -> bool {
        self.is_homogeneous_zero() && !self.constant.is_negative()
    }

    /// Positive rescaling so the first non-zero entry has magnitude one.
    fn normalized(mut self) -> Self {
        let lead = self
            .coefficients
            .iter()
            .chain(&self.parameters)
            .chain(std::iter::once(&self.constant))
            .find(|v| !v.is_zero())
            .map(|v| v.abs());
        if let Some(lead) = lead {
            for v in self.coefficients.iter_mut().chain(self.parameters.iter_mut()) {
                *v = &*v / &lead;
            }
            self.constant = &self.constant / &lead;
        }
        self
    }

    fn scaled_sum(&self, a: &Rational, other: &Inequality, b: &Rational) -> Inequality {
        let zip = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
            x.iter().zip(y).map(|(u, v)| a * u + b * v).collect()
        };
        Inequality {
            coefficients: zip(&self.coefficients, &other.coefficients),
            parameters: zip(&self.parameters, &other.parameters),
            constant: a * &self.constant + b * &other.constant,
        }
    }

    /// Row as `(g, h)` with `g·(x, I) <= h` over the stacked vector.
    fn stacked(&self) -> (Vec<Rational>, Rational) {
        let mut g = self.coefficients.clone();
        g.extend(self.parameters.iter().map(|v| -v));
        (g, self.constant.clone())
    }

    /// Exact membership test at a point and parameter assignment.
    pub fn holds_at(&self, x: &[Rational], params: &[Rational]) -> bool {
        let lhs = dot(&self.coefficients, x);
        let rhs = &self.constant + dot(&self.parameters, params);
        lhs <= rhs
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (u, v)| acc + u * v)
}

/// A finite list of inequalities over named variables with symbolic right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInequalitySystem {
    variables: Vec<String>,
    parameters: Vec<String>,
    rows: Vec<Inequality>,
}

/// Parameter-only relations used when deciding redundancy.
///
/// Stored as a system with no variables, so every row reads
/// `0 <= c + Σ bⱼ·Iⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideRelationCone {
    relations: RationalInequalitySystem,
}

impl SideRelationCone {
    pub fn new(relations: RationalInequalitySystem) -> Result<Self, PolytopeError> {
        if !relations.variables.is_empty() {
            return Err(PolytopeError::UnknownName(relations.variables[0].clone()));
        }
        Ok(Self { relations })
    }

    /// The cone with no relations at all.
    pub fn empty(parameters: &[&str]) -> Self {
        Self { relations: RationalInequalitySystem::new(&[], parameters).expect("distinct names") }
    }

    pub fn relations(&self) -> &RationalInequalitySystem {
        &self.relations
    }

    pub fn parameters(&self) -> &[String] {
        &self.relations.parameters
    }

    /// Exact check that an assignment lies in the cone.
    pub fn contains(&self, params: &[Rational]) -> bool {
        self.relations.rows.iter().all(|r| r.holds_at(&[], params))
    }
}

impl RationalInequalitySystem {
    pub fn new(variables: &[&str], parameters: &[&str]) -> Result<Self, PolytopeError> {
        let mut seen = BTreeSet::new();
        for name in variables.iter().chain(parameters) {
            if !seen.insert(*name) {
                return Err(PolytopeError::DuplicateName(name.to_string()));
            }
        }
        Ok(Self {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn parameter_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|v| v == name)
    }

    pub fn push(&mut self, row: Inequality) -> Result<(), PolytopeError> {
        if row.coefficients.len() != self.variables.len() {
            return Err(PolytopeError::Shape { expected: self.variables.len(), found: row.coefficients.len() });
        }
        if row.parameters.len() != self.parameters.len() {
            return Err(PolytopeError::Shape { expected: self.parameters.len(), found: row.parameters.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds `Σ lhs <= constant + Σ rhs` from `(name, coefficient)` pairs.
    pub fn add(&mut self, lhs: &[(&str, Rational)], rhs: &[(&str, Rational)], constant: Rational) -> Result<(), PolytopeError> {
        let mut row = Inequality::new(
            vec![Rational::zero(); self.variables.len()],
            vec![Rational::zero(); self.parameters.len()],
            constant,
        );
        for (name, c) in lhs {
            let i = self.variable_index(name).ok_or_else(|| PolytopeError::UnknownVariable(name.to_string()))?;
            row.coefficients[i] += c;
        }
        for (name, c) in rhs {
            let j = self.parameter_index(name).ok_or_else(|| PolytopeError::UnknownName(name.to_string()))?;
            row.parameters[j] += c;
        }
        self.rows.push(row);
        Ok(())
    }

    /// Normalizes every row, drops `0 <= c` rows and duplicates, and sorts.
    pub fn canonical(&self) -> Self {
        let rows: BTreeSet<Inequality> = self
            .rows
            .iter()
            .cloned()
            .map(Inequality::normalized)
            .filter(|r| !r.is_trivially_true())
            .collect();
        Self { variables: self.variables.clone(), parameters: self.parameters.clone(), rows: rows.into_iter().collect() }
    }

    /// Fourier-Motzkin projection with [`DEFAULT_ROW_LIMIT`].
    pub fn eliminate(&self, drop: &[&str]) -> Result<Self, PolytopeError> {
        self.eliminate_with_limit(drop, DEFAULT_ROW_LIMIT)
    }

    /// Projects out `drop`, one variable at a time.
    ///
    /// The next variable is the one with the fewest positive×negative row
    /// pairs (declaration order breaks ties). Rows are normalized and
    /// deduplicated after every step.
    pub fn eliminate_with_limit(&self, drop: &[&str], limit: usize) -> Result<Self, PolytopeError> {
        let mut pending = BTreeSet::new();
        for name in drop {
            let i = self.variable_index(name).ok_or_else(|| PolytopeError::UnknownVariable(name.to_string()))?;
            pending.insert(i);
        }

        let mut rows: Vec<Inequality> = self.canonical().rows;
        while !pending.is_empty() {
            let (var, _) = pending
                .iter()
                .map(|&v| {
                    let pos = rows.iter().filter(|r| r.coefficients[v].is_positive()).count();
                    let neg = rows.iter().filter(|r| r.coefficients[v].is_negative()).count();
                    (v, pos * neg)
                })
                .min_by_key(|&(v, cost)| (cost, v))
                .expect("pending is non-empty");
            pending.remove(&var);

            let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), BTreeSet::new());
            for r in rows {
                if r.coefficients[var].is_positive() {
                    pos.push(r);
                } else if r.coefficients[var].is_negative() {
                    neg.push(r);
                } else {
                    keep.insert(r);
                }
            }
            let count = keep.len() + pos.len() * neg.len();
            if count > limit {
                return Err(PolytopeError::RowLimit { limit, count });
            }
            for p in &pos {
                for n in &neg {
                    let a = &p.coefficients[var];
                    let b = -&n.coefficients[var];
                    let combined = p.scaled_sum(&b, n, a).normalized();
                    debug_assert!(combined.coefficients[var].is_zero());
                    if !combined.is_trivially_true() {
                        keep.insert(combined);
                    }
                }
            }
            rows = keep.into_iter().collect();
        }

        let kept: Vec<usize> = (0..self.variables.len()).filter(|i| !drop.iter().any(|d| self.variables[*i] == *d)).collect();
        let projected = Self {
            variables: kept.iter().map(|&i| self.variables[i].clone()).collect(),
            parameters: self.parameters.clone(),
            rows: rows
                .into_iter()
                .map(|r| Inequality {
                    coefficients: kept.iter().map(|&i| r.coefficients[i].clone()).collect(),
                    parameters: r.parameters,
                    constant: r.constant,
                })
                .collect(),
        };
        Ok(projected.canonical())
    }

    /// Drops every row implied by the remaining rows together with the cone.
    ///
    /// Implication is decided over the joint space of variables and
    /// parameters, so a removed row is implied for every parameter
    /// assignment inside the cone. Rows are visited in canonical order and
    /// removed one at a time.
    pub fn remove_redundant(&self, cone: &SideRelationCone) -> Result<Self, PolytopeError> {
        if cone.parameters() != self.parameters.as_slice() {
            return Err(PolytopeError::ParameterMismatch);
        }
        let n = self.variables.len();
        let cone_rows: Vec<(Vec<Rational>, Rational)> = cone
            .relations
            .rows
            .iter()
            .map(|r| {
                let (g, h) = r.stacked();
                let mut padded = vec![Rational::zero(); n];
                padded.extend(g);
                (padded, h)
            })
            .collect();
        {
            let (a, b): (Vec<_>, Vec<_>) = cone_rows.iter().cloned().unzip();
            if lp::feasible_point(&a, &b, n + self.parameters.len()).is_none() && !a.is_empty() {
                return Err(PolytopeError::ConeInfeasible);
            }
        }

        let mut kept: Vec<Inequality> = self.canonical().rows;
        let mut i = 0;
        while i < kept.len() {
            let (a, b): (Vec<_>, Vec<_>) = kept
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, r)| r.stacked())
                .chain(cone_rows.iter().cloned())
                .unzip();
            let (target, bound) = kept[i].stacked();
            let implied = if a.is_empty() {
                false
            } else {
                !matches!(lp::implication(&a, &b, &target, &bound), lp::Implication::NotImplied)
            };
            if implied {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(Self { variables: self.variables.clone(), parameters: self.parameters.clone(), rows: kept })
    }

    /// Replaces the symbolic parameters by exact values.
    pub fn substitute(&self, values: &BTreeMap<String, Rational>) -> Result<Self, PolytopeError> {
        let vals = self.parameter_vector(values)?;
        Ok(Self {
            variables: self.variables.clone(),
            parameters: Vec::new(),
            rows: self
                .rows
                .iter()
                .map(|r| Inequality {
                    coefficients: r.coefficients.clone(),
                    parameters: Vec::new(),
                    constant: &r.constant + dot(&r.parameters, &vals),
                })
                .collect(),
        })
    }

    fn parameter_vector(&self, values: &BTreeMap<String, Rational>) -> Result<Vec<Rational>, PolytopeError> {
        self.parameters
            .iter()
            .map(|p| values.get(p).cloned().ok_or_else(|| PolytopeError::MissingParameter(p.clone())))
            .collect()
    }

    /// Numeric half-planes over the two remaining variables.
    pub fn instantiate(&self, values: &BTreeMap<String, f64>) -> Result<Polygon, PolytopeError> {
        if self.variables.len() != 2 {
            return Err(PolytopeError::NotPlanar(self.variables.len()));
        }
        let mut vals = Vec::with_capacity(self.parameters.len());
        for p in &self.parameters {
            let v = *values.get(p).ok_or_else(|| PolytopeError::MissingParameter(p.clone()))?;
            if !v.is_finite() || v < 0.0 {
                return Err(PolytopeError::InvalidParameter { name: p.clone(), value: v });
            }
            vals.push(v);
        }
        let planes = self
            .rows
            .iter()
            .map(|r| {
                let rhs = to_f64(&r.constant) + r.parameters.iter().zip(&vals).map(|(c, v)| to_f64(c) * v).sum::<f64>();
                HalfPlane { a: to_f64(&r.coefficients[0]), b: to_f64(&r.coefficients[1]), c: rhs }
            })
            .collect();
        Ok(Polygon::new(planes))
    }

    /// Exact counterpart of [`Self::instantiate`].
    pub fn instantiate_exact(&self, values: &BTreeMap<String, Rational>) -> Result<ExactPolygon, PolytopeError> {
        if self.variables.len() != 2 {
            return Err(PolytopeError::NotPlanar(self.variables.len()));
        }
        let sub = self.substitute(values)?;
        Ok(ExactPolygon::new(
            sub.rows.into_iter().map(|r| (r.coefficients[0].clone(), r.coefficients[1].clone(), r.constant)).collect(),
        ))
    }

    /// Exact membership of a point for a given parameter assignment.
    pub fn contains(&self, x: &[Rational], params: &[Rational]) -> bool {
        self.rows.iter().all(|r| r.holds_at(x, params))
    }

    /// Rows as `(g, h)` over the variables only, for a fixed parameter assignment.
    pub fn stacked_rows(&self, params: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        self.rows.iter().map(|r| (r.coefficients.clone(), &r.constant + dot(&r.parameters, params))).unzip()
    }
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational on a grid of `1/denominator`.
pub fn rational_on_grid(value: f64, denominator: i64) -> Rational {
    let scaled = (value * denominator as f64).round();
    Rational::new(num_bigint::BigInt::from(scaled as i128), num_bigint::BigInt::from(denominator))
}
