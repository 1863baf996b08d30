//! Line-oriented text form of a [`RationalInequalitySystem`].
//!
//! ```text
//! vars: R1, R2
//! params: I2, I5
//! R1 <= I2 + I5
//! 3/2*R1 - R2 <= 1/4
//! ```
//!
//! Names may appear on either side of `<=`; variables are gathered on the
//! left and parameters and constants on the right. Output is always in that
//! normal form, and parsing the output reproduces the system exactly.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Inequality, PolytopeError, Rational, RationalInequalitySystem};

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn write_terms(out: &mut String, terms: &[(&Rational, &str)], leading_constant: Option<&Rational>) {
    let mut first = true;
    if let Some(c) = leading_constant {
        out.push_str(&fmt_rational(c));
        first = false;
    }
    for (coef, name) in terms {
        let magnitude = coef.abs();
        let body = if magnitude.is_one() { name.to_string() } else { format!("{}*{}", fmt_rational(&magnitude), name) };
        if first {
            if coef.is_negative() {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if first {
        out.push('0');
    }
}

impl fmt::Display for Inequality {
    /// Positional form without names (`x0`, `p0`, ...). Systems print with their own names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.coefficients.len()).map(|i| format!("x{i}")).collect();
        let params: Vec<String> = (0..self.parameters.len()).map(|i| format!("p{i}")).collect();
        f.write_str(&format_row(self, &vars, &params))
    }
}

pub(super) fn format_row(row: &Inequality, vars: &[String], params: &[String]) -> String {
    let mut out = String::new();
    let lhs: Vec<(&Rational, &str)> =
        row.coefficients.iter().zip(vars).filter(|(c, _)| !c.is_zero()).map(|(c, n)| (c, n.as_str())).collect();
    write_terms(&mut out, &lhs, None);
    out.push_str(" <= ");
    let rhs: Vec<(&Rational, &str)> =
        row.parameters.iter().zip(params).filter(|(c, _)| !c.is_zero()).map(|(c, n)| (c, n.as_str())).collect();
    let constant = (!row.constant.is_zero() || rhs.is_empty()).then_some(&row.constant);
    write_terms(&mut out, &rhs, constant);
    out
}

impl RationalInequalitySystem {
    /// One row rendered with this system's names.
    pub fn format_row(&self, row: &Inequality) -> String {
        format_row(row, &self.variables, &self.parameters)
    }
}

impl fmt::Display for RationalInequalitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "vars: {}", self.variables.join(", "))?;
        if !self.parameters.is_empty() {
            writeln!(out, "params: {}", self.parameters.join(", "))?;
        }
        for row in &self.rows {
            out.push_str(&self.format_row(row));
            out.push('\n');
        }
        f.write_str(&out)
    }
}

fn parse_rational(s: &str, line: usize) -> Result<Rational, PolytopeError> {
    let err = || PolytopeError::Parse { line, message: format!("bad number `{s}`") };
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| err())?;
            let q: BigInt = q.parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

/// Splits `3/2*R1 - R2 + 4` into signed `(coefficient, Option<name>)` terms.
fn parse_side(side: &str, line: usize) -> Result<Vec<(Rational, Option<String>)>, PolytopeError> {
    let compact: String = side.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(PolytopeError::Parse { line, message: "empty side".into() });
    }
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let mut negative = false;
        while let Some(c) = rest.chars().next().filter(|c| *c == '+' || *c == '-') {
            negative ^= c == '-';
            rest = &rest[1..];
        }
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let token = &rest[..end];
        rest = &rest[end..];
        if token.is_empty() {
            return Err(PolytopeError::Parse { line, message: format!("dangling sign in `{side}`") });
        }
        let (coef, name) = match token.split_once('*') {
            Some((c, n)) => (parse_rational(c, line)?, Some(n.to_string())),
            None if token.starts_with(|c: char| c.is_ascii_digit()) => (parse_rational(token, line)?, None),
            None => (Rational::one(), Some(token.to_string())),
        };
        if let Some(n) = &name {
            let valid = n.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolytopeError::Parse { line, message: format!("bad name `{n}`") });
            }
        }
        terms.push((if negative { -coef } else { coef }, name));
    }
    Ok(terms)
}

fn parse_names(list: &str) -> Vec<String> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

impl FromStr for RationalInequalitySystem {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut variables = Vec::new();
        let mut parameters = Vec::new();
        let mut body = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vars:") {
                variables = parse_names(rest);
            } else if let Some(rest) = line.strip_prefix("params:") {
                parameters = parse_names(rest);
            } else {
                body.push((idx + 1, line));
            }
        }
        let var_refs: Vec<&str> = variables.iter().map(String::as_str).collect();
        let param_refs: Vec<&str> = parameters.iter().map(String::as_str).collect();
        let mut system = RationalInequalitySystem::new(&var_refs, &param_refs)?;

        for (line, text) in body {
            let (lhs, rhs) = text
                .split_once("<=")
                .ok_or_else(|| PolytopeError::Parse { line, message: "expected `<=`".into() })?;
            let mut row = Inequality::new(
                vec![Rational::zero(); variables.len()],
                vec![Rational::zero(); parameters.len()],
                Rational::zero(),
            );
            for (side, sign) in [(lhs, 1i32), (rhs, -1i32)] {
                for (coef, name) in parse_side(side, line)? {
                    // move everything to the form `vars <= const + params`
                    let c = if sign > 0 { coef } else { -coef };
                    match name {
                        None => row.constant -= c,
                        Some(n) => {
                            if let Some(i) = system.variable_index(&n) {
                                row.coefficients[i] += c;
                            } else if let Some(j) = system.parameter_index(&n) {
                                row.parameters[j] -= c;
                            } else {
                                return Err(PolytopeError::Parse { line, message: format!("undeclared name `{n}`") });
                            }
                        }
                    }
                }
            }
            system.push(row)?;
        }
        Ok(system)
    }
}
