use serde::Serialize;

use crate::error::{invalid, Result};

/// `coefficients · F = rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRelation {
    pub coefficients: Vec<f64>,
    pub rhs: f64,
}

/// Linear relations on the fidelity tuple and an optional linear objective
/// to maximize.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintSpec {
    pub relations: Vec<LinearRelation>,
    pub objective: Option<Vec<f64>>,
}

impl ConstraintSpec {
    pub fn new(relations: Vec<LinearRelation>, objective: Option<Vec<f64>>) -> Result<Self> {
        if relations.is_empty() && objective.is_none() {
            return invalid("need at least one relation or an objective");
        }
        let len = relations
            .first()
            .map(|r| r.coefficients.len())
            .or_else(|| objective.as_ref().map(Vec::len))
            .unwrap_or(0);
        if len == 0
            || relations.iter().any(|r| r.coefficients.len() != len)
            || objective.as_ref().is_some_and(|o| o.len() != len)
        {
            return invalid("coefficient rows must share one nonzero length");
        }
        let all = relations
            .iter()
            .flat_map(|r| r.coefficients.iter().chain([&r.rhs]));
        if all
            .chain(objective.iter().flatten())
            .any(|x| !x.is_finite())
        {
            return invalid("non-finite coefficient");
        }
        Ok(ConstraintSpec {
            relations,
            objective,
        })
    }

    /// Parses textual relations such as `"F1+F3=2F2"` and an objective such
    /// as `"F1"` for tuples of length `n − 1`.
    ///
    /// `Fk` with a single digit is the k-th coordinate, i.e. `F_{1,k+1}`;
    /// `F1_k` names `F_{1k}` directly, and `F1k` does too when `n ≤ 10`.
    pub fn parse(n: usize, maximize: Option<&str>, relations: &[&str]) -> Result<Self> {
        if n < 2 {
            return invalid(format!("need n >= 2, got {n}"));
        }
        let relations = relations
            .iter()
            .map(|text| {
                let Some((lhs, rhs)) = text.split_once('=') else {
                    return invalid(format!("relation {text:?} has no '='"));
                };
                if rhs.contains('=') {
                    return invalid(format!("relation {text:?} has more than one '='"));
                }
                let (a, ca) = parse_linear(lhs, n)?;
                let (b, cb) = parse_linear(rhs, n)?;
                Ok(LinearRelation {
                    coefficients: a.iter().zip(&b).map(|(x, y)| x - y).collect(),
                    rhs: cb - ca,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let objective = maximize
            .map(|m| parse_linear(m, n).map(|(c, _)| c))
            .transpose()?;
        ConstraintSpec::new(relations, objective)
    }

    pub fn len(&self) -> usize {
        self.relations
            .first()
            .map(|r| r.coefficients.len())
            .or_else(|| self.objective.as_ref().map(Vec::len))
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest `|coefficients·F − rhs|`.
    pub fn residual(&self, f: &[f64]) -> f64 {
        self.relations
            .iter()
            .map(|r| (dot(&r.coefficients, f) - r.rhs).abs())
            .fold(0.0, f64::max)
    }

    pub fn objective_value(&self, f: &[f64]) -> f64 {
        self.objective.as_ref().map_or(0.0, |c| dot(c, f))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn variable_index(name: &str, n: usize) -> Result<usize> {
    let bad = || invalid(format!("unknown fidelity variable F{name}"));
    let pair = |k: &str| -> Result<usize> {
        match k.parse::<usize>() {
            Ok(k) if (2..=n).contains(&k) => Ok(k - 2),
            _ => bad(),
        }
    };
    if let Some(k) = name.strip_prefix("1_") {
        return pair(k);
    }
    if !name.chars().all(|c| c.is_ascii_digit()) || name.is_empty() {
        return bad();
    }
    if name.len() == 1 {
        let k: usize = name.parse().expect("digit");
        if (1..n).contains(&k) {
            return Ok(k - 1);
        }
        return bad();
    }
    if n <= 10 {
        if let Some(k) = name.strip_prefix('1') {
            return pair(k);
        }
    }
    bad()
}

/// Coefficients and constant term of a sum such as `2F2 - 0.5*F3 + 1`.
fn parse_linear(expr: &str, n: usize) -> Result<(Vec<f64>, f64)> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return invalid("empty expression");
    }
    let mut coeffs = vec![0.0; n - 1];
    let mut constant = 0.0;
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = 1.0;
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -1.0;
            }
            i += 1;
        } else if i > 0 {
            return invalid(format!("expected '+' or '-' in {expr:?}"));
        }
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        let number = if i > start {
            Some(
                s[start..i]
                    .parse::<f64>()
                    .or_else(|_| invalid(format!("bad number {:?}", &s[start..i])))?,
            )
        } else {
            None
        };
        if i < bytes.len() && bytes[i] == b'*' {
            if number.is_none() || !matches!(bytes.get(i + 1), Some(b'F' | b'f')) {
                return invalid(format!("dangling '*' in {expr:?}"));
            }
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'F' || bytes[i] == b'f') {
            i += 1;
            let vstart = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
            let idx = variable_index(&s[vstart..i], n)?;
            coeffs[idx] += sign * number.unwrap_or(1.0);
        } else if let Some(x) = number {
            constant += sign * x;
        } else {
            return invalid(format!("cannot parse {expr:?}"));
        }
    }
    Ok((coeffs, constant))
}
