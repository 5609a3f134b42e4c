// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! Incremental solver for linear equations over numeric unknowns.
//!
//! Every equation is reduced against what is already known and then solved
//! for its largest-magnitude unknown (partial pivoting). The system keeps each
//! pivot as a linear function of the still-independent unknowns; a pivot whose
//! function loses its last unknown becomes known.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Coefficients at or below this magnitude (relative to the equation's
/// largest input coefficient) count as zero.
pub const PIVOT_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `constant + sum(coefficient * variable)`, with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    terms: BTreeMap<VarId, f64>,
    constant: f64,
}

impl LinExpr {
    pub fn constant(value: f64) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: value,
        }
    }

    pub fn var(id: VarId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(id, 1.0);
        LinExpr {
            terms,
            constant: 0.0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (VarId, f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn constant_part(&self) -> f64 {
        self.constant
    }

    /// The value, when no unknowns remain.
    pub fn as_constant(&self) -> Option<f64> {
        self.terms.is_empty().then_some(self.constant)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, id: VarId) -> f64 {
        self.terms.get(&id).copied().unwrap_or(0.0)
    }

    fn add_term(&mut self, id: VarId, coef: f64) {
        let entry = self.terms.entry(id).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(&id);
        }
    }

    pub fn add(mut self, other: &LinExpr) -> LinExpr {
        for (id, c) in other.terms() {
            self.add_term(id, c);
        }
        self.constant += other.constant;
        self
    }

    pub fn sub(self, other: &LinExpr) -> LinExpr {
        self.add(&other.clone().scale(-1.0))
    }

    pub fn scale(mut self, s: f64) -> LinExpr {
        if s == 0.0 {
            return LinExpr::constant(0.0);
        }
        for c in self.terms.values_mut() {
            *c *= s;
        }
        self.constant *= s;
        self
    }

    pub fn add_constant(mut self, v: f64) -> LinExpr {
        self.constant += v;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.constant.is_finite() && self.terms.values().all(|c| c.is_finite())
    }

    /// Replaces `id` by `replacement` (which must not mention `id`).
    fn substitute(&mut self, id: VarId, replacement: &LinExpr) {
        if let Some(c) = self.terms.remove(&id) {
            for (k, v) in replacement.terms() {
                self.add_term(k, c * v);
            }
            self.constant += c * replacement.constant;
        }
    }

    fn drop_small(&mut self, threshold: f64) {
        self.terms.retain(|_, c| c.abs() > threshold);
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConstraintError {
    #[error("inconsistent equation: {equation} (off by {residual})")]
    Inconsistent { equation: String, residual: f64 },
    #[error("value of `{name}` is not determined; it depends on {}", free.join(", "))]
    Underdetermined { name: String, free: Vec<String> },
    #[error("unknown variable id {0}")]
    UnknownVariable(u32),
    #[error("non-finite value in equation: {0}")]
    NonFinite(String),
}

/// Equations accumulated during one program evaluation.
#[derive(Clone, Debug, Default)]
pub struct EquationSystem {
    names: Vec<String>,
    known: BTreeMap<VarId, f64>,
    dependent: BTreeMap<VarId, LinExpr>,
    equations: Vec<(LinExpr, LinExpr)>,
}

impl EquationSystem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a fresh unknown. Names are for messages only; declaring the
    /// same name twice yields two distinct unknowns.
    pub fn declare(&mut self, name: impl Into<String>) -> VarId {
        let id = VarId(self.names.len() as u32);
        self.names.push(name.into());
        id
    }

    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    pub fn variable_count(&self) -> usize {
        self.names.len()
    }

    pub fn known(&self) -> impl Iterator<Item = (VarId, f64)> + '_ {
        self.known.iter().map(|(k, v)| (*k, *v))
    }

    /// Original equations in the order they were asserted.
    pub fn equations(&self) -> &[(LinExpr, LinExpr)] {
        &self.equations
    }

    fn check_declared(&self, e: &LinExpr) -> Result<(), ConstraintError> {
        match e.terms().find(|(id, _)| id.index() >= self.names.len()) {
            Some((id, _)) => Err(ConstraintError::UnknownVariable(id.0)),
            None => Ok(()),
        }
    }

    /// Substitutes known values and pivot definitions, leaving an expression
    /// in independent unknowns only.
    pub fn reduce(&self, e: &LinExpr) -> LinExpr {
        let mut out = LinExpr::constant(e.constant);
        for (id, c) in e.terms() {
            if let Some(v) = self.known.get(&id) {
                out.constant += c * v;
            } else if let Some(def) = self.dependent.get(&id) {
                out = out.add(&def.clone().scale(c));
            } else {
                out.add_term(id, c);
            }
        }
        out
    }

    /// Adds `lhs = rhs`.
    pub fn assert_equal(&mut self, lhs: &LinExpr, rhs: &LinExpr) -> Result<(), ConstraintError> {
        self.check_declared(lhs)?;
        self.check_declared(rhs)?;
        if !lhs.is_finite() || !rhs.is_finite() {
            return Err(ConstraintError::NonFinite(self.render_equation(lhs, rhs)));
        }
        let raw = lhs.clone().sub(rhs);
        let scale = raw
            .terms()
            .map(|(_, c)| c.abs())
            .fold(1.0f64, f64::max);
        let mut e = self.reduce(&raw);
        e.drop_small(PIVOT_EPSILON * scale);

        let pivot = e
            .terms()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()).then(b.0.cmp(&a.0)));
        let Some((pivot, coef)) = pivot else {
            let magnitude = self.magnitude(lhs).max(self.magnitude(rhs));
            if e.constant.abs() > PIVOT_EPSILON * (1.0 + magnitude) {
                return Err(ConstraintError::Inconsistent {
                    equation: self.render_equation(lhs, rhs),
                    residual: e.constant,
                });
            }
            // redundant
            self.equations.push((lhs.clone(), rhs.clone()));
            return Ok(());
        };

        // pivot = -(e - coef*pivot) / coef
        let mut def = e.clone();
        def.terms.remove(&pivot);
        let def = def.scale(-1.0 / coef);

        for other in self.dependent.values_mut() {
            other.substitute(pivot, &def);
        }
        self.dependent.insert(pivot, def);
        self.promote_constants();
        self.equations.push((lhs.clone(), rhs.clone()));
        Ok(())
    }

    fn magnitude(&self, e: &LinExpr) -> f64 {
        let mut m = e.constant.abs();
        for (id, c) in e.terms() {
            let v = self.known.get(&id).copied().unwrap_or(0.0);
            m = m.max((c * v).abs());
        }
        m
    }

    fn promote_constants(&mut self) {
        let solved: Vec<VarId> = self
            .dependent
            .iter()
            .filter(|(_, d)| d.is_constant())
            .map(|(id, _)| *id)
            .collect();
        for id in solved {
            let value = self.dependent.remove(&id).unwrap().constant;
            self.known.insert(id, value);
        }
    }

    pub fn is_known(&self, id: VarId) -> bool {
        self.known.contains_key(&id)
    }

    /// The value of `id`, or the independent unknowns it still depends on.
    pub fn value_of(&self, id: VarId) -> Result<f64, ConstraintError> {
        if id.index() >= self.names.len() {
            return Err(ConstraintError::UnknownVariable(id.0));
        }
        if let Some(v) = self.known.get(&id) {
            return Ok(*v);
        }
        let free: Vec<String> = match self.dependent.get(&id) {
            Some(def) => def.terms().map(|(v, _)| self.names[v.index()].clone()).collect(),
            None => vec![self.names[id.index()].clone()],
        };
        Err(ConstraintError::Underdetermined {
            name: self.names[id.index()].clone(),
            free,
        })
    }

    /// Value of an expression, if all of its unknowns are determined.
    pub fn eval(&self, e: &LinExpr) -> Result<f64, Vec<VarId>> {
        let r = self.reduce(e);
        if r.is_constant() {
            Ok(r.constant)
        } else {
            Err(r.terms().map(|(v, _)| v).collect())
        }
    }

    pub fn render(&self, e: &LinExpr) -> String {
        ExprDisplay { sys: self, expr: e }.to_string()
    }

    fn render_equation(&self, lhs: &LinExpr, rhs: &LinExpr) -> String {
        format!("{} = {}", self.render(lhs), self.render(rhs))
    }
}

struct ExprDisplay<'a> {
    sys: &'a EquationSystem,
    expr: &'a LinExpr,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (id, c) in self.expr.terms() {
            let name = self.sys.name(id).unwrap_or("?");
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if c.abs() == 1.0 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{}*{name}", c.abs())?;
            }
            first = false;
        }
        let k = self.expr.constant;
        if first {
            write!(f, "{k}")
        } else if k != 0.0 {
            write!(f, " {} {}", if k < 0.0 { "-" } else { "+" }, k.abs())
        } else {
            Ok(())
        }
    }
}
