// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use super::ast::*;
use super::diagnostic::Diagnostic;
use crate::constraint::{ConstraintError, EquationSystem, LinExpr, VarId};
use crate::geometry::{Affine, Contour, Point, Vec2, EPSILON};
use crate::hobby::{self, JointKind, Knot, PathSpec};
use crate::pen::{self, CutMode, Nib, NodeOverride, NodeStyle};

/// Default limit on expression and macro nesting during evaluation.
pub const DEFAULT_MAX_DEPTH: usize = 160;

#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Numeric parameters fixed from outside; assignments to these names in
    /// the program are skipped.
    pub overrides: BTreeMap<String, f64>,
    pub deadline: Option<Instant>,
    pub max_depth: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            overrides: BTreeMap::new(),
            deadline: None,
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

impl EvalOptions {
    pub fn with_overrides(overrides: BTreeMap<String, f64>) -> Self {
        EvalOptions {
            overrides,
            ..Default::default()
        }
    }
}

/// Outcome of evaluating one glyph program.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GlyphResult {
    pub name: Option<String>,
    pub unicode: Option<u32>,
    pub advance: Option<f64>,
    /// Closed contours to fill, nonzero winding. Empty when evaluation
    /// failed.
    pub outline: Vec<Contour>,
    /// Centre lines of stroked paths, in stroke order.
    pub strokes: Vec<Contour>,
    /// Numeric parameters assigned in the main file, in order of first
    /// assignment, with their final values.
    pub parameters: Vec<(String, f64)>,
    /// Every numeric variable with a known value when evaluation ended,
    /// whether assigned or solved from equations.
    pub variables: BTreeMap<String, f64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl GlyphResult {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }
}

#[derive(Clone, Debug)]
enum Value {
    Num(LinExpr),
    Pair(LinExpr, LinExpr),
    Path(Contour),
    Pen(Nib),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "numeric",
            Value::Pair(..) => "pair",
            Value::Path(_) => "path",
            Value::Pen(_) => "pen",
        }
    }

    fn num(v: f64) -> Value {
        Value::Num(LinExpr::constant(v))
    }

    fn pair(p: Point) -> Value {
        Value::Pair(LinExpr::constant(p.x), LinExpr::constant(p.y))
    }
}

struct Macro {
    params: Option<(String, String)>,
    body: Expr,
}

type EResult<T> = Result<T, Diagnostic>;

struct Evaluator<'a> {
    opts: &'a EvalOptions,
    sys: EquationSystem,
    unknowns: HashMap<String, VarId>,
    globals: HashMap<String, Value>,
    scopes: Vec<HashMap<String, Value>>,
    macros: HashMap<String, Macro>,
    declared: HashMap<String, (DeclType, bool)>,
    pen: Option<Nib>,
    in_equation: bool,
    depth: usize,
    out: GlyphResult,
    param_order: Vec<String>,
}

/// Evaluates a program whose includes have been resolved.
pub fn evaluate(program: &Program, options: &EvalOptions) -> GlyphResult {
    let mut ev = Evaluator {
        opts: options,
        sys: EquationSystem::new(),
        unknowns: HashMap::new(),
        globals: HashMap::new(),
        scopes: Vec::new(),
        macros: HashMap::new(),
        declared: HashMap::new(),
        pen: None,
        in_equation: false,
        depth: 0,
        out: GlyphResult::default(),
        param_order: Vec::new(),
    };
    for (k, v) in &options.overrides {
        ev.globals.insert(k.clone(), Value::num(*v));
    }
    let mut failed = false;
    for stmt in &program.stmts {
        if let Err(d) = ev.statement(stmt) {
            ev.out.diagnostics.push(d);
            failed = true;
            break;
        }
    }
    let mut out = ev.finish();
    if failed {
        out.outline.clear();
        out.strokes.clear();
    }
    for d in &mut out.diagnostics {
        if d.file.is_none() && d.span.file != 0 {
            d.file = program.files.get(d.span.file as usize).cloned();
        }
    }
    out
}

fn is_coordinate_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('x' | 'y')) && matches!(chars.next(), Some(c) if c.is_ascii_digit() || c == '.')
}

fn z_suffix(name: &str) -> Option<&str> {
    let rest = name.strip_prefix('z')?;
    rest.chars()
        .next()
        .filter(|c| c.is_ascii_digit() || *c == '.')
        .map(|_| rest)
}

fn builtin(name: &str) -> Option<Value> {
    Some(match name {
        "bp" => Value::num(1.0),
        "pt" => Value::num(72.0 / 72.27),
        "in" => Value::num(72.0),
        "cm" => Value::num(72.0 / 2.54),
        "mm" => Value::num(7.2 / 2.54),
        "pc" => Value::num(12.0 * 72.0 / 72.27),
        "origin" => Value::pair(Point::new(0.0, 0.0)),
        "right" => Value::pair(Point::new(1.0, 0.0)),
        "left" => Value::pair(Point::new(-1.0, 0.0)),
        "up" => Value::pair(Point::new(0.0, 1.0)),
        "down" => Value::pair(Point::new(0.0, -1.0)),
        "pencircle" => Value::Pen(Nib::circle(1.0)),
        _ => return None,
    })
}

impl Evaluator<'_> {
    fn finish(mut self) -> GlyphResult {
        let mut params = Vec::new();
        for name in &self.param_order {
            if let Some(Value::Num(l)) = self.globals.get(name) {
                if let Ok(v) = self.sys.eval(l) {
                    params.push((name.clone(), v));
                }
            }
        }
        let mut vars = BTreeMap::new();
        for (k, id) in &self.unknowns {
            if let Ok(x) = self.sys.value_of(*id) {
                vars.insert(k.clone(), x);
            }
        }
        for (k, v) in &self.globals {
            if let Value::Num(l) = v {
                if let Ok(x) = self.sys.eval(l) {
                    vars.insert(k.clone(), x);
                }
            }
        }
        self.out.parameters = params;
        self.out.variables = vars;
        self.out
    }

    fn warn(&mut self, message: impl Into<String>, span: Span) {
        self.out.diagnostics.push(Diagnostic::warning(message, span));
    }

    fn statement(&mut self, stmt: &Stmt) -> EResult<()> {
        let span = stmt.span;
        match &stmt.kind {
            StmtKind::Assign { target, value } => {
                let record = span.file == 0 && !self.param_order.contains(target);
                if self.opts.overrides.contains_key(target) {
                    if record {
                        self.param_order.push(target.clone());
                    }
                    return Ok(());
                }
                let v = self.eval(value)?;
                let v = self.known_value(v, value)?;
                if let (Some(suffix), Value::Pair(x, y)) = (z_suffix(target), &v) {
                    self.globals.insert(format!("x{suffix}"), Value::Num(x.clone()));
                    self.globals.insert(format!("y{suffix}"), Value::Num(y.clone()));
                }
                if record && matches!(v, Value::Num(_)) {
                    self.param_order.push(target.clone());
                }
                self.globals.insert(target.clone(), v);
                Ok(())
            }
            StmtKind::Equation(exprs) => self.equation(exprs, span),
            StmtKind::Include(path) => Err(Diagnostic::error(format!("unresolved include `{path}`"), span)),
            StmtKind::VarDef { name, params, body } => {
                self.macros.insert(
                    name.clone(),
                    Macro {
                        params: params.clone(),
                        body: body.clone(),
                    },
                );
                Ok(())
            }
            StmtKind::Declare { ty, names } => {
                for d in names {
                    self.declared.insert(d.name.clone(), (*ty, d.array));
                }
                Ok(())
            }
            StmtKind::Pickup(e) => {
                self.pen = Some(self.pen_value(e)?);
                Ok(())
            }
            StmtKind::Draw { path, options } => self.draw(path, options),
            StmtKind::Fill { path, .. } | StmtKind::Unfill { path, .. } => {
                let c = self.path_value(path)?.close_if_meets(EPSILON);
                if !c.is_closed() {
                    return Err(Diagnostic::error(
                        "fill needs a closed path; end it with `cycle`",
                        path.span,
                    ));
                }
                let c = if matches!(stmt.kind, StmtKind::Unfill { .. }) && c.signed_area() > 0.0 {
                    c.reversed()
                } else {
                    c
                };
                self.emit(c);
                Ok(())
            }
            StmtKind::PenStroke { options, path, result } => self.pen_stroke(options, path, result, span),
            StmtKind::Glyph { name, unicode, advance } => {
                self.out.name = Some(name.clone());
                if let Some(u) = unicode {
                    let cp = u32::from_str_radix(u.trim_start_matches("U+"), 16)
                        .ok()
                        .filter(|cp| char::from_u32(*cp).is_some())
                        .ok_or_else(|| Diagnostic::error(format!("`{u}` is not a hexadecimal code point"), span))?;
                    self.out.unicode = Some(cp);
                }
                if let Some(a) = advance {
                    self.out.advance = Some(self.known_num(a)?);
                }
                Ok(())
            }
        }
    }

    fn emit(&mut self, c: Contour) {
        if !c.is_empty() && !self.out.outline.contains(&c) {
            self.out.outline.push(c);
        }
    }

    /// A bare name with no meaning yet; `name = <path or pen>` defines it.
    fn is_free_name(&self, e: &Expr) -> Option<String> {
        let ExprKind::Var(name) = &e.kind else { return None };
        let taken = self.scopes.iter().any(|s| s.contains_key(name))
            || self.globals.contains_key(name)
            || self.unknowns.contains_key(name)
            || self.macros.contains_key(name)
            || z_suffix(name).is_some()
            || is_coordinate_name(name)
            || builtin(name).is_some()
            || matches!(self.declared.get(name), Some((DeclType::Numeric | DeclType::Pair, _)));
        (!taken).then(|| name.clone())
    }

    fn equation(&mut self, exprs: &[Expr], span: Span) -> EResult<()> {
        let mut vals: Vec<Option<Value>> = Vec::with_capacity(exprs.len());
        let mut free = Vec::new();
        self.in_equation = true;
        let r = (|| {
            for e in exprs {
                match self.is_free_name(e) {
                    Some(name) => {
                        free.push((name, e));
                        vals.push(None);
                    }
                    None => vals.push(Some(self.eval(e)?)),
                }
            }
            Ok(())
        })();
        self.in_equation = false;
        r?;
        let shape = vals
            .iter()
            .flatten()
            .find(|v| matches!(v, Value::Path(_) | Value::Pen(_)))
            .cloned();
        if let Some(shape) = shape {
            let given = vals.iter().flatten().count();
            if given > 1 {
                return Err(Diagnostic::error(
                    format!("equations between {}s are not supported; use `:=`", shape.type_name()),
                    span,
                ));
            }
            for (name, _) in free {
                self.globals.insert(name, shape.clone());
            }
            return Ok(());
        }
        self.in_equation = true;
        let mut resolved = Vec::with_capacity(vals.len());
        let mut free_iter = free.into_iter();
        let r = (|| {
            for v in vals {
                match v {
                    Some(v) => resolved.push(v),
                    None => {
                        let (_, e) = free_iter.next().expect("one free entry per missing value");
                        resolved.push(self.eval(e)?);
                    }
                }
            }
            Ok(())
        })();
        self.in_equation = false;
        r?;
        for w in resolved.windows(2) {
            self.assert_equal(&w[0], &w[1], span)?;
        }
        Ok(())
    }

    fn constraint_error(&self, e: ConstraintError, span: Span) -> Diagnostic {
        Diagnostic::error(e.to_string(), span)
    }

    fn assert_equal(&mut self, a: &Value, b: &Value, span: Span) -> EResult<()> {
        match (a, b) {
            (Value::Num(x), Value::Num(y)) => self.sys.assert_equal(x, y).map_err(|e| self.constraint_error(e, span)),
            (Value::Pair(x0, y0), Value::Pair(x1, y1)) => {
                self.sys
                    .assert_equal(x0, x1)
                    .map_err(|e| self.constraint_error(e, span))?;
                self.sys
                    .assert_equal(y0, y1)
                    .map_err(|e| self.constraint_error(e, span))
            }
            _ => Err(Diagnostic::error(
                format!("cannot equate a {} with a {}", a.type_name(), b.type_name()),
                span,
            )),
        }
    }

    fn draw(&mut self, path: &Expr, options: &[DrawOption]) -> EResult<()> {
        let c = self.path_value(path)?.close_if_meets(EPSILON);
        let mut nib = self.pen;
        for o in options {
            if let DrawOption::WithPen(e) = o {
                nib = Some(self.pen_value(e)?);
            }
        }
        let Some(nib) = nib else {
            if c.is_closed() {
                self.emit(c);
            } else {
                self.warn("open path drawn without a pen has no outline", path.span);
            }
            return Ok(());
        };
        let styles: Vec<NodeStyle> = if c.is_closed() {
            Vec::new()
        } else {
            vec![
                NodeStyle {
                    node: 0,
                    style: NodeOverride::Nib(nib),
                },
                NodeStyle {
                    node: c.node_count() - 1,
                    style: NodeOverride::Nib(nib),
                },
            ]
        };
        let env = pen::pen_stroke(&c, &nib, &styles).map_err(|e| Diagnostic::error(e.to_string(), path.span))?;
        for w in &env.warnings {
            self.warn(w.clone(), path.span);
        }
        for o in env.outline() {
            self.emit(o);
        }
        self.out.strokes.push(c);
        Ok(())
    }

    fn node_indices(&mut self, nodes: &[Expr]) -> EResult<Vec<usize>> {
        nodes
            .iter()
            .map(|e| {
                let v = self.known_num(e)?;
                if v < 0.0 || (v - v.round()).abs() > 1e-9 {
                    return Err(Diagnostic::error(format!("node index must be a whole number, got {v}"), e.span));
                }
                Ok(v.round() as usize)
            })
            .collect()
    }

    fn pen_stroke(&mut self, options: &[StrokeOption], path: &Expr, result: &str, span: Span) -> EResult<()> {
        let c = self.path_value(path)?;
        let mut styles = Vec::new();
        for o in options {
            let style = match &o.kind {
                StrokeOptionKind::Nib(e) => NodeOverride::Nib(self.pen_value(e)?),
                StrokeOptionKind::Cut { nib, relative, angle } => NodeOverride::Cut {
                    nib: self.pen_value(nib)?,
                    angle: self.known_num(angle)?,
                    mode: if *relative { CutMode::Relative } else { CutMode::Absolute },
                },
                StrokeOptionKind::Tip(_) => return Err(Diagnostic::error("`tip` is not supported", o.span)),
                StrokeOptionKind::IgnoreDirections => {
                    return Err(Diagnostic::error("`ignore_directions` is not supported", o.span))
                }
            };
            for node in self.node_indices(&o.nodes)? {
                styles.push(NodeStyle { node, style });
            }
        }
        let default = match self.pen {
            Some(p) => p,
            None => {
                let count = c.node_count();
                if let Some(k) = (0..count).find(|k| !styles.iter().any(|s| s.node == *k)) {
                    return Err(Diagnostic::error(
                        format!("node {k} has no nib; give it one with nib(...)({k}) or pick up a pen first"),
                        span,
                    ));
                }
                Nib::circle(0.0)
            }
        };
        let env = pen::pen_stroke(&c, &default, &styles).map_err(|e| Diagnostic::error(e.to_string(), span))?;
        for w in &env.warnings {
            self.warn(w.clone(), span);
        }
        if let Some(r) = &env.result {
            self.globals.insert(result.to_string(), Value::Path(r.clone()));
        } else {
            self.globals.remove(result);
        }
        self.globals.insert(format!("{result}.l"), Value::Path(env.left.clone()));
        self.globals.insert(format!("{result}.r"), Value::Path(env.right.clone()));
        for (suffix, cap) in [("b", &env.begin_cap), ("e", &env.end_cap)] {
            match cap {
                Some(cap) => self.globals.insert(format!("{result}.{suffix}"), Value::Path(cap.clone())),
                None => self.globals.remove(&format!("{result}.{suffix}")),
            };
        }
        self.out.strokes.push(c);
        Ok(())
    }

    fn check_limits(&self, span: Span) -> EResult<()> {
        if self.depth > self.opts.max_depth {
            return Err(Diagnostic::error(
                format!("nesting deeper than {} levels; is a definition recursive?", self.opts.max_depth),
                span,
            ));
        }
        if let Some(deadline) = self.opts.deadline {
            if Instant::now() >= deadline {
                return Err(Diagnostic::error("evaluation timed out", span));
            }
        }
        Ok(())
    }

    fn eval(&mut self, e: &Expr) -> EResult<Value> {
        self.depth += 1;
        let r = self.check_limits(e.span).and_then(|_| self.eval_inner(e));
        self.depth -= 1;
        r
    }

    fn eval_inner(&mut self, e: &Expr) -> EResult<Value> {
        let span = e.span;
        match &e.kind {
            ExprKind::Number(n) => Ok(Value::num(*n)),
            ExprKind::Var(name) => self.lookup(name, span),
            ExprKind::Pair(a, b) => {
                let x = self.numeric(a)?;
                let y = self.numeric(b)?;
                Ok(Value::Pair(x, y))
            }
            ExprKind::Triple(_) => Err(Diagnostic::error("colours are only allowed after `withcolor`", span)),
            ExprKind::Neg(a) => match self.eval(a)? {
                Value::Num(x) => Ok(Value::Num(x.scale(-1.0))),
                Value::Pair(x, y) => Ok(Value::Pair(x.scale(-1.0), y.scale(-1.0))),
                other => Err(Diagnostic::error(format!("cannot negate a {}", other.type_name()), span)),
            },
            ExprKind::Binary(op, a, b) => {
                let va = self.eval(a)?;
                let vb = self.eval(b)?;
                self.binary(*op, va, vb, span)
            }
            ExprKind::Transform(op, a, b) => {
                let base = self.eval(a)?;
                let m = self.transform_of(*op, b)?;
                self.apply_transform(base, &m, span)
            }
            ExprKind::Call(name, args) => self.call(name, args, span),
            ExprKind::Prefix(name, a) => self.prefix(name, a, span),
            ExprKind::Of(name, a, p) => self.of(name, a, p, span),
            ExprKind::Path {
                knots,
                joins,
                cyclic,
                cycle_dir,
            } => self.path(knots, joins, *cyclic, cycle_dir.as_deref(), span),
        }
    }

    fn unknown(&mut self, name: &str) -> LinExpr {
        let id = match self.unknowns.get(name) {
            Some(id) => *id,
            None => {
                let id = self.sys.declare(name);
                self.unknowns.insert(name.to_string(), id);
                id
            }
        };
        LinExpr::var(id)
    }

    fn lookup(&mut self, name: &str, span: Span) -> EResult<Value> {
        for scope in self.scopes.iter().rev() {
            if let Some(v) = scope.get(name) {
                return Ok(v.clone());
            }
        }
        if let Some(v) = self.globals.get(name) {
            return Ok(v.clone());
        }
        if let Some(id) = self.unknowns.get(name) {
            return Ok(Value::Num(LinExpr::var(*id)));
        }
        if let Some(suffix) = z_suffix(name) {
            let x = self.lookup(&format!("x{suffix}"), span)?;
            let y = self.lookup(&format!("y{suffix}"), span)?;
            return match (x, y) {
                (Value::Num(x), Value::Num(y)) => Ok(Value::Pair(x, y)),
                _ => Err(Diagnostic::error(format!("`x{suffix}` and `y{suffix}` must be numeric"), span)),
            };
        }
        if let Some(m) = self.macros.get(name) {
            if let Some((t, p)) = &m.params {
                return Err(Diagnostic::error(
                    format!("`{name}` takes arguments: `{name} {t} of {p}`"),
                    span,
                ));
            }
            let body = m.body.clone();
            return self.eval(&body);
        }
        if name == "pensquare" {
            return Err(Diagnostic::error("pensquare is not supported for stroking; use fix_nib", span));
        }
        if let Some(v) = builtin(name) {
            return Ok(v);
        }
        if let Some((ty, _)) = self.declaration(name) {
            return match ty {
                DeclType::Numeric => Ok(Value::Num(self.unknown(name))),
                DeclType::Pair => Ok(Value::Pair(
                    self.unknown(&format!("xpart {name}")),
                    self.unknown(&format!("ypart {name}")),
                )),
                DeclType::Path | DeclType::Pen => Err(Diagnostic::error(
                    format!("{} `{name}` is used before it is given a value", ty.keyword()),
                    span,
                )),
            };
        }
        if self.in_equation || is_coordinate_name(name) {
            return Ok(Value::Num(self.unknown(name)));
        }
        Err(Diagnostic::error(format!("undefined name `{name}`"), span))
    }

    /// Declaration covering `name`, directly or as `base[]` element.
    fn declaration(&self, name: &str) -> Option<(DeclType, bool)> {
        if let Some(d) = self.declared.get(name) {
            return Some(*d);
        }
        let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
        if base.len() < name.len() {
            if let Some((ty, true)) = self.declared.get(base) {
                return Some((*ty, true));
            }
        }
        None
    }

    fn numeric(&mut self, e: &Expr) -> EResult<LinExpr> {
        match self.eval(e)? {
            Value::Num(x) => Ok(x),
            other => Err(Diagnostic::error(
                format!("expected a numeric, found a {}", other.type_name()),
                e.span,
            )),
        }
    }

    fn undetermined(&self, what: &Expr, free: Vec<VarId>) -> Diagnostic {
        let names: Vec<String> = free
            .iter()
            .map(|id| self.sys.name(*id).unwrap_or("?").to_string())
            .collect();
        let err = ConstraintError::Underdetermined {
            name: what.to_string(),
            free: names,
        };
        Diagnostic::error(err.to_string(), what.span)
    }

    fn known_num(&mut self, e: &Expr) -> EResult<f64> {
        let x = self.numeric(e)?;
        self.sys.eval(&x).map_err(|free| self.undetermined(e, free))
    }

    fn known_point(&mut self, e: &Expr) -> EResult<Point> {
        let v = self.eval(e)?;
        self.point_of(v, e)
    }

    fn point_of(&self, v: Value, e: &Expr) -> EResult<Point> {
        match v {
            Value::Pair(x, y) => {
                let x = self.sys.eval(&x).map_err(|free| self.undetermined(e, free))?;
                let y = self.sys.eval(&y).map_err(|free| self.undetermined(e, free))?;
                Ok(Point::new(x, y))
            }
            other => Err(Diagnostic::error(
                format!("expected a pair, found a {}", other.type_name()),
                e.span,
            )),
        }
    }

    fn known_value(&self, v: Value, e: &Expr) -> EResult<Value> {
        match v {
            Value::Num(x) => {
                let x = self.sys.eval(&x).map_err(|free| self.undetermined(e, free))?;
                Ok(Value::num(x))
            }
            Value::Pair(x, y) => {
                let x = self.sys.eval(&x).map_err(|free| self.undetermined(e, free))?;
                let y = self.sys.eval(&y).map_err(|free| self.undetermined(e, free))?;
                Ok(Value::pair(Point::new(x, y)))
            }
            other => Ok(other),
        }
    }

    fn pen_value(&mut self, e: &Expr) -> EResult<Nib> {
        match self.eval(e)? {
            Value::Pen(n) => Ok(n),
            other => Err(Diagnostic::error(
                format!("expected a pen, found a {}", other.type_name()),
                e.span,
            )),
        }
    }

    fn path_value(&mut self, e: &Expr) -> EResult<Contour> {
        match self.eval(e)? {
            Value::Path(c) => Ok(c),
            other => Err(Diagnostic::error(
                format!("expected a path, found a {}", other.type_name()),
                e.span,
            )),
        }
    }

    fn constant(&self, x: &LinExpr) -> Option<f64> {
        self.sys.reduce(x).as_constant()
    }

    fn binary(&mut self, op: BinOp, a: Value, b: Value, span: Span) -> EResult<Value> {
        let mismatch = |a: &Value, b: &Value| {
            Diagnostic::error(
                format!("cannot apply `{}` to a {} and a {}", op.symbol(), a.type_name(), b.type_name()),
                span,
            )
        };
        match op {
            BinOp::Add | BinOp::Sub => {
                let s = if op == BinOp::Add { 1.0 } else { -1.0 };
                match (&a, &b) {
                    (Value::Num(x), Value::Num(y)) => Ok(Value::Num(x.clone().add(&y.clone().scale(s)))),
                    (Value::Pair(x0, y0), Value::Pair(x1, y1)) => Ok(Value::Pair(
                        x0.clone().add(&x1.clone().scale(s)),
                        y0.clone().add(&y1.clone().scale(s)),
                    )),
                    _ => Err(mismatch(&a, &b)),
                }
            }
            BinOp::Mul => {
                let nonlinear =
                    || Diagnostic::error("cannot multiply two unknown quantities; equations must stay linear", span);
                match (&a, &b) {
                    (Value::Num(x), Value::Num(y)) => {
                        if let Some(c) = self.constant(x) {
                            Ok(Value::Num(y.clone().scale(c)))
                        } else if let Some(c) = self.constant(y) {
                            Ok(Value::Num(x.clone().scale(c)))
                        } else {
                            Err(nonlinear())
                        }
                    }
                    (Value::Num(s), Value::Pair(x, y)) | (Value::Pair(x, y), Value::Num(s)) => {
                        let c = self.constant(s).ok_or_else(nonlinear)?;
                        Ok(Value::Pair(x.clone().scale(c), y.clone().scale(c)))
                    }
                    _ => Err(mismatch(&a, &b)),
                }
            }
            BinOp::Div => {
                let Value::Num(d) = &b else { return Err(mismatch(&a, &b)) };
                let d = self
                    .constant(d)
                    .ok_or_else(|| Diagnostic::error("cannot divide by an unknown quantity", span))?;
                if d == 0.0 {
                    return Err(Diagnostic::error("division by zero", span));
                }
                match a {
                    Value::Num(x) => Ok(Value::Num(x.scale(1.0 / d))),
                    Value::Pair(x, y) => Ok(Value::Pair(x.scale(1.0 / d), y.scale(1.0 / d))),
                    _ => Err(mismatch(&a, &b)),
                }
            }
        }
    }

    fn transform_of(&mut self, op: TransformOp, arg: &Expr) -> EResult<Affine> {
        Ok(match op {
            TransformOp::Scaled => Affine::scale(self.known_num(arg)?),
            TransformOp::XScaled => Affine::scale_xy(self.known_num(arg)?, 1.0),
            TransformOp::YScaled => Affine::scale_xy(1.0, self.known_num(arg)?),
            TransformOp::XYScaled => {
                let p = self.known_point(arg)?;
                Affine::scale_xy(p.x, p.y)
            }
            TransformOp::Rotated => Affine::rotate_deg(self.known_num(arg)?),
            TransformOp::Shifted => Affine::translate(self.known_point(arg)?.to_vec2()),
            TransformOp::Slanted => Affine::shear_x(self.known_num(arg)?),
        })
    }

    fn apply_transform(&self, v: Value, m: &Affine, span: Span) -> EResult<Value> {
        match v {
            Value::Pair(x, y) => Ok(Value::Pair(
                x.clone().scale(m.a).add(&y.clone().scale(m.c)).add_constant(m.tx),
                x.scale(m.b).add(&y.scale(m.d)).add_constant(m.ty),
            )),
            Value::Path(c) => Ok(Value::Path(c.transform(m))),
            Value::Pen(n) => Ok(Value::Pen(n.transform(m))),
            Value::Num(_) => Err(Diagnostic::error("cannot transform a numeric", span)),
        }
    }

    fn call(&mut self, name: &str, args: &[Expr], span: Span) -> EResult<Value> {
        match name {
            "fix_nib" => {
                if args.len() != 3 {
                    return Err(Diagnostic::error(
                        format!("fix_nib takes 3 arguments (width, height, angle), got {}", args.len()),
                        span,
                    ));
                }
                let w = self.known_num(&args[0])?;
                let h = self.known_num(&args[1])?;
                let a = self.known_num(&args[2])?;
                Nib::new(w, h, a)
                    .map(Value::Pen)
                    .map_err(|e| Diagnostic::error(e.to_string(), span))
            }
            "max" | "min" => {
                if args.is_empty() {
                    return Err(Diagnostic::error(format!("{name} needs at least one argument"), span));
                }
                let mut best = self.known_num(&args[0])?;
                for a in &args[1..] {
                    let v = self.known_num(a)?;
                    best = if name == "max" { best.max(v) } else { best.min(v) };
                }
                Ok(Value::num(best))
            }
            _ => Err(Diagnostic::error(format!("unknown function `{name}`"), span)),
        }
    }

    fn prefix(&mut self, name: &str, a: &Expr, span: Span) -> EResult<Value> {
        let finite = |v: f64| {
            if v.is_finite() {
                Ok(Value::num(v))
            } else {
                Err(Diagnostic::error(format!("`{name}` produced a non-finite value"), span))
            }
        };
        match name {
            "dir" => Ok(Value::pair(Vec2::from_angle_deg(self.known_num(a)?).to_point())),
            "angle" => {
                let p = self.known_point(a)?;
                if p.x == 0.0 && p.y == 0.0 {
                    return Err(Diagnostic::error("angle of the zero vector", span));
                }
                Ok(Value::num(p.to_vec2().angle_deg()))
            }
            "unitvector" => {
                let p = self.known_point(a)?.to_vec2();
                if p.length() == 0.0 {
                    return Err(Diagnostic::error("unitvector of the zero vector", span));
                }
                Ok(Value::pair(p.normalize().to_point()))
            }
            "xpart" | "ypart" => match self.eval(a)? {
                Value::Pair(x, y) => Ok(Value::Num(if name == "xpart" { x } else { y })),
                other => Err(Diagnostic::error(
                    format!("{name} needs a pair, found a {}", other.type_name()),
                    span,
                )),
            },
            "length" | "abs" => match self.eval(a)? {
                Value::Path(c) if name == "length" => Ok(Value::num(c.len() as f64)),
                v @ (Value::Num(_) | Value::Pair(..)) => match self.known_value(v, a)? {
                    Value::Num(x) => Ok(Value::num(x.constant_part().abs())),
                    Value::Pair(x, y) => Ok(Value::num(x.constant_part().hypot(y.constant_part()))),
                    _ => unreachable!(),
                },
                other => Err(Diagnostic::error(
                    format!("{name} is not defined for a {}", other.type_name()),
                    span,
                )),
            },
            "reverse" => Ok(Value::Path(self.path_value(a)?.reversed())),
            "sqrt" => {
                let v = self.known_num(a)?;
                if v < 0.0 {
                    return Err(Diagnostic::error(format!("square root of negative number {v}"), span));
                }
                finite(v.sqrt())
            }
            "sind" => finite(self.known_num(a)?.to_radians().sin()),
            "cosd" => finite(self.known_num(a)?.to_radians().cos()),
            "round" => finite((self.known_num(a)? + 0.5).floor()),
            "floor" => finite(self.known_num(a)?.floor()),
            "ceiling" => finite(self.known_num(a)?.ceil()),
            _ => Err(Diagnostic::error(format!("unknown operator `{name}`"), span)),
        }
    }

    fn of(&mut self, name: &str, a: &Expr, p: &Expr, span: Span) -> EResult<Value> {
        match name {
            "point" | "direction" => {
                let t = self.known_num(a)?;
                let c = self.path_value(p)?;
                let out = if name == "point" {
                    c.point_at_time(t).map(Value::pair)
                } else {
                    c.direction_at_time(t).map(|v| Value::pair(v.to_point()))
                };
                out.ok_or_else(|| Diagnostic::error(format!("{name} of an empty path"), span))
            }
            _ => {
                let Some(m) = self.macros.get(name) else {
                    return Err(Diagnostic::error(format!("undefined name `{name}`"), span));
                };
                let Some((tn, pn)) = m.params.clone() else {
                    return Err(Diagnostic::error(format!("`{name}` takes no arguments"), span));
                };
                let body = m.body.clone();
                let tv = self.eval(a)?;
                let pv = self.eval(p)?;
                let mut scope = HashMap::new();
                scope.insert(tn, tv);
                scope.insert(pn, pv);
                self.scopes.push(scope);
                let r = self.eval(&body);
                self.scopes.pop();
                r
            }
        }
    }

    fn direction(&mut self, e: &Expr) -> EResult<f64> {
        let v = self.known_point(e)?.to_vec2();
        if v.length() == 0.0 {
            return Err(Diagnostic::error("direction is the zero vector", e.span));
        }
        Ok(v.angle_deg())
    }

    fn path(
        &mut self,
        knots: &[KnotExpr],
        joins: &[Join],
        cyclic: bool,
        cycle_dir: Option<&Expr>,
        span: Span,
    ) -> EResult<Value> {
        let mut spec_knots: Vec<Knot> = Vec::new();
        let mut spec_joints: Vec<JointKind> = Vec::new();
        for (i, k) in knots.iter().enumerate() {
            if i > 0 {
                self.add_join(&joins[i - 1], &mut spec_knots, &mut spec_joints)?;
            }
            let dir_in = k.dir_in.as_ref().map(|d| self.direction(d)).transpose()?;
            let dir_out = k.dir_out.as_ref().map(|d| self.direction(d)).transpose()?;
            match self.eval(&k.point)? {
                v @ Value::Pair(..) => {
                    let p = self.point_of(v, &k.point)?;
                    let mut knot = Knot::new(p);
                    if let Some(d) = dir_in {
                        knot = knot.with_dir_in(d);
                    }
                    if let Some(d) = dir_out {
                        knot = knot.with_dir_out(d);
                    }
                    spec_knots.push(knot);
                }
                Value::Path(c) => {
                    if c.is_closed() {
                        return Err(Diagnostic::error("a cyclic path cannot be extended", k.point.span));
                    }
                    let Some(first) = c.node(0) else {
                        return Err(Diagnostic::error("empty path", k.point.span));
                    };
                    let mut knot = Knot::new(first);
                    if let Some(d) = dir_in {
                        knot = knot.with_dir_in(d);
                    }
                    spec_knots.push(knot);
                    for seg in c.segments() {
                        let last = spec_knots.last_mut().expect("pushed above");
                        *last = last.with_controls(seg.c0, seg.c1);
                        spec_joints.push(JointKind::Curve);
                        spec_knots.push(Knot::new(seg.p1));
                    }
                    if let Some(d) = dir_out {
                        let last = spec_knots.last_mut().expect("pushed above");
                        *last = last.with_dir_out(d);
                    }
                }
                other => {
                    return Err(Diagnostic::error(
                        format!("a path is made of pairs and paths, found a {}", other.type_name()),
                        k.point.span,
                    ))
                }
            }
        }
        if cyclic {
            let j = joins.last().expect("a cyclic path has a closing join");
            self.add_join(j, &mut spec_knots, &mut spec_joints)?;
            if let Some(d) = cycle_dir {
                let d = self.direction(d)?;
                spec_knots[0] = spec_knots[0].with_dir_in(d);
            }
        }
        let solved = hobby::solve(&PathSpec::new(spec_knots, spec_joints, cyclic))
            .map_err(|e| Diagnostic::error(e.to_string(), span))?;
        for w in solved.warnings {
            self.warn(w.message, span);
        }
        Ok(Value::Path(solved.contour))
    }

    fn add_join(&mut self, j: &Join, knots: &mut [Knot], joints: &mut Vec<JointKind>) -> EResult<()> {
        let kind = match j {
            Join::Curve | Join::Tense => JointKind::Curve,
            Join::Line => JointKind::Line,
            Join::SmoothLine => JointKind::SmoothLine,
            Join::Controls(a, b) => {
                let c0 = self.known_point(a)?;
                let c1 = self.known_point(b)?;
                let last = knots.last_mut().expect("join follows a knot");
                *last = last.with_controls(c0, c1);
                JointKind::Curve
            }
        };
        joints.push(kind);
        Ok(())
    }
}
