// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use std::fmt::{self, Write};

use super::ast::*;

const PATH: u8 = 0;
const TERTIARY: u8 = 1;
const SECONDARY: u8 = 2;
const PRIMARY: u8 = 3;

fn level(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Path { .. } => PATH,
        ExprKind::Binary(BinOp::Add | BinOp::Sub, ..) => TERTIARY,
        ExprKind::Binary(..) | ExprKind::Transform(..) => SECONDARY,
        _ => PRIMARY,
    }
}

/// Writes `e`, parenthesised unless it binds at least as tightly as `min`.
fn expr_at(out: &mut String, e: &Expr, min: u8) {
    if level(e) < min {
        out.push('(');
        expr(out, e);
        out.push(')');
    } else {
        expr(out, e);
    }
}

fn expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Number(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Pair(a, b) => {
            out.push('(');
            expr(out, a);
            out.push_str(", ");
            expr(out, b);
            out.push(')');
        }
        ExprKind::Triple(t) => {
            out.push('(');
            for (i, c) in t.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr(out, c);
            }
            out.push(')');
        }
        ExprKind::Neg(a) => {
            out.push('-');
            if matches!(a.kind, ExprKind::Neg(_)) {
                out.push('(');
                expr(out, a);
                out.push(')');
            } else {
                expr_at(out, a, PRIMARY);
            }
        }
        ExprKind::Binary(op, a, b) => {
            let lvl = level(e);
            expr_at(out, a, lvl);
            let _ = write!(out, " {} ", op.symbol());
            expr_at(out, b, lvl + 1);
        }
        ExprKind::Transform(op, a, b) => {
            expr_at(out, a, SECONDARY);
            let _ = write!(out, " {} ", op.keyword());
            expr_at(out, b, PRIMARY);
        }
        ExprKind::Call(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr(out, a);
            }
            out.push(')');
        }
        ExprKind::Prefix(name, a) => {
            out.push_str(name);
            out.push(' ');
            expr_at(out, a, PRIMARY);
        }
        ExprKind::Of(name, a, p) => {
            out.push_str(name);
            out.push(' ');
            expr_at(out, a, TERTIARY);
            out.push_str(" of ");
            expr_at(out, p, PRIMARY);
        }
        ExprKind::Path {
            knots,
            joins,
            cyclic,
            cycle_dir,
        } => {
            for (i, k) in knots.iter().enumerate() {
                if i > 0 {
                    join(out, &joins[i - 1]);
                }
                if let Some(d) = &k.dir_in {
                    direction(out, d);
                }
                expr_at(out, &k.point, TERTIARY);
                if let Some(d) = &k.dir_out {
                    direction(out, d);
                }
            }
            if *cyclic {
                if let Some(j) = joins.last() {
                    join(out, j);
                }
                if let Some(d) = cycle_dir {
                    direction(out, d);
                }
                out.push_str("cycle");
            }
        }
    }
}

fn direction(out: &mut String, d: &Expr) {
    out.push('{');
    expr(out, d);
    out.push('}');
}

fn join(out: &mut String, j: &Join) {
    match j {
        Join::Curve => out.push_str(" .. "),
        Join::Tense => out.push_str(" ... "),
        Join::Line => out.push_str(" -- "),
        Join::SmoothLine => out.push_str(" --- "),
        Join::Controls(a, b) => {
            out.push_str(" .. controls ");
            expr_at(out, a, TERTIARY);
            out.push_str(" and ");
            expr_at(out, b, TERTIARY);
            out.push_str(" .. ");
        }
    }
}

fn draw_options(out: &mut String, options: &[DrawOption]) {
    for o in options {
        match o {
            DrawOption::WithPen(e) => {
                out.push_str(" withpen ");
                expr(out, e);
            }
            DrawOption::WithColor(e) => {
                out.push_str(" withcolor ");
                expr(out, e);
            }
        }
    }
}

fn list(out: &mut String, items: &[Expr]) {
    out.push('(');
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        expr(out, e);
    }
    out.push(')');
}

fn stmt(out: &mut String, s: &Stmt) {
    match &s.kind {
        StmtKind::Assign { target, value } => {
            let _ = write!(out, "{target} := ");
            expr(out, value);
        }
        StmtKind::Equation(es) => {
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    out.push_str(" = ");
                }
                expr(out, e);
            }
        }
        StmtKind::Include(path) => {
            if path.contains([';', '%', '\n', '"']) || path.trim() != path {
                let _ = write!(out, "input \"{path}\"");
            } else {
                let _ = write!(out, "input {path}");
            }
        }
        StmtKind::VarDef { name, params, body } => {
            let _ = write!(out, "vardef {name}");
            if let Some((t, p)) = params {
                let _ = write!(out, " expr {t} of {p}");
            }
            out.push_str(" = ");
            expr(out, body);
            out.push_str(" enddef");
        }
        StmtKind::Declare { ty, names } => {
            out.push_str(ty.keyword());
            for (i, d) in names.iter().enumerate() {
                out.push_str(if i == 0 { " " } else { ", " });
                out.push_str(&d.name);
                if d.array {
                    out.push_str("[]");
                }
            }
        }
        StmtKind::Pickup(e) => {
            out.push_str("pickup ");
            expr(out, e);
        }
        StmtKind::Draw { path, options } => {
            out.push_str("draw ");
            expr(out, path);
            draw_options(out, options);
        }
        StmtKind::Fill { path, options } => {
            out.push_str("fill ");
            expr(out, path);
            draw_options(out, options);
        }
        StmtKind::Unfill { path, options } => {
            out.push_str("unfill ");
            expr(out, path);
            draw_options(out, options);
        }
        StmtKind::PenStroke { options, path, result } => {
            out.push_str("pen_stroke(");
            for (i, o) in options.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                match &o.kind {
                    StrokeOptionKind::Nib(e) => {
                        out.push_str("nib(");
                        expr(out, e);
                        out.push(')');
                    }
                    StrokeOptionKind::Cut { nib, relative, angle } => {
                        out.push_str("cut(");
                        expr(out, nib);
                        out.push_str(if *relative { ", rel " } else { ", " });
                        expr(out, angle);
                        out.push(')');
                    }
                    StrokeOptionKind::Tip(args) => {
                        out.push_str("tip");
                        list(out, args);
                    }
                    StrokeOptionKind::IgnoreDirections => out.push_str("ignore_directions"),
                }
                list(out, &o.nodes);
            }
            out.push_str(")(");
            expr(out, path);
            let _ = write!(out, ")({result})");
        }
        StmtKind::Glyph { name, unicode, advance } => {
            let _ = write!(out, "glyph \"{name}\"");
            if let Some(u) = unicode {
                let _ = write!(out, " unicode \"{u}\"");
            }
            if let Some(a) = advance {
                out.push_str(" advance ");
                expr(out, a);
            }
        }
    }
    out.push_str(";\n");
}

/// Canonical source text; parsing it yields the same program up to spans.
pub fn pretty(program: &Program) -> String {
    let mut out = String::new();
    for s in &program.stmts {
        stmt(&mut out, s);
    }
    out
}

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr(&mut out, e);
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_expr(self))
    }
}
