// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

/// Source location. `line` and `col` are 1-based; `start`/`end` are byte
/// offsets into the file named by `file` in [`Program::files`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub file: u16,
    pub start: u32,
    pub end: u32,
    pub line: u32,
    pub col: u32,
}

impl Span {
    /// Smallest span covering both; keeps `self`'s line and column.
    pub fn to(self, other: Span) -> Span {
        Span {
            end: other.end.max(self.end),
            ..self
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub stmts: Vec<Stmt>,
    /// Names of the source files spans refer to; index 0 is the main file.
    pub files: Vec<String>,
}

impl Program {
    /// Resets every span, so that programs parsed from differently formatted
    /// sources compare equal.
    pub fn clear_spans(&mut self) {
        for s in &mut self.stmts {
            s.clear_spans();
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclType {
    Numeric,
    Pair,
    Path,
    Pen,
}

impl DeclType {
    pub fn keyword(self) -> &'static str {
        match self {
            DeclType::Numeric => "numeric",
            DeclType::Pair => "pair",
            DeclType::Path => "path",
            DeclType::Pen => "pen",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Declared {
    pub name: String,
    /// Written with `[]`.
    pub array: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    /// `name := expr`
    Assign { target: String, value: Expr },
    /// `a = b [= c ...]`
    Equation(Vec<Expr>),
    /// `input path`
    Include(String),
    /// `vardef name [expr t of p] = body enddef`
    VarDef {
        name: String,
        params: Option<(String, String)>,
        body: Expr,
    },
    Declare { ty: DeclType, names: Vec<Declared> },
    Pickup(Expr),
    Draw { path: Expr, options: Vec<DrawOption> },
    Fill { path: Expr, options: Vec<DrawOption> },
    Unfill { path: Expr, options: Vec<DrawOption> },
    /// `pen_stroke(opts)(path)(result)`
    PenStroke {
        options: Vec<StrokeOption>,
        path: Expr,
        result: String,
    },
    /// `glyph "name" [unicode "XXXX"] [advance expr]`
    Glyph {
        name: String,
        unicode: Option<String>,
        advance: Option<Expr>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum DrawOption {
    WithPen(Expr),
    WithColor(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrokeOption {
    pub kind: StrokeOptionKind,
    pub nodes: Vec<Expr>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StrokeOptionKind {
    Nib(Expr),
    Cut { nib: Expr, relative: bool, angle: Expr },
    Tip(Vec<Expr>),
    IgnoreDirections,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformOp {
    Scaled,
    XScaled,
    YScaled,
    XYScaled,
    Rotated,
    Shifted,
    Slanted,
}

impl TransformOp {
    pub const ALL: [TransformOp; 7] = [
        TransformOp::Scaled,
        TransformOp::XScaled,
        TransformOp::YScaled,
        TransformOp::XYScaled,
        TransformOp::Rotated,
        TransformOp::Shifted,
        TransformOp::Slanted,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            TransformOp::Scaled => "scaled",
            TransformOp::XScaled => "xscaled",
            TransformOp::YScaled => "yscaled",
            TransformOp::XYScaled => "xyscaled",
            TransformOp::Rotated => "rotated",
            TransformOp::Shifted => "shifted",
            TransformOp::Slanted => "slanted",
        }
    }

    pub fn from_keyword(s: &str) -> Option<TransformOp> {
        TransformOp::ALL.into_iter().find(|op| op.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Join {
    /// `..`
    Curve,
    /// `...`
    Tense,
    /// `--`
    Line,
    /// `---`
    SmoothLine,
    /// `..controls a and b..`
    Controls(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct KnotExpr {
    pub dir_in: Option<Expr>,
    pub point: Expr,
    pub dir_out: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Var(String),
    /// `(a, b)`
    Pair(Box<Expr>, Box<Expr>),
    /// `(r, g, b)`, only meaningful as a colour.
    Triple(Box<[Expr; 3]>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Transform(TransformOp, Box<Expr>, Box<Expr>),
    /// `name(a, b, ...)`
    Call(String, Vec<Expr>),
    /// `name primary`, e.g. `dir 30`, `length p`.
    Prefix(String, Box<Expr>),
    /// `name arg of primary`
    Of(String, Box<Expr>, Box<Expr>),
    /// Knots joined by `..`, `--` and friends; `joins.len()` is
    /// `knots.len() - 1`, plus one when `cyclic`.
    Path {
        knots: Vec<KnotExpr>,
        joins: Vec<Join>,
        cyclic: bool,
        /// Direction written before `cycle`.
        cycle_dir: Option<Box<Expr>>,
    },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn clear_spans(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            ExprKind::Number(_) | ExprKind::Var(_) => {}
            ExprKind::Pair(a, b) | ExprKind::Binary(_, a, b) | ExprKind::Transform(_, a, b) | ExprKind::Of(_, a, b) => {
                a.clear_spans();
                b.clear_spans();
            }
            ExprKind::Triple(t) => t.iter_mut().for_each(Expr::clear_spans),
            ExprKind::Neg(a) | ExprKind::Prefix(_, a) => a.clear_spans(),
            ExprKind::Call(_, args) => args.iter_mut().for_each(Expr::clear_spans),
            ExprKind::Path {
                knots,
                joins,
                cycle_dir,
                ..
            } => {
                for k in knots {
                    k.point.clear_spans();
                    k.dir_in.iter_mut().for_each(Expr::clear_spans);
                    k.dir_out.iter_mut().for_each(Expr::clear_spans);
                }
                for j in joins {
                    if let Join::Controls(a, b) = j {
                        a.clear_spans();
                        b.clear_spans();
                    }
                }
                if let Some(d) = cycle_dir {
                    d.clear_spans();
                }
            }
        }
    }
}

impl Stmt {
    pub fn clear_spans(&mut self) {
        self.span = Span::default();
        let opts = |options: &mut Vec<DrawOption>| {
            for o in options {
                match o {
                    DrawOption::WithPen(e) | DrawOption::WithColor(e) => e.clear_spans(),
                }
            }
        };
        match &mut self.kind {
            StmtKind::Assign { value, .. } => value.clear_spans(),
            StmtKind::Equation(es) => es.iter_mut().for_each(Expr::clear_spans),
            StmtKind::Include(_) | StmtKind::Declare { .. } => {}
            StmtKind::VarDef { body, .. } => body.clear_spans(),
            StmtKind::Pickup(e) => e.clear_spans(),
            StmtKind::Draw { path, options } | StmtKind::Fill { path, options } | StmtKind::Unfill { path, options } => {
                path.clear_spans();
                opts(options);
            }
            StmtKind::PenStroke { options, path, .. } => {
                path.clear_spans();
                for o in options {
                    o.span = Span::default();
                    o.nodes.iter_mut().for_each(Expr::clear_spans);
                    match &mut o.kind {
                        StrokeOptionKind::Nib(e) => e.clear_spans(),
                        StrokeOptionKind::Cut { nib, angle, .. } => {
                            nib.clear_spans();
                            angle.clear_spans();
                        }
                        StrokeOptionKind::Tip(args) => args.iter_mut().for_each(Expr::clear_spans),
                        StrokeOptionKind::IgnoreDirections => {}
                    }
                }
            }
            StmtKind::Glyph { advance, .. } => advance.iter_mut().for_each(Expr::clear_spans),
        }
    }
}
