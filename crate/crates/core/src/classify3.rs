//! Classification of three-dimensional algebras by graph type.
//!
//! The table in `data/derivation_templates.txt` lists every non-degenerate,
//! connected graph pattern with a non-trivial twin class, up to relabeling,
//! together with the general derivation matrix of algebras realizing it.
//! `classify` matches an algebra's graph against the table and reports the
//! vertex assignment; `template_check` then verifies that a solved
//! derivation space actually consists of instances of the printed matrix.

use crate::algebra::EvolutionAlgebra;
use crate::graph::{associated_graph, graph_properties};
use crate::rational::{rat, Rational};
use crate::solver::DerivationSpace;
use crate::twin::twin_partition;
use num::Zero;
use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

/// Maps the template vertices i, j, k to actual (zero-based) vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Assignment {
    fn vertex(&self, template_vertex: usize) -> usize {
        [self.i, self.j, self.k][template_vertex]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeMatch {
    Type { id: u8, assignment: Assignment },
    TwinFree,
    NotApplicable { reason: String },
}

/// All six bijections of the template vertices onto actual vertices, in
/// lexicographic order; the first matching (type, bijection) pair wins.
const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn classify(a: &EvolutionAlgebra) -> TypeMatch {
    if a.dimension() != 3 {
        return TypeMatch::NotApplicable { reason: "n must be 3".into() };
    }
    let g = associated_graph(a);
    let props = graph_properties(&g);
    if !props.non_degenerate {
        return TypeMatch::NotApplicable { reason: "degenerate".into() };
    }
    if !props.connected {
        return TypeMatch::NotApplicable { reason: "disconnected".into() };
    }
    if twin_partition(&g).is_twin_free() {
        return TypeMatch::TwinFree;
    }
    let actual: BTreeSet<(usize, usize)> = (0..3)
        .flat_map(|x| (0..3).map(move |y| (x, y)))
        .filter(|&(x, y)| g.has_arrow(x, y))
        .collect();
    for t in templates() {
        for perm in PERMS {
            let mapped: BTreeSet<(usize, usize)> =
                t.arrows.iter().map(|&(x, y)| (perm[x], perm[y])).collect();
            if mapped == actual {
                return TypeMatch::Type {
                    id: t.id,
                    assignment: Assignment { i: perm[0], j: perm[1], k: perm[2] },
                };
            }
        }
    }
    TypeMatch::NotApplicable { reason: "pattern outside table".into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateViolation {
    pub row: usize,
    pub col: usize,
    pub expected: Rational,
    pub found: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateCheck {
    pub type_id: u8,
    pub verdict: bool,
    pub violation: Option<TemplateViolation>,
}

/// Checks that every basis element of the space is an instance of the
/// type's template: free parameters are read off the element at their own
/// cells, then all nine cells must evaluate to the element exactly.
pub fn template_check(
    a: &EvolutionAlgebra,
    type_id: u8,
    assignment: &Assignment,
    space: &DerivationSpace,
) -> TemplateCheck {
    let template = templates()
        .iter()
        .find(|t| t.id == type_id)
        .unwrap_or_else(|| panic!("no template with id {type_id}"));
    for b in &space.basis {
        let mut params: HashMap<(usize, usize), Rational> = HashMap::new();
        for (cell, expr) in template.cells.iter().enumerate() {
            let (x, y) = (cell / 3, cell % 3);
            if matches!(expr, Expr::Param(px, py) if (*px, *py) == (x, y)) {
                params.insert(
                    (x, y),
                    b.entry(assignment.vertex(x), assignment.vertex(y)).clone(),
                );
            }
        }
        for (cell, expr) in template.cells.iter().enumerate() {
            let (x, y) = (cell / 3, cell % 3);
            let (row, col) = (assignment.vertex(x), assignment.vertex(y));
            let Some(expected) = expr.eval(a, assignment, &params) else {
                return TemplateCheck { type_id, verdict: false, violation: None };
            };
            let found = b.entry(row, col);
            if &expected != found {
                return TemplateCheck {
                    type_id,
                    verdict: false,
                    violation: Some(TemplateViolation {
                        row,
                        col,
                        expected,
                        found: found.clone(),
                    }),
                };
            }
        }
    }
    TemplateCheck { type_id, verdict: true, violation: None }
}

/// Number of free parameters in a type's template. The solver's exact
/// dimension can be strictly smaller for particular weights, so the two are
/// reported side by side rather than asserted equal.
pub fn template_parameter_count(type_id: u8) -> usize {
    let template = templates()
        .iter()
        .find(|t| t.id == type_id)
        .unwrap_or_else(|| panic!("no template with id {type_id}"));
    template
        .cells
        .iter()
        .enumerate()
        .filter(|(cell, expr)| {
            matches!(expr, Expr::Param(x, y) if (*x, *y) == (cell / 3, cell % 3))
        })
        .count()
}

// --- template table ----------------------------------------------------------

#[derive(Debug, Clone)]
struct Template {
    id: u8,
    arrows: Vec<(usize, usize)>,
    twins: Vec<usize>,
    targets: Vec<usize>,
    cells: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
enum Expr {
    Int(i64),
    Weight(usize, usize),
    Param(usize, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Exact evaluation; `None` on division by zero or an unbound parameter.
    fn eval(
        &self,
        a: &EvolutionAlgebra,
        assignment: &Assignment,
        params: &HashMap<(usize, usize), Rational>,
    ) -> Option<Rational> {
        match self {
            Expr::Int(v) => Some(rat(*v, 1)),
            Expr::Weight(x, y) => {
                Some(a.entry(assignment.vertex(*x), assignment.vertex(*y)).clone())
            }
            Expr::Param(x, y) => params.get(&(*x, *y)).cloned(),
            Expr::Neg(e) => e.eval(a, assignment, params).map(|v| -v),
            Expr::Add(l, r) => {
                Some(l.eval(a, assignment, params)? + r.eval(a, assignment, params)?)
            }
            Expr::Sub(l, r) => {
                Some(l.eval(a, assignment, params)? - r.eval(a, assignment, params)?)
            }
            Expr::Mul(l, r) => {
                Some(l.eval(a, assignment, params)? * r.eval(a, assignment, params)?)
            }
            Expr::Div(l, r) => {
                let denom = r.eval(a, assignment, params)?;
                if denom.is_zero() {
                    return None;
                }
                Some(l.eval(a, assignment, params)? / denom)
            }
        }
    }
}

static TEMPLATES: OnceLock<Vec<Template>> = OnceLock::new();

fn templates() -> &'static [Template] {
    TEMPLATES.get_or_init(|| {
        parse_table(include_str!("../data/derivation_templates.txt"))
            .unwrap_or_else(|e| panic!("embedded template table is malformed: {e}"))
    })
}

fn vertex_letter(token: &str) -> Result<usize, String> {
    match token {
        "i" => Ok(0),
        "j" => Ok(1),
        "k" => Ok(2),
        other => Err(format!("expected template vertex i, j, or k, found {other:?}")),
    }
}

fn parse_table(text: &str) -> Result<Vec<Template>, String> {
    let mut out: Vec<Template> = Vec::new();
    let mut current: Option<Template> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| format!("line {}: {msg}", lineno + 1);
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "type" => {
                if let Some(t) = current.take() {
                    finish_record(&mut out, t).map_err(err)?;
                }
                let id: u8 = words
                    .next()
                    .ok_or_else(|| err("missing type id".into()))?
                    .parse()
                    .map_err(|e| err(format!("bad type id: {e}")))?;
                current = Some(Template {
                    id,
                    arrows: Vec::new(),
                    twins: Vec::new(),
                    targets: Vec::new(),
                    cells: Vec::new(),
                });
            }
            "arrows" => {
                let t = current.as_mut().ok_or_else(|| err("arrows before type".into()))?;
                for w in words {
                    let (x, y) = w
                        .split_once('>')
                        .ok_or_else(|| err(format!("bad arrow token {w:?}")))?;
                    t.arrows.push((vertex_letter(x).map_err(err)?, vertex_letter(y).map_err(err)?));
                }
            }
            "twins" => {
                let t = current.as_mut().ok_or_else(|| err("twins before type".into()))?;
                for w in words {
                    t.twins.push(vertex_letter(w).map_err(err)?);
                }
            }
            "targets" => {
                let t = current.as_mut().ok_or_else(|| err("targets before type".into()))?;
                for w in words {
                    t.targets.push(vertex_letter(w).map_err(err)?);
                }
            }
            "d" => {
                let t = current.as_mut().ok_or_else(|| err("cell before type".into()))?;
                let x = vertex_letter(words.next().ok_or_else(|| err("missing row".into()))?)
                    .map_err(err)?;
                let y = vertex_letter(words.next().ok_or_else(|| err("missing col".into()))?)
                    .map_err(err)?;
                if words.next() != Some("=") {
                    return Err(err("expected '=' after cell".into()));
                }
                if t.cells.len() != x * 3 + y {
                    return Err(err(format!(
                        "cell d {x} {y} out of row-major order"
                    )));
                }
                let rhs = line.split_once('=').unwrap().1;
                t.cells.push(parse_expr_text(rhs).map_err(err)?);
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    if let Some(t) = current.take() {
        finish_record(&mut out, t)?;
    }
    Ok(out)
}

fn finish_record(out: &mut Vec<Template>, t: Template) -> Result<(), String> {
    if t.cells.len() != 9 {
        return Err(format!("type {}: expected 9 cells, found {}", t.id, t.cells.len()));
    }
    if t.arrows.is_empty() || t.twins.is_empty() || t.targets.is_empty() {
        return Err(format!("type {}: incomplete record", t.id));
    }
    if out.last().map_or(1, |p| p.id + 1) != t.id {
        return Err(format!("type {}: ids must be consecutive from 1", t.id));
    }
    out.push(t);
    Ok(())
}

// --- expression parsing --------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Weight(usize, usize),
    Param(usize, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            ' ' | '\t' => pos += 1,
            '+' => { tokens.push(Token::Plus); pos += 1 }
            '-' => { tokens.push(Token::Minus); pos += 1 }
            '*' => { tokens.push(Token::Star); pos += 1 }
            '/' => { tokens.push(Token::Slash); pos += 1 }
            '(' => { tokens.push(Token::Open); pos += 1 }
            ')' => { tokens.push(Token::Close); pos += 1 }
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let lit: String = chars[start..pos].iter().collect();
                tokens.push(Token::Int(lit.parse().map_err(|e| format!("bad integer: {e}"))?));
            }
            'w' | 'd' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                let ident: String = chars[start..pos].iter().collect();
                let rest = ident
                    .strip_prefix("w_")
                    .or_else(|| ident.strip_prefix("d_"))
                    .ok_or_else(|| format!("unknown symbol {ident:?}"))?;
                let mut letters = rest.chars();
                let (Some(x), Some(y), None) = (letters.next(), letters.next(), letters.next())
                else {
                    return Err(format!("symbol {ident:?} needs two vertex letters"));
                };
                let x = vertex_letter(&x.to_string())?;
                let y = vertex_letter(&y.to_string())?;
                tokens.push(if ident.starts_with('w') {
                    Token::Weight(x, y)
                } else {
                    Token::Param(x, y)
                });
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Token::Plus => Expr::Add as fn(_, _) -> _,
                Token::Minus => Expr::Sub as fn(_, _) -> _,
                _ => break,
            };
            self.advance();
            let rhs = self.term()?;
            acc = op(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut acc = self.factor()?;
        while let Some(op) = self.peek() {
            let op = match op {
                Token::Star => Expr::Mul as fn(_, _) -> _,
                Token::Slash => Expr::Div as fn(_, _) -> _,
                _ => break,
            };
            self.advance();
            let rhs = self.factor()?;
            acc = op(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, String> {
        match self.advance() {
            Some(Token::Int(v)) => Ok(Expr::Int(v)),
            Some(Token::Weight(x, y)) => Ok(Expr::Weight(x, y)),
            Some(Token::Param(x, y)) => Ok(Expr::Param(x, y)),
            Some(Token::Minus) => Ok(Expr::Neg(Box::new(self.factor()?))),
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.advance() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err("unbalanced parenthesis".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

fn parse_expr_text(text: &str) -> Result<Expr, String> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens: &tokens, pos: 0 };
    let expr = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(format!("trailing tokens in expression {text:?}"));
    }
    Ok(expr)
}
