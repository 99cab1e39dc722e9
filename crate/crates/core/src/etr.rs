//! Recognition as an existential-theory-of-the-reals sentence.
//!
//! Variables are `x_i`, `y_i` per vertex and `t_i_j_k` per unordered pair
//! `i < j` and third vertex `k`. A non-edge `{i, j}` needs some `p_k`
//! strictly inside the segment; an edge needs every `p_k` off the line or on
//! it outside the segment. Coincident points are excluded explicitly.
//!
//! The outside-segment branch is `t > 1 or t < 0` for the parametrization
//! `p_k = p_i + t (p_j - p_i)`. [`EtrOptions::paper_compat`] emits `t < -1`
//! instead, which rejects some genuine embeddings, and drops the
//! distinctness clauses.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::PointSet;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    X(usize),
    Y(usize),
    T(usize, usize, usize),
}

impl Var {
    pub fn name(&self) -> String {
        match *self {
            Var::X(i) => format!("x_{i}"),
            Var::Y(i) => format!("y_{i}"),
            Var::T(i, j, k) => format!("t_{i}_{j}_{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    Var(Var),
    Int(i64),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rel {
    Lt,
    Gt,
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Atom(Rel, Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    /// Local witness for one `t` variable.
    Exists(Var, Box<Formula>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EtrOptions {
    pub paper_compat: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtrFormula {
    pub n: usize,
    pub options: EtrOptions,
    pub t_vars: Vec<Var>,
    /// Distinctness clauses (unless `paper_compat`), then one clause per
    /// pair `i < j`.
    pub clauses: Vec<Formula>,
}

fn var(v: Var) -> Term {
    Term::Var(v)
}

fn sub(a: Term, b: Term) -> Term {
    Term::Sub(Box::new(a), Box::new(b))
}

fn mul(a: Term, b: Term) -> Term {
    Term::Mul(Box::new(a), Box::new(b))
}

fn atom(r: Rel, a: Term, b: Term) -> Formula {
    Formula::Atom(r, a, b)
}

fn det(i: usize, j: usize, k: usize) -> Term {
    let d = |c: fn(usize) -> Var, a: usize, b: usize| sub(var(c(a)), var(c(b)));
    sub(
        mul(d(Var::X, j, i), d(Var::Y, k, i)),
        mul(d(Var::Y, j, i), d(Var::X, k, i)),
    )
}

/// `x_k - x_i = t (x_j - x_i)` and the same for `y`.
fn on_line(i: usize, j: usize, k: usize, t: Var) -> [Formula; 2] {
    let eq = |c: fn(usize) -> Var| {
        atom(
            Rel::Eq,
            sub(var(c(k)), var(c(i))),
            mul(var(t), sub(var(c(j)), var(c(i)))),
        )
    };
    [eq(Var::X), eq(Var::Y)]
}

pub fn emit_etr(g: &Graph, options: EtrOptions) -> EtrFormula {
    let n = g.n();
    let mut t_vars = Vec::new();
    let mut clauses = Vec::new();
    for i in (0..n).filter(|_| !options.paper_compat) {
        for j in i + 1..n {
            clauses.push(Formula::Or(vec![
                atom(Rel::Ne, var(Var::X(i)), var(Var::X(j))),
                atom(Rel::Ne, var(Var::Y(i)), var(Var::Y(j))),
            ]));
        }
    }
    let below = if options.paper_compat { -1 } else { 0 };
    for i in 0..n {
        for j in i + 1..n {
            let mut parts = Vec::new();
            for k in (0..n).filter(|&k| k != i && k != j) {
                let t = Var::T(i, j, k);
                t_vars.push(t);
                let [ex, ey] = on_line(i, j, k, t);
                let part = if g.has_edge(i, j) {
                    let outside = Formula::Or(vec![
                        atom(Rel::Gt, var(t), Term::Int(1)),
                        atom(Rel::Lt, var(t), Term::Int(below)),
                    ]);
                    Formula::Or(vec![
                        atom(Rel::Gt, det(i, j, k), Term::Int(0)),
                        atom(Rel::Lt, det(i, j, k), Term::Int(0)),
                        Formula::Exists(t, Box::new(Formula::And(vec![outside, ex, ey]))),
                    ])
                } else {
                    Formula::Exists(
                        t,
                        Box::new(Formula::And(vec![
                            atom(Rel::Lt, Term::Int(0), var(t)),
                            atom(Rel::Lt, var(t), Term::Int(1)),
                            ex,
                            ey,
                        ])),
                    )
                };
                parts.push(part);
            }
            clauses.push(if g.has_edge(i, j) {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            });
        }
    }
    EtrFormula {
        n,
        options,
        t_vars,
        clauses,
    }
}

impl Formula {
    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(..) => 1,
            Formula::And(v) | Formula::Or(v) => v.iter().map(Formula::atom_count).sum(),
            Formula::Exists(_, f) => f.atom_count(),
        }
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(&v.name()),
        Term::Int(c) if *c < 0 => {
            let _ = write!(out, "(- {})", -c);
        }
        Term::Int(c) => {
            let _ = write!(out, "{c}");
        }
        Term::Sub(a, b) | Term::Mul(a, b) => {
            out.push_str(if matches!(t, Term::Sub(..)) { "(- " } else { "(* " });
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(r, a, b) => {
            let op = match r {
                Rel::Lt => "<",
                Rel::Gt => ">",
                Rel::Eq | Rel::Ne => "=",
            };
            if *r == Rel::Ne {
                out.push_str("(not ");
            }
            let _ = write!(out, "({op} ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
            if *r == Rel::Ne {
                out.push(')');
            }
        }
        Formula::And(v) if v.is_empty() => out.push_str("true"),
        Formula::Or(v) if v.is_empty() => out.push_str("false"),
        Formula::And(v) | Formula::Or(v) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for g in v {
                out.push(' ');
                write_formula(out, g);
            }
            out.push(')');
        }
        // Every t occurs under exactly one binder, positively, so binders
        // move to the top-level declarations.
        Formula::Exists(_, g) => write_formula(out, g),
    }
}

impl EtrFormula {
    pub fn t_count(&self) -> usize {
        self.t_vars.len()
    }

    pub fn atom_count(&self) -> usize {
        self.clauses.iter().map(Formula::atom_count).sum()
    }

    /// SMT-LIB 2 text, logic `QF_NRA`.
    pub fn to_smtlib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "; point visibility graph realizability, n={}, t variables={}",
            self.n,
            self.t_count()
        );
        out.push_str("(set-logic QF_NRA)\n");
        for i in 0..self.n {
            let _ = writeln!(out, "(declare-const x_{i} Real)");
            let _ = writeln!(out, "(declare-const y_{i} Real)");
        }
        for t in &self.t_vars {
            let _ = writeln!(out, "(declare-const {} Real)", t.name());
        }
        for c in &self.clauses {
            out.push_str("(assert ");
            write_formula(&mut out, c);
            out.push_str(")\n");
        }
        out.push_str("(check-sat)\n");
        out
    }

    /// Truth of the formula with the coordinates fixed to `points`.
    pub fn eval(&self, points: &PointSet) -> Result<bool> {
        if points.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "{} points for a formula on {} vertices",
                points.len(),
                self.n
            )));
        }
        let env = Env {
            xs: points
                .points()
                .iter()
                .map(|p| BigRational::from_integer(p.x.into()))
                .collect(),
            ys: points
                .points()
                .iter()
                .map(|p| BigRational::from_integer(p.y.into()))
                .collect(),
            t: None,
        };
        Ok(self.clauses.iter().all(|c| env.holds(c)))
    }
}

/// Evaluates the recognition formula of `g` at `points`.
pub fn eval_etr(g: &Graph, points: &PointSet) -> Result<bool> {
    emit_etr(g, EtrOptions::default()).eval(points)
}

struct Env {
    xs: Vec<BigRational>,
    ys: Vec<BigRational>,
    t: Option<(Var, BigRational)>,
}

impl Env {
    fn value(&self, t: &Term) -> BigRational {
        match t {
            Term::Var(Var::X(i)) => self.xs[*i].clone(),
            Term::Var(Var::Y(i)) => self.ys[*i].clone(),
            Term::Var(v) => match &self.t {
                Some((w, val)) if w == v => val.clone(),
                _ => panic!("{} used outside its binder", v.name()),
            },
            Term::Int(c) => BigRational::from_integer(BigInt::from(*c)),
            Term::Sub(a, b) => self.value(a) - self.value(b),
            Term::Mul(a, b) => self.value(a) * self.value(b),
        }
    }

    fn holds(&self, f: &Formula) -> bool {
        match f {
            Formula::Atom(r, a, b) => {
                let (a, b) = (self.value(a), self.value(b));
                match r {
                    Rel::Lt => a < b,
                    Rel::Gt => a > b,
                    Rel::Eq => a == b,
                    Rel::Ne => a != b,
                }
            }
            Formula::And(v) => v.iter().all(|g| self.holds(g)),
            Formula::Or(v) => v.iter().any(|g| self.holds(g)),
            Formula::Exists(t, body) => self.witnesses(*t).into_iter().any(|val| {
                let inner = Env {
                    xs: self.xs.clone(),
                    ys: self.ys.clone(),
                    t: Some((*t, val)),
                };
                inner.holds(body)
            }),
        }
    }

    /// When `p_i != p_j` the parametrization fixes `t`; otherwise `t` is
    /// free and one value from each interval the body can demand suffices.
    fn witnesses(&self, t: Var) -> Vec<BigRational> {
        let Var::T(i, j, k) = t else {
            panic!("binder on a coordinate");
        };
        let (dx, dy) = (&self.xs[j] - &self.xs[i], &self.ys[j] - &self.ys[i]);
        let len2 = &dx * &dx + &dy * &dy;
        if len2.is_zero() {
            let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
            return vec![r(1, 2), r(2, 1), r(-1, 2), r(-2, 1)];
        }
        let dot = (&self.xs[k] - &self.xs[i]) * &dx + (&self.ys[k] - &self.ys[i]) * &dy;
        vec![dot / len2]
    }
}
