//! Golden corpora of published OPE tables and the expression language
//! they are written in.
//!
//! Expressions are sums of products of scalars and fields:
//!
//! * scalars: integers, `k`, arithmetic `+ - * / ^` and parentheses;
//! * fields: `vac`, named fields, `D(X)`, `D2(X)`, `D3(X)` (literal
//!   derivatives), `E(μ)` for a momentum `μ` written as a linear combination
//!   of `a b c d alpha1 …`, and `:X Y … Z:` for right-to-left nested normal
//!   ordering, where `X^p` inside colons repeats a factor;
//! * a scalar added to a field is read as a multiple of `vac`.

use crate::fock::{FieldExpr, Momentum};
use crate::ope::{Engine, OpeError};
use crate::par;
use crate::report::{Check, Report};
use crate::scalar::{Scalar, K};
use crate::subreg::GeneratorSet;
use crate::walgebra;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: &str = "wsub-golden";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GoldenError {
    #[error("cannot parse `{text}`: {msg}")]
    Parse { text: String, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("corpus schema `{found}` version {version} is not `{SCHEMA}` version {VERSION}")]
    Schema { found: String, version: u32 },
    #[error("corpus is for rank {corpus}, engine has rank {engine}")]
    RankMismatch { corpus: usize, engine: usize },
    #[error("no corpus for rank {0}")]
    NoCorpus(usize),
    #[error("malformed corpus: {0}")]
    Json(String),
    #[error(transparent)]
    Ope(#[from] OpeError),
    #[error(transparent)]
    Walgebra(#[from] walgebra::WalgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Definition {
    pub name: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpeEntry {
    pub a: String,
    pub b: String,
    /// Pole order `j` (coefficient of `(z−w)^{−j−1}`) to expression.
    /// Poles not listed are asserted to vanish.
    pub poles: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identity {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub schema: String,
    pub version: u32,
    pub n: usize,
    pub anchor: String,
    #[serde(default)]
    pub definitions: Vec<Definition>,
    #[serde(default)]
    pub opes: Vec<OpeEntry>,
    #[serde(default)]
    pub identities: Vec<Identity>,
}

impl Corpus {
    pub fn from_json(text: &str) -> Result<Corpus, GoldenError> {
        let c: Corpus = serde_json::from_str(text).map_err(|e| GoldenError::Json(e.to_string()))?;
        if c.schema != SCHEMA || c.version != VERSION {
            return Err(GoldenError::Schema { found: c.schema, version: c.version });
        }
        Ok(c)
    }
}

/// The built-in corpus for rank `n` (1, 2 or 3).
pub fn corpus(n: usize) -> Result<Corpus, GoldenError> {
    let text = match n {
        1 => include_str!("../golden/a1.json"),
        2 => include_str!("../golden/a2.json"),
        3 => include_str!("../golden/a3.json"),
        _ => return Err(GoldenError::NoCorpus(n)),
    };
    Corpus::from_json(text)
}

#[derive(Clone, Debug)]
enum Val {
    S(Scalar),
    F(FieldExpr),
}

impl Val {
    fn field(self) -> FieldExpr {
        match self {
            Val::S(s) => FieldExpr::scalar(s),
            Val::F(f) => f,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| format!("integer `{t}` too large"))?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^():".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

/// Named fields and an engine for normal ordering.
pub struct Context<'a> {
    engine: &'a Engine,
    names: BTreeMap<String, FieldExpr>,
}

impl<'a> Context<'a> {
    /// Free fields only: `a b c d alpha_i`, `T`, `t` and `W0..W{n+1}`.
    pub fn free(engine: &'a Engine) -> Result<Self, GoldenError> {
        let basis = engine.basis();
        let mut names = BTreeMap::new();
        names.insert("a".into(), FieldExpr::from_momentum(&basis.a()));
        names.insert("b".into(), FieldExpr::from_momentum(&basis.b()));
        names.insert("c".into(), FieldExpr::from_momentum(&basis.c()));
        names.insert("d".into(), FieldExpr::from_momentum(&basis.d()));
        for i in 1..=basis.n() {
            names.insert(format!("alpha{i}"), FieldExpr::from_momentum(&basis.alpha(i)));
        }
        names.insert("t".into(), basis.t());
        names.insert("T".into(), walgebra::regular_em_field(basis)?);
        for (s, w) in walgebra::miura_fields(basis)?.into_iter().enumerate() {
            names.insert(format!("W{s}"), w);
        }
        Ok(Context { engine, names })
    }

    /// Free fields plus `L J Gp Gm U3..Un` and `U{n+1}`.
    pub fn new(engine: &'a Engine, gens: &GeneratorSet) -> Result<Self, GoldenError> {
        let mut ctx = Context::free(engine)?;
        for g in &gens.table {
            ctx.names.insert(g.name.clone(), g.field.clone());
        }
        ctx.names.insert(format!("U{}", gens.n + 1), gens.u_top.clone());
        Ok(ctx)
    }

    pub fn get(&self, name: &str) -> Option<&FieldExpr> {
        self.names.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, f: FieldExpr) {
        self.names.insert(name.into(), f);
    }

    pub fn define(&mut self, name: &str, text: &str) -> Result<(), GoldenError> {
        let f = self.eval(text)?;
        self.names.insert(name.to_string(), f);
        Ok(())
    }

    /// Evaluates a field expression.
    pub fn eval(&self, text: &str) -> Result<FieldExpr, GoldenError> {
        Ok(self.eval_val(text)?.field())
    }

    /// Evaluates an expression that must be a pure scalar.
    pub fn eval_scalar(&self, text: &str) -> Result<Scalar, GoldenError> {
        match self.eval_val(text)? {
            Val::S(s) => Ok(s),
            Val::F(_) => Err(GoldenError::Parse { text: text.into(), msg: "expected a scalar".into() }),
        }
    }

    fn eval_val(&self, text: &str) -> Result<Val, GoldenError> {
        let err = |msg: String| GoldenError::Parse { text: text.into(), msg };
        let toks = lex(text).map_err(err)?;
        let mut p = Parser { toks, pos: 0, ctx: self };
        let v = p.expr().map_err(|e| match e {
            PErr::Msg(m) => err(m),
            PErr::Other(e) => e,
        })?;
        if p.pos != p.toks.len() {
            return Err(err(format!("trailing input at token {}", p.pos)));
        }
        Ok(v)
    }
}

enum PErr {
    Msg(String),
    Other(GoldenError),
}

impl From<OpeError> for PErr {
    fn from(e: OpeError) -> Self {
        PErr::Other(e.into())
    }
}

struct Parser<'c, 'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'c Context<'a>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PErr> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(PErr::Msg(format!("expected `{c}` at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Val, PErr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = add(acc, t, false);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(acc, t, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Val, PErr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let f = self.unary()?;
                acc = match (acc, f) {
                    (Val::S(a), Val::S(b)) => Val::S(a.mul(&b)),
                    (Val::S(a), Val::F(f)) | (Val::F(f), Val::S(a)) => Val::F(f.scale(&a)),
                    (Val::F(_), Val::F(_)) => {
                        return Err(PErr::Msg("fields multiply only inside `: :`".into()));
                    }
                };
            } else if self.eat('/') {
                let d = match self.unary()? {
                    Val::S(d) => d,
                    Val::F(_) => return Err(PErr::Msg("division by a field".into())),
                };
                let inv = d.inv().map_err(|_| PErr::Msg("division by zero".into()))?;
                acc = match acc {
                    Val::S(a) => Val::S(a.mul(&inv)),
                    Val::F(f) => Val::F(f.scale(&inv)),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val, PErr> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Val::S(s) => Val::S(s.neg()),
                Val::F(f) => Val::F(f.neg()),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.primary()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return match base {
                Val::S(s) => s.pow(e as i32).map(Val::S).map_err(|e| PErr::Msg(e.to_string())),
                Val::F(_) => Err(PErr::Msg("field powers are written inside `: :`".into())),
            };
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, PErr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(PErr::Msg(format!("expected an integer exponent at token {}", self.pos))),
        }
    }

    fn primary(&mut self) -> Result<Val, PErr> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Val::S(Scalar::int(v)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Op(':')) => {
                self.pos += 1;
                self.normal_order()
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.named(&name)
            }
            other => Err(PErr::Msg(format!("unexpected {other:?} at token {}", self.pos))),
        }
    }

    fn named(&mut self, name: &str) -> Result<Val, PErr> {
        let deriv = match name {
            "D" => Some(1),
            "D2" => Some(2),
            "D3" => Some(3),
            "D4" => Some(4),
            _ => None,
        };
        if let Some(r) = deriv {
            self.expect('(')?;
            let f = self.expr()?.field();
            self.expect(')')?;
            return Ok(Val::F(f.derivative_n(r)));
        }
        match name {
            "k" => Ok(Val::S(Scalar::var(K))),
            "vac" => Ok(Val::F(FieldExpr::vacuum())),
            "E" => {
                self.expect('(')?;
                let f = self.expr()?.field();
                self.expect(')')?;
                Ok(Val::F(FieldExpr::exponential(momentum_of(&f)?)))
            }
            _ => self
                .ctx
                .get(name)
                .cloned()
                .map(Val::F)
                .ok_or_else(|| PErr::Other(GoldenError::UnknownName(name.into()))),
        }
    }

    fn normal_order(&mut self) -> Result<Val, PErr> {
        let mut items = Vec::new();
        while !self.eat(':') {
            if self.peek().is_none() {
                return Err(PErr::Msg("unterminated `:`".into()));
            }
            let f = match self.peek().cloned() {
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let v = self.expr()?;
                    self.expect(')')?;
                    v
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    self.named(&name)?
                }
                other => return Err(PErr::Msg(format!("unexpected {other:?} inside `: :`"))),
            };
            let f = match f {
                Val::F(f) => f,
                Val::S(_) => return Err(PErr::Msg("scalar inside `: :`".into())),
            };
            let reps = if self.eat('^') { self.exponent()? } else { 1 };
            if reps < 1 {
                return Err(PErr::Msg("repetition count must be positive".into()));
            }
            for _ in 0..reps {
                items.push(f.clone());
            }
        }
        if items.is_empty() {
            return Err(PErr::Msg("empty `: :`".into()));
        }
        Ok(Val::F(self.ctx.engine.normally_ordered_all(&items)?))
    }
}

fn add(a: Val, b: Val, minus: bool) -> Val {
    match (a, b) {
        (Val::S(x), Val::S(y)) => Val::S(if minus { x.sub(&y) } else { x.add(&y) }),
        (a, b) => {
            let (x, y) = (a.field(), b.field());
            Val::F(if minus { x.sub(&y) } else { x.add(&y) })
        }
    }
}

/// A field linear in weight-one bosons, read back as a momentum.
fn momentum_of(f: &FieldExpr) -> Result<Momentum, PErr> {
    let mut pairs = Vec::new();
    for (m, c) in f.terms() {
        match (m.osc.as_slice(), m.mom.is_zero()) {
            ([(h, 1)], true) => pairs.push((*h, c.clone())),
            _ => return Err(PErr::Msg("`E(...)` takes a linear combination of free bosons".into())),
        }
    }
    Ok(Momentum::from_pairs(pairs))
}

/// Checks every OPE and identity of `corpus` against the engine.
pub fn verify(engine: &Engine, gens: &GeneratorSet, corpus: &Corpus) -> Result<Report, GoldenError> {
    if corpus.n != engine.basis().n() {
        return Err(GoldenError::RankMismatch { corpus: corpus.n, engine: engine.basis().n() });
    }
    let mut ctx = Context::new(engine, gens)?;
    for d in &corpus.definitions {
        ctx.define(&d.name, &d.expr)?;
    }
    let basis = engine.basis();
    let anchor = &corpus.anchor;
    let ope_checks = par::map(engine.exec(), &corpus.opes, |e| -> Result<Vec<Check>, GoldenError> {
        let a = ctx.eval(&e.a)?;
        let b = ctx.eval(&e.b)?;
        let sp = engine.singular_part(&a, &b)?;
        let top = e.poles.keys().next_back().map_or(0, |j| j + 1).max(sp.poles.len());
        let mut out = Vec::with_capacity(top);
        for j in 0..top {
            let want = match e.poles.get(&j) {
                Some(t) => ctx.eval(t)?,
                None => FieldExpr::zero(),
            };
            let got = sp.pole(j);
            let name = format!("A{} {} x {} pole {j}", corpus.n, e.a, e.b);
            out.push(Check::compare(name, anchor.as_str(), got == want, || {
                (basis.to_text(&got), basis.to_text(&want), basis.to_text(&got.sub(&want)))
            }));
        }
        Ok(out)
    });
    let mut checks = Vec::new();
    for r in ope_checks {
        checks.extend(r?);
    }
    for id in &corpus.identities {
        let l = ctx.eval(&id.lhs)?;
        let r = ctx.eval(&id.rhs)?;
        let name = format!("A{} identity {}", corpus.n, id.name);
        checks.push(Check::compare(name, anchor.as_str(), l == r, || {
            (basis.to_text(&l), basis.to_text(&r), basis.to_text(&l.sub(&r)))
        }));
    }
    Ok(Report::new(checks))
}
