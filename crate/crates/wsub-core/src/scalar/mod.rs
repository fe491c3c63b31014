//! Exact rational functions over the rationals in a declared set of symbols.
//!
//! A [`Scalar`] is a gcd-reduced quotient of [`Poly`]s whose denominator is
//! monic under the graded-lexicographic order, which makes equality syntactic.

mod parse;
pub mod poly;

pub use poly::{Mono, Poly, Rat};

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at evaluation point (denominator {0} vanishes)")]
    Pole(String),
    #[error("symbol `{0}` has no binding")]
    Unbound(String),
    #[error("symbol `{0}` is not declared")]
    Undeclared(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Symbol positions used by [`Symbols::standard`].
pub const K: usize = 0;
pub const LAMBDA: usize = 1;
pub const X: usize = 2;

/// Position of `gamma_j` (j ≥ 2) in the standard symbol set.
pub fn gamma_index(j: usize) -> usize {
    assert!(j >= 2, "gamma_0 and gamma_1 are fixed");
    3 + (j - 2)
}

fn standard_name(i: usize) -> String {
    match i {
        K => "k".into(),
        LAMBDA => "lambda".into(),
        X => "x".into(),
        _ => format!("gamma{}", i - 1),
    }
}

/// An ordered, declared set of symbol names. Order fixes the monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
}

impl Symbols {
    pub fn new<I, S>(names: I) -> Result<Self, ScalarError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(ScalarError::Parse(format!("duplicate symbol `{a}`")));
            }
        }
        Ok(Symbols { names })
    }

    /// `k, lambda, x, gamma2, …, gamma{n+1}`.
    pub fn standard(n: usize) -> Self {
        Symbols { names: (0..3 + n).map(standard_name).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Result<usize, ScalarError> {
        self.names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ScalarError::Undeclared(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Scalar, ScalarError> {
        Ok(Scalar::var(self.index(name)?))
    }

    pub fn parse(&self, text: &str) -> Result<Scalar, ScalarError> {
        parse::parse(text, self)
    }

    pub fn format(&self, s: &Scalar) -> String {
        s.to_text(&|i| self.names.get(i).cloned().unwrap_or_else(|| standard_name(i)))
    }

    pub fn check(&self, s: &Scalar) -> Result<(), ScalarError> {
        let m = s.num.mask() | s.den.mask();
        let bits = 64 - m.leading_zeros() as usize;
        if bits > self.names.len() {
            return Err(ScalarError::Undeclared(standard_name(bits - 1)));
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(v: i64) -> Self {
        Scalar::rat(Rat::from_integer(BigInt::from(v)))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Scalar::rat(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rat(r: Rat) -> Self {
        Scalar { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn var(i: usize) -> Self {
        Scalar { num: Poly::var(i), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    /// `num / den` in canonical form.
    pub fn ratio(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            return Scalar { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (den, lc) = den.monic();
        Scalar { num: num.scale(&lc.recip()), den }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value if this scalar involves no symbols.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rat().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        use num::ToPrimitive;
        self.as_integer().and_then(|i| i.to_i64())
    }

    /// Bitmask of the symbols that occur.
    pub fn symbol_mask(&self) -> u64 {
        self.num.mask() | self.den.mask()
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return Scalar { num, den: Poly::one() };
            }
            return Self::reduce(num, self.den.clone());
        }
        if self.den.is_one() {
            return Scalar { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return Scalar { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = poly::gcd(&self.den, &o.den);
        let a1 = self.den.div_exact(&g).expect("gcd divides");
        let b1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&b1).add(&o.num.mul(&a1));
        let den = self.den.mul(&b1);
        if g.is_one() {
            let (den, lc) = den.monic();
            return Scalar { num: num.scale(&lc.recip()), den };
        }
        Self::reduce(num, den)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar { num: self.num.mul(&o.num), den: Poly::one() };
        }
        if let Some(c) = self.as_rat() {
            return Scalar { num: o.num.scale(&c), den: o.den.clone() };
        }
        if let Some(c) = o.as_rat() {
            return Scalar { num: self.num.scale(&c), den: self.den.clone() };
        }
        let g1 = poly::gcd(&self.num, &o.den);
        let g2 = poly::gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        let (den, lc) = d1.mul(&d2).monic();
        Scalar { num: n1.mul(&n2).scale(&lc.recip()), den }
    }

    pub fn mul_rat(&self, r: &Rat) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(r), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (num, lc) = self.num.monic();
        Ok(Scalar { num: self.den.scale(&lc.recip()), den: num })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(c) = o.as_rat() {
            return Ok(self.mul_rat(&c.recip()));
        }
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut out = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Substitutes a rational value for one symbol.
    pub fn subst(&self, v: usize, value: &Rat) -> Result<Scalar, ScalarError> {
        let den = self.den.subst(v, value);
        if den.is_zero() {
            return Err(ScalarError::Pole(self.to_text(&standard_name)));
        }
        Ok(Self::reduce(self.num.subst(v, value), den))
    }

    /// Substitutes several symbols at once.
    pub fn subst_all(&self, bindings: &[(usize, Rat)]) -> Result<Scalar, ScalarError> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (v, r) in bindings {
            num = num.subst(*v, r);
            den = den.subst(*v, r);
        }
        if den.is_zero() {
            return Err(ScalarError::Pole(self.to_text(&standard_name)));
        }
        Ok(Self::reduce(num, den))
    }

    /// Exact value at a point; every occurring symbol must be bound.
    pub fn eval(&self, bindings: &[(usize, Rat)]) -> Result<Rat, ScalarError> {
        let look = |i: usize| bindings.iter().find(|(j, _)| *j == i).map(|(_, r)| r.clone());
        let name = |i: usize| ScalarError::Unbound(standard_name(i));
        let d = self.den.eval(&look).map_err(name)?;
        if d.is_zero() {
            return Err(ScalarError::Pole(Scalar::from_poly(self.den.clone()).to_text(&standard_name)));
        }
        let n = self.num.eval(&look).map_err(name)?;
        Ok(n / d)
    }

    /// Evaluation against named bindings in a symbol set.
    pub fn eval_named(&self, syms: &Symbols, bindings: &[(&str, Rat)]) -> Result<Rat, ScalarError> {
        let mut b = Vec::new();
        for (name, r) in bindings {
            b.push((syms.index(name)?, r.clone()));
        }
        self.eval(&b).map_err(|e| match e {
            ScalarError::Unbound(s) => {
                let i = (0..64).find(|&i| standard_name(i) == s).unwrap_or(0);
                ScalarError::Unbound(syms.names.get(i).cloned().unwrap_or(s))
            }
            e => e,
        })
    }

    /// Coefficients in powers of symbol `v`, when the denominator is free of `v`.
    pub fn coeffs_in(&self, v: usize) -> Option<Vec<Scalar>> {
        if self.den.deg_in(v) > 0 {
            return None;
        }
        Some(
            self.num
                .coeffs_in(v)
                .into_iter()
                .map(|p| Self::reduce(p, self.den.clone()))
                .collect(),
        )
    }

    pub fn degree_in(&self, v: usize) -> Option<u16> {
        if self.den.deg_in(v) > 0 {
            return None;
        }
        Some(self.num.deg_in(v))
    }

    /// Numerator and denominator scaled to coprime integer coefficients.
    pub fn integer_parts(&self) -> (Poly, Poly) {
        let l = num::Integer::lcm(&self.num.denominator_lcm(), &self.den.denominator_lcm());
        let l = Rat::from_integer(l);
        let a = self.num.scale(&l);
        let b = self.den.scale(&l);
        let g = num::Integer::gcd(&a.integer_content(), &b.integer_content());
        let g = Rat::new(BigInt::one(), g);
        (a.scale(&g), b.scale(&g))
    }

    /// Plain-text canonical form with integer coefficients, e.g. `(2*k+3)/3`.
    pub fn to_text(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.num.is_zero() {
            return "0".into();
        }
        let (a, b) = self.integer_parts();
        let top = format_poly(&a, name, "*");
        if b.is_one() {
            return top;
        }
        let top = if a.terms().len() > 1 { format!("({top})") } else { top };
        let bottom = format_poly(&b, name, "*");
        let t = &b.terms()[0];
        if b.terms().len() == 1 && (t.0.is_one() || (t.1.is_one() && t.0.degree() == 1)) {
            format!("{top}/{bottom}")
        } else {
            format!("{top}/({bottom})")
        }
    }

    /// LaTeX rendering with symbols `k, \lambda, x, \gamma_j`.
    pub fn to_latex(&self) -> String {
        let name = |i: usize| match i {
            K => "k".to_string(),
            LAMBDA => "\\lambda ".to_string(),
            X => "x".to_string(),
            _ => format!("\\gamma_{{{}}}", i - 1),
        };
        if self.is_zero() {
            return "0".into();
        }
        let (a, b) = self.integer_parts();
        let top = format_poly(&a, &name, "");
        if b.is_one() {
            return top;
        }
        let bottom = format_poly(&b, &name, "");
        match top.strip_prefix('-') {
            Some(rest) if a.terms().len() == 1 => format!("-\\frac{{{rest}}}{{{bottom}}}"),
            _ => format!("\\frac{{{top}}}{{{bottom}}}"),
        }
    }
}

fn format_poly(p: &Poly, name: &dyn Fn(usize) -> String, sep: &str) -> String {
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mut parts: Vec<String> = Vec::new();
        if !a.is_one() || m.is_one() {
            parts.push(a.to_string());
        }
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(name(i)),
                _ => parts.push(format!("{}^{}", name(i), e)),
            }
        }
        out.push_str(&parts.join(sep));
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&standard_name))
    }
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;
    /// Parses against an unbounded standard symbol set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Symbols::standard(61).parse(s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$f(o)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
        impl std::ops::$tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$f(o)
            }
        }
        impl std::ops::$tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$f(&o)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = Scalar::add(self, o);
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::rat(r)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    exps: Vec<u16>,
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    num: Vec<TermJson>,
    den: Vec<TermJson>,
}

fn poly_to_json(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(m, c)| TermJson { coeff: c.to_string(), exps: m.exps().to_vec() })
        .collect()
}

fn poly_from_json(ts: &[TermJson]) -> Result<Poly, String> {
    let mut terms = Vec::new();
    for t in ts {
        let c: Rat = t.coeff.parse().map_err(|e| format!("bad coefficient `{}`: {e}", t.coeff))?;
        terms.push((Mono::from_exps(&t.exps), c));
    }
    Ok(Poly::from_terms(terms))
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ScalarJson { num: poly_to_json(&self.num), den: poly_to_json(&self.den) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ScalarJson::deserialize(d)?;
        let num = poly_from_json(&j.num).map_err(serde::de::Error::custom)?;
        let den = poly_from_json(&j.den).map_err(serde::de::Error::custom)?;
        Scalar::ratio(num, den).map_err(serde::de::Error::custom)
    }
}

/// Binomial coefficient as an exact rational, `binom(n, k)` for integer `n`, `k ≥ 0`.
pub fn binomial(n: i64, k: i64) -> Rat {
    if k < 0 {
        return Rat::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rat::new(num, den)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}
