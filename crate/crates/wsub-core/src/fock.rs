//! Free-boson state space for `H_α ⊗ Π`.
//!
//! A [`Monomial`] is a product of commuting creation modes `h_{-m}` (`m ≥ 1`)
//! applied to a momentum state `|μ⟩`. Under the state–field correspondence
//! `h_{-m}` is the field `∂^{m-1}h/(m-1)!`, so nested right-to-left normal
//! ordering of single bosons is just multiplication of creation modes; the
//! same representation serves for fields and for module states.

use crate::scalar::{factorial, Rat, Scalar, K};
use serde_json::{json, Value};
use smallvec::SmallVec;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Index of a Heisenberg basis symbol: `0..n` are `α_1..α_n`, then `c`, `d`.
pub type Sym = u8;

/// A Scalar-linear combination of basis symbols, sorted and zero-free.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Momentum(Arc<[(Sym, Scalar)]>);

impl Default for Momentum {
    fn default() -> Self {
        Momentum::zero()
    }
}

impl Momentum {
    pub fn zero() -> Self {
        Momentum(Arc::from(Vec::new()))
    }

    pub fn basis(h: Sym) -> Self {
        Momentum(Arc::from(vec![(h, Scalar::one())]))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, Scalar)>) -> Self {
        let mut m: BTreeMap<Sym, Scalar> = BTreeMap::new();
        for (h, c) in pairs {
            let e = m.entry(h).or_default();
            *e = e.add(&c);
        }
        Momentum(m.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Vec<_>>().into())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, h: Sym) -> Scalar {
        self.0.iter().find(|(g, _)| *g == h).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Sym, Scalar)> {
        self.0.iter()
    }

    pub fn add(&self, o: &Momentum) -> Momentum {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        Momentum::from_pairs(self.0.iter().chain(o.0.iter()).cloned())
    }

    pub fn scale(&self, s: &Scalar) -> Momentum {
        Momentum::from_pairs(self.0.iter().map(|(h, c)| (*h, c.mul(s))))
    }

    pub fn neg(&self) -> Momentum {
        self.scale(&Scalar::int(-1))
    }

    pub fn sub(&self, o: &Momentum) -> Momentum {
        self.add(&o.neg())
    }

    /// Restriction to the symbols in `mask`.
    pub fn restrict(&self, mask: u64) -> Momentum {
        Momentum(self.0.iter().filter(|(h, _)| mask & (1 << h) != 0).cloned().collect::<Vec<_>>().into())
    }
}

/// Sorted creation modes `(symbol, m)` standing for `h_{-m}`.
pub type Osc = SmallVec<[(Sym, u16); 6]>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    pub mom: Momentum,
    pub osc: Osc,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    pub fn new(mut osc: Osc, mom: Momentum) -> Self {
        osc.sort_unstable();
        Monomial { mom, osc }
    }

    /// Total mode degree `Σ m`.
    pub fn osc_degree(&self) -> i64 {
        self.osc.iter().map(|&(_, m)| m as i64).sum()
    }

    pub fn max_mode(&self) -> u16 {
        self.osc.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }

    pub fn with_factor(&self, h: Sym, m: u16) -> Monomial {
        let mut osc = self.osc.clone();
        let pos = osc.partition_point(|&f| f < (h, m));
        osc.insert(pos, (h, m));
        Monomial { mom: self.mom.clone(), osc }
    }

    /// Removes one copy of `(h, m)`; `None` if absent.
    pub fn without_factor(&self, h: Sym, m: u16) -> Option<Monomial> {
        let pos = self.osc.iter().position(|&f| f == (h, m))?;
        let mut osc = self.osc.clone();
        osc.remove(pos);
        Some(Monomial { mom: self.mom.clone(), osc })
    }

    pub fn multiplicity(&self, h: Sym, m: u16) -> usize {
        self.osc.iter().filter(|&&f| f == (h, m)).count()
    }

    /// Product in the commuting creation-mode picture; momenta add.
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut osc: Osc = self.osc.iter().chain(o.osc.iter()).copied().collect();
        osc.sort_unstable();
        Monomial { mom: self.mom.add(&o.mom), osc }
    }

    /// Factor restricted to symbols in `mask` (momentum restricted likewise).
    pub fn restrict(&self, mask: u64) -> Monomial {
        Monomial {
            mom: self.mom.restrict(mask),
            osc: self.osc.iter().filter(|(h, _)| mask & (1 << h) != 0).copied().collect(),
        }
    }

    /// `∏ 1/(m-1)!`, converting the mode form to derivative form.
    pub fn derivative_normalisation(&self) -> Rat {
        let d = self.osc.iter().fold(num::BigInt::from(1), |a, &(_, m)| a * factorial(m as u32 - 1));
        Rat::new(1.into(), d)
    }
}

/// A canonical linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct FieldExpr {
    terms: BTreeMap<Monomial, Scalar>,
}

impl FieldExpr {
    pub fn zero() -> Self {
        FieldExpr::default()
    }

    pub fn vacuum() -> Self {
        FieldExpr::monomial(Monomial::vacuum(), Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        FieldExpr::monomial(Monomial::vacuum(), c)
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut f = FieldExpr::zero();
        f.add_term(m, c);
        f
    }

    /// The single boson `h(z)`, i.e. the state `h_{-1}|0⟩`.
    pub fn boson(h: Sym) -> Self {
        FieldExpr::monomial(Monomial::vacuum().with_factor(h, 1), Scalar::one())
    }

    /// The field `μ(z) = Σ μ^h h(z)`.
    pub fn from_momentum(mu: &Momentum) -> Self {
        let mut f = FieldExpr::zero();
        for (h, c) in mu.iter() {
            f.add_term(Monomial::vacuum().with_factor(*h, 1), c.clone());
        }
        f
    }

    /// The vertex operator `e^μ`.
    pub fn exponential(mu: Momentum) -> Self {
        FieldExpr::monomial(Monomial { mom: mu, osc: Osc::new() }, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &FieldExpr, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.mul(s));
        }
    }

    pub fn add(&self, o: &FieldExpr) -> FieldExpr {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn sub(&self, o: &FieldExpr) -> FieldExpr {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::int(-1));
        out
    }

    pub fn scale(&self, s: &Scalar) -> FieldExpr {
        if s.is_zero() {
            return FieldExpr::zero();
        }
        FieldExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect() }
    }

    pub fn neg(&self) -> FieldExpr {
        self.scale(&Scalar::int(-1))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn try_map_coeffs<E>(&self, f: impl Fn(&Scalar) -> Result<Scalar, E>) -> Result<FieldExpr, E> {
        let mut out = FieldExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Applies `f` to every monomial (with its coefficient) and sums.
    pub fn flat_map(&self, f: impl Fn(&Monomial, &Scalar) -> FieldExpr) -> FieldExpr {
        let mut out = FieldExpr::zero();
        for (m, c) in &self.terms {
            let part = f(m, c);
            for (pm, pc) in part.terms {
                out.add_term(pm, pc);
            }
        }
        out
    }

    /// Distinct momenta present.
    pub fn momenta(&self) -> Vec<Momentum> {
        let mut v: Vec<Momentum> = self.terms.keys().map(|m| m.mom.clone()).collect();
        v.dedup();
        v
    }

    pub fn max_osc_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::osc_degree).max().unwrap_or(0)
    }

    /// Translation operator `∂ = L_{-1}`.
    pub fn derivative(&self) -> FieldExpr {
        self.translate(u64::MAX)
    }

    /// `∂^r / r!`-free iterate `∂^r`.
    pub fn derivative_n(&self, r: usize) -> FieldExpr {
        (0..r).fold(self.clone(), |x, _| x.derivative())
    }

    /// Translation acting only on the tensor factor spanned by symbols in `mask`.
    pub fn translate(&self, mask: u64) -> FieldExpr {
        self.flat_map(|mono, c| {
            let mut out = FieldExpr::zero();
            let mut seen: Option<(Sym, u16)> = None;
            for &(h, m) in &mono.osc {
                if mask & (1 << h) == 0 || seen == Some((h, m)) {
                    continue;
                }
                seen = Some((h, m));
                let mult = mono.multiplicity(h, m) as i64;
                let next = mono.without_factor(h, m).expect("present").with_factor(h, m + 1);
                out.add_term(next, c.mul_rat(&Rat::from_integer((mult * m as i64).into())));
            }
            for (h, mu) in mono.mom.iter() {
                if mask & (1 << h) != 0 {
                    out.add_term(mono.with_factor(*h, 1), c.mul(mu));
                }
            }
            out
        })
    }

    /// The creation mode `μ_{(-1)}` applied to every term: `:μ A:`.
    pub fn apply_creation(&self, mu: &Momentum) -> FieldExpr {
        self.apply_mode(mu, 1)
    }

    /// Multiplication by `μ_{-m} = Σ μ^h h_{-m}`.
    pub fn apply_mode(&self, mu: &Momentum, m: u16) -> FieldExpr {
        self.flat_map(|mono, c| {
            let mut out = FieldExpr::zero();
            for (h, x) in mu.iter() {
                out.add_term(mono.with_factor(*h, m), c.mul(x));
            }
            out
        })
    }

    /// Product of creation polynomials with momenta added (tensor product of
    /// commuting factors).
    pub fn mul_creation(&self, o: &FieldExpr) -> FieldExpr {
        let mut out = FieldExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    /// Shifts every momentum by `mu` (keeping oscillators).
    pub fn shift_momentum(&self, mu: &Momentum) -> FieldExpr {
        let mut out = FieldExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial { mom: m.mom.add(mu), osc: m.osc.clone() }, c.clone());
        }
        out
    }

    /// Substitutes a rational value for one scalar symbol in all coefficients
    /// and momenta.
    pub fn subst(&self, v: usize, value: &Rat) -> Result<FieldExpr, crate::ScalarError> {
        let mut out = FieldExpr::zero();
        for (m, c) in &self.terms {
            let mom = Momentum::from_pairs(
                m.mom.iter().map(|(h, x)| Ok((*h, x.subst(v, value)?))).collect::<Result<Vec<_>, crate::ScalarError>>()?,
            );
            out.add_term(Monomial { mom, osc: m.osc.clone() }, c.subst(v, value)?);
        }
        Ok(out)
    }

    /// Terms restricted to one momentum sector.
    pub fn sector(&self, mu: &Momentum) -> FieldExpr {
        FieldExpr { terms: self.terms.iter().filter(|(m, _)| &m.mom == mu).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

impl std::ops::Add<&FieldExpr> for &FieldExpr {
    type Output = FieldExpr;
    fn add(self, o: &FieldExpr) -> FieldExpr {
        FieldExpr::add(self, o)
    }
}

impl std::ops::Sub<&FieldExpr> for &FieldExpr {
    type Output = FieldExpr;
    fn sub(self, o: &FieldExpr) -> FieldExpr {
        FieldExpr::sub(self, o)
    }
}

/// Heisenberg basis `{α_1..α_n, c, d}` with its level-dependent Gram matrix.
#[derive(Clone, Debug)]
pub struct Basis {
    n: usize,
    k: Scalar,
    gram: Vec<Scalar>,
    ell: Scalar,
}

/// Cartan matrix entry of `sl_{n+1}`.
pub fn cartan(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// `ℓ_n(k) = nk/(n+1) + n − 1`.
pub fn ell(n: usize, k: &Scalar) -> Scalar {
    k.mul(&Scalar::frac(n as i64, n as i64 + 1)).add(&Scalar::int(n as i64 - 1))
}

impl Basis {
    pub fn new(n: usize, k: Scalar) -> Self {
        assert!(n >= 1, "rank must be positive");
        let dim = n + 2;
        let kk = k.add(&Scalar::int(n as i64 + 1));
        let mut gram = vec![Scalar::zero(); dim * dim];
        for i in 0..n {
            for j in 0..n {
                gram[i * dim + j] = kk.mul(&Scalar::int(cartan(i, j)));
            }
        }
        gram[n * dim + n + 1] = Scalar::int(2);
        gram[(n + 1) * dim + n] = Scalar::int(2);
        let ell = ell(n, &k);
        Basis { n, k, gram, ell }
    }

    /// Symbolic level `k`.
    pub fn symbolic(n: usize) -> Self {
        Basis::new(n, Scalar::var(K))
    }

    pub fn at_level(n: usize, k: Rat) -> Self {
        Basis::new(n, Scalar::rat(k))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 2
    }

    pub fn k(&self) -> &Scalar {
        &self.k
    }

    /// `k + n`.
    pub fn kn(&self) -> Scalar {
        self.k.add(&Scalar::int(self.n as i64))
    }

    pub fn ell(&self) -> &Scalar {
        &self.ell
    }

    pub fn alpha_sym(&self, i: usize) -> Sym {
        assert!((1..=self.n).contains(&i), "alpha index out of range");
        (i - 1) as Sym
    }

    pub fn c_sym(&self) -> Sym {
        self.n as Sym
    }

    pub fn d_sym(&self) -> Sym {
        (self.n + 1) as Sym
    }

    /// Symbols of `H_α`.
    pub fn alpha_mask(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    /// Symbols of Π.
    pub fn pi_mask(&self) -> u64 {
        3u64 << self.n
    }

    pub fn gram(&self, i: Sym, j: Sym) -> &Scalar {
        &self.gram[i as usize * self.dim() + j as usize]
    }

    pub fn pair(&self, mu: &Momentum, nu: &Momentum) -> Scalar {
        let mut acc = Scalar::zero();
        for (h, x) in mu.iter() {
            for (g, y) in nu.iter() {
                let gr = self.gram(*h, *g);
                if !gr.is_zero() {
                    acc = acc.add(&x.mul(y).mul(gr));
                }
            }
        }
        acc
    }

    /// `⟨h, μ⟩` for a basis symbol `h`.
    pub fn pair_sym(&self, h: Sym, mu: &Momentum) -> Scalar {
        let mut acc = Scalar::zero();
        for (g, y) in mu.iter() {
            let gr = self.gram(h, *g);
            if !gr.is_zero() {
                acc = acc.add(&y.mul(gr));
            }
        }
        acc
    }

    pub fn alpha(&self, i: usize) -> Momentum {
        Momentum::basis(self.alpha_sym(i))
    }

    pub fn c(&self) -> Momentum {
        Momentum::basis(self.c_sym())
    }

    pub fn d(&self) -> Momentum {
        Momentum::basis(self.d_sym())
    }

    /// `a = −(ℓ/2)c + d/2`.
    pub fn a(&self) -> Momentum {
        let half = Scalar::frac(1, 2);
        Momentum::from_pairs([(self.c_sym(), self.ell.mul(&half).neg()), (self.d_sym(), half)])
    }

    /// `b = (ℓ/2)c + d/2`.
    pub fn b(&self) -> Momentum {
        let half = Scalar::frac(1, 2);
        Momentum::from_pairs([(self.c_sym(), self.ell.mul(&half)), (self.d_sym(), half)])
    }

    /// `ε_s = −Σ_{j<s} j/(n+1) α_j + Σ_{j≥s} (n+1−j)/(n+1) α_j`.
    pub fn epsilon(&self, s: usize) -> Result<Momentum, FockError> {
        let n = self.n;
        if s == 0 || s > n + 1 {
            return Err(FockError::IndexOutOfRange { index: s, max: n + 1 });
        }
        let np1 = n as i64 + 1;
        Ok(Momentum::from_pairs((1..=n).map(|j| {
            let c = if j < s { Scalar::frac(-(j as i64), np1) } else { Scalar::frac(np1 - j as i64, np1) };
            (self.alpha_sym(j), c)
        })))
    }

    /// `ω_1 = (1/(n+1)) Σ (n−i+1) α_i`.
    pub fn omega1(&self) -> Momentum {
        let np1 = self.n as i64 + 1;
        Momentum::from_pairs((1..=self.n).map(|i| (self.alpha_sym(i), Scalar::frac(np1 - i as i64, np1))))
    }

    pub fn epsilon_field(&self, s: usize) -> Result<FieldExpr, FockError> {
        Ok(FieldExpr::from_momentum(&self.epsilon(s)?))
    }

    /// `t = ½:cd: + α∂c + β∂d`.
    pub fn pi_em_field(&self, alpha: &Scalar, beta: &Scalar) -> FieldExpr {
        let (c, d) = (self.c_sym(), self.d_sym());
        let mut f = FieldExpr::zero();
        f.add_term(Monomial::vacuum().with_factor(c, 1).with_factor(d, 1), Scalar::frac(1, 2));
        f.add_term(Monomial::vacuum().with_factor(c, 2), alpha.clone());
        f.add_term(Monomial::vacuum().with_factor(d, 2), beta.clone());
        f
    }

    /// The chosen `t` with `α = (n/2)ℓ`, `β = −1/2`.
    pub fn t(&self) -> FieldExpr {
        self.pi_em_field(&self.ell.mul(&Scalar::frac(self.n as i64, 2)), &Scalar::frac(-1, 2))
    }

    /// Central charge `2 − 48αβ` of `pi_em_field(α, β)`.
    pub fn pi_central_charge(alpha: &Scalar, beta: &Scalar) -> Scalar {
        Scalar::int(2).sub(&Scalar::int(48).mul(alpha).mul(beta))
    }

    pub fn symbol_name(&self, h: Sym) -> String {
        let h = h as usize;
        if h < self.n {
            format!("alpha{}", h + 1)
        } else if h == self.n {
            "c".into()
        } else {
            "d".into()
        }
    }

    fn symbol_latex(&self, h: Sym) -> String {
        let h = h as usize;
        if h < self.n {
            format!("\\alpha_{{{}}}", h + 1)
        } else if h == self.n {
            "c".into()
        } else {
            "d".into()
        }
    }

    pub fn symbol_index(&self, name: &str) -> Option<Sym> {
        match name {
            "c" => Some(self.c_sym()),
            "d" => Some(self.d_sym()),
            _ => {
                let i: usize = name.strip_prefix("alpha")?.parse().ok()?;
                (1..=self.n).contains(&i).then(|| self.alpha_sym(i))
            }
        }
    }

    pub fn momentum_text(&self, mu: &Momentum) -> String {
        let mut s = String::new();
        for (idx, (h, c)) in mu.iter().enumerate() {
            let name = self.symbol_name(*h);
            let t = if c.is_one() {
                name
            } else if c.neg().is_one() {
                format!("-{name}")
            } else if c.as_integer().is_some() {
                format!("{c}*{name}")
            } else {
                format!("({c})*{name}")
            };
            if idx > 0 && !t.starts_with('-') {
                s.push('+');
            }
            s.push_str(&t);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        let mut parts: Vec<String> = m
            .osc
            .iter()
            .map(|&(h, md)| match md {
                1 => self.symbol_name(h),
                2 => format!("D({})", self.symbol_name(h)),
                _ => format!("D{}({})", md - 1, self.symbol_name(h)),
            })
            .collect();
        if !m.mom.is_zero() {
            parts.push(format!("E({})", self.momentum_text(&m.mom)));
        }
        match parts.len() {
            0 => "vac".into(),
            1 => parts.pop().expect("one part"),
            _ => format!(":{}:", parts.join(" ")),
        }
    }

    /// Plain-text form in derivative notation, e.g. `(k+1)*:D(a) E(-c):`.
    /// The output is accepted by the golden-corpus expression parser.
    pub fn to_text(&self, f: &FieldExpr) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.terms().enumerate() {
            let c = c.mul_rat(&m.derivative_normalisation());
            let ct = c.to_string();
            let body = self.monomial_text(m);
            let neg = ct.starts_with('-') && !ct[1..].contains(['+', '-']);
            let mag = if neg { c.neg() } else { c.clone() };
            let mt = mag.to_string();
            let term = if mag.is_one() {
                body
            } else if mt.contains(['+', '-']) || mt.contains('/') {
                format!("({mt})*{body}")
            } else {
                format!("{mt}*{body}")
            };
            if neg {
                out.push_str(if i == 0 { "-" } else { " - " });
            } else if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&term);
        }
        out
    }

    /// LaTeX with right-to-left normal ordering, `∂^p h` and `e^{μ}`.
    pub fn to_latex(&self, f: &FieldExpr) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in f.terms().enumerate() {
            let c = c.mul_rat(&m.derivative_normalisation());
            let mut parts: Vec<String> = m
                .osc
                .iter()
                .map(|&(h, md)| match md {
                    1 => self.symbol_latex(h),
                    2 => format!("\\partial {}", self.symbol_latex(h)),
                    _ => format!("\\partial^{{{}}} {}", md - 1, self.symbol_latex(h)),
                })
                .collect();
            if !m.mom.is_zero() {
                let mut e = Vec::new();
                for (idx, (h, x)) in m.mom.iter().enumerate() {
                    let t = x.to_latex();
                    let simple = !t.contains(['+', '-']) || (t.starts_with('-') && !t[1..].contains(['+', '-']));
                    let coef = if x.is_one() {
                        String::new()
                    } else if x.neg().is_one() {
                        "-".into()
                    } else if simple {
                        t
                    } else {
                        format!("\\left({t}\\right)")
                    };
                    let sep = if idx > 0 && !coef.starts_with('-') { "+" } else { "" };
                    e.push(format!("{sep}{coef}{}", self.symbol_latex(*h)));
                }
                parts.push(format!("e^{{{}}}", e.concat()));
            }
            let body = match parts.len() {
                0 => "\\mathbb{1}".to_string(),
                1 => parts.pop().expect("one part"),
                _ => format!("{{:}}{}{{:}}", parts.join("\\,")),
            };
            let t = c.to_latex();
            let neg = t.starts_with('-') && !t[1..].contains(['+', '-']);
            let mag = if neg { t[1..].to_string() } else { t.clone() };
            let coeff = if mag == "1" {
                String::new()
            } else if mag.contains(['+', '-']) {
                format!("\\left({mag}\\right)")
            } else {
                mag
            };
            if neg {
                out.push_str(if i == 0 { "-" } else { " - " });
            } else if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&coeff);
            out.push_str(&body);
        }
        out
    }

    /// Nested JSON term list: `{"terms": [{"coeff", "factors", "momentum"}]}`;
    /// factors are `[symbol, derivative order]` pairs in derivative form.
    pub fn to_json(&self, f: &FieldExpr) -> Value {
        let terms: Vec<Value> = f
            .terms()
            .map(|(m, c)| {
                let c = c.mul_rat(&m.derivative_normalisation());
                json!({
                    "coeff": c.to_string(),
                    "factors": m.osc.iter().map(|&(h, md)| json!([self.symbol_name(h), md - 1])).collect::<Vec<_>>(),
                    "momentum": m.mom.iter().map(|(h, x)| json!([self.symbol_name(*h), x.to_string()])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    /// Inverse of [`Basis::to_json`].
    pub fn from_json(&self, v: &Value) -> Result<FieldExpr, FockError> {
        let bad = |s: &str| FockError::Json(s.to_string());
        let mut out = FieldExpr::zero();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let c: Scalar = t["coeff"].as_str().ok_or_else(|| bad("coeff"))?.parse().map_err(|e| bad(&format!("{e}")))?;
            let mut osc = Osc::new();
            for f in t["factors"].as_array().ok_or_else(|| bad("factors"))? {
                let h = self.symbol_index(f[0].as_str().ok_or_else(|| bad("factor symbol"))?).ok_or_else(|| bad("unknown symbol"))?;
                let p = f[1].as_u64().ok_or_else(|| bad("derivative order"))? as u16;
                osc.push((h, p + 1));
            }
            let mut pairs = Vec::new();
            for p in t["momentum"].as_array().ok_or_else(|| bad("momentum"))? {
                let h = self.symbol_index(p[0].as_str().ok_or_else(|| bad("momentum symbol"))?).ok_or_else(|| bad("unknown symbol"))?;
                let x: Scalar = p[1].as_str().ok_or_else(|| bad("momentum coeff"))?.parse().map_err(|e| bad(&format!("{e}")))?;
                pairs.push((h, x));
            }
            let m = Monomial::new(osc, Momentum::from_pairs(pairs));
            let norm = m.derivative_normalisation();
            out.add_term(m, c.mul_rat(&norm.recip()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FockError {
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("malformed field JSON: {0}")]
    Json(String),
}
