//! n-th products of free-field expressions.
//!
//! `A_{(n)}B` is computed for monomials by peeling one boson factor off `A`
//! and applying the Borcherds (quasi-associativity) identity
//!
//! `(h_{(-p-1)}A')_{(n)}B = Σ_{i≥0} C(p+i, i) [ h_{(-p-1-i)} A'_{(n+i)}B + (-1)^p A'_{(-p-1+n-i)} h_{(i)}B ]`,
//!
//! where `h_{(m)}` is the Heisenberg mode. The recursion bottoms out at the
//! vacuum and at bare vertex operators `e^μ`, whose products follow from
//! `Y(e^μ, z) = E^+(μ, z) e^μ z^{μ_0} E^-(μ, z)`. Results are memoised per
//! monomial pair and index.

use crate::fock::{Basis, FieldExpr, Momentum, Monomial, Osc, Sym};
use crate::par::{self, Exec};
use crate::scalar::{binomial, Rat, Scalar, ScalarError};
use dashmap::DashMap;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OpeError {
    #[error("fractional-power OPE unsupported: exponential pairing {0} is not an integer constant")]
    FractionalPower(String),
    #[error("negative product index {0} rejected")]
    NegativeIndex(i64),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Poles of an OPE: `poles[j] = A_{(j)}B`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SingularPart {
    pub poles: Vec<FieldExpr>,
}

impl SingularPart {
    pub fn pole(&self, j: usize) -> FieldExpr {
        self.poles.get(j).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn to_json(&self, basis: &Basis) -> Value {
        Value::Array(self.poles.iter().map(|p| basis.to_json(p)).collect())
    }
}

type Key = (Monomial, Monomial, i64);

/// OPE engine over a fixed [`Basis`], with a shared memo cache.
pub struct Engine {
    basis: Basis,
    exec: Exec,
    memo: DashMap<Key, FieldExpr>,
    schur: DashMap<Momentum, Vec<FieldExpr>>,
}

impl Engine {
    pub fn new(basis: Basis) -> Self {
        Engine { basis, exec: Exec::default(), memo: DashMap::new(), schur: DashMap::new() }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear_cache(&self) {
        self.memo.clear();
        self.schur.clear();
    }

    fn int_pairing(&self, mu: &Momentum, nu: &Momentum) -> Result<i64, OpeError> {
        if mu.is_zero() || nu.is_zero() {
            return Ok(0);
        }
        let p = self.basis.pair(mu, nu);
        p.as_i64().ok_or_else(|| OpeError::FractionalPower(p.to_string()))
    }

    /// `A_{(j)}B` for `j ≥ 0`.
    pub fn nth_product(&self, a: &FieldExpr, b: &FieldExpr, j: i64) -> Result<FieldExpr, OpeError> {
        if j < 0 {
            return Err(OpeError::NegativeIndex(j));
        }
        self.product(a, b, j)
    }

    /// `A_{(n)}B` for any integer `n`; `n = -1` is the normally ordered product.
    pub fn product(&self, a: &FieldExpr, b: &FieldExpr, n: i64) -> Result<FieldExpr, OpeError> {
        let pairs: Vec<(&Monomial, &Scalar, &Monomial, &Scalar)> =
            a.terms().flat_map(|(ma, ca)| b.terms().map(move |(mb, cb)| (ma, ca, mb, cb))).collect();
        let parts = par::map(self.exec, &pairs, |(ma, ca, mb, cb)| {
            self.mono_product(ma, mb, n).map(|r| (r, ca.mul(cb)))
        });
        let mut out = FieldExpr::zero();
        for p in parts {
            let (r, c) = p?;
            out.add_scaled(&r, &c);
        }
        Ok(out)
    }

    /// `:AB: = A_{(-1)}B`.
    pub fn normally_ordered(&self, a: &FieldExpr, b: &FieldExpr) -> Result<FieldExpr, OpeError> {
        self.product(a, b, -1)
    }

    /// Right-to-left nested normal ordering `:A_1 (:A_2 (… A_r):):`.
    pub fn normally_ordered_all(&self, fs: &[FieldExpr]) -> Result<FieldExpr, OpeError> {
        let mut it = fs.iter().rev();
        let mut acc = match it.next() {
            Some(f) => f.clone(),
            None => return Ok(FieldExpr::vacuum()),
        };
        for f in it {
            acc = self.normally_ordered(f, &acc)?;
        }
        Ok(acc)
    }

    /// Exclusive upper bound on `j` with `A_{(j)}B ≠ 0`.
    pub fn pole_bound(&self, a: &FieldExpr, b: &FieldExpr) -> Result<i64, OpeError> {
        let mut bound = 0;
        for (ma, _) in a.terms() {
            for (mb, _) in b.terms() {
                let s = self.int_pairing(&ma.mom, &mb.mom)?;
                bound = bound.max(ma.osc_degree() + mb.osc_degree() - s);
            }
        }
        Ok(bound)
    }

    pub fn singular_part(&self, a: &FieldExpr, b: &FieldExpr) -> Result<SingularPart, OpeError> {
        let bound = self.pole_bound(a, b)?;
        let js: Vec<i64> = (0..bound).collect();
        let poles = par::map(self.exec, &js, |&j| self.product(a, b, j));
        let mut poles: Vec<FieldExpr> = poles.into_iter().collect::<Result<_, _>>()?;
        while poles.last().is_some_and(FieldExpr::is_zero) {
            poles.pop();
        }
        Ok(SingularPart { poles })
    }

    /// `w` with `em_{(1)}X = w X`, if `X` is an eigenvector.
    pub fn conformal_weight(&self, em: &FieldExpr, x: &FieldExpr) -> Result<Option<Scalar>, OpeError> {
        let (m0, c0) = match x.terms().next() {
            Some(t) => t,
            None => return Ok(None),
        };
        let y = self.product(em, x, 1)?;
        let w = y.coeff(m0).try_div(c0)?;
        Ok((y == x.scale(&w)).then_some(w))
    }

    /// Eigenvalue of `J_{(0)}` with `J = b`, if homogeneous.
    pub fn j_charge(&self, x: &FieldExpr) -> Option<Scalar> {
        let b = self.basis.b();
        let mut it = x.momenta().into_iter().map(|m| self.basis.pair(&b, &m));
        let first = it.next().unwrap_or_default();
        it.all(|c| c == first).then_some(first)
    }

    fn mono_product(&self, a: &Monomial, b: &Monomial, n: i64) -> Result<FieldExpr, OpeError> {
        if a.osc.is_empty() && a.mom.is_zero() {
            return Ok(if n == -1 { FieldExpr::monomial(b.clone(), Scalar::one()) } else { FieldExpr::zero() });
        }
        let s = self.int_pairing(&a.mom, &b.mom)?;
        if n >= a.osc_degree() + b.osc_degree() - s {
            return Ok(FieldExpr::zero());
        }
        let key = (a.clone(), b.clone(), n);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let r = if a.osc.is_empty() { self.vertex(&a.mom, b, n, s) } else { self.peel(a, b, n, s)? };
        self.memo.insert(key, r.clone());
        Ok(r)
    }

    fn peel(&self, a: &Monomial, b: &Monomial, n: i64, s: i64) -> Result<FieldExpr, OpeError> {
        let (h, m) = a.osc[0];
        let p = m as i64 - 1;
        let rest = Monomial { mom: a.mom.clone(), osc: a.osc[1..].iter().copied().collect() };
        let mut out = FieldExpr::zero();
        let bound = rest.osc_degree() + b.osc_degree() - s;
        let mut i = 0;
        while n + i < bound {
            let x = self.mono_product(&rest, b, n + i)?;
            if !x.is_zero() {
                let c = Scalar::rat(binomial(p + i, i));
                out.add_scaled(&x.flat_map(|mm, cc| FieldExpr::monomial(mm.with_factor(h, (p + 1 + i) as u16), cc.clone())), &c);
            }
            i += 1;
        }
        let sign = if p % 2 == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
        for i in 0..=b.max_mode() as i64 {
            let y = self.annihilate(h, i, b);
            if y.is_zero() {
                continue;
            }
            let c = binomial(p + i, i) * &sign;
            for (my, cy) in y.terms() {
                let z = self.mono_product(&rest, my, -p - 1 + n - i)?;
                out.add_scaled(&z, &cy.mul_rat(&c));
            }
        }
        Ok(out)
    }

    /// `h_{(i)}B` for `i ≥ 0`.
    fn annihilate(&self, h: Sym, i: i64, b: &Monomial) -> FieldExpr {
        if i == 0 {
            let c = self.basis.pair_sym(h, &b.mom);
            return FieldExpr::monomial(b.clone(), c);
        }
        let mut out = FieldExpr::zero();
        let mut last = None;
        for &(g, m) in &b.osc {
            if m as i64 != i || last == Some(g) {
                continue;
            }
            last = Some(g);
            let gr = self.basis.gram(h, g);
            if gr.is_zero() {
                continue;
            }
            let r = (b.multiplicity(g, m) as i64) * i;
            out.add_term(b.without_factor(g, m).expect("present"), gr.mul_rat(&Rat::from_integer(r.into())));
        }
        out
    }

    /// `(e^μ)_{(n)}B` with `s = ⟨μ, ν_B⟩`.
    fn vertex(&self, mu: &Momentum, b: &Monomial, n: i64, s: i64) -> FieldExpr {
        let mut groups: Vec<(Sym, u16, usize, Scalar)> = Vec::new();
        for &(g, m) in &b.osc {
            match groups.last_mut() {
                Some(last) if last.0 == g && last.1 == m => last.2 += 1,
                _ => groups.push((g, m, 1, self.basis.pair_sym(g, mu).neg())),
            }
        }
        let mom = mu.add(&b.mom);
        let mut out = FieldExpr::zero();
        let mut choice = vec![0usize; groups.len()];
        loop {
            let mut w = 0i64;
            let mut coeff = Scalar::one();
            let mut rest = Osc::new();
            for (t, (g, m, mult, x)) in choice.iter().zip(&groups) {
                w += (*t as i64) * (*m as i64);
                if *t > 0 {
                    coeff = coeff.mul(&x.pow(*t as i32).expect("nonnegative power")).mul_rat(&binomial(*mult as i64, *t as i64));
                }
                rest.extend(std::iter::repeat_n((*g, *m), mult - t));
            }
            let kk = -n - 1 - s + w;
            if kk >= 0 && !coeff.is_zero() {
                let sk = self.schur(mu, kk as usize);
                for (ms, cs) in sk.terms() {
                    let mut osc: Osc = ms.osc.iter().chain(rest.iter()).copied().collect();
                    osc.sort_unstable();
                    out.add_term(Monomial { mom: mom.clone(), osc }, cs.mul(&coeff));
                }
            }
            let mut idx = 0;
            loop {
                if idx == groups.len() {
                    return out;
                }
                let skip = groups[idx].3.is_zero();
                if !skip && choice[idx] < groups[idx].2 {
                    choice[idx] += 1;
                    break;
                }
                choice[idx] = 0;
                idx += 1;
            }
        }
    }

    /// Schur polynomial `S_K(μ_{-1}, μ_{-2}, …)` from `E^+(μ, z) = Σ S_K z^K`.
    fn schur(&self, mu: &Momentum, kk: usize) -> FieldExpr {
        if let Some(v) = self.schur.get(mu) {
            if let Some(f) = v.get(kk) {
                return f.clone();
            }
        }
        let mut e = self.schur.entry(mu.clone()).or_insert_with(|| vec![FieldExpr::vacuum()]);
        while e.len() <= kk {
            let k = e.len();
            let mut acc = FieldExpr::zero();
            for m in 1..=k {
                acc = acc.add(&e[k - m].apply_mode(mu, m as u16));
            }
            e.push(acc.scale(&Scalar::frac(1, k as i64)));
        }
        e[kk].clone()
    }
}
