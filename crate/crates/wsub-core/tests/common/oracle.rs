//! Numeric mode-expansion reference for n-th products of free fields.
//!
//! Works at a fixed rational level with its own Fock space: a state is a map
//! from (sorted creation modes, momentum vector) to a rational. The vertex
//! operator of a monomial is expanded as a normally ordered product of
//! boson derivatives and `E^+(μ,z) e^μ z^{μ_0} E^-(μ,z)`, and the coefficient
//! of `z^{-j-1}` is read off.

use num::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use wsub_core::{Basis, FieldExpr, Rat};

pub type Key = (Vec<(u8, u16)>, Vec<Rat>);
pub type State = BTreeMap<Key, Rat>;
type Series = BTreeMap<i64, State>;

pub struct Oracle {
    dim: usize,
    gram: Vec<Vec<Rat>>,
}

fn binom(n: i64, k: i64) -> Rat {
    if k < 0 {
        return Rat::zero();
    }
    let mut r = Rat::one();
    for i in 0..k {
        r = r * Rat::from_integer((n - i).into()) / Rat::from_integer((i + 1).into());
    }
    r
}

fn add_to(s: &mut State, k: Key, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = s.entry(k.clone()).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        s.remove(&k);
    }
}

fn add_series(s: &mut Series, p: i64, st: State) {
    let e = s.entry(p).or_default();
    for (k, c) in st {
        add_to(e, k, c);
    }
}

impl Oracle {
    /// Numeric Gram matrix read off a basis at a rational level.
    pub fn new(basis: &Basis) -> Self {
        let dim = basis.dim();
        let gram = (0..dim)
            .map(|i| (0..dim).map(|j| basis.gram(i as u8, j as u8).as_rat().expect("numeric level")).collect())
            .collect();
        Oracle { dim, gram }
    }

    pub fn state(&self, f: &FieldExpr) -> State {
        let mut s = State::new();
        for (m, c) in f.terms() {
            let mut mom = vec![Rat::zero(); self.dim];
            for (h, x) in m.mom.iter() {
                mom[*h as usize] = x.as_rat().expect("numeric momentum");
            }
            add_to(&mut s, (m.osc.to_vec(), mom), c.as_rat().expect("numeric coefficient"));
        }
        s
    }

    fn pair_vec(&self, h: usize, mu: &[Rat]) -> Rat {
        (0..self.dim).fold(Rat::zero(), |acc, g| acc + &self.gram[h][g] * &mu[g])
    }

    /// `Σ_h μ^h h_n` with `n > 0` (annihilation) on a state.
    fn annihilate(&self, coeffs: &[Rat], n: u16, s: &State) -> State {
        let mut out = State::new();
        for ((osc, mom), c) in s {
            for (pos, &(g, m)) in osc.iter().enumerate() {
                if m != n {
                    continue;
                }
                let w = self.pair_vec(g as usize, coeffs) * Rat::from_integer((n as i64).into());
                if w.is_zero() {
                    continue;
                }
                let mut o = osc.clone();
                o.remove(pos);
                add_to(&mut out, (o, mom.clone()), c * w);
            }
        }
        out
    }

    fn create(&self, coeffs: &[Rat], n: u16, s: &State) -> State {
        let mut out = State::new();
        for ((osc, mom), c) in s {
            for (h, x) in coeffs.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut o = osc.clone();
                o.push((h as u8, n));
                o.sort_unstable();
                add_to(&mut out, (o, mom.clone()), c * x);
            }
        }
        out
    }

    fn unit(h: usize, dim: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        v[h] = Rat::one();
        v
    }

    /// Coefficient of `z^{-j-1}` in `Y(A, z) B` for a single monomial `A`.
    fn mono_product(&self, osc: &[(u8, u16)], mu: &[Rat], b: &State, j: i64) -> State {
        let target = -j - 1;
        let mut cur: Series = BTreeMap::new();
        cur.insert(0, b.clone());
        // E^-(μ, z) = exp(-Σ_{n>0} μ_n z^{-n} / n)
        if mu.iter().any(|x| !x.is_zero()) {
            let maxmode = b.keys().flat_map(|(o, _)| o.iter().map(|&(_, m)| m)).max().unwrap_or(0);
            let mut term = cur.clone();
            let mut total = cur.clone();
            let mut r = 1i64;
            loop {
                let mut next: Series = BTreeMap::new();
                for (p, st) in &term {
                    for n in 1..=maxmode {
                        let a = self.annihilate(mu, n, st);
                        let f = -Rat::one() / Rat::from_integer((n as i64 * r).into());
                        add_series(&mut next, p - n as i64, a.into_iter().map(|(k, c)| (k, c * &f)).collect());
                    }
                }
                next.retain(|_, s| !s.is_empty());
                if next.is_empty() {
                    break;
                }
                for (p, st) in &next {
                    add_series(&mut total, *p, st.clone());
                }
                term = next;
                r += 1;
            }
            cur = total;
        }
        let base = cur;
        let mut result = State::new();
        for subset in 0u32..(1 << osc.len()) {
            let mut cur = base.clone();
            // each boson contributes its creation part (in `subset`) or its annihilation part
            for (i, &(h, m)) in osc.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    continue;
                }
                let e = Self::unit(h as usize, self.dim);
                let mut next: Series = BTreeMap::new();
                for (p, st) in &cur {
                    let maxmode = st.keys().flat_map(|(o, _)| o.iter().map(|&(_, m)| m)).max().unwrap_or(0);
                    // n = 0
                    let mut zero = State::new();
                    for ((o, mom), c) in st {
                        add_to(&mut zero, (o.clone(), mom.clone()), c * self.pair_vec(h as usize, mom));
                    }
                    let cz = binom(-1, m as i64 - 1);
                    add_series(&mut next, p - m as i64, zero.into_iter().map(|(k, c)| (k, c * &cz)).collect());
                    for n in 1..=maxmode {
                        let a = self.annihilate(&e, n, st);
                        let cn = binom(-(n as i64) - 1, m as i64 - 1);
                        add_series(&mut next, p - n as i64 - m as i64, a.into_iter().map(|(k, c)| (k, c * &cn)).collect());
                    }
                }
                cur = next;
            }
            // z^{μ_0} e^μ
            let mut shifted: Series = BTreeMap::new();
            for (p, st) in cur {
                for ((o, mom), c) in st {
                    let s = (0..self.dim).fold(Rat::zero(), |acc, h| acc + self.pair_vec(h, mu) * &mom[h]);
                    assert!(s.is_integer(), "oracle needs integral pairings");
                    let nm: Vec<Rat> = mom.iter().zip(mu).map(|(x, y)| x + y).collect();
                    let mut st = State::new();
                    add_to(&mut st, (o, nm), c);
                    add_series(&mut shifted, p + s.to_integer().to_i64().expect("small pairing"), st);
                }
            }
            cur = shifted;
            cur.retain(|p, s| *p <= target && !s.is_empty());
            // creation parts: E^+(μ, z) then boson derivatives, truncated at the target power
            if mu.iter().any(|x| !x.is_zero()) {
                let mut total = cur.clone();
                let mut term = cur.clone();
                let mut r = 1i64;
                loop {
                    let mut next: Series = BTreeMap::new();
                    for (p, st) in &term {
                        let mut n = 1i64;
                        while p + n <= target {
                            let a = self.create(mu, n as u16, st);
                            let f = Rat::one() / Rat::from_integer((n * r).into());
                            add_series(&mut next, p + n, a.into_iter().map(|(k, c)| (k, c * &f)).collect());
                            n += 1;
                        }
                    }
                    next.retain(|_, s| !s.is_empty());
                    if next.is_empty() {
                        break;
                    }
                    for (p, st) in &next {
                        add_series(&mut total, *p, st.clone());
                    }
                    term = next;
                    r += 1;
                }
                cur = total;
            }
            for (i, &(h, m)) in osc.iter().enumerate() {
                if subset & (1 << i) == 0 {
                    continue;
                }
                let e = Self::unit(h as usize, self.dim);
                let mut next: Series = BTreeMap::new();
                for (p, st) in &cur {
                    let mut l = m as i64;
                    while p + l - m as i64 <= target {
                        let a = self.create(&e, l as u16, st);
                        let cl = binom(l - 1, m as i64 - 1);
                        add_series(&mut next, p + l - m as i64, a.into_iter().map(|(k, c)| (k, c * &cl)).collect());
                        l += 1;
                    }
                }
                cur = next;
            }
            for (k, c) in cur.remove(&target).unwrap_or_default() {
                add_to(&mut result, k, c);
            }
        }
        result
    }

    /// `A_{(j)}B` at the oracle's numeric level.
    pub fn product(&self, a: &FieldExpr, b: &FieldExpr, j: i64) -> State {
        let bs = self.state(b);
        let mut out = State::new();
        for ((osc, mu), c) in self.state(a) {
            for (k, x) in self.mono_product(&osc, &mu, &bs, j) {
                add_to(&mut out, k, x * &c);
            }
        }
        out
    }
}
