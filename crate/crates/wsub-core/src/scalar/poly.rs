//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no zero
//! coefficients, so structural equality is polynomial equality.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;

pub type Rat = BigRational;

/// Exponent vector indexed by symbol position, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub(crate) SmallVec<[u16; 4]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn var(i: usize, e: u16) -> Self {
        if e == 0 {
            return Mono::one();
        }
        let mut v: SmallVec<[u16; 4]> = SmallVec::from_elem(0, i + 1);
        v[i] = e;
        Mono(v)
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Mono(exps.iter().copied().collect()).trim()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        Mono((0..n).map(|i| self.exp(i) + o.exp(i)).collect())
    }

    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, &e) in o.0.iter().enumerate() {
            if out[i] < e {
                return None;
            }
            out[i] -= e;
        }
        Some(Mono(out).trim())
    }

    pub fn with_exp(&self, i: usize, e: u16) -> Mono {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Mono(v).trim()
    }

    /// Bitmask of symbols with positive exponent (symbols beyond 63 collapse).
    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << i.min(63)))
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| {
            let n = self.0.len().max(o.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&o.exp(i)) {
                    Ordering::Equal => continue,
                    c => return c,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    pub(crate) terms: Vec<(Mono, Rat)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(Mono::var(i, 1), Rat::one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn mask(&self) -> u64 {
        self.terms.iter().fold(0, |m, (mo, _)| m | mo.mask())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    pub fn deg_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    /// Builds a polynomial from unordered terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, Rat)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if lc.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_term(&self, mo: &Mono, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the order
        Poly { terms: self.terms.iter().map(|(m, c)| (m.mul(mo), c * s)).collect() }
    }

    fn merge(&self, o: &Poly, sign: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if sign { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &o.terms[j..] {
            out.push((m.clone(), if sign { -c } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        self.merge(o, true)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.lead()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((rm, rc)) = r.lead().cloned() {
            let m = rm.div(lm)?;
            let c = rc / lc;
            r = r.sub(&d.mul_term(&m, &c));
            q.push((m, c));
        }
        Some(Poly { terms: q })
    }

    /// Returns `(p / lc, lc)` where `lc` is the leading coefficient.
    pub fn monic(&self) -> (Poly, Rat) {
        match self.lead() {
            None => (Poly::zero(), Rat::one()),
            Some((_, c)) if c.is_one() => (self.clone(), Rat::one()),
            Some((_, c)) => {
                let c = c.clone();
                (self.scale(&c.recip()), c)
            }
        }
    }

    /// Coefficients with respect to the symbol `v`, indexed by degree.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.deg_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, Rat)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(v) as usize].push((m.with_exp(v, 0), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_coeffs_in(v: usize, cs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, p) in cs.iter().enumerate() {
            for (m, c) in &p.terms {
                terms.push((m.with_exp(v, e as u16), c.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Substitutes `v = value`.
    pub fn subst(&self, v: usize, value: &Rat) -> Poly {
        if self.deg_in(v) == 0 {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let f = if e == 0 { c.clone() } else { c * pow_rat(value, e as u32) };
            terms.push((m.with_exp(v, 0), f));
        }
        Poly::from_terms(terms)
    }

    /// Evaluates with `value(i)` supplying each symbol; `Err(i)` names an unbound one.
    pub fn eval(&self, value: &dyn Fn(usize) -> Option<Rat>) -> Result<Rat, usize> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let x = value(i).ok_or(i)?;
                    t *= pow_rat(&x, e as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()))
    }

    /// Gcd of the (integer) numerators, assuming integral coefficients.
    pub fn integer_content(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
    }
}

pub(crate) fn pow_rat(x: &Rat, e: u32) -> Rat {
    num::pow::pow(x.clone(), e as usize)
}

fn lowest_var(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

/// Monic greatest common divisor over the rationals.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    if a == b {
        return a.monic().0;
    }
    let (ma, mb) = (a.mask(), b.mask());
    let all = ma | mb;
    if all.count_ones() == 1 {
        return univariate_gcd(a, b, lowest_var(all));
    }
    // a shared variable is needed for a nontrivial gcd in that variable
    let v = lowest_var(all);
    if ma & (1 << v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if mb & (1 << v) == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let mut p = pa.coeffs_in(v);
    let mut q = pb.coeffs_in(v);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = prem(&p, &q);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return g;
        }
        p = q;
        q = primitive_coeffs(r);
    }
    let h = Poly::from_coeffs_in(v, &primitive_coeffs(q));
    h.mul(&g).monic().0
}

fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_coeffs(cs: Vec<Poly>) -> Vec<Poly> {
    let mut g = Poly::zero();
    for c in &cs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_one() || g.is_zero() {
        return cs;
    }
    cs.iter().map(|c| c.div_exact(&g).expect("content divides")).collect()
}

fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() >= b.len() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            let idx = i + dr - db;
            r[idx] = r[idx].sub(&lr.mul(bc));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn univariate_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let dense = |p: &Poly| -> Vec<Rat> {
        let mut d = vec![Rat::zero(); p.deg_in(v) as usize + 1];
        for (m, c) in &p.terms {
            d[m.exp(v) as usize] = c.clone();
        }
        d
    };
    let mut x = dense(a);
    let mut y = dense(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = dense_rem(x, &y);
        x = y;
        y = r;
    }
    let lc = x.last().cloned().unwrap_or_else(Rat::one);
    let terms = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (Mono::var(v, e as u16), c / &lc))
        .collect();
    Poly::from_terms(terms)
}

fn dense_rem(mut x: Vec<Rat>, y: &[Rat]) -> Vec<Rat> {
    let dy = y.len() - 1;
    let ly = &y[dy];
    while x.len() >= y.len() {
        let dx = x.len() - 1;
        let f = &x[dx] / ly;
        for (i, c) in y.iter().enumerate() {
            let idx = i + dx - dy;
            x[idx] -= &f * c;
        }
        x.pop();
        while x.last().is_some_and(|c| c.is_zero()) {
            x.pop();
        }
    }
    x
}

/// Sign of the leading coefficient.
pub fn lead_is_negative(p: &Poly) -> bool {
    p.lead().is_some_and(|(_, c)| c.is_negative())
}
