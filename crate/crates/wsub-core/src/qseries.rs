//! Characters as truncated bigraded series in `q` and `z`.
//!
//! A series is `z^{z_offset} q^{q_offset} Σ c_{m,i} q^m z^i`, optionally
//! times the formal comb `Σ_{i∈ℤ} z^i q^{s i}`. Coefficients are kept for
//! `m ≤ q_max` and `|i| ≤ z_max`.

use crate::fock::ell;
use crate::scalar::{Rat, Scalar, LAMBDA};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QseriesError {
    #[error("spectral-flow index {0} is not an integer; half-integer sectors are not supported")]
    NonIntegerSector(String),
    #[error("the multiplier carries z-dependence")]
    ZDependent,
    #[error("cannot multiply two comb factors")]
    CombProduct,
    #[error("negative truncation order")]
    NegativeOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedSeries {
    pub q_offset: Scalar,
    pub z_offset: Scalar,
    pub q_max: i64,
    pub z_max: i64,
    /// `(q-degree, z-degree) → coefficient`, nonzero entries only.
    pub coeffs: BTreeMap<(i64, i64), Scalar>,
    /// Step `s` of the comb factor `Σ_i z^i q^{s i}`, if present.
    pub comb: Option<i64>,
}

impl BigradedSeries {
    /// The constant series `1` truncated at the given orders.
    pub fn one(q_max: i64, z_max: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), Scalar::one());
        BigradedSeries { q_offset: Scalar::zero(), z_offset: Scalar::zero(), q_max, z_max, coeffs, comb: None }
    }

    /// A series in `q` alone from its coefficients `c_0, c_1, …`.
    pub fn from_q_coeffs(q_offset: Scalar, coeffs: &[Scalar], z_max: i64) -> Self {
        let q_max = coeffs.len() as i64 - 1;
        let coeffs = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| ((m as i64, 0), c.clone()))
            .collect();
        BigradedSeries { q_offset, z_offset: Scalar::zero(), q_max, z_max, coeffs, comb: None }
    }

    pub fn coeff(&self, m: i64, i: i64) -> Scalar {
        self.coeffs.get(&(m, i)).cloned().unwrap_or_default()
    }

    /// Coefficients of the `z^0` row as a dense vector `0..=q_max`.
    pub fn q_row(&self) -> Vec<Scalar> {
        (0..=self.q_max.max(0)).map(|m| self.coeff(m, 0)).collect()
    }

    pub fn is_z_independent(&self) -> bool {
        self.comb.is_none() && self.z_offset.is_zero() && self.coeffs.keys().all(|&(_, i)| i == 0)
    }

    fn in_window(&self, m: i64, i: i64) -> bool {
        m <= self.q_max && i.abs() <= self.z_max
    }

    fn prune(mut self) -> Self {
        let (q, z) = (self.q_max, self.z_max);
        self.coeffs.retain(|&(m, i), c| m <= q && i.abs() <= z && !c.is_zero());
        self
    }

    /// Multiplies by the monomial `z^α q^β` in the prefactor.
    pub fn shift(&self, q: &Scalar, z: &Scalar) -> Self {
        let mut out = self.clone();
        out.q_offset = out.q_offset.add(q);
        out.z_offset = out.z_offset.add(z);
        out
    }

    /// Substitutes `z → z q^s`: prefactor, coefficients and comb step all move.
    pub fn substitute_zq(&self, s: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|(&(m, i), c)| ((m + s * i, i), c.clone())).collect();
        BigradedSeries {
            q_offset: self.q_offset.add(&self.z_offset.mul(&Scalar::int(s))),
            z_offset: self.z_offset.clone(),
            q_max: self.q_max,
            z_max: self.z_max,
            coeffs,
            comb: self.comb.map(|c| c + s),
        }
        .prune()
    }

    /// Product, truncated to the common window. At most one factor may carry a comb.
    pub fn mul(&self, o: &BigradedSeries) -> Result<Self, QseriesError> {
        let comb = match (self.comb, o.comb) {
            (Some(_), Some(_)) => return Err(QseriesError::CombProduct),
            (a, b) => a.or(b),
        };
        let q_max = self.q_max.min(o.q_max);
        let z_max = self.z_max.min(o.z_max);
        let mut coeffs: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for (&(m1, i1), c1) in &self.coeffs {
            for (&(m2, i2), c2) in &o.coeffs {
                let key = (m1 + m2, i1 + i2);
                if key.0 <= q_max && key.1.abs() <= z_max {
                    let e = coeffs.entry(key).or_default();
                    *e = e.add(&c1.mul(c2));
                }
            }
        }
        Ok(BigradedSeries {
            q_offset: self.q_offset.add(&o.q_offset),
            z_offset: self.z_offset.add(&o.z_offset),
            q_max,
            z_max,
            coeffs,
            comb,
        }
        .prune())
    }

    /// The comb multiplied out inside the window. Entries that would need
    /// coefficients beyond `q_max` are left out rather than shown truncated.
    pub fn expand_comb(&self) -> Self {
        let Some(s) = self.comb else { return self.clone() };
        let (ilo, ihi) = self.coeffs.keys().fold((0, 0), |(lo, hi), &(_, i)| (lo.min(i), hi.max(i)));
        let complete = |m: i64, i: i64| m - s * i + s * if s >= 0 { ihi } else { ilo } <= self.q_max;
        let mut coeffs: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        for (&(m, i), c) in &self.coeffs {
            for j in -self.z_max - i..=self.z_max - i {
                let key = (m + s * j, i + j);
                if self.in_window(key.0, key.1) && complete(key.0, key.1) {
                    let e = coeffs.entry(key).or_default();
                    *e = e.add(c);
                }
            }
        }
        BigradedSeries { comb: None, coeffs, ..self.clone() }.prune()
    }

    /// Equality modulo the comb's shift invariance `z q^s · comb = comb`.
    pub fn equivalent(&self, o: &BigradedSeries) -> bool {
        if self.comb != o.comb || self.q_max != o.q_max || self.z_max != o.z_max || self.coeffs != o.coeffs {
            return false;
        }
        let dz = self.z_offset.sub(&o.z_offset);
        let dq = self.q_offset.sub(&o.q_offset);
        match self.comb {
            None => dz.is_zero() && dq.is_zero(),
            Some(s) => dz.as_integer().is_some() && dq == dz.mul(&Scalar::int(s)),
        }
    }

    /// Specialises a symbol in the offsets and coefficients.
    pub fn subst(&self, v: usize, value: &Rat) -> Result<Self, crate::ScalarError> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            let c = c.subst(v, value)?;
            if !c.is_zero() {
                coeffs.insert(*k, c);
            }
        }
        Ok(BigradedSeries {
            q_offset: self.q_offset.subst(v, value)?,
            z_offset: self.z_offset.subst(v, value)?,
            coeffs,
            ..self.clone()
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q_offset": self.q_offset.to_string(),
            "z_offset": self.z_offset.to_string(),
            "q_max": self.q_max,
            "z_max": self.z_max,
            "comb_step": self.comb,
            "coeffs": self.coeffs.iter().map(|(&(m, i), c)| json!([m, i, c.to_string()])).collect::<Vec<_>>(),
        })
    }

    /// Aligned table with one row per `q`-degree and one column per `z`-degree.
    pub fn to_table(&self) -> String {
        let mut s = format!("z^({}) q^({})", self.z_offset, self.q_offset);
        if let Some(st) = self.comb {
            s.push_str(&format!(" * sum_i z^i q^({st}i)"));
        }
        s.push('\n');
        let (Some(mlo), Some(mhi)) = (self.coeffs.keys().map(|k| k.0).min(), self.coeffs.keys().map(|k| k.0).max()) else {
            s.push_str("0\n");
            return s;
        };
        let ilo = self.coeffs.keys().map(|k| k.1).min().unwrap_or(0);
        let ihi = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let cells: Vec<Vec<String>> = (mlo..=mhi)
            .map(|m| (ilo..=ihi).map(|i| self.coeff(m, i).to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).chain((ilo..=ihi).map(|i| format!("z^{i}").len())).max().unwrap_or(1);
        s.push_str(&format!("{:>6}", ""));
        for i in ilo..=ihi {
            s.push_str(&format!(" {:>width$}", format!("z^{i}")));
        }
        s.push('\n');
        for (row, m) in cells.iter().zip(mlo..=mhi) {
            s.push_str(&format!("{:>6}", format!("q^{m}")));
            for c in row {
                s.push_str(&format!(" {c:>width$}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Two-colour partition numbers `p_2(0..=q_max)`, coefficients of `Π(1−q^m)^{−2}`.
pub fn two_colour_partitions(q_max: usize) -> Vec<u64> {
    let mut p = vec![0u64; q_max + 1];
    p[0] = 1;
    for m in 1..=q_max {
        for _ in 0..2 {
            for d in m..=q_max {
                p[d] += p[d - m];
            }
        }
    }
    p
}

/// `η(q)^{−2}`, with `q^{−1/12}` in the offset.
pub fn eta_inverse_squared(q_max: i64) -> Result<BigradedSeries, QseriesError> {
    if q_max < 0 {
        return Err(QseriesError::NegativeOrder);
    }
    let coeffs: Vec<Scalar> = two_colour_partitions(q_max as usize).into_iter().map(|c| Scalar::int(c as i64)).collect();
    Ok(BigradedSeries::from_q_coeffs(Scalar::frac(-1, 12), &coeffs, 0))
}

/// Rejects non-integer spectral-flow indices.
pub fn integer_sector(r: &Rat) -> Result<i64, QseriesError> {
    if r.is_integer() {
        num::ToPrimitive::to_i64(r.numer()).ok_or_else(|| QseriesError::NonIntegerSector(r.to_string()))
    } else {
        Err(QseriesError::NonIntegerSector(r.to_string()))
    }
}

/// The symbolic `λ`.
pub fn lambda() -> Scalar {
    Scalar::var(LAMBDA)
}

/// Character of the `Π`-module generated by `e^{rb+λc}`:
/// `z^{(r+1)ℓ} q^{(r+1)(r+2−n)ℓ/2} χ_{−1}(z q^{r+1}, q)` with
/// `χ_{−1} = z^{λ−ℓ} η^{−2} Σ_i z^i`.
pub fn char_pi_module(n: usize, k: &Scalar, r: i64, lambda: &Scalar, q_max: i64, z_max: i64) -> Result<BigradedSeries, QseriesError> {
    if z_max < 0 {
        return Err(QseriesError::NegativeOrder);
    }
    let l = ell(n, k);
    let s = r + 1;
    let eta = eta_inverse_squared(q_max)?;
    let w = lambda.sub(&l);
    let q_offset = Scalar::frac(s * (r + 2 - n as i64), 2).mul(&l).add(&w.mul(&Scalar::int(s))).add(&eta.q_offset);
    let z_offset = w.add(&l.mul(&Scalar::int(s)));
    let mut out = BigradedSeries { q_offset, z_offset, q_max, z_max, coeffs: eta.coeffs, comb: Some(s) };
    out = out.prune();
    Ok(out)
}

/// The `r`-sector character obtained from the `r = −1` one by the flow substitution.
pub fn flow_transform(minus_one: &BigradedSeries, n: usize, k: &Scalar, r: i64) -> BigradedSeries {
    let l = ell(n, k);
    let s = r + 1;
    minus_one
        .substitute_zq(s)
        .shift(&Scalar::frac(s * (r + 2 - n as i64), 2).mul(&l), &l.mul(&Scalar::int(s)))
}

/// `ch(M) · ch(Π-module)` for a `q`-only character of a regular-W module.
pub fn char_tensor(
    m: &BigradedSeries,
    n: usize,
    k: &Scalar,
    r: i64,
    lambda: &Scalar,
    q_max: i64,
    z_max: i64,
) -> Result<BigradedSeries, QseriesError> {
    if !m.is_z_independent() {
        return Err(QseriesError::ZDependent);
    }
    let pi = char_pi_module(n, k, r, lambda, q_max, z_max)?;
    let mut m = m.clone();
    m.z_max = z_max;
    m.mul(&pi)
}

/// The lowest `t_0`-eigenvalue on the `r = −1` module, `(n/2)ℓ`.
pub fn minimal_t0_eigenvalue(n: usize, k: &Scalar) -> Scalar {
    ell(n, k).mul(&Scalar::frac(n as i64, 2))
}
