//! Spectral flow `σ^ℓ` on weights and on mode labels.

use crate::fock::ell;
use crate::scalar::Scalar;
use std::fmt;

/// A mode of a strong generator; `Lt` is `L̃ = L − ((n−1)/2)∂J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Gp(i64),
    Gm(i64),
    J(i64),
    L(i64),
    Lt(i64),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Gp(m) => write!(f, "G+_{{{m}}}"),
            Mode::Gm(m) => write!(f, "G-_{{{m}}}"),
            Mode::J(m) => write!(f, "J_{{{m}}}"),
            Mode::L(m) => write!(f, "L_{{{m}}}"),
            Mode::Lt(m) => write!(f, "Lt_{{{m}}}"),
        }
    }
}

/// `Σ c·mode + constant·𝟙`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeImage {
    pub terms: Vec<(Scalar, Mode)>,
    pub constant: Scalar,
}

impl fmt::Display for ModeImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| if c.is_one() { m.to_string() } else { format!("({c})*{m}") })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(format!("({})*1", self.constant));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn delta(m: i64) -> Scalar {
    if m == 0 {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

/// `σ^ℓ` of a mode.
pub fn flow_mode(n: usize, k: &Scalar, l: i64, mode: Mode) -> ModeImage {
    let ln = ell(n, k);
    let li = Scalar::int(l);
    let one = |m| vec![(Scalar::one(), m)];
    match mode {
        Mode::Gp(m) => ModeImage { terms: one(Mode::Gp(m - l)), constant: Scalar::zero() },
        Mode::Gm(m) => ModeImage { terms: one(Mode::Gm(m + l)), constant: Scalar::zero() },
        Mode::J(m) => ModeImage { terms: one(Mode::J(m)), constant: ln.mul(&li).neg().mul(&delta(m)) },
        Mode::Lt(m) => ModeImage {
            terms: vec![(Scalar::one(), Mode::Lt(m)), (li.neg(), Mode::J(m))],
            constant: ln.mul(&Scalar::int(l * l)).mul(&Scalar::frac(1, 2)).mul(&delta(m)),
        },
        Mode::L(m) => ModeImage {
            terms: vec![(Scalar::one(), Mode::L(m)), (li.neg(), Mode::J(m))],
            constant: ln.mul(&Scalar::int(l * l + l * (n as i64 - 1))).mul(&Scalar::frac(1, 2)).mul(&delta(m)),
        },
    }
}

/// Weight `(j, Δ)` of `σ^ℓ(v)` for a weight vector `v` of charge `j` and
/// `L̃_0`-eigenvalue `Δ`: `(j + ℓ_n ℓ, Δ + jℓ + ℓ_n ℓ²/2)`.
pub fn spectral_flow_weight(n: usize, k: &Scalar, j: &Scalar, delta: &Scalar, l: i64) -> (Scalar, Scalar) {
    let ln = ell(n, k);
    let li = Scalar::int(l);
    let j2 = j.add(&ln.mul(&li));
    let d2 = delta.add(&j.mul(&li)).add(&ln.mul(&Scalar::int(l * l)).mul(&Scalar::frac(1, 2)));
    (j2, d2)
}
