//! The regular W-algebra of `sl_{n+1}` through its Miura realisation.
//!
//! Operators on [`FieldExpr`] are kept as unexpanded words in translations
//! and creation modes. The Miura fields are
//! `W_s = −E_s((k+n)∂ − (ε_1)_{-1}, …, (k+n)∂ − (ε_{n+1})_{-1}) 𝟙`, where
//! `E_m` is the noncommutative elementary symmetric polynomial with indices
//! descending from left to right.

use crate::fock::{Basis, FieldExpr, FockError, Momentum};
use crate::ope::{Engine, OpeError};
use crate::par;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalgebraError {
    #[error("elementary symmetric degree {m} exceeds {len} operators")]
    DegreeOutOfRange { m: usize, len: usize },
    #[error("Miura index {s} out of range 0..={max}")]
    IndexOutOfRange { s: usize, max: usize },
    #[error("critical level: k + n + 1 vanishes")]
    CriticalLevel,
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error(transparent)]
    Ope(#[from] OpeError),
}

/// Primitive operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prim {
    /// Translation restricted to the symbols in the mask.
    Translate(u64),
    /// The creation mode `μ_{(-1)}`.
    Create(Momentum),
}

impl Prim {
    pub fn apply(&self, x: &FieldExpr) -> FieldExpr {
        match self {
            Prim::Translate(mask) => x.translate(*mask),
            Prim::Create(mu) => x.apply_creation(mu),
        }
    }
}

/// A linear combination of primitives.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Letter(pub Vec<(Scalar, Prim)>);

impl Letter {
    pub fn new(parts: impl IntoIterator<Item = (Scalar, Prim)>) -> Self {
        Letter(parts.into_iter().filter(|(c, _)| !c.is_zero()).collect())
    }

    pub fn apply(&self, x: &FieldExpr) -> FieldExpr {
        let mut out = FieldExpr::zero();
        for (c, p) in &self.0 {
            out.add_scaled(&p.apply(x), c);
        }
        out
    }
}

/// A formal sum of composition words; each word applies its letters right to left.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OperatorWord {
    pub words: Vec<(Scalar, Vec<Letter>)>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        OperatorWord { words: vec![(Scalar::one(), Vec::new())] }
    }

    pub fn zero() -> Self {
        OperatorWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        OperatorWord { words: vec![(Scalar::one(), vec![l])] }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn add(&self, o: &OperatorWord) -> OperatorWord {
        OperatorWord { words: self.words.iter().chain(&o.words).cloned().collect() }
    }

    pub fn scale(&self, s: &Scalar) -> OperatorWord {
        if s.is_zero() {
            return OperatorWord::zero();
        }
        OperatorWord { words: self.words.iter().map(|(c, w)| (c.mul(s), w.clone())).collect() }
    }

    /// `self ∘ o`: `o` acts first.
    pub fn compose(&self, o: &OperatorWord) -> OperatorWord {
        let mut words = Vec::with_capacity(self.words.len() * o.words.len());
        for (ca, wa) in &self.words {
            for (cb, wb) in &o.words {
                words.push((ca.mul(cb), wa.iter().chain(wb).cloned().collect()));
            }
        }
        OperatorWord { words }
    }

    pub fn apply(&self, x: &FieldExpr) -> FieldExpr {
        let parts = par::map(par::Exec::default(), &self.words, |(c, w)| {
            w.iter().rev().fold(x.clone(), |acc, l| l.apply(&acc)).scale(c)
        });
        parts.iter().fold(FieldExpr::zero(), |acc, p| acc.add(p))
    }
}

/// `E_m(ω_1..ω_r) = Σ_{i_1 > … > i_m} ω_{i_1} ∘ … ∘ ω_{i_m}` as words.
pub fn elementary_symmetric(ops: &[OperatorWord], m: usize) -> Result<OperatorWord, WalgebraError> {
    if m > ops.len() {
        return Err(WalgebraError::DegreeOutOfRange { m, len: ops.len() });
    }
    fn rec(ops: &[OperatorWord], m: usize, top: usize, acc: &OperatorWord, out: &mut OperatorWord) {
        if m == 0 {
            out.words.extend(acc.words.iter().cloned());
            return;
        }
        for i in (m - 1..top).rev() {
            rec(ops, m - 1, i, &acc.compose(&ops[i]), out);
        }
    }
    let mut out = OperatorWord::zero();
    rec(ops, m, ops.len(), &OperatorWord::identity(), &mut out);
    Ok(out)
}

/// `E_m(ω_1..ω_r) X`, by `E_m(ω_1..ω_i) = E_m(ω_1..ω_{i-1}) + ω_i E_{m-1}(ω_1..ω_{i-1})`.
pub fn apply_elementary(ops: &[OperatorWord], m: usize, x: &FieldExpr) -> Result<FieldExpr, WalgebraError> {
    if m > ops.len() {
        return Err(WalgebraError::DegreeOutOfRange { m, len: ops.len() });
    }
    // row[j] = E_j(ω_1..ω_i) X
    let mut row = vec![FieldExpr::zero(); m + 1];
    row[0] = x.clone();
    for (i, op) in ops.iter().enumerate() {
        for j in (1..=m.min(i + 1)).rev() {
            let next = row[j].add(&op.apply(&row[j - 1]));
            row[j] = next;
        }
    }
    Ok(row.swap_remove(m))
}

/// The Miura operators `(k+n)∂ − (ε_i)_{-1}`, `i = 1..n+1`.
pub fn miura_operators(basis: &Basis) -> Result<Vec<OperatorWord>, WalgebraError> {
    let kn = basis.kn();
    (1..=basis.n() + 1)
        .map(|i| {
            let eps = basis.epsilon(i)?;
            Ok(OperatorWord::letter(Letter::new([
                (kn.clone(), Prim::Translate(basis.alpha_mask())),
                (Scalar::int(-1), Prim::Create(eps)),
            ])))
        })
        .collect()
}

/// `W_s`, `0 ≤ s ≤ n+1`.
pub fn miura_field(basis: &Basis, s: usize) -> Result<FieldExpr, WalgebraError> {
    let n = basis.n();
    if s > n + 1 {
        return Err(WalgebraError::IndexOutOfRange { s, max: n + 1 });
    }
    let ops = miura_operators(basis)?;
    Ok(apply_elementary(&ops, s, &FieldExpr::vacuum())?.neg())
}

/// All of `W_0..W_{n+1}`.
pub fn miura_fields(basis: &Basis) -> Result<Vec<FieldExpr>, WalgebraError> {
    (0..=basis.n() + 1).map(|s| miura_field(basis, s)).collect()
}

fn critical_inverse(basis: &Basis) -> Result<Scalar, WalgebraError> {
    basis.kn().add(&Scalar::one()).inv().map_err(|_| WalgebraError::CriticalLevel)
}

/// `T = W_2 / (k+n+1)`.
pub fn regular_em_field(basis: &Basis) -> Result<FieldExpr, WalgebraError> {
    let inv = critical_inverse(basis)?;
    Ok(miura_field(basis, 2)?.scale(&inv))
}

/// `−n((n+1)(k−1)+n²+2n)((n+2)k+(n+1)²)/(k+n+1)`.
pub fn regular_central_charge(n: usize, k: &Scalar) -> Result<Scalar, WalgebraError> {
    let n = n as i64;
    let f1 = k.sub(&Scalar::one()).mul(&Scalar::int(n + 1)).add(&Scalar::int(n * n + 2 * n));
    let f2 = k.mul(&Scalar::int(n + 2)).add(&Scalar::int((n + 1) * (n + 1)));
    let den = k.add(&Scalar::int(n + 1));
    Scalar::int(-n).mul(&f1).mul(&f2).try_div(&den).map_err(|_| WalgebraError::CriticalLevel)
}

/// Screening field `e^{−α_i/(k+n+1)}`.
pub fn regular_screening(basis: &Basis, i: usize) -> Result<FieldExpr, WalgebraError> {
    if i == 0 || i > basis.n() {
        return Err(WalgebraError::Fock(FockError::IndexOutOfRange { index: i, max: basis.n() }));
    }
    let inv = critical_inverse(basis)?;
    Ok(FieldExpr::exponential(basis.alpha(i).scale(&inv.neg())))
}

/// Whether the `i`-th regular screening's zero mode annihilates `x`.
pub fn verify_regular_screening(engine: &Engine, i: usize, x: &FieldExpr) -> Result<bool, WalgebraError> {
    let s = regular_screening(engine.basis(), i)?;
    Ok(engine.nth_product(&s, x, 0)?.is_zero())
}

/// Both sides of the Miura factorisation applied to `x`:
/// `E_{n+1}(ω) x` and `−Σ_s W_s · ((k+n)∂)^{n+1−s} x`, with `W_s ·` the
/// multiplication of creation polynomials.
pub fn miura_factorisation(basis: &Basis, x: &FieldExpr) -> Result<(FieldExpr, FieldExpr), WalgebraError> {
    let n = basis.n();
    let ops = miura_operators(basis)?;
    let lhs = apply_elementary(&ops, n + 1, x)?;
    let kn = basis.kn();
    let mut rhs = FieldExpr::zero();
    let mut dx = x.clone();
    let mut derivs = vec![x.clone()];
    for _ in 0..=n {
        dx = dx.translate(basis.alpha_mask()).scale(&kn);
        derivs.push(dx.clone());
    }
    for s in 0..=n + 1 {
        let w = miura_field(basis, s)?;
        rhs = rhs.sub(&w.mul_creation(&derivs[n + 1 - s]));
    }
    Ok((lhs, rhs))
}
