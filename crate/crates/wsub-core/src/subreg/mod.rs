//! The subregular W-algebra of `sl_{n+1}` inside `W(sl_{n+1}) ⊗ Π`.
//!
//! Generators are built from the operators
//! `ρ_0 = (k+n)(∂ + c_{-1})` and
//! `ρ_i = (k+n)∂ + b_{-1} + ((k+n+1)/(n+1)) c_{-1} − (ε_i)_{-1}`:
//! `L = T + t`, `J = b`, `G⁺ = e^c`, `G⁻ = −E_{n+1}(ρ_1..ρ_{n+1}) e^{-c}` and
//! `U_i = Σ_j (−1)^{i+j} Π_{m≤j} (m(k+n)+1)/(m(k+n)) E_{i−j}(ρ) ρ_0^j 𝟙`.

mod content;
mod flow;
mod linalg;
mod screening;
mod singular;
mod zeromode;

pub use content::{decompose_regular_content, lemma_sympolys, pi_minus, ContentTerm, Target};
pub use flow::{flow_mode, spectral_flow_weight, Mode, ModeImage};
pub use linalg::solve;
pub use screening::{
    fms_images, fms_screening, inverse_screening, verify_fms, verify_inverse_screening, FmsReport,
};
pub use singular::{
    admissible_embeds, cor_embeds, ith_product_closed_form, ith_product_identity, simple_quotient_embeds,
    singular_closed_form, singular_vector_check, SingularReport,
};
pub use zeromode::{zero_mode_polynomial, ZeroMode};

use crate::fock::{Basis, FieldExpr, FockError, Momentum};
use crate::ope::{Engine, OpeError};
use crate::scalar::{Scalar, ScalarError, K};
use crate::walgebra::{self, apply_elementary, Letter, OperatorWord, Prim, WalgebraError};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubregError {
    #[error("the apparent pole at k = -n cannot be cancelled at a specialised level k = -n")]
    SpecialisedApparentPole,
    #[error("a (k+n) factor survives in the denominator of U_{0}")]
    UncancelledPole(usize),
    #[error("critical level: k + n + 1 vanishes")]
    CriticalLevel,
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("linear system for L in terms of U_2, dJ, :JJ: has no unique solution")]
    NoSolution,
    #[error("coefficient a_1 of U_2 vanishes")]
    DegenerateA1,
    #[error(transparent)]
    Walgebra(#[from] WalgebraError),
    #[error(transparent)]
    Ope(#[from] OpeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// `ρ_0, …, ρ_{n+1}` together with `σ_i` and `u` of the symmetric-polynomial lemma.
#[derive(Clone, Debug)]
pub struct RhoFamily {
    pub rho0: OperatorWord,
    pub rho: Vec<OperatorWord>,
    pub sigma: Vec<OperatorWord>,
    pub u: OperatorWord,
}

impl RhoFamily {
    pub fn new(basis: &Basis) -> Result<Self, SubregError> {
        let n = basis.n();
        let kn = basis.kn();
        let all = u64::MAX;
        let shift = basis.b().add(&basis.c().scale(&kn.add(&Scalar::one()).mul(&Scalar::frac(1, n as i64 + 1))));
        let rho0 = OperatorWord::letter(Letter::new([
            (kn.clone(), Prim::Translate(all)),
            (kn.clone(), Prim::Create(basis.c())),
        ]));
        let mut rho = Vec::with_capacity(n + 1);
        let mut sigma = Vec::with_capacity(n + 1);
        for i in 1..=n + 1 {
            let eps = basis.epsilon(i)?;
            rho.push(OperatorWord::letter(Letter::new([
                (kn.clone(), Prim::Translate(all)),
                (Scalar::one(), Prim::Create(shift.sub(&eps))),
            ])));
            sigma.push(OperatorWord::letter(Letter::new([
                (kn.clone(), Prim::Translate(basis.alpha_mask())),
                (Scalar::int(-1), Prim::Create(eps)),
            ])));
        }
        let u = OperatorWord::letter(Letter::new([
            (kn.clone(), Prim::Translate(basis.pi_mask())),
            (Scalar::one(), Prim::Create(shift)),
        ]));
        Ok(RhoFamily { rho0, rho, sigma, u })
    }

    /// `ρ_{j} ∘ … ∘ ρ_1` applied to `x`.
    pub fn chain(&self, j: usize, x: &FieldExpr) -> FieldExpr {
        self.rho[..j].iter().fold(x.clone(), |acc, r| r.apply(&acc))
    }
}

/// Named strong generators with their weights (for `L`) and `J`-charges.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub field: FieldExpr,
    pub weight: Option<Scalar>,
    pub charge: Option<Scalar>,
}

/// Strong generators of the rank-`n` subregular algebra.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub n: usize,
    pub l: FieldExpr,
    pub j: FieldExpr,
    pub gp: FieldExpr,
    pub gm: FieldExpr,
    /// `U_3..U_n`.
    pub u: BTreeMap<usize, FieldExpr>,
    /// `U_{n+1} = (−1)^n :G⁺ G⁻:`.
    pub u_top: FieldExpr,
    /// `(a_1, a_2, a_3)` with `L = a_1 U_2 + a_2 ∂J + a_3 :JJ:`.
    pub l_coeffs: [Scalar; 3],
    pub table: Vec<Generator>,
}

impl GeneratorSet {
    /// `L̃ = L − ((n−1)/2) ∂J`.
    pub fn l_tilde(&self) -> FieldExpr {
        self.l.sub(&self.j.derivative().scale(&Scalar::frac(self.n as i64 - 1, 2)))
    }

    pub fn get(&self, name: &str) -> Option<&FieldExpr> {
        self.table.iter().find(|g| g.name == name).map(|g| &g.field)
    }
}

/// `L = T + t`.
pub fn energy_momentum(basis: &Basis) -> Result<FieldExpr, SubregError> {
    Ok(walgebra::regular_em_field(basis)?.add(&basis.t()))
}

/// `G⁻ = −E_{n+1}(ρ_1..ρ_{n+1}) e^{-c}`.
pub fn g_minus(basis: &Basis, rho: &RhoFamily) -> FieldExpr {
    rho.chain(basis.n() + 1, &FieldExpr::exponential(basis.c().neg())).neg()
}

/// `U_i` for `0 ≤ i ≤ n+1` from the ρ-operator formula, with the `(k+n)`
/// denominators cleared before the division.
pub fn u_field(basis: &Basis, rho: &RhoFamily, i: usize) -> Result<FieldExpr, SubregError> {
    let n = basis.n();
    if i > n + 1 {
        return Err(SubregError::IndexOutOfRange(i));
    }
    let kn = basis.kn();
    if kn.is_zero() && i > 0 {
        return Err(SubregError::SpecialisedApparentPole);
    }
    let mk = |m: usize| kn.mul(&Scalar::int(m as i64));
    let denom = (1..=i).fold(Scalar::one(), |acc, m| acc.mul(&mk(m)));
    let mut total = FieldExpr::zero();
    let mut rho0_pow = FieldExpr::vacuum();
    for j in 0..=i {
        if j > 0 {
            rho0_pow = rho.rho0.apply(&rho0_pow);
        }
        let num = (1..=j).fold(Scalar::one(), |acc, m| acc.mul(&mk(m).add(&Scalar::one())));
        let rest = (j + 1..=i).fold(Scalar::one(), |acc, m| acc.mul(&mk(m)));
        let sign = if (i + j).is_multiple_of(2) { 1 } else { -1 };
        let coeff = num.mul(&rest).mul(&Scalar::int(sign));
        let e = apply_elementary(&rho.rho, i - j, &rho0_pow)?;
        total.add_scaled(&e, &coeff);
    }
    let inv = denom.inv()?;
    let out = total.scale(&inv);
    if kn.symbol_mask() & (1 << K) != 0 {
        let at = crate::Rat::from_integer((-(n as i64)).into());
        if out.terms().any(|(_, c)| c.subst(K, &at).is_err()) {
            return Err(SubregError::UncancelledPole(i));
        }
    }
    Ok(out)
}

/// Solves `L = a_1 U_2 + a_2 ∂J + a_3 :JJ:` coefficientwise.
pub fn l_in_terms_of_u2(engine: &Engine, l: &FieldExpr, u2: &FieldExpr, j: &FieldExpr) -> Result<[Scalar; 3], SubregError> {
    let jj = engine.normally_ordered(j, j)?;
    let dj = j.derivative();
    let cols = [u2, &dj, &jj];
    let mut monos: Vec<_> = cols.iter().flat_map(|f| f.terms().map(|(m, _)| m.clone())).collect();
    monos.extend(l.terms().map(|(m, _)| m.clone()));
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Scalar>> = monos.iter().map(|m| cols.iter().map(|f| f.coeff(m)).collect()).collect();
    let rhs: Vec<Scalar> = monos.iter().map(|m| l.coeff(m)).collect();
    let sol = solve(&rows, &rhs).ok_or(SubregError::NoSolution)?;
    if sol[0].is_zero() {
        return Err(SubregError::DegenerateA1);
    }
    Ok([sol[0].clone(), sol[1].clone(), sol[2].clone()])
}

/// Builds all strong generators and records their `L`-weights and `J`-charges.
pub fn strong_generators(engine: &Engine) -> Result<GeneratorSet, SubregError> {
    let basis = engine.basis();
    let n = basis.n();
    if basis.kn().add(&Scalar::one()).is_zero() {
        return Err(SubregError::CriticalLevel);
    }
    let rho = RhoFamily::new(basis)?;
    let l = energy_momentum(basis)?;
    let j = FieldExpr::from_momentum(&basis.b());
    let gp = FieldExpr::exponential(basis.c());
    let gm = g_minus(basis, &rho);
    let mut u = BTreeMap::new();
    for i in 3..=n {
        u.insert(i, u_field(basis, &rho, i)?);
    }
    let sign = if n.is_multiple_of(2) { Scalar::one() } else { Scalar::int(-1) };
    let u_top = engine.normally_ordered(&gp, &gm)?.scale(&sign);
    let u2 = u_field(basis, &rho, 2)?;
    let l_coeffs = l_in_terms_of_u2(engine, &l, &u2, &j)?;
    let mut named: Vec<(String, FieldExpr)> =
        vec![("L".into(), l.clone()), ("J".into(), j.clone()), ("Gp".into(), gp.clone()), ("Gm".into(), gm.clone())];
    for (i, f) in &u {
        named.push((format!("U{i}"), f.clone()));
    }
    let table = named
        .into_iter()
        .map(|(name, field)| {
            let weight = engine.conformal_weight(&l, &field)?;
            let y = engine.product(&j, &field, 0)?;
            let charge = engine.j_charge(&field).filter(|c| y == field.scale(c));
            Ok(Generator { name, field, weight, charge })
        })
        .collect::<Result<Vec<_>, SubregError>>()?;
    Ok(GeneratorSet { n, l, j, gp, gm, u, u_top, l_coeffs, table })
}

/// `(n(k+n)−1)(k(n−1)(n²+5n−2)+(n+1)(n³+3n²−9n+2)) / ((n+1)(k+n+1))`, negated.
pub fn subregular_central_charge(n: usize, k: &Scalar) -> Result<Scalar, SubregError> {
    let ni = n as i64;
    let f1 = k.add(&Scalar::int(ni)).mul(&Scalar::int(ni)).sub(&Scalar::one());
    let f2 = k
        .mul(&Scalar::int((ni - 1) * (ni * ni + 5 * ni - 2)))
        .add(&Scalar::int((ni + 1) * (ni * ni * ni + 3 * ni * ni - 9 * ni + 2)));
    let den = k.add(&Scalar::int(ni + 1)).mul(&Scalar::int(ni + 1));
    f1.mul(&f2).neg().try_div(&den).map_err(|_| SubregError::CriticalLevel)
}

/// `2 + 12 n ℓ_n(k)`.
pub fn pi_central_charge(n: usize, k: &Scalar) -> Scalar {
    Scalar::int(2).add(&crate::fock::ell(n, k).mul(&Scalar::int(12 * n as i64)))
}

/// `(Subcc, Regcc, Πcc)`.
pub fn central_charges(n: usize, k: &Scalar) -> Result<(Scalar, Scalar, Scalar), SubregError> {
    Ok((subregular_central_charge(n, k)?, walgebra::regular_central_charge(n, k)?, pi_central_charge(n, k)))
}

/// `λ_j(n,k) = Π_{m=1}^j (m(k+n) − 1)`.
pub fn lambda_j(j: usize, kn: &Scalar) -> Scalar {
    (1..=j).fold(Scalar::one(), |acc, m| acc.mul(&kn.mul(&Scalar::int(m as i64)).sub(&Scalar::one())))
}

/// Momentum helper for module states `e^{−b+xc}` and the like.
pub fn momentum(basis: &Basis, b: Scalar, c: Scalar) -> Momentum {
    basis.b().scale(&b).add(&basis.c().scale(&c))
}
