//! Singular vectors `(G⁺_{-1})^m 𝟙 = e^{mc}` and the level conditions for
//! embeddings of simple quotients.

use super::{RhoFamily, SubregError};
use crate::fock::FieldExpr;
use crate::ope::Engine;
use crate::scalar::{Rat, Scalar};
use num::{Integer, One};

/// `m Π_{i=1}^{j} (i(k+n) − m)`.
pub fn ith_product_closed_form(kn: &Scalar, m: i64, j: usize) -> Scalar {
    (1..=j).fold(Scalar::int(m), |acc, i| acc.mul(&kn.mul(&Scalar::int(i as i64)).sub(&Scalar::int(m))))
}

/// `(e^{mc})_{(j)} (−ρ_{j+1} ⋯ ρ_1 e^{−c})` together with whether it equals
/// `m Π_{i≤j}(i(k+n)−m) e^{(m−1)c}`.
pub fn ith_product_identity(engine: &Engine, rho: &RhoFamily, m: i64, j: usize) -> Result<(FieldExpr, bool), SubregError> {
    let basis = engine.basis();
    if j >= rho.rho.len() {
        return Err(SubregError::IndexOutOfRange(j));
    }
    let em = FieldExpr::exponential(basis.c().scale(&Scalar::int(m)));
    let chain = rho.chain(j + 1, &FieldExpr::exponential(basis.c().neg())).neg();
    let lhs = engine.nth_product(&em, &chain, j as i64)?;
    let expected = FieldExpr::exponential(basis.c().scale(&Scalar::int(m - 1)))
        .scale(&ith_product_closed_form(&basis.kn(), m, j));
    let ok = lhs == expected;
    Ok((lhs, ok))
}

/// `(−1)^{n+1} m Π_{i=1}^n (i(k+n) − m)`, the engine's coefficient of
/// `e^{(m−1)c}` in `G⁻_{(n)} e^{mc}`.
pub fn singular_closed_form(n: usize, kn: &Scalar, m: i64) -> Scalar {
    let v = ith_product_closed_form(kn, m, n);
    if n.is_multiple_of(2) {
        v.neg()
    } else {
        v
    }
}

/// Outcome of the singular-vector test for `(G⁺_{-1})^m 𝟙`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularReport {
    /// `G⁻_{(n)} e^{mc}` as computed.
    pub product: FieldExpr,
    /// Its coefficient of `e^{(m−1)c}`.
    pub coefficient: Scalar,
    /// Whether the product vanishes.
    pub singular: bool,
    /// Whether `i(k+n) = m` for some `1 ≤ i ≤ n`.
    pub predicted: bool,
    /// Whether the coefficient matches the closed form.
    pub closed_form_matches: bool,
}

pub fn singular_vector_check(engine: &Engine, gm: &FieldExpr, m: i64) -> Result<SingularReport, SubregError> {
    let basis = engine.basis();
    let n = basis.n();
    let kn = basis.kn();
    let em = FieldExpr::exponential(basis.c().scale(&Scalar::int(m)));
    let product = engine.nth_product(gm, &em, n as i64)?;
    let target = FieldExpr::exponential(basis.c().scale(&Scalar::int(m - 1)));
    let coefficient = target.terms().next().map(|(mono, _)| product.coeff(mono)).unwrap_or_default();
    let predicted = (1..=n).any(|i| kn.mul(&Scalar::int(i as i64)) == Scalar::int(m));
    let closed = singular_closed_form(n, &kn, m);
    Ok(SingularReport {
        singular: product.is_zero(),
        closed_form_matches: product == target.scale(&closed),
        product,
        coefficient,
        predicted,
    })
}

/// Simple-quotient embedding criterion: `i(k+n) ∉ Z_{≥1}` for all `1 ≤ i ≤ n`.
pub fn simple_quotient_embeds(n: usize, k: &Rat) -> bool {
    let kn = k + Rat::from_integer((n as i64).into());
    (1..=n).all(|i| {
        let v = &kn * Rat::from_integer((i as i64).into());
        !(v.is_integer() && v >= Rat::one())
    })
}

/// Admissible level `k = −n−1 + u/v` with `u ≥ n+1`, `v ≥ 1`, `gcd(u,v) = 1`.
pub fn admissible_level(n: usize, u: i64, v: i64) -> Option<Rat> {
    (u > n as i64 && v >= 1 && u.gcd(&v) == 1)
        .then(|| Rat::new(u.into(), v.into()) - Rat::from_integer((n as i64 + 1).into()))
}

/// The simple-quotient criterion evaluated at an admissible level.
pub fn admissible_embeds(n: usize, u: i64, v: i64) -> Option<bool> {
    admissible_level(n, u, v).map(|k| simple_quotient_embeds(n, &k))
}

/// The admissible-level corollary: embeds iff `v > n`.
pub fn cor_embeds(n: usize, v: i64) -> bool {
    v > n as i64
}
