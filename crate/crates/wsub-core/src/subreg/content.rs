//! Regular content of the generators: splitting fields of `H_α ⊗ Π` into
//! Miura fields tensored with Π-fields.

use super::{GeneratorSet, RhoFamily, SubregError};
use crate::fock::{Basis, FieldExpr, Monomial};
use crate::scalar::{binomial, Scalar};
use crate::walgebra::{apply_elementary, miura_fields, Letter, OperatorWord, Prim};
use std::collections::BTreeMap;

/// Which generator to decompose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    U(usize),
    UTop,
    Gminus,
}

/// One summand `W_j ⊗ π_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentTerm {
    pub j: usize,
    pub w: FieldExpr,
    pub pi: FieldExpr,
}

fn split(basis: &Basis, m: &Monomial) -> (Monomial, Monomial) {
    (m.restrict(basis.alpha_mask()), m.restrict(basis.pi_mask()))
}

/// Writes `x = Σ_{j ≤ top} W_j ⊗ π_j`, failing on any residual term that is
/// not of this form (in particular on derivatives or products of Miura fields).
pub fn decompose(basis: &Basis, x: &FieldExpr, top: usize) -> Result<Vec<ContentTerm>, SubregError> {
    let ws = miura_fields(basis)?;
    let mut by_degree: BTreeMap<i64, FieldExpr> = BTreeMap::new();
    for (m, c) in x.terms() {
        let (a, _) = split(basis, m);
        by_degree.entry(a.osc_degree()).or_default().add_term(m.clone(), c.clone());
    }
    if let Some((&d, _)) = by_degree.iter().next_back() {
        if d as usize > top {
            return Err(SubregError::Decomposition(format!("H_alpha degree {d} exceeds {top}")));
        }
    }
    let mut out = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let xd = by_degree.remove(&(j as i64)).unwrap_or_default();
        let w = ws[j].clone();
        let Some((m0, w0)) = w.terms().next() else {
            if !xd.is_zero() {
                return Err(SubregError::Decomposition(format!("degree {j} part present but W_{j} vanishes")));
            }
            out.push(ContentTerm { j, w, pi: FieldExpr::zero() });
            continue;
        };
        let inv = w0.inv()?;
        let mut pi = FieldExpr::zero();
        for (m, c) in xd.terms() {
            let (a, p) = split(basis, m);
            if &a == m0 {
                pi.add_term(p, c.mul(&inv));
            }
        }
        let residual = xd.sub(&w.mul_creation(&pi));
        if !residual.is_zero() {
            return Err(SubregError::Decomposition(format!(
                "degree {j} residual {}",
                basis.to_text(&residual)
            )));
        }
        out.push(ContentTerm { j, w, pi });
    }
    Ok(out)
}

/// Regular-content decomposition of a generator.
pub fn decompose_regular_content(basis: &Basis, gens: &GeneratorSet, which: Target) -> Result<Vec<ContentTerm>, SubregError> {
    let n = gens.n;
    let (x, top) = match which {
        Target::U(i) => (gens.u.get(&i).ok_or(SubregError::IndexOutOfRange(i))?, i),
        Target::UTop => (&gens.u_top, n + 1),
        Target::Gminus => (&gens.gm, n + 1),
    };
    decompose(basis, x, top)
}

/// `π^{−,j} = ((k+n) t_{-1} + a_{-1})^{n+1−j} 𝟙_Π`.
pub fn pi_minus(basis: &Basis, j: usize) -> FieldExpr {
    let op = OperatorWord::letter(Letter::new([
        (basis.kn(), Prim::Translate(basis.pi_mask())),
        (Scalar::one(), Prim::Create(basis.a())),
    ]));
    let p = (basis.n() + 1).saturating_sub(j);
    (0..p).fold(FieldExpr::vacuum(), |acc, _| op.apply(&acc))
}

/// Both sides of `E_m(ρ) = Σ_j C(n+1−j, m−j) E_j(σ) u^{m−j}` applied to `x`.
pub fn lemma_sympolys(basis: &Basis, rho: &RhoFamily, m: usize, x: &FieldExpr) -> Result<(FieldExpr, FieldExpr), SubregError> {
    let n = basis.n();
    let lhs = apply_elementary(&rho.rho, m, x)?;
    let mut rhs = FieldExpr::zero();
    let mut upow = vec![x.clone()];
    for _ in 0..m {
        let next = rho.u.apply(upow.last().expect("nonempty"));
        upow.push(next);
    }
    for j in 0..=m {
        let c = binomial((n + 1 - j) as i64, (m - j) as i64);
        if num::Zero::is_zero(&c) {
            continue;
        }
        let e = apply_elementary(&rho.sigma, j, &upow[m - j])?;
        rhs.add_scaled(&e, &Scalar::rat(c));
    }
    Ok((lhs, rhs))
}
