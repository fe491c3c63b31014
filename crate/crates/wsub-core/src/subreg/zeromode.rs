//! The zero mode of `G⁻` on relaxed top spaces `v_γ ⊗ e^{−b+xc}`.

use super::{ContentTerm, SubregError};
use crate::fock::{FieldExpr, Monomial};
use crate::ope::Engine;
use crate::scalar::{Scalar, X};

/// `G⁻_0 (v_γ ⊗ e^{−b+xc}) = p(γ,x) v_γ ⊗ e^{−b+(x−1)c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroMode {
    pub p: Scalar,
    /// Coefficients of `p` in `x`, ascending.
    pub coeffs: Vec<Scalar>,
}

impl ZeroMode {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }
}

/// Builds `p(γ, x) = Σ_j γ_j ⟨(Φ_j)_{(n−j−1)} e^{−b+xc}⟩_top` from the
/// decomposition `G⁻ = Σ_j W_j ⊗ Φ_j`, with `γ_0 = −1`, `γ_1 = 0` and
/// `gamma = [γ_2, …, γ_{n+1}]`.
pub fn zero_mode_polynomial(engine: &Engine, gm_content: &[ContentTerm], gamma: &[Scalar]) -> Result<ZeroMode, SubregError> {
    let basis = engine.basis();
    let n = basis.n();
    if gamma.len() != n {
        return Err(SubregError::IndexOutOfRange(gamma.len()));
    }
    let x = Scalar::var(X);
    let mu = basis.b().neg().add(&basis.c().scale(&x));
    let state = FieldExpr::exponential(mu.clone());
    let top = Monomial::new(Default::default(), mu.sub(&basis.c()));
    let mut p = Scalar::zero();
    for term in gm_content {
        let g = match term.j {
            0 => Scalar::int(-1),
            1 => Scalar::zero(),
            j => gamma[j - 2].clone(),
        };
        if g.is_zero() || term.pi.is_zero() {
            continue;
        }
        let idx = n as i64 - term.j as i64 - 1;
        let y = engine.product(&term.pi, &state, idx)?;
        p = p.add(&g.mul(&y.coeff(&top)));
    }
    let coeffs = p.coeffs_in(X).ok_or_else(|| SubregError::Decomposition("p is not polynomial in x".into()))?;
    Ok(ZeroMode { p, coeffs })
}
