//! Screening operators: the inverse-reduction screening `e^{a−ω_1}` and the
//! βγ bosonisation screening `e^{(c+d)/2}`.

use super::SubregError;
use crate::fock::{Basis, FieldExpr};
use crate::ope::{Engine, SingularPart};
use crate::scalar::Scalar;

/// `e^{a − ω_1}`.
pub fn inverse_screening(basis: &Basis) -> FieldExpr {
    FieldExpr::exponential(basis.a().sub(&basis.omega1()))
}

/// Whether `(e^{a−ω_1})_{(0)} x = 0`.
pub fn verify_inverse_screening(engine: &Engine, x: &FieldExpr) -> Result<bool, SubregError> {
    Ok(engine.nth_product(&inverse_screening(engine.basis()), x, 0)?.is_zero())
}

/// Images of `β` and `γ`: `e^c` and `½ :(c+d) e^{-c}:`.
pub fn fms_images(basis: &Basis) -> (FieldExpr, FieldExpr) {
    let beta = FieldExpr::exponential(basis.c());
    let gamma = FieldExpr::exponential(basis.c().neg())
        .apply_creation(&basis.c().add(&basis.d()))
        .scale(&Scalar::frac(1, 2));
    (beta, gamma)
}

/// `e^{(c+d)/2}`.
pub fn fms_screening(basis: &Basis) -> FieldExpr {
    FieldExpr::exponential(basis.c().add(&basis.d()).scale(&Scalar::frac(1, 2)))
}

/// OPEs of the bosonised βγ system and its screening.
#[derive(Clone, Debug)]
pub struct FmsReport {
    pub beta_gamma: SingularPart,
    pub beta_beta: SingularPart,
    pub gamma_gamma: SingularPart,
    pub screens_beta: bool,
    pub screens_gamma: bool,
}

impl FmsReport {
    /// `β(z)γ(w) ∼ −𝟙/(z−w)`, `ββ ∼ 0 ∼ γγ`, both in the screening kernel.
    pub fn holds(&self) -> bool {
        self.beta_gamma.poles == vec![FieldExpr::vacuum().neg()]
            && self.beta_beta.is_empty()
            && self.gamma_gamma.is_empty()
            && self.screens_beta
            && self.screens_gamma
    }
}

pub fn verify_fms(engine: &Engine) -> Result<FmsReport, SubregError> {
    let (beta, gamma) = fms_images(engine.basis());
    let s = fms_screening(engine.basis());
    Ok(FmsReport {
        beta_gamma: engine.singular_part(&beta, &gamma)?,
        beta_beta: engine.singular_part(&beta, &beta)?,
        gamma_gamma: engine.singular_part(&gamma, &gamma)?,
        screens_beta: engine.nth_product(&s, &beta, 0)?.is_zero(),
        screens_gamma: engine.nth_product(&s, &gamma, 0)?.is_zero(),
    })
}
