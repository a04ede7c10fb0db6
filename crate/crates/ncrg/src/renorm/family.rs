//! Propagator families `P(e, L)` with entries in the cutoff-function algebra.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rgflow::check_propagator;
use crate::scalar::{matmul, Rational, Scalar};
use crate::tensor_algebra::heat::diagonal_eigenvalues;
use crate::tensor_algebra::{identity_matrix, GradedSpace, Tensor, Theory};

use super::eps::{EpsFunction, Var};

/// A symmetric degree-zero two-tensor `P(e, L)` whose entries are functions
/// of the cutoffs `e` and `L`, with `P(L, e) = -P(e, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PropagatorFamily {
    space: Arc<GradedSpace>,
    tensor: Tensor<EpsFunction>,
}

/// `int_e^L exp(-lambda t) dt`.
fn integrated_exponential(lambda: &Rational) -> EpsFunction {
    if lambda.is_zero() {
        return EpsFunction::var(Var::L).sub(&EpsFunction::var(Var::Eps));
    }
    let inv = Rational::one() / lambda;
    EpsFunction::exp_decay(Var::Eps, lambda.clone())
        .sub(&EpsFunction::exp_decay(Var::L, lambda.clone()))
        .scale(&inv)
}

impl PropagatorFamily {
    /// Builds a family from `P(e, L)`.
    ///
    /// # Errors
    /// Fails unless `P` is symmetric of degree zero, depends only on `e` and
    /// `L`, and satisfies `P(L, e) = -P(e, L)`.
    pub fn new(space: Arc<GradedSpace>, tensor: Tensor<EpsFunction>) -> Result<Self> {
        check_propagator(&space, &tensor)?;
        for (_, f) in tensor.iter() {
            if f.depends_on(Var::M) || f.depends_on(Var::T) {
                return Err(Error::Algebra(
                    "family entries may only involve e and L".into(),
                ));
            }
        }
        let swapped = tensor.map(|f| f.swap(Var::Eps, Var::L));
        if swapped != tensor.neg() {
            return Err(Error::Algebra(
                "family must satisfy P(L,e) = -P(e,L)".into(),
            ));
        }
        Ok(Self { space, tensor })
    }

    /// `(L - e) R + (1/e - 1/L) S` for symmetric degree-zero rational tensors
    /// `R` (regular part) and `S` (injected singular part).
    pub fn injected(
        space: Arc<GradedSpace>,
        regular: &Tensor<Rational>,
        singular: &Tensor<Rational>,
    ) -> Result<Self> {
        let lin = EpsFunction::var(Var::L).sub(&EpsFunction::var(Var::Eps));
        let pole = EpsFunction::power(Var::Eps, -1).sub(&EpsFunction::power(Var::L, -1));
        let mut t = regular.convert(|q| lin.scale(q));
        t.add_assign(&singular.convert(|q| pole.scale(q)));
        Self::new(space, t)
    }

    /// Field space.
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    /// `P(e, L)`.
    pub fn tensor(&self) -> &Tensor<EpsFunction> {
        &self.tensor
    }

    /// `P(a, b)` for two cutoff variables, obtained by renaming `e -> a`, `L -> b`.
    pub fn between(&self, a: Var, b: Var) -> Tensor<EpsFunction> {
        const SPARE: Var = Var::T;
        self.tensor
            .map(|f| f.rename(Var::L, SPARE).rename(Var::Eps, a).rename(SPARE, b))
    }

    /// `true` when every entry has a limit as `e -> 0`.
    pub fn is_regular(&self) -> bool {
        self.tensor.iter().all(|(_, f)| f.has_limit(Var::Eps))
    }
}

/// The canonical family `P(e, L) = int_e^L (D (x) 1) K_t dt` of a theory
/// with diagonal `H`, where `D` defaults to the identity.
///
/// # Errors
/// Fails when `H` is not diagonal, when `D` is missing for a pairing of
/// nonzero degree, when `D` is not self-adjoint of the pairing
/// degree, when `D` does not commute with `H`, or when the result is not symmetric.
pub fn canonical_family(theory: &Theory) -> Result<PropagatorFamily> {
    let d = theory.space.dim();
    let lambda = diagonal_eigenvalues(&theory.h)?;
    let dmat = match &theory.d {
        Some(m) => {
            theory.check_self_adjoint(m, theory.pairing.degree, "D")?;
            m.clone()
        }
        None if theory.pairing.degree != 0 => {
            return Err(Error::Algebra(
                "D is required when the pairing has nonzero degree".into(),
            ));
        }
        None => identity_matrix(d),
    };
    if matmul(&dmat, &theory.h) != matmul(&theory.h, &dmat) {
        return Err(Error::Algebra("D does not commute with H".into()));
    }
    let inv = theory.pairing.inverse_matrix()?;
    let odd_pairing = theory.pairing.degree.rem_euclid(2) == 1;
    let mut p = Tensor::zero(2);
    for a in 0..d {
        let row_odd = odd_pairing && !theory.space.parity(a as u8);
        let integral = integrated_exponential(&lambda[a]);
        for b in 0..d {
            if inv[a][b].is_zero() {
                continue;
            }
            for c in 0..d {
                if dmat[c][a].is_zero() {
                    continue;
                }
                let q = &dmat[c][a] * &inv[a][b];
                let q = if row_odd { -q } else { q };
                p.add_entry(vec![c as u8, b as u8], integral.scale(&q));
            }
        }
    }
    PropagatorFamily::new(theory.space.clone(), p)
}
