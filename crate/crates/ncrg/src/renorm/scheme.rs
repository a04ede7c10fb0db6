//! Renormalization schemes and the singular-part projection.

use crate::error::{Error, Result};
use crate::tensor_algebra::{CommInteraction, NcInteraction};

use super::eps::{EpsFunction, Var};

/// A renormalization scheme: a projection of the cutoff-function algebra
/// onto a complement of the functions admitting a limit as `e -> 0`.
///
/// The default scheme projects onto the span of `e^a log^c(e)` with `a < 0`,
/// or `a = 0` and `c > 0`, after expanding exponential factors in `e`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenormScheme;

impl RenormScheme {
    /// Parses a scheme name; only `default` is known.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(Self),
            _ => Err(Error::Parse(format!(
                "unknown renormalization scheme {name:?}"
            ))),
        }
    }

    /// Singular part of a function.
    pub fn project(&self, f: &EpsFunction) -> EpsFunction {
        f.singular_part(Var::Eps)
    }

    /// `true` when the function equals its singular part.
    pub fn is_purely_singular(&self, f: &EpsFunction) -> bool {
        self.project(f) == *f
    }

    /// `true` when the function has a limit as `e -> 0`.
    pub fn has_limit(&self, f: &EpsFunction) -> bool {
        f.has_limit(Var::Eps)
    }
}

/// `Sing`: the scheme projection applied to every coefficient.
pub fn sing(
    interaction: &NcInteraction<EpsFunction>,
    scheme: &RenormScheme,
) -> NcInteraction<EpsFunction> {
    interaction.map(|t| t.map(|f| scheme.project(f)))
}

/// `Sing` for commutative interactions.
pub fn sing_comm(
    interaction: &CommInteraction<EpsFunction>,
    scheme: &RenormScheme,
) -> CommInteraction<EpsFunction> {
    let mut out = CommInteraction::new(interaction.space().clone(), interaction.truncation());
    for (&(i, j), t) in interaction.cells() {
        out.add_symmetric(i, j, &t.map(|f| scheme.project(f)));
    }
    out
}
