//! Counterterms by lexicographic induction and renormalized effective theories.

use crate::error::{Error, Result};
use crate::rgflow::{flow_comm_cells, flow_nc_cells, tree_flow};
use crate::scalar::{Rational, Scalar};
use crate::tensor_algebra::{Cell, CommInteraction, NcInteraction};

use super::eps::{EpsFunction, Var};
use super::family::PropagatorFamily;
use super::scheme::{sing, sing_comm, RenormScheme};

/// Purely singular counterterms, one cell per induction stage.
#[derive(Clone, Debug, PartialEq)]
pub struct CountertermSeries {
    /// The counterterms as an interaction with coefficients in `e`.
    pub interaction: NcInteraction<EpsFunction>,
    /// Cells in the order in which they were produced.
    pub stages: Vec<Cell>,
}

/// Lifts a rational interaction to the cutoff-function algebra.
pub fn to_eps(interaction: &NcInteraction<Rational>) -> NcInteraction<EpsFunction> {
    interaction.convert(EpsFunction::from_rational)
}

/// Lifts a rational commutative interaction to the cutoff-function algebra.
pub fn to_eps_comm(interaction: &CommInteraction<Rational>) -> CommInteraction<EpsFunction> {
    interaction.convert(EpsFunction::from_rational)
}

fn depends_on_l(t: &NcInteraction<EpsFunction>) -> bool {
    t.cells().any(|(_, d)| {
        d.values()
            .any(|x| x.iter().any(|(_, f)| f.depends_on(Var::L)))
    })
}

/// Counterterms of `I` for a family and scheme, on every cell of the
/// truncation of `I`, visited in lexicographic order:
/// `I^CT_c = Sing[W_c(I - I^CT_{<c}(e), P(e, L))]`.
///
/// # Errors
/// Fails when a counterterm depends on `L`, or when the flow of
/// `I - I^CT` still has a singular part in some cell afterwards.
pub fn counterterms(
    interaction: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    scheme: &RenormScheme,
) -> Result<CountertermSeries> {
    interaction.validate()?;
    let p = family.tensor();
    let mut ct = NcInteraction::new(interaction.space().clone(), interaction.truncation());
    let mut stages = Vec::new();
    for c in interaction.truncation().cells() {
        let w = flow_nc_cells(&interaction.sub(&ct), p, &[c])?;
        let s = sing(&w, scheme);
        if s.is_zero() {
            continue;
        }
        if depends_on_l(&s) {
            return Err(Error::Renormalization(format!(
                "counterterm in cell {c} depends on L"
            )));
        }
        ct = ct.add(&s);
        stages.push(c);
    }
    let series = CountertermSeries {
        interaction: ct,
        stages,
    };
    if let Some(c) = first_singular_cell(interaction, &series.interaction, family, scheme)? {
        return Err(Error::Renormalization(format!(
            "flow remains singular in cell {c}"
        )));
    }
    Ok(series)
}

/// First cell in which `W(I - CT, P(e, L))` has a nonzero singular part.
pub fn first_singular_cell(
    interaction: &NcInteraction<EpsFunction>,
    ct: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    scheme: &RenormScheme,
) -> Result<Option<Cell>> {
    let cells = interaction.truncation().cells();
    let w = flow_nc_cells(&interaction.sub(ct), family.tensor(), &cells)?;
    Ok(sing(&w, scheme).cells().map(|(c, _)| *c).next())
}

/// Counterterms of a commutative interaction, over the cells `(loops, legs)`
/// in lexicographic order.
pub fn counterterms_comm(
    interaction: &CommInteraction<EpsFunction>,
    family: &PropagatorFamily,
    scheme: &RenormScheme,
) -> Result<CommInteraction<EpsFunction>> {
    interaction.validate()?;
    let p = family.tensor();
    let mut ct = CommInteraction::new(interaction.space().clone(), interaction.truncation());
    for c in interaction.cell_list() {
        let w = flow_comm_cells(&interaction.sub(&ct), p, &[c])?;
        let s = sing_comm(&w, scheme);
        if s.cells()
            .any(|(_, t)| t.iter().any(|(_, f)| f.depends_on(Var::L)))
        {
            return Err(Error::Renormalization(format!(
                "counterterm in cell {c:?} depends on L"
            )));
        }
        ct = ct.add(&s);
    }
    let w = flow_comm_cells(&interaction.sub(&ct), p, &interaction.cell_list())?;
    if let Some((c, _)) = sing_comm(&w, scheme).cells().next() {
        return Err(Error::Renormalization(format!(
            "flow remains singular in cell {c:?}"
        )));
    }
    Ok(ct)
}

/// Coefficientwise limit `v -> 0+`, failing when a limit does not exist.
pub fn limit_interaction(
    interaction: &NcInteraction<EpsFunction>,
    v: Var,
) -> Result<NcInteraction<EpsFunction>> {
    let mut out = NcInteraction::new(interaction.space().clone(), interaction.truncation());
    for (c, d) in interaction.cells() {
        for (r, t) in d {
            let mut lim = crate::tensor_algebra::Tensor::zero(t.order());
            for (k, f) in t.iter() {
                let Some(x) = f.limit(v) else {
                    return Err(Error::Renormalization(format!(
                        "no limit as {} -> 0 in cell {c}",
                        v.name()
                    )));
                };
                lim.add_entry(k.clone(), x);
            }
            out.add_invariant(*c, r, &lim);
        }
    }
    Ok(out)
}

/// A renormalized effective theory together with its counterterms.
#[derive(Clone, Debug, PartialEq)]
pub struct Renormalized {
    /// The counterterms.
    pub counterterms: CountertermSeries,
    /// `I^R[L] = lim_{e -> 0} W(I - I^CT(e), P(e, L))`, a function of `L`.
    pub theory: NcInteraction<EpsFunction>,
}

/// Computes counterterms and the renormalized theory `I^R[L]`.
pub fn renormalized(
    interaction: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    scheme: &RenormScheme,
) -> Result<Renormalized> {
    let counterterms = counterterms(interaction, family, scheme)?;
    let cells = interaction.truncation().cells();
    let w = flow_nc_cells(
        &interaction.sub(&counterterms.interaction),
        family.tensor(),
        &cells,
    )?;
    let theory = limit_interaction(&w, Var::Eps)?;
    Ok(Renormalized {
        counterterms,
        theory,
    })
}

/// Checks `I[M] = W(I[L], P(L, M))` on the given cells, where `I[M]` is
/// obtained by renaming `L` to `M`. Returns the first failing cell.
pub fn check_rge_cells(
    theory: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
    cells: &[Cell],
) -> Result<Option<Cell>> {
    let lhs = theory
        .map(|t| t.map(|f| f.rename(Var::L, Var::M)))
        .restrict(cells);
    let rhs = flow_nc_cells(theory, &family.between(Var::L, Var::M), cells)?;
    Ok(lhs.differing_cells(&rhs).into_iter().next())
}

/// Checks the renormalization group equation on every cell of the truncation.
pub fn check_rge(
    theory: &NcInteraction<EpsFunction>,
    family: &PropagatorFamily,
) -> Result<Option<Cell>> {
    check_rge_cells(theory, family, &theory.truncation().cells())
}

/// The tree-level interaction `I* = lim_{L -> 0} I_tree[L]` of a theory, as rationals.
pub fn tree_limit(theory: &NcInteraction<EpsFunction>) -> Result<NcInteraction<Rational>> {
    let lim = limit_interaction(&theory.tree_part(), Var::L)?;
    let mut out = NcInteraction::new(theory.space().clone(), theory.truncation());
    for (c, d) in lim.cells() {
        for (r, t) in d {
            let mut q = crate::tensor_algebra::Tensor::zero(t.order());
            for (k, f) in t.iter() {
                let Some(x) = f.as_constant() else {
                    return Err(Error::Renormalization(format!(
                        "tree-level limit in cell {c} is not a number"
                    )));
                };
                q.add_entry(k.clone(), x);
            }
            out.add_invariant(*c, r, &q);
        }
    }
    Ok(out)
}

/// Rebuilds the tree-level part of a theory from its limit:
/// `lim_{e -> 0} W_tree(I*, P(e, L))`.
pub fn tree_from_limit(
    tree: &NcInteraction<Rational>,
    family: &PropagatorFamily,
) -> Result<NcInteraction<EpsFunction>> {
    let w = tree_flow(&to_eps(tree), family.tensor())?;
    limit_interaction(&w, Var::Eps)
}
