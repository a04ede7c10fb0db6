//! JSON file formats for theories, interactions, propagators and propagator
//! families. Rationals are written as `"p"` or `"p/q"` strings and cutoff
//! functions in the textual grammar of [`EpsFunction::parse`]; basis vectors
//! are referred to by their labels.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::renorm::{canonical_family, EpsFunction, PropagatorFamily};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::tensor_algebra::{
    matrix_tensor, zero_matrix, Cell, CommInteraction, GradedSpace, NcInteraction, Pairing,
    Tensor, Theory, Truncation,
};

/// Scalars with a textual form used in files.
pub trait TextScalar: Scalar {
    /// Parses a value.
    fn from_text(s: &str) -> Result<Self>;
    /// Formats a value so that [`TextScalar::from_text`] reads it back.
    fn to_text(&self) -> String;
}

impl TextScalar for Rational {
    fn from_text(s: &str) -> Result<Self> {
        parse_rational(s).ok_or_else(|| Error::Parse(format!("not a rational number: {s:?}")))
    }
    fn to_text(&self) -> String {
        format_rational(self)
    }
}

impl TextScalar for EpsFunction {
    fn from_text(s: &str) -> Result<Self> {
        EpsFunction::parse(s)
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses a square matrix of rational strings of the given size.
pub fn parse_matrix(rows: &[Vec<String>], dim: usize, name: &str) -> Result<Vec<Vec<Rational>>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::Parse(format!("{name} must be a {dim}x{dim} matrix")));
    }
    rows.iter()
        .map(|r| r.iter().map(|x| Rational::from_text(x)).collect())
        .collect()
}

/// Formats a matrix as rows of strings.
pub fn format_matrix<S: TextScalar>(m: &[Vec<S>]) -> Vec<Vec<String>> {
    m.iter()
        .map(|r| r.iter().map(TextScalar::to_text).collect())
        .collect()
}

/// Resolves a basis label, or a decimal index, to a basis index.
pub fn basis_index(space: &GradedSpace, label: &str) -> Result<u8> {
    space
        .index_of(label)
        .or_else(|| {
            label
                .parse::<usize>()
                .ok()
                .filter(|&i| i < space.dim())
                .map(|i| i as u8)
        })
        .ok_or_else(|| Error::Parse(format!("unknown basis vector {label:?}")))
}

fn parse_word(space: &GradedSpace, word: &[String]) -> Result<Vec<u8>> {
    word.iter().map(|x| basis_index(space, x)).collect()
}

fn word_labels(space: &GradedSpace, word: &[u8]) -> Vec<String> {
    word.iter()
        .map(|&a| space.labels()[a as usize].clone())
        .collect()
}

/// Theory file: basis, pairing, `H` and optional `D`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryFile {
    /// Basis labels; `e0, e1, ...` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Degree of each basis vector.
    pub degrees: Vec<i32>,
    /// Degree of the pairing.
    #[serde(default)]
    pub pairing_degree: i32,
    /// Pairing matrix `G[a][b] = <e_a, e_b>`.
    pub pairing: Vec<Vec<String>>,
    /// Matrix of `H` (column `c` holds `H e_c`); zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<String>>>,
    /// Matrix of `D`, in the same convention.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<String>>>,
}

impl TheoryFile {
    /// Builds and validates the theory.
    pub fn to_theory(&self) -> Result<Theory> {
        let dim = self.degrees.len();
        if dim == 0 || dim > 255 {
            return Err(Error::Parse("the basis must have between 1 and 255 vectors".into()));
        }
        let space = match &self.labels {
            None => GradedSpace::with_degrees(&self.degrees),
            Some(l) if l.len() == dim => GradedSpace::new(l.clone(), self.degrees.clone()),
            Some(_) => return Err(Error::Parse("one label per degree is required".into())),
        };
        let pairing = Pairing {
            degree: self.pairing_degree,
            matrix: parse_matrix(&self.pairing, dim, "pairing")?,
        };
        let h = match &self.h {
            Some(m) => parse_matrix(m, dim, "h")?,
            None => zero_matrix(dim),
        };
        let d = self.d.as_ref().map(|m| parse_matrix(m, dim, "d")).transpose()?;
        Theory::new(space, pairing, h, d)
    }
}

impl From<&Theory> for TheoryFile {
    fn from(t: &Theory) -> Self {
        Self {
            labels: Some(t.space.labels().to_vec()),
            degrees: t.space.degrees().to_vec(),
            pairing_degree: t.pairing.degree,
            pairing: format_matrix(&t.pairing.matrix),
            h: Some(format_matrix(&t.h)),
            d: t.d.as_deref().map(format_matrix),
        }
    }
}

/// Parses and validates a theory file.
pub fn theory_from_json(s: &str) -> Result<Theory> {
    parse_json::<TheoryFile>(s)?.to_theory()
}

/// Serializes a theory.
pub fn theory_to_json(t: &Theory) -> Value {
    serde_json::to_value(TheoryFile::from(t)).expect("theory serialization cannot fail")
}

/// One representative word: adds `coefficient * N_r(word^dual)` to a cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    /// Genus index.
    pub i: u32,
    /// Boundary index.
    pub j: u32,
    /// Number of cyclic words.
    pub k: u32,
    /// Number of legs.
    pub l: u32,
    /// Cycle lengths.
    pub r: Vec<u32>,
    /// Coefficient.
    pub coefficient: String,
    /// Basis word, one label per leg.
    pub word: Vec<String>,
}

/// One tensor entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRow {
    /// Basis word.
    pub word: Vec<String>,
    /// Value.
    pub value: String,
}

/// A stored invariant component, listed entry by entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    /// Genus index.
    pub i: u32,
    /// Boundary index.
    pub j: u32,
    /// Number of cyclic words.
    pub k: u32,
    /// Number of legs.
    pub l: u32,
    /// Cycle lengths.
    pub r: Vec<u32>,
    /// Nonzero entries of the invariant tensor.
    pub entries: Vec<EntryRow>,
}

/// Interaction file. `terms` are expanded by cyclic symmetrization;
/// `components` are taken as they stand and must already be invariant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionFile {
    /// Bound on the loop number.
    pub nmax: u32,
    /// Bound on the legs at top loop number.
    pub lmax: u32,
    /// Representative words.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermRow>,
    /// Invariant components.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<ComponentRow>,
}

fn checked_cell(i: u32, j: u32, k: u32, l: u32, r: &[u32], trunc: &Truncation) -> Result<Cell> {
    let cell = Cell::new(i, j, k, l);
    if r.len() != k as usize || r.iter().sum::<u32>() != l || r.contains(&0) {
        return Err(Error::Parse(format!(
            "cycle lengths {r:?} do not fit cell {cell}"
        )));
    }
    if !trunc.contains(&cell) {
        return Err(Error::Parse(format!("cell {cell} lies outside the truncation")));
    }
    Ok(cell)
}

fn sorted(r: &[u32]) -> Vec<u32> {
    let mut r = r.to_vec();
    r.sort_unstable();
    r
}

impl InteractionFile {
    /// Builds and validates the interaction over `space`.
    pub fn to_interaction<S: TextScalar>(&self, space: &Arc<GradedSpace>) -> Result<NcInteraction<S>> {
        let trunc = Truncation::new(self.nmax, self.lmax);
        let mut out = NcInteraction::new(space.clone(), trunc);
        for t in &self.terms {
            let cell = checked_cell(t.i, t.j, t.k, t.l, &t.r, &trunc)?;
            let word = parse_word(space, &t.word)?;
            if word.len() != t.l as usize {
                return Err(Error::Parse(format!("word {:?} does not have {} letters", t.word, t.l)));
            }
            out.add_word(cell, &sorted(&t.r), S::from_text(&t.coefficient)?, &word);
        }
        for c in &self.components {
            let cell = checked_cell(c.i, c.j, c.k, c.l, &c.r, &trunc)?;
            let mut tensor = Tensor::zero(c.l as usize);
            for e in &c.entries {
                let word = parse_word(space, &e.word)?;
                if word.len() != c.l as usize {
                    return Err(Error::Parse(format!("word {:?} does not have {} letters", e.word, c.l)));
                }
                tensor.add_entry(word, S::from_text(&e.value)?);
            }
            out.add_invariant(cell, &sorted(&c.r), &tensor);
        }
        out.validate()?;
        Ok(out)
    }

    /// Lists the stored components of an interaction.
    pub fn from_interaction<S: TextScalar>(interaction: &NcInteraction<S>) -> Self {
        let space = interaction.space();
        let trunc = interaction.truncation();
        let components = interaction
            .cells()
            .flat_map(|(c, data)| {
                data.iter().map(move |(r, t)| ComponentRow {
                    i: c.i,
                    j: c.j,
                    k: c.k,
                    l: c.l,
                    r: r.clone(),
                    entries: tensor_entries(space, t),
                })
            })
            .collect();
        Self {
            nmax: trunc.nmax,
            lmax: trunc.lmax,
            terms: Vec::new(),
            components,
        }
    }
}

fn tensor_entries<S: TextScalar>(space: &GradedSpace, t: &Tensor<S>) -> Vec<EntryRow> {
    t.iter()
        .map(|(w, v)| EntryRow {
            word: word_labels(space, w),
            value: v.to_text(),
        })
        .collect()
}

/// Parses and validates an interaction file over `space`.
pub fn interaction_from_json<S: TextScalar>(s: &str, space: &Arc<GradedSpace>) -> Result<NcInteraction<S>> {
    parse_json::<InteractionFile>(s)?.to_interaction(space)
}

/// Serializes an interaction in component form.
pub fn interaction_to_json<S: TextScalar>(interaction: &NcInteraction<S>) -> Value {
    serde_json::to_value(InteractionFile::from_interaction(interaction))
        .expect("interaction serialization cannot fail")
}

/// Serializes a commutative interaction, one symmetric tensor per `(loops, legs)` cell.
pub fn comm_interaction_to_json<S: TextScalar>(interaction: &CommInteraction<S>) -> Value {
    let space = interaction.space();
    let trunc = interaction.truncation();
    let cells: Vec<Value> = interaction
        .cells()
        .map(|(&(i, j), t)| json!({"loops": i, "legs": j, "entries": tensor_entries(space, t)}))
        .collect();
    json!({"nmax": trunc.nmax, "lmax": trunc.lmax, "cells": cells})
}

/// Serializes a tensor as a list of entries.
pub fn tensor_to_json<S: TextScalar>(space: &GradedSpace, t: &Tensor<S>) -> Value {
    serde_json::to_value(tensor_entries(space, t)).expect("tensor serialization cannot fail")
}

/// Propagator file: the matrix `P[a][b]` of a symmetric two-tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorFile {
    /// Matrix entries.
    pub matrix: Vec<Vec<String>>,
}

/// Parses a propagator for `space`; symmetry and degree are checked by the flow.
pub fn propagator_from_json(s: &str, space: &GradedSpace) -> Result<Tensor<Rational>> {
    let f: PropagatorFile = parse_json(s)?;
    Ok(matrix_tensor(&parse_matrix(&f.matrix, space.dim(), "propagator")?))
}

/// Propagator-family file. The family is
/// `base + (L - e) R + (1/e - 1/L) S` with `base` the canonical family of the
/// theory or zero, after which the listed entries are replaced outright.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyFile {
    /// `"canonical"` (default) or `"zero"`.
    #[serde(default = "default_base")]
    pub base: String,
    /// Regular part `R`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<Vec<Vec<String>>>,
    /// Singular part `S`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular: Option<Vec<Vec<String>>>,
    /// Entry overrides, with values in the cutoff-function grammar.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryRow>,
}

fn default_base() -> String {
    "canonical".into()
}

impl FamilyFile {
    /// Builds and validates the family for a theory.
    pub fn to_family(&self, theory: &Theory) -> Result<PropagatorFamily> {
        let space = &theory.space;
        let dim = space.dim();
        let mut tensor = match self.base.as_str() {
            "canonical" => canonical_family(theory)?.tensor().clone(),
            "zero" => Tensor::zero(2),
            other => return Err(Error::Parse(format!("unknown family base {other:?}"))),
        };
        if self.regular.is_some() || self.singular.is_some() {
            let read = |m: &Option<Vec<Vec<String>>>, name| -> Result<Tensor<Rational>> {
                match m {
                    Some(m) => Ok(matrix_tensor(&parse_matrix(m, dim, name)?)),
                    None => Ok(Tensor::zero(2)),
                }
            };
            let r = read(&self.regular, "regular")?;
            let s = read(&self.singular, "singular")?;
            tensor = tensor.add(PropagatorFamily::injected(space.clone(), &r, &s)?.tensor());
        }
        for e in &self.entries {
            let word = parse_word(space, &e.word)?;
            if word.len() != 2 {
                return Err(Error::Parse("family entries need two indices".into()));
            }
            let value = EpsFunction::parse(&e.value)?;
            let old = tensor.get(&word);
            tensor.add_entry(word, value.sub(&old));
        }
        PropagatorFamily::new(space.clone(), tensor)
    }
}

/// Parses and validates a family file for a theory.
pub fn family_from_json(s: &str, theory: &Theory) -> Result<PropagatorFamily> {
    parse_json::<FamilyFile>(s)?.to_family(theory)
}
