//! Multilinear maps of the open topological field theory of a Frobenius algebra.

use crate::error::Result;
use crate::feynman::{amplitude, decomposition_pullback};
use crate::graph_core::RibbonGraph;
use crate::scalar::{Rational, Scalar};
use crate::tensor_algebra::{partitions, Cell, NcInteraction, Tensor, Truncation};

use super::frobenius::{Element, FrobeniusAlgebra};

/// The map `T^{g,b}_r` as a functional on `A^{(x) l}`, slots grouped into
/// consecutive boundary blocks of lengths `r`:
///
/// `T(a_11..a_1r_1; ..; a_k1..a_kr_k) = sum_{i_1..i_k} (-1)^p Tr(x_{i_k}..x_{i_1})
/// Tr(Xi_bdry^b Xi_gen^g y_{i_1} a_11 .. a_1r_1 .. y_{i_k} a_k1 .. a_kr_k)`
///
/// with `p = sum_{t<s} sum_j |y_{i_s}||a_{tj}|`.
///
/// Without labeled boundary components (`r` empty) one of the `b` boundary
/// circles takes the place of the first component, giving the number
/// `Tr(Xi_bdry^{b-1} Xi_gen^g)`; this is zero when `b = 0`.
pub fn otft_map(alg: &FrobeniusAlgebra, g: u32, b: u32, r: &[u32]) -> Tensor<Rational> {
    if r.is_empty() {
        return match b {
            0 => Tensor::zero(0),
            _ => Tensor::scalar(alg.tr(&alg.xi_power(g, b - 1))),
        };
    }
    let l: u32 = r.iter().sum();
    let mut out = Tensor::zero(l as usize);
    let start = alg.xi_power(g, b);
    let mut word = Vec::with_capacity(l as usize);
    let x0 = alg.unit().clone();
    boundary(alg, r, 0, &start, &x0, false, false, &mut word, &mut out);
    out
}

fn is_zero(v: &[Rational]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Chooses `i_t` for boundary `t`, then its letters.
#[allow(clippy::too_many_arguments)]
fn boundary(
    alg: &FrobeniusAlgebra,
    r: &[u32],
    t: usize,
    z: &Element,
    x: &Element,
    odd: bool,
    letters_odd: bool,
    word: &mut Vec<u8>,
    out: &mut Tensor<Rational>,
) {
    if t == r.len() {
        let v = alg.tr(x) * alg.tr(z);
        if !Scalar::is_zero(&v) {
            out.add_entry(word.clone(), if odd { -v } else { v });
        }
        return;
    }
    for i in 0..alg.dim() {
        let zi = alg.mul(z, alg.dual_element(i));
        if is_zero(&zi) {
            continue;
        }
        let xi = alg.mul(&alg.basis(i), x);
        if is_zero(&xi) {
            continue;
        }
        let sign = odd ^ (letters_odd && alg.dual_degree(i).rem_euclid(2) == 1);
        letters(alg, r, t, r[t], &zi, &xi, sign, letters_odd, word, out);
    }
}

/// Appends the remaining `left` letters of boundary `t`.
#[allow(clippy::too_many_arguments)]
fn letters(
    alg: &FrobeniusAlgebra,
    r: &[u32],
    t: usize,
    left: u32,
    z: &Element,
    x: &Element,
    odd: bool,
    letters_odd: bool,
    word: &mut Vec<u8>,
    out: &mut Tensor<Rational>,
) {
    if left == 0 {
        boundary(alg, r, t + 1, z, x, odd, letters_odd, word, out);
        return;
    }
    for a in 0..alg.dim() {
        let za = alg.mul_basis(z, a);
        if is_zero(&za) {
            continue;
        }
        word.push(a as u8);
        letters(
            alg,
            r,
            t,
            left - 1,
            &za,
            x,
            odd,
            letters_odd ^ alg.space().parity(a as u8),
            word,
            out,
        );
        word.pop();
    }
}

/// Interaction over `A` whose component `(g, b, k, l; r)` is `T^{g,b}_r`,
/// for every component of the truncation.
pub fn otft_interaction(alg: &FrobeniusAlgebra, trunc: Truncation) -> NcInteraction<Rational> {
    let mut out = NcInteraction::new(alg.space().clone(), trunc);
    for c in trunc.cells() {
        for r in partitions(c.l, c.k) {
            out.add_invariant(c, &r, &otft_map(alg, c.i, c.j, &r));
        }
    }
    out
}

/// `F_Gamma(A)`: the OTFT maps glued along `Gamma` with the inverse pairing
/// on the edges, with legs ordered along the canonical leg decomposition.
/// Returns the cell of `Gamma`, its cycle lengths and the functional.
pub fn glued_map(
    graph: &RibbonGraph,
    alg: &FrobeniusAlgebra,
) -> Result<(Cell, Vec<u32>, Tensor<Rational>)> {
    let mut trunc = Truncation::new(0, 0);
    for v in 0..graph.num_vertices() {
        let n = graph.vertex_loop_number(v).max(0) as u32;
        trunc.nmax = trunc.nmax.max(n);
    }
    trunc.lmax = (0..graph.num_vertices())
        .map(|v| graph.valence(v) as u32)
        .max()
        .unwrap_or(0);
    let mut vertex_maps = NcInteraction::new(alg.space().clone(), trunc);
    for v in 0..graph.num_vertices() {
        let (slots, r) = graph.vertex_slots(v);
        let cell = Cell::new(
            graph.genus(v),
            graph.boundary(v),
            r.len() as u32,
            slots.len() as u32,
        );
        if vertex_maps.get(&cell, &r).is_none() {
            vertex_maps.add_invariant(cell, &r, &otft_map(alg, cell.i, cell.j, &r));
        }
    }
    let amp = amplitude(graph, &vertex_maps, &alg.inverse_pairing())?;
    decomposition_pullback(alg.space(), graph, &amp)
}
