//! Tensor-extended theories and the transform of interactions defined by a Frobenius algebra.

use std::sync::Arc;

use crate::error::Result;
use crate::scalar::{Rational, Scalar};
use crate::tensor_algebra::{
    aut_order, cyclic_symmetrize, Cell, GradedSpace, NcInteraction, Pairing, Tensor, Theory,
};

use super::frobenius::FrobeniusAlgebra;
use super::otft::otft_map;

/// Basis of `E (x) A`: index `e dim(A) + a`, degree `|e| + |a|`.
pub fn tensor_space(e: &GradedSpace, alg: &FrobeniusAlgebra) -> GradedSpace {
    let (de, da) = (e.dim(), alg.dim());
    let mut labels = Vec::with_capacity(de * da);
    let mut degrees = Vec::with_capacity(de * da);
    for x in 0..de {
        for a in 0..da {
            labels.push(format!("{}.{}", e.labels()[x], alg.space().labels()[a]));
            degrees.push(e.degree(x as u8) + alg.space().degree(a as u8));
        }
    }
    GradedSpace::new(labels, degrees)
}

/// The theory on `E (x) A` with pairing
/// `<v1 (x) a1, v2 (x) a2> = (-1)^{|a1||v2|} <v1, v2> Tr(a1 a2)` and operators `H (x) 1`, `D (x) 1`.
pub fn tensor_theory(theory: &Theory, alg: &FrobeniusAlgebra) -> Result<Theory> {
    let e = &theory.space;
    let (de, da) = (e.dim(), alg.dim());
    let d = de * da;
    let tr = alg.pairing_matrix();
    let zero = Rational::zero();
    let mut g = vec![vec![zero.clone(); d]; d];
    for v1 in 0..de {
        for a1 in 0..da {
            for v2 in 0..de {
                for a2 in 0..da {
                    let val = &theory.pairing.matrix[v1][v2] * &tr[a1][a2];
                    let odd = alg.space().parity(a1 as u8) && e.parity(v2 as u8);
                    g[v1 * da + a1][v2 * da + a2] = if odd { -val } else { val };
                }
            }
        }
    }
    let extend = |m: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        let mut out = vec![vec![zero.clone(); d]; d];
        for r in 0..de {
            for c in 0..de {
                for s in 0..da {
                    out[r * da + s][c * da + s] = m[r][c].clone();
                }
            }
        }
        out
    };
    let space = tensor_space(e, alg);
    Theory::new(
        space,
        Pairing {
            degree: theory.pairing.degree,
            matrix: g,
        },
        extend(&theory.h),
        theory.d.as_ref().map(extend),
    )
}

/// `P_A = P (x) <,>_A^{-1}`, entry `[(a,s),(b,t)] = (-1)^{|x_s||e_b|} P[a,b] y_s[t]`.
pub fn tensor_propagator<S: Scalar>(
    e: &GradedSpace,
    p: &Tensor<S>,
    alg: &FrobeniusAlgebra,
) -> Tensor<S> {
    let da = alg.dim();
    let inv = alg.inverse_pairing();
    let mut out = Tensor::zero(2);
    for (k, v) in p.iter() {
        let (a, b) = (k[0] as usize, k[1] as usize);
        for (st, w) in inv.iter() {
            let (s, t) = (st[0] as usize, st[1] as usize);
            let odd = alg.space().parity(s as u8) && e.parity(b as u8);
            let val = v.scale(w);
            out.add_entry(
                vec![(a * da + s) as u8, (b * da + t) as u8],
                if odd { val.neg() } else { val },
            );
        }
    }
    out
}

/// The functional `f (x) t` on `(E (x) A)^{(x) l}`:
/// `(f (x) t)(v_1 (x) a_1, .., v_l (x) a_l) = (-1)^{sum_{s<u} |a_s||v_u|} f(v_1..v_l) t(a_1..a_l)`.
pub fn interleave<S: Scalar>(
    e: &GradedSpace,
    f: &Tensor<S>,
    alg: &FrobeniusAlgebra,
    t: &Tensor<Rational>,
) -> Tensor<S> {
    let da = alg.dim();
    let l = f.order();
    let mut out = Tensor::zero(l);
    for (kv, fv) in f.iter() {
        for (ka, tv) in t.iter() {
            let mut odd = false;
            let mut a_odd = false;
            for s in 0..l {
                if a_odd && e.parity(kv[s]) {
                    odd ^= true;
                }
                a_odd ^= alg.space().parity(ka[s]);
            }
            let key: Vec<u8> = (0..l)
                .map(|s| (kv[s] as usize * da + ka[s] as usize) as u8)
                .collect();
            let val = fv.scale(tv);
            out.add_entry(key, if odd { val.neg() } else { val });
        }
    }
    out
}

/// Image of one component with representative `x`: `N_r(x (x) T^{i,j}_r)`.
pub fn morita_component<S: Scalar>(
    e: &GradedSpace,
    alg: &FrobeniusAlgebra,
    ea: &GradedSpace,
    cell: Cell,
    r: &[u32],
    x: &Tensor<S>,
) -> Tensor<S> {
    let t = otft_map(alg, cell.i, cell.j, r);
    cyclic_symmetrize(ea, r, &interleave(e, x, alg, &t))
}

/// The transform `I -> sum gamma^i nu^j [I^r_ijkl (x) T^{i,j}_r]` into
/// interactions over `E (x) A`, using the representative `T_r / |Aut(C_r)|`
/// of every stored component `T_r`.
pub fn morita<S: Scalar>(
    interaction: &NcInteraction<S>,
    alg: &FrobeniusAlgebra,
) -> NcInteraction<S> {
    let e = interaction.space();
    let ea = Arc::new(tensor_space(e, alg));
    let mut out = NcInteraction::new(ea.clone(), interaction.truncation());
    for (cell, data) in interaction.cells() {
        for (r, t) in data {
            let x = t.scale(&(Rational::one() / aut_order(r)));
            out.add_invariant(*cell, r, &morita_component(e, alg, &ea, *cell, r, &x));
        }
    }
    out
}
