//! Heat kernels of finite-dimensional free theories.

use crate::error::{Error, Result};
use crate::renorm::eps::{EpsFunction, Var};
use crate::scalar::{Rational, Scalar};

use super::space::Theory;
use super::tensor::Tensor;

/// Eigenvalues of `H`, which must be diagonal in the chosen basis.
pub fn diagonal_eigenvalues(h: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    for (r, row) in h.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            if r != c && !x.is_zero() {
                return Err(Error::Algebra(
                    "H must be diagonal in the chosen basis".into(),
                ));
            }
        }
    }
    Ok((0..h.len()).map(|i| h[i][i].clone()).collect())
}

/// Parity of the row sign `(-1)^{n (1 + |a|)}` relating the heat kernel to `exp(-tH) G^{-1}`.
fn row_sign(theory: &Theory, a: usize) -> bool {
    let n = theory.pairing.degree.rem_euclid(2) == 1;
    n && !theory.space.parity(a as u8)
}

/// The heat kernel `K_t` as a two-tensor with entries in the variable `t`.
///
/// It is the unique tensor with `K_t * s = exp(-tH) s`, where
/// `K * s = (-1)^{|K|} (1 (x) <,>)[K (x) s]`.
pub fn heat_kernel(theory: &Theory) -> Result<Tensor<EpsFunction>> {
    let lambda = diagonal_eigenvalues(&theory.h)?;
    let inv = theory.pairing.inverse_matrix()?;
    let mut k = Tensor::zero(2);
    for (a, row) in inv.iter().enumerate() {
        for (b, g) in row.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut val = EpsFunction::exp_decay(Var::T, lambda[a].clone()).scale(g);
            if row_sign(theory, a) {
                val = val.neg();
            }
            k.add_entry(vec![a as u8, b as u8], val);
        }
    }
    Ok(k)
}

/// Matrix of the operator `K * (-)` for a two-tensor `K` of degree `-n`:
/// column `c` holds the coordinates of `K * e_c`.
pub fn star_matrix<S: Scalar>(theory: &Theory, k: &Tensor<S>) -> Vec<Vec<S>> {
    let d = theory.space.dim();
    let g = &theory.pairing.matrix;
    let mut m = vec![vec![S::zero(); d]; d];
    for (key, val) in k.iter() {
        let (a, b) = (key[0] as usize, key[1] as usize);
        for c in 0..d {
            if g[b][c].is_zero() {
                continue;
            }
            let mut x = val.scale(&g[b][c]);
            if row_sign(theory, a) {
                x = x.neg();
            }
            m[a][c].add_assign(&x);
        }
    }
    m
}
