//! Graded vector spaces, pairings and free theories.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{invert_matrix, matmul, transpose, Rational};

use super::tensor::Tensor;

/// Finite-dimensional Z-graded vector space with a chosen homogeneous basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i32>,
}

impl GradedSpace {
    /// Builds a space from basis labels and their degrees.
    ///
    /// # Panics
    /// Panics if the lists differ in length or the dimension exceeds 255.
    pub fn new(labels: Vec<String>, degrees: Vec<i32>) -> Self {
        assert_eq!(labels.len(), degrees.len(), "one degree per basis label");
        assert!(labels.len() < 256, "dimension must fit in a byte index");
        Self { labels, degrees }
    }

    /// Space with `degrees.len()` basis vectors labelled `e0, e1, ...`.
    pub fn with_degrees(degrees: &[i32]) -> Self {
        let labels = (0..degrees.len()).map(|i| format!("e{i}")).collect();
        Self::new(labels, degrees.to_vec())
    }

    /// Dimension of the space.
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Degree of a basis vector.
    pub fn degree(&self, a: u8) -> i32 {
        self.degrees[a as usize]
    }

    /// Parity of a basis vector (`true` when odd).
    pub fn parity(&self, a: u8) -> bool {
        self.degrees[a as usize].rem_euclid(2) == 1
    }

    /// All basis degrees.
    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    /// All basis labels.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Position of a basis label.
    pub fn index_of(&self, label: &str) -> Option<u8> {
        self.labels.iter().position(|l| l == label).map(|i| i as u8)
    }

    /// Total degree of a basis word.
    pub fn word_degree(&self, w: &[u8]) -> i32 {
        w.iter().map(|&a| self.degree(a)).sum()
    }

    /// Parity of a basis word.
    pub fn word_parity(&self, w: &[u8]) -> bool {
        w.iter().filter(|&&a| self.parity(a)).count() % 2 == 1
    }

    /// Dimension per degree, sorted by degree.
    pub fn dims_by_degree(&self) -> Vec<(i32, usize)> {
        let mut out: Vec<(i32, usize)> = Vec::new();
        let mut degs = self.degrees.clone();
        degs.sort_unstable();
        for d in degs {
            match out.last_mut() {
                Some((last, n)) if *last == d => *n += 1,
                _ => out.push((d, 1)),
            }
        }
        out
    }
}

/// Nondegenerate graded (skew-)symmetric bilinear form of a fixed degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Pairing {
    /// Degree `n` of the pairing; `<v1, v2>` can be nonzero only when `|v1| + |v2| + n = 0`.
    pub degree: i32,
    /// Matrix `G[a][b] = <e_a, e_b>`.
    pub matrix: Vec<Vec<Rational>>,
}

impl Pairing {
    /// Checks nondegeneracy, homogeneity and graded symmetry
    /// `<v1,v2> = (-1)^{n + |v1||v2|} <v2,v1>`.
    pub fn validate(&self, space: &GradedSpace) -> Result<()> {
        let d = space.dim();
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::Algebra("pairing matrix has the wrong shape".into()));
        }
        for a in 0..d {
            for b in 0..d {
                let g = &self.matrix[a][b];
                if g.is_zero() {
                    continue;
                }
                if space.degree(a as u8) + space.degree(b as u8) + self.degree != 0 {
                    return Err(Error::Algebra(format!(
                        "pairing entry ({a},{b}) violates the pairing degree"
                    )));
                }
                let odd = (self.degree.rem_euclid(2) == 1)
                    ^ (space.parity(a as u8) && space.parity(b as u8));
                let expected = if odd { -g } else { g.clone() };
                if self.matrix[b][a] != expected {
                    return Err(Error::Algebra(format!(
                        "pairing is not graded symmetric at ({a},{b})"
                    )));
                }
            }
        }
        if invert_matrix(&self.matrix).is_none() {
            return Err(Error::Algebra("pairing is degenerate".into()));
        }
        Ok(())
    }

    /// Inverse matrix `G^{-1}`.
    pub fn inverse_matrix(&self) -> Result<Vec<Vec<Rational>>> {
        invert_matrix(&self.matrix).ok_or_else(|| Error::Algebra("pairing is degenerate".into()))
    }
}

/// Finite-dimensional free theory: field space, pairing, self-adjoint operator
/// `H` and an optional operator `D` used to build propagators.
#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    /// Field space.
    pub space: Arc<GradedSpace>,
    /// Pairing on the field space.
    pub pairing: Pairing,
    /// Matrix of `H`: column `c` holds the coordinates of `H e_c`.
    pub h: Vec<Vec<Rational>>,
    /// Matrix of `D` in the same convention; identity when absent.
    pub d: Option<Vec<Vec<Rational>>>,
}

impl Theory {
    /// Builds and validates a theory.
    pub fn new(
        space: GradedSpace,
        pairing: Pairing,
        h: Vec<Vec<Rational>>,
        d: Option<Vec<Vec<Rational>>>,
    ) -> Result<Self> {
        let t = Self {
            space: Arc::new(space),
            pairing,
            h,
            d,
        };
        t.pairing.validate(&t.space)?;
        t.check_self_adjoint(&t.h, 0, "H")?;
        Ok(t)
    }

    /// Theory with `H = 0` and no `D`.
    pub fn with_pairing(space: GradedSpace, pairing: Pairing) -> Result<Self> {
        let d = space.dim();
        Self::new(space, pairing, zero_matrix(d), None)
    }

    /// Checks `<A v1, v2> = (-1)^{|A||v1|} <v1, A v2>` for an operator of degree `deg`.
    pub fn check_self_adjoint(&self, a: &[Vec<Rational>], deg: i32, name: &str) -> Result<()> {
        let d = self.space.dim();
        if a.len() != d || a.iter().any(|r| r.len() != d) {
            return Err(Error::Algebra(format!("{name} has the wrong shape")));
        }
        for row in 0..d {
            for col in 0..d {
                if !a[row][col].is_zero()
                    && self.space.degree(row as u8) != self.space.degree(col as u8) + deg
                {
                    return Err(Error::Algebra(format!(
                        "{name} is not homogeneous of degree {deg}"
                    )));
                }
            }
        }
        let g = &self.pairing.matrix;
        let lhs = matmul(&transpose(a), g);
        let rhs = matmul(g, a);
        for x in 0..d {
            for y in 0..d {
                let odd = deg.rem_euclid(2) == 1 && self.space.parity(x as u8);
                let r = if odd { -&rhs[x][y] } else { rhs[x][y].clone() };
                if lhs[x][y] != r {
                    return Err(Error::Algebra(format!(
                        "{name} is not self-adjoint for the pairing"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The inverse-pairing tensor `sum_{a,b} (G^{-1})_{ab} e_a (x) e_b`.
    pub fn inverse_pairing_tensor(&self) -> Result<Tensor<Rational>> {
        let inv = self.pairing.inverse_matrix()?;
        Ok(matrix_tensor(&inv))
    }
}

/// Order-2 tensor whose entry `[a, b]` is `m[a][b]`.
pub fn matrix_tensor(m: &[Vec<Rational>]) -> Tensor<Rational> {
    let mut t = Tensor::zero(2);
    for (a, row) in m.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                t.add_entry(vec![a as u8, b as u8], x.clone());
            }
        }
    }
    t
}

/// Square zero matrix.
pub fn zero_matrix(d: usize) -> Vec<Vec<Rational>> {
    vec![vec![Rational::zero(); d]; d]
}

/// Square identity matrix.
pub fn identity_matrix(d: usize) -> Vec<Vec<Rational>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    if i == j {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}
