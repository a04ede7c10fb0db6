//! Finite-dimensional graded Frobenius algebras given by structure constants.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{invert_matrix, rat, Rational, Scalar};
use crate::tensor_algebra::{matrix_tensor, GradedSpace, Tensor};

/// Element of an algebra as a coordinate vector.
pub type Element = Vec<Rational>;

/// Unital associative algebra with a nondegenerate degree-zero trace.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusAlgebra {
    name: String,
    space: Arc<GradedSpace>,
    /// `mult[a][b]` holds the coordinates of `e_a e_b`.
    mult: Vec<Vec<Element>>,
    trace: Vec<Rational>,
    unit: Element,
    /// `y[i]`: coordinates of the dual element with `a = sum_i Tr(a e_i) y_i`.
    dual: Vec<Element>,
}

impl FrobeniusAlgebra {
    /// Builds and validates an algebra: associativity, unit, homogeneity of
    /// the product and trace, and nondegeneracy of `Tr(ab)`.
    pub fn new(
        name: impl Into<String>,
        space: GradedSpace,
        mult: Vec<Vec<Element>>,
        trace: Vec<Rational>,
        unit: Element,
    ) -> Result<Self> {
        let d = space.dim();
        let bad = |m: &str| Err(Error::Algebra(m.to_string()));
        if mult.len() != d
            || mult
                .iter()
                .any(|r| r.len() != d || r.iter().any(|v| v.len() != d))
        {
            return bad("structure constants have the wrong shape");
        }
        if trace.len() != d || unit.len() != d {
            return bad("trace or unit has the wrong length");
        }
        for a in 0..d {
            if !trace[a].is_zero() && space.degree(a as u8) != 0 {
                return bad("trace must have degree zero");
            }
            for b in 0..d {
                for c in 0..d {
                    if !mult[a][b][c].is_zero()
                        && space.degree(c as u8) != space.degree(a as u8) + space.degree(b as u8)
                    {
                        return bad("product is not homogeneous");
                    }
                }
            }
        }
        let mut alg = Self {
            name: name.into(),
            space: Arc::new(space),
            mult,
            trace,
            unit,
            dual: Vec::new(),
        };
        for a in 0..d {
            let ea = alg.basis(a);
            if alg.mul(&alg.unit, &ea) != ea || alg.mul(&ea, &alg.unit) != ea {
                return bad("unit axiom fails");
            }
            for b in 0..d {
                let ab = alg.mul(&ea, &alg.basis(b));
                for c in 0..d {
                    let ec = alg.basis(c);
                    if alg.mul(&ab, &ec) != alg.mul(&ea, &alg.mul(&alg.basis(b), &ec)) {
                        return bad("product is not associative");
                    }
                }
            }
        }
        let g = alg.pairing_matrix();
        let Some(ginv) = invert_matrix(&g) else {
            return bad("trace pairing is degenerate");
        };
        // e_k = sum_i Tr(e_k e_i) y_i, hence y_i = sum_k (G^{-1})_{ik} e_k.
        alg.dual = ginv;
        Ok(alg)
    }

    /// The matrix algebra `M_N` with basis `E_{ij}` (index `i N + j`) and the usual trace.
    pub fn matrix(n: usize) -> Self {
        let d = n * n;
        let labels = (0..d)
            .map(|x| format!("E{}{}", x / n + 1, x % n + 1))
            .collect();
        let mut mult = vec![vec![vec![rat(0, 1); d]; d]; d];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    mult[i * n + j][j * n + l][i * n + l] = rat(1, 1);
                }
            }
        }
        let trace: Vec<Rational> = (0..d)
            .map(|x| if x / n == x % n { rat(1, 1) } else { rat(0, 1) })
            .collect();
        Self::new(
            format!("mat{n}"),
            GradedSpace::new(labels, vec![0; d]),
            mult,
            trace.clone(),
            trace,
        )
        .expect("matrix algebras are Frobenius")
    }

    /// `K[x]/x^2` with `Tr(1) = 0`, `Tr(x) = 1`.
    pub fn dual_numbers() -> Self {
        let z = rat(0, 1);
        let o = rat(1, 1);
        let mult = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        Self::new(
            "dual",
            GradedSpace::new(vec!["1".into(), "x".into()], vec![0, 0]),
            mult,
            vec![z.clone(), o.clone()],
            vec![o, z],
        )
        .expect("dual numbers are Frobenius")
    }

    /// The ground field with `Tr(1) = 1`.
    pub fn trivial() -> Self {
        Self::new(
            "ground",
            GradedSpace::new(vec!["1".into()], vec![0]),
            vec![vec![vec![rat(1, 1)]]],
            vec![rat(1, 1)],
            vec![rat(1, 1)],
        )
        .expect("the ground field is Frobenius")
    }

    /// Parses a name: `matN`, `dual` or `ground`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "dual" => Ok(Self::dual_numbers()),
            "ground" => Ok(Self::trivial()),
            _ => match name
                .strip_prefix("mat")
                .and_then(|n| n.parse::<usize>().ok())
            {
                Some(n) if (1..=15).contains(&n) => Ok(Self::matrix(n)),
                _ => Err(Error::Parse(format!("unknown Frobenius algebra {name:?}"))),
            },
        }
    }

    /// Name of the algebra.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Underlying graded space.
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Basis vector `e_a`.
    pub fn basis(&self, a: usize) -> Element {
        let mut v = vec![rat(0, 1); self.dim()];
        v[a] = rat(1, 1);
        v
    }

    /// Unit element.
    pub fn unit(&self) -> &Element {
        &self.unit
    }

    /// Product of two elements.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Element {
        let d = self.dim();
        let mut out = vec![rat(0, 1); d];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !Scalar::is_zero(*v)) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !Scalar::is_zero(*v)) {
                let s = xa * yb;
                for (c, m) in self.mult[a][b].iter().enumerate() {
                    if !Scalar::is_zero(m) {
                        out[c] += &s * m;
                    }
                }
            }
        }
        out
    }

    /// Product `x e_b`.
    pub fn mul_basis(&self, x: &[Rational], b: usize) -> Element {
        let d = self.dim();
        let mut out = vec![rat(0, 1); d];
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !Scalar::is_zero(*v)) {
            for (c, m) in self.mult[a][b].iter().enumerate() {
                if !Scalar::is_zero(m) {
                    out[c] += xa * m;
                }
            }
        }
        out
    }

    /// Trace of an element.
    pub fn tr(&self, x: &[Rational]) -> Rational {
        x.iter().zip(&self.trace).map(|(a, t)| a * t).sum()
    }

    /// Matrix `G[a][b] = Tr(e_a e_b)`.
    pub fn pairing_matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.dim())
            .map(|a| (0..self.dim()).map(|b| self.tr(&self.mult[a][b])).collect())
            .collect()
    }

    /// `y_i`, with `x_i = e_i`.
    pub fn dual_element(&self, i: usize) -> &Element {
        &self.dual[i]
    }

    /// Degree of `y_i`.
    pub fn dual_degree(&self, i: usize) -> i32 {
        -self.space.degree(i as u8)
    }

    /// The symmetric tensor `sum_i x_i (x) y_i`.
    pub fn inverse_pairing(&self) -> Tensor<Rational> {
        matrix_tensor(&self.dual)
    }

    /// `Xi_bdry = sum_i x_i y_i`.
    pub fn xi_bdry(&self) -> Element {
        let mut out = vec![rat(0, 1); self.dim()];
        for i in 0..self.dim() {
            for (c, v) in self.mul(&self.basis(i), &self.dual[i]).iter().enumerate() {
                out[c] += v;
            }
        }
        out
    }

    /// `Xi_gen = sum_{i,j} (-1)^{|x_j||y_i|} x_i x_j y_i y_j`.
    pub fn xi_gen(&self) -> Element {
        let d = self.dim();
        let mut out = vec![rat(0, 1); d];
        for i in 0..d {
            for j in 0..d {
                let odd = self.space.parity(j as u8) && self.dual_degree(i).rem_euclid(2) == 1;
                let p = self.mul(
                    &self.mul(&self.mul(&self.basis(i), &self.basis(j)), &self.dual[i]),
                    &self.dual[j],
                );
                for (c, v) in p.iter().enumerate() {
                    if odd {
                        out[c] -= v;
                    } else {
                        out[c] += v;
                    }
                }
            }
        }
        out
    }

    /// `true` when `z` commutes with every basis element (with Koszul signs).
    pub fn is_central(&self, z: &[Rational]) -> bool {
        let zodd = z
            .iter()
            .enumerate()
            .any(|(c, v)| !Scalar::is_zero(v) && self.space.parity(c as u8));
        (0..self.dim()).all(|a| {
            let ea = self.basis(a);
            let lhs = self.mul(z, &ea);
            let rhs = self.mul(&ea, z);
            let flip = zodd && self.space.parity(a as u8);
            lhs.iter()
                .zip(&rhs)
                .all(|(l, r)| if flip { *l == -r } else { l == r })
        })
    }

    /// `Xi_bdry^b Xi_gen^g`.
    pub fn xi_power(&self, g: u32, b: u32) -> Element {
        let mut z = self.unit.clone();
        let (xb, xg) = (self.xi_bdry(), self.xi_gen());
        for _ in 0..b {
            z = self.mul(&z, &xb);
        }
        for _ in 0..g {
            z = self.mul(&z, &xg);
        }
        z
    }
}

/// `(Xi_bdry, Xi_gen)`, after checking that both are central.
pub fn xi_elements(a: &FrobeniusAlgebra) -> Result<(Element, Element)> {
    let (xb, xg) = (a.xi_bdry(), a.xi_gen());
    if !a.is_central(&xb) || !a.is_central(&xg) {
        return Err(Error::Algebra(format!(
            "Xi elements of {} are not central",
            a.name()
        )));
    }
    Ok((xb, xg))
}
