//! Sparse tensors over a graded space with Koszul-signed slot calculus.
//!
//! A [`Tensor`] of order `m` stores its values at basis multi-indices. The
//! same container represents vectors in `E^{(x)m}` (coefficients) and
//! functionals in `(E^dag)^{(x)m}` (values on basis words); in both readings
//! a slot permutation acts by moving entries and multiplying by the Koszul
//! sign of the odd letters that cross.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::space::GradedSpace;

/// Sparse tensor with entries keyed by basis multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    order: usize,
    entries: BTreeMap<Vec<u8>, S>,
}

impl<S: Scalar> Tensor<S> {
    /// Zero tensor of the given order.
    pub fn zero(order: usize) -> Self {
        Self {
            order,
            entries: BTreeMap::new(),
        }
    }

    /// Order-0 tensor holding a scalar.
    pub fn scalar(s: S) -> Self {
        let mut t = Self::zero(0);
        t.add_entry(Vec::new(), s);
        t
    }

    /// Builds a tensor from `(index, value)` pairs, summing repeats.
    pub fn from_entries(order: usize, entries: impl IntoIterator<Item = (Vec<u8>, S)>) -> Self {
        let mut t = Self::zero(order);
        for (k, v) in entries {
            t.add_entry(k, v);
        }
        t
    }

    /// Number of slots.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `true` when every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value at a multi-index.
    pub fn get(&self, key: &[u8]) -> S {
        self.entries.get(key).cloned().unwrap_or_else(S::zero)
    }

    /// Iterates over nonzero entries in index order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.entries.iter()
    }

    /// Adds `value` to the entry at `key`, dropping it if the sum vanishes.
    ///
    /// # Panics
    /// Panics if `key` has the wrong length.
    pub fn add_entry(&mut self, key: Vec<u8>, value: S) {
        assert_eq!(
            key.len(),
            self.order,
            "index length must equal tensor order"
        );
        if value.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&value);
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(value);
            }
        }
    }

    /// Sum of two tensors of equal order.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// In-place sum.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.order, other.order, "orders must agree");
        for (k, v) in &other.entries {
            self.add_entry(k.clone(), v.clone());
        }
    }

    /// Difference of two tensors.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    /// Multiplication by a rational.
    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|v| v.scale(q))
    }

    /// Multiplication by a scalar.
    pub fn scale_by(&self, s: &S) -> Self {
        self.map(|v| v.mul(s))
    }

    /// Applies `f` to every entry, dropping entries that become zero.
    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self::from_entries(
            self.order,
            self.entries.iter().map(|(k, v)| (k.clone(), f(v))),
        )
    }

    /// Changes the scalar type entrywise.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Tensor<T> {
        Tensor::from_entries(
            self.order,
            self.entries.iter().map(|(k, v)| (k.clone(), f(v))),
        )
    }

    /// Keeps only the entries satisfying a predicate on the index.
    pub fn filter(&self, keep: impl Fn(&[u8]) -> bool) -> Self {
        Self {
            order: self.order,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Moves slot `i` to position `s[i]`, with the Koszul sign of the odd
    /// letters that cross. Satisfies `t.permute(s1).permute(s2) == t.permute(s2 . s1)`.
    pub fn permute(&self, space: &GradedSpace, s: &[usize]) -> Result<Self> {
        if s.len() != self.order {
            return Err(Error::Arity {
                expected: self.order,
                found: s.len(),
            });
        }
        let mut out = Self::zero(self.order);
        let mut key = vec![0u8; self.order];
        for (k, v) in &self.entries {
            for (i, &a) in k.iter().enumerate() {
                key[s[i]] = a;
            }
            let odd = permutation_sign(space, k, s);
            out.add_entry(key.clone(), if odd { v.neg() } else { v.clone() });
        }
        Ok(out)
    }

    /// Reorders slots so that new slot `t` is old slot `order[t]`.
    pub fn select(&self, space: &GradedSpace, order: &[usize]) -> Result<Self> {
        if order.len() != self.order {
            return Err(Error::Arity {
                expected: self.order,
                found: order.len(),
            });
        }
        let mut s = vec![0; order.len()];
        for (t, &o) in order.iter().enumerate() {
            s[o] = t;
        }
        self.permute(space, &s)
    }

    /// Tensor product `(f (x) g)[x (x) y] = (-1)^{|g||x|} f(x) g(y)`.
    pub fn tensor_product(&self, other: &Self, space: &GradedSpace) -> Self {
        let mut out = Self::zero(self.order + other.order);
        for (x, u) in &self.entries {
            let px = space.word_parity(x);
            for (y, w) in &other.entries {
                let mut key = x.clone();
                key.extend_from_slice(y);
                let val = u.mul(w);
                let odd = px && space.word_parity(y);
                out.add_entry(key, if odd { val.neg() } else { val });
            }
        }
        out
    }

    /// Evaluates the functional on a two-tensor `p` inserted into slots `i`
    /// and `j`: the first factor of `p` enters slot `i`, the second slot `j`.
    /// The remaining slots keep their relative order.
    pub fn contract(&self, space: &GradedSpace, i: usize, j: usize, p: &Tensor<S>) -> Result<Self> {
        if i == j || i >= self.order || j >= self.order || p.order != 2 {
            return Err(Error::Arity {
                expected: self.order,
                found: i.max(j) + 1,
            });
        }
        if i > j {
            return self.contract(space, j, i, &p.transpose(space));
        }
        let dim = space.dim();
        let mut dense: Vec<Option<S>> = vec![None; dim * dim];
        for (k, v) in &p.entries {
            dense[k[0] as usize * dim + k[1] as usize] = Some(v.clone());
        }
        let mut out = Self::zero(self.order - 2);
        for (k, v) in &self.entries {
            let (a, b) = (k[i], k[j]);
            let Some(pv) = &dense[a as usize * dim + b as usize] else {
                continue;
            };
            let mut after_j = false;
            let mut after_i = false;
            for (t, &c) in k.iter().enumerate() {
                if space.parity(c) {
                    if t > j {
                        after_j ^= true;
                    }
                    if t > i && t != j {
                        after_i ^= true;
                    }
                }
            }
            let odd = (space.parity(b) && after_j) ^ (space.parity(a) && after_i);
            let key: Vec<u8> = k
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != i && t != j)
                .map(|(_, &c)| c)
                .collect();
            let val = v.mul(pv);
            out.add_entry(key, if odd { val.neg() } else { val });
        }
        Ok(out)
    }

    /// Graded transposition of a two-tensor: `tau(e_a (x) e_b) = (-1)^{|a||b|} e_b (x) e_a`.
    pub fn transpose(&self, space: &GradedSpace) -> Self {
        assert_eq!(self.order, 2, "transpose needs an order-2 tensor");
        self.permute(space, &[1, 0]).expect("order checked")
    }

    /// `true` when the two-tensor is invariant under the graded transposition.
    pub fn is_symmetric(&self, space: &GradedSpace) -> bool {
        self.order == 2 && self.transpose(space) == *self
    }

    /// Total degree of every nonzero entry, or `None` if the tensor is not homogeneous.
    pub fn degree(&self, space: &GradedSpace) -> Option<i32> {
        let mut deg = None;
        for k in self.entries.keys() {
            let d = space.word_degree(k);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }
}

/// Koszul parity of moving slot `i` of `key` to position `s[i]`.
pub fn permutation_sign(space: &GradedSpace, key: &[u8], s: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..key.len() {
        if !space.parity(key[i]) {
            continue;
        }
        for j in (i + 1)..key.len() {
            if space.parity(key[j]) && s[i] > s[j] {
                odd ^= true;
            }
        }
    }
    odd
}

/// Value `(-1)^{sum_{i<j} |w_i||w_j|}` of the dual basis word `e^{w_1} (x) ... (x) e^{w_l}`
/// at the index `w`, as a parity.
pub fn dual_word_sign(space: &GradedSpace, w: &[u8]) -> bool {
    let odd_letters = w.iter().filter(|&&a| space.parity(a)).count();
    (odd_letters * odd_letters.saturating_sub(1) / 2) % 2 == 1
}

/// The functional `coefficient * e^{w_1} (x) ... (x) e^{w_l}` as a tensor.
pub fn dual_word<S: Scalar>(space: &GradedSpace, w: &[u8], coefficient: S) -> Tensor<S> {
    let val = if dual_word_sign(space, w) {
        coefficient.neg()
    } else {
        coefficient
    };
    Tensor::from_entries(w.len(), [(w.to_vec(), val)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn odd_transposition_sign() {
        let sp = GradedSpace::with_degrees(&[1, 1]);
        let t = Tensor::from_entries(2, [(vec![0, 1], rat(1, 1))]);
        let s = t.permute(&sp, &[1, 0]).unwrap();
        assert_eq!(s.get(&[1, 0]), rat(-1, 1));
    }

    #[test]
    fn contraction_of_identity() {
        let sp = GradedSpace::with_degrees(&[0, 0]);
        let f = Tensor::from_entries(2, [(vec![0, 0], rat(2, 1)), (vec![1, 1], rat(3, 1))]);
        let p = Tensor::from_entries(2, [(vec![0, 0], rat(1, 1)), (vec![1, 1], rat(1, 1))]);
        let c = f.contract(&sp, 0, 1, &p).unwrap();
        assert_eq!(c.get(&[]), rat(5, 1));
    }
}
