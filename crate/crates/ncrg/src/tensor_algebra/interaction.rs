//! Noncommutative and commutative interaction functionals.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

use super::cyclic::{cyclic_symmetrize, full_symmetrize, partitions, Cell, Truncation};
use super::space::GradedSpace;
use super::tensor::{dual_word, Tensor};

/// Components of one cell, keyed by the sorted list of cycle lengths `r`.
pub type CellData<S> = BTreeMap<Vec<u32>, Tensor<S>>;

/// Truncated series in `gamma`, `nu` of symmetric products of cyclic words.
///
/// The component with cycle lengths `r` in cell `(i,j,k,l)` is stored as the
/// `Aut(C_r)`-invariant tensor `N_r(x)` of any representative `x`, so two
/// representatives of the same functional always give equal values.
#[derive(Clone, Debug, PartialEq)]
pub struct NcInteraction<S> {
    space: Arc<GradedSpace>,
    trunc: Truncation,
    cells: BTreeMap<Cell, CellData<S>>,
}

impl<S: Scalar> NcInteraction<S> {
    /// Zero interaction.
    pub fn new(space: Arc<GradedSpace>, trunc: Truncation) -> Self {
        Self {
            space,
            trunc,
            cells: BTreeMap::new(),
        }
    }

    /// Field space.
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    /// Truncation carried by the value.
    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Same data with a different truncation; cells outside it are dropped.
    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        let mut out = Self::new(self.space.clone(), trunc);
        for (c, d) in &self.cells {
            if trunc.contains(c) {
                out.cells.insert(*c, d.clone());
            }
        }
        out
    }

    /// Stored invariant tensor of a component.
    pub fn get(&self, cell: &Cell, r: &[u32]) -> Option<&Tensor<S>> {
        self.cells.get(cell).and_then(|d| d.get(r))
    }

    /// All components of a cell.
    pub fn cell(&self, cell: &Cell) -> Option<&CellData<S>> {
        self.cells.get(cell)
    }

    /// Iterates over nonzero cells.
    pub fn cells(&self) -> impl Iterator<Item = (&Cell, &CellData<S>)> {
        self.cells.iter()
    }

    /// `true` when every cell vanishes.
    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Adds an already invariant tensor to a component.
    ///
    /// # Panics
    /// Panics if the cell lies outside the truncation or `r` does not match it.
    pub fn add_invariant(&mut self, cell: Cell, r: &[u32], t: &Tensor<S>) {
        assert!(
            self.trunc.contains(&cell),
            "cell {cell} outside the truncation"
        );
        assert_eq!(r.len(), cell.k as usize, "cycle count mismatch");
        assert_eq!(r.iter().sum::<u32>(), cell.l, "cycle lengths must sum to l");
        assert_eq!(t.order(), cell.l as usize, "tensor order mismatch");
        if t.is_zero() {
            return;
        }
        let data = self.cells.entry(cell).or_default();
        let slot = data
            .entry(r.to_vec())
            .or_insert_with(|| Tensor::zero(cell.l as usize));
        slot.add_assign(t);
        if slot.is_zero() {
            data.remove(r);
        }
        if data.is_empty() {
            self.cells.remove(&cell);
        }
    }

    /// Adds the functional represented by `x`, i.e. adds `N_r(x)`.
    pub fn add_representative(&mut self, cell: Cell, r: &[u32], x: &Tensor<S>) {
        let t = cyclic_symmetrize(&self.space, r, x);
        self.add_invariant(cell, r, &t);
    }

    /// Adds `coefficient * e^{w_1} (x) ... (x) e^{w_l}` read as a product of
    /// cyclic words with lengths `r`.
    pub fn add_word(&mut self, cell: Cell, r: &[u32], coefficient: S, word: &[u8]) {
        let x = dual_word(&self.space, word, coefficient);
        self.add_representative(cell, r, &x);
    }

    /// Replaces a whole cell.
    pub fn set_cell(&mut self, cell: Cell, data: CellData<S>) {
        self.cells.remove(&cell);
        for (r, t) in data {
            self.add_invariant(cell, &r, &t);
        }
    }

    /// Removes a cell.
    pub fn remove_cell(&mut self, cell: &Cell) {
        self.cells.remove(cell);
    }

    /// Sum of two interactions over the same space; the truncation of `self` is kept.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, d) in &other.cells {
            if out.trunc.contains(c) {
                for (r, t) in d {
                    out.add_invariant(*c, r, t);
                }
            }
        }
        out
    }

    /// Difference of two interactions.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        self.map(|t| t.neg())
    }

    /// Multiplication by a rational.
    pub fn scale(&self, q: &Rational) -> Self {
        self.map(|t| t.scale(q))
    }

    /// Applies a linear map to every stored tensor.
    pub fn map(&self, f: impl Fn(&Tensor<S>) -> Tensor<S>) -> Self {
        let mut out = Self::new(self.space.clone(), self.trunc);
        for (c, d) in &self.cells {
            for (r, t) in d {
                out.add_invariant(*c, r, &f(t));
            }
        }
        out
    }

    /// Changes the scalar type.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> NcInteraction<T> {
        let mut out = NcInteraction::new(self.space.clone(), self.trunc);
        for (c, d) in &self.cells {
            for (r, t) in d {
                out.add_invariant(*c, r, &t.convert(&f));
            }
        }
        out
    }

    /// Keeps only the cells satisfying a predicate.
    pub fn filter_cells(&self, keep: impl Fn(&Cell) -> bool) -> Self {
        Self {
            space: self.space.clone(),
            trunc: self.trunc,
            cells: self
                .cells
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, d)| (*c, d.clone()))
                .collect(),
        }
    }

    /// Tree-level part (cells `(0,0,1,l)`).
    pub fn tree_part(&self) -> Self {
        self.filter_cells(Cell::is_tree_level)
    }

    /// Projection modulo the filtration step `F_p`: keeps cells of loop number `< p`.
    pub fn modulo_filtration(&self, p: u32) -> Self {
        self.filter_cells(|c| c.loop_number() < p as i64)
    }

    /// Checks degree zero, admissibility of every nonzero cell and invariance
    /// of the stored components.
    pub fn validate(&self) -> Result<()> {
        for (c, d) in &self.cells {
            if !c.is_admissible() {
                return Err(Error::InvalidInteraction(format!("cell {c} must vanish")));
            }
            for (r, t) in d {
                if t.degree(&self.space) != Some(0) {
                    return Err(Error::InvalidInteraction(format!(
                        "component {r:?} of cell {c} is not of degree zero"
                    )));
                }
                let n = super::cyclic::aut_order(r);
                let sym = cyclic_symmetrize(&self.space, r, t);
                if sym != t.scale(&n) {
                    return Err(Error::InvalidInteraction(format!(
                        "component {r:?} of cell {c} is not cyclically invariant"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Cells of `self` and `other` that differ.
    pub fn differing_cells(&self, other: &Self) -> Vec<Cell> {
        let mut keys: Vec<Cell> = self
            .cells
            .keys()
            .chain(other.cells.keys())
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|c| self.cells.get(c) != other.cells.get(c))
            .collect()
    }

    /// Restriction to a set of cells.
    pub fn restrict(&self, cells: &[Cell]) -> Self {
        self.filter_cells(|c| cells.contains(c))
    }
}

/// Truncated series `sum hbar^i I_{ij}` of symmetric functionals of order `j`,
/// each stored as the fully symmetric tensor `N_{S_j}(y)` of a representative `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommInteraction<S> {
    space: Arc<GradedSpace>,
    trunc: Truncation,
    cells: BTreeMap<(u32, u32), Tensor<S>>,
}

/// `true` when `hbar^i` order-`j` terms may be nonzero.
pub fn comm_cell_admissible(i: u32, j: u32) -> bool {
    2 * i + j >= 3
}

impl<S: Scalar> CommInteraction<S> {
    /// Zero interaction.
    pub fn new(space: Arc<GradedSpace>, trunc: Truncation) -> Self {
        Self {
            space,
            trunc,
            cells: BTreeMap::new(),
        }
    }

    /// Field space.
    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    /// Truncation: `i <= nmax` and `j <= lmax + 2 (nmax - i)`.
    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// `true` when `(i, j)` lies in the staircase.
    pub fn contains(&self, i: u32, j: u32) -> bool {
        i <= self.trunc.nmax && j <= self.trunc.max_legs(i) && comm_cell_admissible(i, j)
    }

    /// All admissible `(i, j)` pairs in the staircase.
    pub fn cell_list(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for i in 0..=self.trunc.nmax {
            for j in 0..=self.trunc.max_legs(i) {
                if comm_cell_admissible(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Stored symmetric tensor of a cell.
    pub fn get(&self, i: u32, j: u32) -> Option<&Tensor<S>> {
        self.cells.get(&(i, j))
    }

    /// Iterates over nonzero cells.
    pub fn cells(&self) -> impl Iterator<Item = (&(u32, u32), &Tensor<S>)> {
        self.cells.iter()
    }

    /// `true` when every cell vanishes.
    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Adds an already symmetric tensor.
    ///
    /// # Panics
    /// Panics if the cell lies outside the truncation or the order is wrong.
    pub fn add_symmetric(&mut self, i: u32, j: u32, t: &Tensor<S>) {
        assert!(self.contains(i, j), "cell ({i},{j}) outside the truncation");
        assert_eq!(t.order(), j as usize, "tensor order mismatch");
        if t.is_zero() {
            return;
        }
        let slot = self
            .cells
            .entry((i, j))
            .or_insert_with(|| Tensor::zero(j as usize));
        slot.add_assign(t);
        if slot.is_zero() {
            self.cells.remove(&(i, j));
        }
    }

    /// Adds the functional represented by `y`, i.e. adds `N_{S_j}(y)`.
    pub fn add_representative(&mut self, i: u32, j: u32, y: &Tensor<S>) {
        let t = full_symmetrize(&self.space, y);
        self.add_symmetric(i, j, &t);
    }

    /// Sum of two interactions.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), t) in &other.cells {
            if out.contains(i, j) {
                out.add_symmetric(i, j, t);
            }
        }
        out
    }

    /// Difference of two interactions.
    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), t) in &other.cells {
            if out.contains(i, j) {
                out.add_symmetric(i, j, &t.neg());
            }
        }
        out
    }

    /// Changes the scalar type.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CommInteraction<T> {
        let mut out = CommInteraction::new(self.space.clone(), self.trunc);
        for (&(i, j), t) in &self.cells {
            out.add_symmetric(i, j, &t.convert(&f));
        }
        out
    }

    /// Keeps only the cells satisfying a predicate.
    pub fn filter_cells(&self, keep: impl Fn(u32, u32) -> bool) -> Self {
        Self {
            space: self.space.clone(),
            trunc: self.trunc,
            cells: self
                .cells
                .iter()
                .filter(|(&(i, j), _)| keep(i, j))
                .map(|(c, t)| (*c, t.clone()))
                .collect(),
        }
    }

    /// Checks degree zero, admissibility and full symmetry.
    pub fn validate(&self) -> Result<()> {
        for (&(i, j), t) in &self.cells {
            if !comm_cell_admissible(i, j) {
                return Err(Error::InvalidInteraction(format!(
                    "cell ({i},{j}) must vanish"
                )));
            }
            if t.degree(&self.space) != Some(0) {
                return Err(Error::InvalidInteraction(format!(
                    "cell ({i},{j}) is not of degree zero"
                )));
            }
            let sym = full_symmetrize(&self.space, t);
            if sym != t.scale(&crate::scalar::factorial(j as usize)) {
                return Err(Error::InvalidInteraction(format!(
                    "cell ({i},{j}) is not symmetric"
                )));
            }
        }
        Ok(())
    }
}

/// Orbit basis of one component space: for each `Aut(C_r)` orbit of basis
/// words of degree zero whose symmetrization survives, the invariant tensor `N_r(e^w)`.
pub fn component_basis<S: Scalar>(space: &GradedSpace, r: &[u32]) -> Vec<Tensor<S>> {
    let l: u32 = r.iter().sum();
    let dim = space.dim() as u8;
    let mut seen: std::collections::BTreeSet<Vec<u8>> = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut w = vec![0u8; l as usize];
    loop {
        if space.word_degree(&w) == 0 && !seen.contains(&w) {
            let t = cyclic_symmetrize(space, r, &dual_word(space, &w, S::one()));
            for (k, _) in cyclic_symmetrize(
                space,
                r,
                &Tensor::from_entries(l as usize, [(w.clone(), S::one())]),
            )
            .iter()
            {
                seen.insert(k.clone());
            }
            seen.insert(w.clone());
            if !t.is_zero() {
                out.push(t);
            }
        }
        // next word
        let mut pos = l as usize;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            w[pos] += 1;
            if w[pos] < dim {
                break;
            }
            w[pos] = 0;
        }
    }
}

/// Every `(cell, r)` component inside a truncation.
pub fn components(trunc: &Truncation) -> Vec<(Cell, Vec<u32>)> {
    let mut out = Vec::new();
    for c in trunc.cells() {
        for r in partitions(c.l, c.k) {
            out.push((c, r));
        }
    }
    out
}
