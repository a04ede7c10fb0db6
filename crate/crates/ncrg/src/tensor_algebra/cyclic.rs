//! Cyclic decompositions, multidegree cells and symmetrization operators.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::{factorial, Rational, Scalar};

use super::space::GradedSpace;
use super::tensor::{permutation_sign, Tensor};

/// Multidegree `(i, j, k, l)`: genus power `i`, boundary power `j`, number of
/// cyclic words `k` and total number of letters `l`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    /// Power of the genus variable.
    pub i: u32,
    /// Power of the boundary variable.
    pub j: u32,
    /// Number of cyclic words.
    pub k: u32,
    /// Total number of letters.
    pub l: u32,
}

impl Cell {
    /// Builds a cell.
    pub const fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        Self { i, j, k, l }
    }

    /// Loop number `2i + j + k - 1` (zero only for `i = j = 0`, `k = 1`).
    pub fn loop_number(&self) -> i64 {
        2 * self.i as i64 + self.j as i64 + self.k as i64 - 1
    }

    /// `true` when interactions may be nonzero in this cell.
    pub fn is_admissible(&self) -> bool {
        let n = self.loop_number();
        if n < 0 || 2 * n + (self.l as i64) < 3 {
            return false;
        }
        if self.k == 0 {
            self.l == 0 && self.j > 0
        } else {
            self.k <= self.l
        }
    }

    /// `true` for cells containing only tree-level terms.
    pub fn is_tree_level(&self) -> bool {
        self.i == 0 && self.j == 0 && self.k == 1
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i, self.j, self.k, self.l)
    }
}

/// Staircase truncation: a cell of loop number `n` is kept when `n <= nmax`
/// and `l <= lmax + 2 (nmax - n)`. The staircase is closed under taking vertex
/// cells of graphs, so flows can be computed exactly inside it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    /// Largest loop number.
    pub nmax: u32,
    /// Largest number of letters at loop number `nmax`.
    pub lmax: u32,
}

impl Truncation {
    /// Builds a truncation.
    pub const fn new(nmax: u32, lmax: u32) -> Self {
        Self { nmax, lmax }
    }

    /// Largest number of letters allowed at loop number `n`.
    pub fn max_legs(&self, n: u32) -> u32 {
        self.lmax + 2 * (self.nmax - n.min(self.nmax))
    }

    /// `true` when an admissible cell lies inside the staircase.
    pub fn contains(&self, c: &Cell) -> bool {
        let n = c.loop_number();
        n >= 0 && n as u32 <= self.nmax && c.l <= self.max_legs(n as u32) && c.is_admissible()
    }

    /// `true` when the cell lies in the box `n <= nmax`, `l <= lmax`.
    pub fn box_contains(&self, c: &Cell) -> bool {
        let n = c.loop_number();
        n >= 0 && n as u32 <= self.nmax && c.l <= self.lmax && c.is_admissible()
    }

    /// All admissible cells in the staircase, in lexicographic order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for i in 0..=self.nmax / 2 + 1 {
            for j in 0..=self.nmax + 1 {
                for k in 0..=self.nmax + 1 {
                    for l in 0..=self.lmax + 2 * self.nmax {
                        let c = Cell::new(i, j, k, l);
                        if self.contains(&c) {
                            out.push(c);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// All admissible cells in the box `n <= nmax`, `l <= lmax`.
    pub fn box_cells(&self) -> Vec<Cell> {
        self.cells()
            .into_iter()
            .filter(|c| self.box_contains(c))
            .collect()
    }
}

/// Partitions of `l` into exactly `k` positive parts, each sorted ascending.
pub fn partitions(l: u32, k: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, parts: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut p = min;
        while p * parts <= rest {
            cur.push(p);
            go(rest - p, parts - 1, p, cur, out);
            cur.pop();
            p += 1;
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if l == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(l, k, 1, &mut Vec::new(), &mut out);
    out
}

/// The standard cyclic decomposition `C_r` of `{0, ..., l-1}` into consecutive
/// blocks of lengths `r`, as a permutation sending each slot to the next slot of its block.
pub fn standard_cycle(r: &[u32]) -> Vec<usize> {
    let mut c = Vec::new();
    let mut start = 0usize;
    for &len in r {
        let len = len as usize;
        for t in 0..len {
            c.push(start + (t + 1) % len);
        }
        start += len;
    }
    c
}

/// Order of the automorphism group of `C_r` (block rotations and permutations of equal blocks).
pub fn aut_order(r: &[u32]) -> Rational {
    let mut q: Rational = r
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .product();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in r {
        *counts.entry(x).or_default() += 1;
    }
    for (_, m) in counts {
        q *= factorial(m);
    }
    q
}

/// All elements of `Aut(C_r)` as slot permutations (slot `i` moves to `s[i]`).
pub fn aut_group(r: &[u32]) -> Vec<Vec<usize>> {
    let mut starts = Vec::new();
    let mut s = 0usize;
    for &len in r {
        starts.push(s);
        s += len as usize;
    }
    let l = s;
    // Block permutations preserving lengths.
    let mut block_perms: Vec<Vec<usize>> = Vec::new();
    let k = r.len();
    let mut perm: Vec<usize> = (0..k).collect();
    permutations_rec(&mut perm, 0, &mut |p: &[usize]| {
        if (0..k).all(|b| r[p[b]] == r[b]) {
            block_perms.push(p.to_vec());
        }
    });
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new()];
    for &len in r {
        let mut next = Vec::new();
        for prefix in &rotations {
            for rot in 0..len as usize {
                let mut v = prefix.clone();
                v.push(rot);
                next.push(v);
            }
        }
        rotations = next;
    }
    let mut out = Vec::new();
    for bp in &block_perms {
        for rot in &rotations {
            let mut s = vec![0usize; l];
            for b in 0..k {
                let len = r[b] as usize;
                let target = bp[b];
                for t in 0..len {
                    s[starts[b] + t] = starts[target] + (t + rot[b]) % len;
                }
            }
            out.push(s);
        }
    }
    out
}

fn permutations_rec(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permutations_rec(v, i + 1, f);
        v.swap(i, j);
    }
}

/// The symmetrizer `N_r(x) = sum_{s in Aut(C_r)} s . x`.
pub fn cyclic_symmetrize<S: Scalar>(space: &GradedSpace, r: &[u32], x: &Tensor<S>) -> Tensor<S> {
    let group = aut_group(r);
    let mut out = Tensor::zero(x.order());
    for s in &group {
        out.add_assign(
            &x.permute(space, s)
                .expect("group acts on the right number of slots"),
        );
    }
    out
}

/// The full symmetrizer `N_{S_l}(x) = sum_{s in S_l} s . x`, computed by sorting
/// each index and expanding over its distinct rearrangements.
pub fn full_symmetrize<S: Scalar>(space: &GradedSpace, x: &Tensor<S>) -> Tensor<S> {
    let l = x.order();
    let mut acc: BTreeMap<Vec<u8>, S> = BTreeMap::new();
    for (k, v) in x.iter() {
        let (sorted, s) = sorting_permutation(k);
        let odd = permutation_sign(space, k, &s);
        let val = if odd { v.neg() } else { v.clone() };
        acc.entry(sorted)
            .and_modify(|a| a.add_assign(&val))
            .or_insert(val);
    }
    let mut out = Tensor::zero(l);
    for (w0, v) in acc {
        if v.is_zero() {
            continue;
        }
        if (1..w0.len()).any(|t| w0[t] == w0[t - 1] && space.parity(w0[t])) {
            continue;
        }
        let stab = stabilizer_order(&w0);
        let base = v.scale(&stab);
        for (u, s) in rearrangements(&w0) {
            let odd = permutation_sign(space, &w0, &s);
            out.add_entry(u, if odd { base.neg() } else { base.clone() });
        }
    }
    out
}

/// Sorted copy of `k` and the permutation (slot `i` moves to `s[i]`) that sorts it stably.
fn sorting_permutation(k: &[u8]) -> (Vec<u8>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..k.len()).collect();
    idx.sort_by_key(|&i| (k[i], i));
    let mut s = vec![0; k.len()];
    for (pos, &i) in idx.iter().enumerate() {
        s[i] = pos;
    }
    (idx.iter().map(|&i| k[i]).collect(), s)
}

fn stabilizer_order(w: &[u8]) -> Rational {
    let mut q = Rational::from_integer(1.into());
    let mut t = 0;
    while t < w.len() {
        let mut e = t;
        while e < w.len() && w[e] == w[t] {
            e += 1;
        }
        q *= factorial(e - t);
        t = e;
    }
    q
}

/// Distinct rearrangements `u` of a sorted word together with a permutation
/// `s` moving `w0` onto `u` that preserves the order of equal letters.
fn rearrangements(w0: &[u8]) -> Vec<(Vec<u8>, Vec<usize>)> {
    let l = w0.len();
    let mut out = Vec::new();
    let mut u = vec![0u8; l];
    let mut s = vec![usize::MAX; l];
    let mut used = vec![false; l];
    fn go(
        pos: usize,
        w0: &[u8],
        u: &mut Vec<u8>,
        s: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<(Vec<u8>, Vec<usize>)>,
    ) {
        if pos == w0.len() {
            out.push((u.clone(), s.clone()));
            return;
        }
        let mut last: Option<u8> = None;
        for i in 0..w0.len() {
            if used[i] || last == Some(w0[i]) {
                continue;
            }
            // take the first unused copy of each letter
            if i > 0 && w0[i - 1] == w0[i] && !used[i - 1] {
                continue;
            }
            last = Some(w0[i]);
            used[i] = true;
            u[pos] = w0[i];
            s[i] = pos;
            go(pos + 1, w0, u, s, used, out);
            used[i] = false;
        }
    }
    go(0, w0, &mut u, &mut s, &mut used, &mut out);
    out
}

/// Rotates a basis word to its lexicographically least rotation.
///
/// Returns the canonical word and the Koszul parity of the rotation, or
/// `None` when the word is killed by its own rotational symmetry.
pub fn cyclic_canonicalize(space: &GradedSpace, w: &[u8]) -> Option<(Vec<u8>, bool)> {
    let r = w.len();
    if r == 0 {
        return Some((Vec::new(), false));
    }
    let mut best: Option<(Vec<u8>, bool)> = None;
    for shift in 0..r {
        let rotated: Vec<u8> = (0..r).map(|t| w[(t + shift) % r]).collect();
        let s: Vec<usize> = (0..r).map(|i| (i + r - shift) % r).collect();
        let odd = permutation_sign(space, w, &s);
        match &best {
            Some((b, bodd)) if *b == rotated => {
                if *bodd != odd {
                    return None;
                }
            }
            Some((b, _)) if *b < rotated => {}
            _ => best = Some((rotated, odd)),
        }
    }
    best
}

/// A linear combination of cyclic words of a fixed length, stored through a
/// representative tensor and compared modulo signed rotation.
#[derive(Clone, Debug)]
pub struct CyclicWord<S> {
    /// Representative tensor.
    pub representative: Tensor<S>,
}

impl<S: Scalar> CyclicWord<S> {
    /// Wraps a representative.
    pub fn new(representative: Tensor<S>) -> Self {
        Self { representative }
    }

    /// Length of the words.
    pub fn len(&self) -> usize {
        self.representative.order()
    }

    /// `true` for words of length zero.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Canonical representative: every term rotated to its least rotation.
    pub fn canonical(&self, space: &GradedSpace) -> Tensor<S> {
        let mut out = Tensor::zero(self.len());
        for (k, v) in self.representative.iter() {
            if let Some((w, odd)) = cyclic_canonicalize(space, k) {
                out.add_entry(w, if odd { v.neg() } else { v.clone() });
            }
        }
        out
    }

    /// Equality modulo signed cyclic rotation.
    pub fn equivalent(&self, other: &Self, space: &GradedSpace) -> bool {
        self.len() == other.len() && self.canonical(space) == other.canonical(space)
    }
}
