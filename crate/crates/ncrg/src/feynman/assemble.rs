//! Contraction of a network of functionals along propagators.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor_algebra::{GradedSpace, Tensor};

/// A functional whose slots are labeled by half-edges.
#[derive(Clone, Debug)]
pub struct Blob<S> {
    /// Half-edge label of each slot.
    pub slots: Vec<usize>,
    /// The functional, of order `slots.len()`.
    pub tensor: Tensor<S>,
}

/// A functional on the legs of a graph, with slots in ascending half-edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplitude<S> {
    /// Leg half-edges, ascending.
    pub legs: Vec<usize>,
    /// The functional, of order `legs.len()`.
    pub tensor: Tensor<S>,
}

impl<S: Scalar> Amplitude<S> {
    /// Zero functional on the given legs.
    pub fn zero(mut legs: Vec<usize>) -> Self {
        legs.sort_unstable();
        let n = legs.len();
        Self {
            legs,
            tensor: Tensor::zero(n),
        }
    }

    /// `true` when the functional vanishes.
    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    /// Push-forward along a half-edge relabeling `h -> hmap[h]`.
    pub fn relabel(&self, space: &GradedSpace, hmap: &[usize]) -> Result<Self> {
        let labels: Vec<usize> = self.legs.iter().map(|&h| hmap[h]).collect();
        let mut legs = labels.clone();
        legs.sort_unstable();
        let order: Vec<usize> = legs
            .iter()
            .map(|x| labels.iter().position(|y| y == x).expect("label present"))
            .collect();
        Ok(Self {
            legs,
            tensor: self.tensor.select(space, &order)?,
        })
    }

    /// The functional with slots reordered to follow `order`, a permutation of the legs.
    pub fn in_order(&self, space: &GradedSpace, order: &[usize]) -> Result<Tensor<S>> {
        let idx: Result<Vec<usize>> = order
            .iter()
            .map(|h| {
                self.legs.binary_search(h).map_err(|_| Error::Arity {
                    expected: self.legs.len(),
                    found: order.len(),
                })
            })
            .collect();
        self.tensor.select(space, &idx?)
    }
}

/// Dense view of a two-tensor with its nonzero entries per row and column.
struct DenseProp<S> {
    dim: usize,
    values: Vec<Option<S>>,
    rows: Vec<Vec<u8>>,
    cols: Vec<Vec<u8>>,
}

impl<S: Scalar> DenseProp<S> {
    fn new(space: &GradedSpace, p: &Tensor<S>) -> Self {
        let dim = space.dim();
        let mut values = vec![None; dim * dim];
        let mut rows = vec![Vec::new(); dim];
        let mut cols = vec![Vec::new(); dim];
        for (k, v) in p.iter() {
            values[k[0] as usize * dim + k[1] as usize] = Some(v.clone());
            rows[k[0] as usize].push(k[1]);
            cols[k[1] as usize].push(k[0]);
        }
        Self {
            dim,
            values,
            rows,
            cols,
        }
    }

    fn get(&self, a: u8, b: u8) -> Option<&S> {
        self.values[a as usize * self.dim + b as usize].as_ref()
    }
}

/// Parity of contracting `pairs` one after another in a key; each pair
/// `(i, j)` receives the first factor of the propagator in slot `i`.
fn contraction_parity(
    space: &GradedSpace,
    key: &[u8],
    pairs: &[(usize, usize)],
    removed: &mut [bool],
) -> bool {
    removed.iter_mut().for_each(|r| *r = false);
    let mut odd = false;
    for &(i, j) in pairs {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let (pa, pb) = (space.parity(key[lo]), space.parity(key[hi]));
        if i > j && pa && pb {
            odd ^= true;
        }
        let mut after_hi = false;
        let mut after_lo = false;
        for t in (lo + 1)..key.len() {
            if removed[t] || !space.parity(key[t]) {
                continue;
            }
            if t > hi {
                after_hi ^= true;
            }
            if t != hi {
                after_lo ^= true;
            }
        }
        odd ^= (pb && after_hi) ^ (pa && after_lo);
        removed[lo] = true;
        removed[hi] = true;
    }
    odd
}

/// Evaluates a network: the functionals in `blobs` are tensored together and
/// every edge `(x, y)` is contracted with `p`, its first factor entering the
/// slot labeled `x`. Unpaired labels become the legs of the result.
///
/// Contractions are fused into the tensor products, visiting blobs in
/// breadth-first order, so intermediate tensors only carry open slots.
pub fn assemble<S: Scalar>(
    space: &GradedSpace,
    blobs: &[Blob<S>],
    edges: &[(usize, usize)],
    p: &Tensor<S>,
) -> Result<Amplitude<S>> {
    if p.order() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: p.order(),
        });
    }
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (b, blob) in blobs.iter().enumerate() {
        if blob.slots.len() != blob.tensor.order() {
            return Err(Error::Arity {
                expected: blob.tensor.order(),
                found: blob.slots.len(),
            });
        }
        for &h in &blob.slots {
            if owner.insert(h, b).is_some() {
                return Err(Error::InvalidGraph(format!(
                    "half-edge {h} is attached twice"
                )));
            }
        }
    }
    let mut paired: HashMap<usize, usize> = HashMap::new();
    for &(x, y) in edges {
        if x == y || !owner.contains_key(&x) || !owner.contains_key(&y) {
            return Err(Error::NotAnEdge(x));
        }
        if paired.insert(x, y).is_some() || paired.insert(y, x).is_some() {
            return Err(Error::NotAnEdge(x));
        }
    }
    let legs: Vec<usize> = {
        let mut l: Vec<usize> = owner
            .keys()
            .copied()
            .filter(|h| !paired.contains_key(h))
            .collect();
        l.sort_unstable();
        l
    };
    let dense = DenseProp::new(space, p);

    // Contract edges inside each blob.
    let mut local: Vec<Blob<S>> = blobs.to_vec();
    let mut cross: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in edges {
        let (bx, by) = (owner[&x], owner[&y]);
        if bx != by {
            cross.push((x, y));
            continue;
        }
        let blob = &mut local[bx];
        let i = blob
            .slots
            .iter()
            .position(|&h| h == x)
            .expect("slot present");
        let j = blob
            .slots
            .iter()
            .position(|&h| h == y)
            .expect("slot present");
        blob.tensor = blob.tensor.contract(space, i, j, p)?;
        blob.slots.retain(|&h| h != x && h != y);
        if blob.tensor.is_zero() {
            return Ok(Amplitude::zero(legs));
        }
    }

    // Breadth-first order over blobs.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); blobs.len()];
    for &(x, y) in &cross {
        adj[owner[&x]].push(owner[&y]);
        adj[owner[&y]].push(owner[&x]);
    }
    let mut order = Vec::with_capacity(blobs.len());
    let mut seen = vec![false; blobs.len()];
    for start in 0..blobs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(b) = queue.pop_front() {
            order.push(b);
            let mut nb = adj[b].clone();
            nb.sort_unstable();
            for c in nb {
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
    }

    let mut cur = Blob {
        slots: Vec::new(),
        tensor: Tensor::scalar(S::one()),
    };
    for &b in &order {
        let blob = &local[b];
        cur = attach(space, &cur, blob, &cross, &dense)?;
        if cur.tensor.is_zero() {
            return Ok(Amplitude::zero(legs));
        }
    }
    let pos: Vec<usize> = legs
        .iter()
        .map(|h| cur.slots.iter().position(|x| x == h).expect("leg present"))
        .collect();
    Ok(Amplitude {
        tensor: cur.tensor.select(space, &pos)?,
        legs,
    })
}

/// Tensors `cur` with `blob` and contracts every edge of `edges` joining them.
fn attach<S: Scalar>(
    space: &GradedSpace,
    cur: &Blob<S>,
    blob: &Blob<S>,
    edges: &[(usize, usize)],
    p: &DenseProp<S>,
) -> Result<Blob<S>> {
    let nc = cur.slots.len();
    let pos_cur = |h: usize| cur.slots.iter().position(|&x| x == h);
    let pos_new = |h: usize| blob.slots.iter().position(|&x| x == h);
    // (slot in cur, slot in blob, first factor on the cur side)
    let mut links: Vec<(usize, usize, bool)> = Vec::new();
    for &(x, y) in edges {
        if let (Some(i), Some(j)) = (pos_cur(x), pos_new(y)) {
            links.push((i, j, true));
        } else if let (Some(i), Some(j)) = (pos_cur(y), pos_new(x)) {
            links.push((i, j, false));
        }
    }
    let pairs: Vec<(usize, usize)> = links
        .iter()
        .map(|&(i, j, first_cur)| if first_cur { (i, nc + j) } else { (nc + j, i) })
        .collect();
    let mut index: HashMap<Vec<u8>, Vec<(&Vec<u8>, &S)>> = HashMap::new();
    for (k, v) in blob.tensor.iter() {
        index
            .entry(links.iter().map(|&(_, j, _)| k[j]).collect())
            .or_default()
            .push((k, v));
    }
    let in_link: Vec<bool> = {
        let mut m = vec![false; nc + blob.slots.len()];
        for &(a, b) in &pairs {
            m[a] = true;
            m[b] = true;
        }
        m
    };
    let slots: Vec<usize> = cur
        .slots
        .iter()
        .chain(blob.slots.iter())
        .enumerate()
        .filter(|&(t, _)| !in_link[t])
        .map(|(_, &h)| h)
        .collect();
    let mut out = Tensor::zero(slots.len());
    let mut key = Vec::with_capacity(in_link.len());
    let mut removed = vec![false; in_link.len()];
    let mut want: Vec<u8> = vec![0; links.len()];
    for (kc, vc) in cur.tensor.iter() {
        let pc = space.word_parity(kc);
        // Enumerate the blob-side letters compatible with the propagator.
        let options: Vec<&Vec<u8>> = links
            .iter()
            .map(|&(i, _, first_cur)| {
                if first_cur {
                    &p.rows[kc[i] as usize]
                } else {
                    &p.cols[kc[i] as usize]
                }
            })
            .collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut choice = vec![0usize; links.len()];
        'outer: loop {
            for (e, c) in choice.iter().enumerate() {
                want[e] = options[e][*c];
            }
            if let Some(entries) = index.get(&want) {
                let mut pval = vc.clone();
                for (e, &(i, _, first_cur)) in links.iter().enumerate() {
                    let (a, b) = if first_cur {
                        (kc[i], want[e])
                    } else {
                        (want[e], kc[i])
                    };
                    pval = pval.mul(p.get(a, b).expect("listed entry"));
                }
                for (kb, vb) in entries {
                    key.clear();
                    key.extend_from_slice(kc);
                    key.extend_from_slice(kb);
                    let mut odd = pc && space.word_parity(kb);
                    odd ^= contraction_parity(space, &key, &pairs, &mut removed);
                    let rest: Vec<u8> = key
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| !in_link[t])
                        .map(|(_, &a)| a)
                        .collect();
                    let val = pval.mul(vb);
                    out.add_entry(rest, if odd { val.neg() } else { val });
                }
            }
            // advance the mixed-radix counter
            let mut e = 0;
            loop {
                if e == links.len() {
                    break 'outer;
                }
                choice[e] += 1;
                if choice[e] < options[e].len() {
                    break;
                }
                choice[e] = 0;
                e += 1;
            }
        }
    }
    Ok(Blob { slots, tensor: out })
}
