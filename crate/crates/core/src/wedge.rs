//! Exterior powers on a coordinate space: sign-normalized basis wedges and a
//! sparse form type.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;

use crate::linalg::Vector;
use crate::rational::Rational;

/// Sorts `indices`, returning the sorted tuple and whether an odd number of
/// transpositions was needed. `None` when an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = indices.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

pub fn is_strictly_increasing(indices: &[usize]) -> bool {
    indices.windows(2).all(|w| w[0] < w[1])
}

/// Strictly increasing `k`-tuples of `0..d` in lexicographic order.
pub fn increasing_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    (0..d).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Lexicographic enumeration of increasing tuples with reverse lookup.
#[derive(Debug)]
pub struct TupleIndex {
    dim: usize,
    grade: usize,
    tuples: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl TupleIndex {
    pub fn new(dim: usize, grade: usize) -> Arc<Self> {
        let tuples = increasing_tuples(dim, grade);
        let lookup = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Arc::new(TupleIndex {
            dim,
            grade,
            tuples,
            lookup,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.tuples[i]
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.lookup.get(tuple).copied()
    }
}

/// Element of Λ^grade in the basis of increasing wedges `e_{i1}∧…∧e_{ik}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeForm {
    grade: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl WedgeForm {
    pub fn zero(grade: usize) -> Self {
        WedgeForm {
            grade,
            terms: BTreeMap::new(),
        }
    }

    /// `e_{i1}∧…∧e_{ik}` for arbitrary (possibly unsorted or repeated) indices.
    pub fn basis(indices: &[usize]) -> Self {
        let mut form = Self::zero(indices.len());
        if let Some((sorted, odd)) = sort_with_sign(indices) {
            form.terms.insert(sorted, Rational::sign(odd as usize));
        }
        form
    }

    pub fn vector(v: &[Rational]) -> Self {
        let mut form = Self::zero(1);
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                form.terms.insert(vec![i], c.clone());
            }
        }
        form
    }

    /// `v1∧…∧vk` expanded into the increasing basis.
    pub fn from_vectors(vectors: &[Vector]) -> Self {
        vectors
            .iter()
            .fold(Self::basis(&[]), |acc, v| acc.wedge(&Self::vector(v)))
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[usize]) -> Rational {
        self.terms.get(tuple).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, tuple: Vec<usize>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(tuple.len(), self.grade);
        match self.terms.entry(tuple) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, coeff: &Rational, other: &WedgeForm) {
        debug_assert_eq!(self.grade, other.grade);
        for (t, c) in &other.terms {
            self.add_term(t.clone(), coeff * c);
        }
    }

    pub fn scale(&self, coeff: &Rational) -> WedgeForm {
        let mut out = Self::zero(self.grade);
        out.add_scaled(coeff, self);
        out
    }

    pub fn wedge(&self, other: &WedgeForm) -> WedgeForm {
        let mut out = Self::zero(self.grade + other.grade);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((sorted, odd)) = sort_with_sign(&joined) {
                    let c = ca * cb;
                    out.add_term(sorted, if odd { -c } else { c });
                }
            }
        }
        out
    }

    /// Applies the linear map `f` to every factor: Λ^k f.
    pub fn map(&self, f: impl Fn(usize) -> Vector) -> WedgeForm {
        let mut out = Self::zero(self.grade);
        for (t, c) in &self.terms {
            let images: Vec<Vector> = t.iter().map(|&i| f(i)).collect();
            out.add_scaled(c, &Self::from_vectors(&images));
        }
        out
    }
}
