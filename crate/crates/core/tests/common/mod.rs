//! Test-only brute-force oracle.
//!
//! Cochains are dense tensors over *ordered* basis inputs, brackets are
//! expanded over every ordered index tuple, and ranks come from a
//! fraction-free elimination over big integers. None of the library's wedge
//! indexing or echelon code is used here. Integer data only; overflow panics.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use nlie_core::{io, q, Matrix, Morphism, NLieAlgebra, Rational};
use proptest::prelude::*;
use num_bigint::BigInt;
use num_traits::Zero;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

pub fn load_alg(name: &str) -> NLieAlgebra {
    io::load_algebra(&corpus(name)).unwrap()
}

pub fn load_phi(name: &str) -> Morphism {
    io::load_morphism(&corpus(name)).unwrap()
}

pub const ALGEBRAS: [&str; 5] = [
    "ex1_A.json",
    "ex1_B.json",
    "ex2_B.json",
    "ex3_A.json",
    "ex3_B.json",
];

pub const MORPHISMS: [&str; 5] = [
    "ex1_phi.json",
    "ex2_phi_a.json",
    "ex2_phi_b.json",
    "ex3_phi_a.json",
    "ex3_phi_b.json",
];

fn int(r: &Rational) -> i64 {
    assert!(r.is_integer(), "oracle needs integer data, got {r}");
    i64::try_from(r.numer()).expect("coefficient fits in i64")
}

/// Sign of the permutation sorting `idx`, or 0 on a repeated entry.
pub fn perm_sign(idx: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All ordered tuples in `0..d` of length `k`, last entry fastest.
pub fn ordered_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * d);
        for t in &out {
            for i in 0..d {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn radix(idx: &[usize], d: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * d + i)
}

/// Full ordered bracket table.
#[derive(Clone, Debug)]
pub struct Table {
    pub n: usize,
    pub d: usize,
    values: Vec<Vec<i64>>,
}

impl Table {
    pub fn from_algebra(alg: &NLieAlgebra) -> Self {
        let (n, d) = (alg.arity(), alg.dim());
        let values = ordered_tuples(d, n)
            .into_iter()
            .map(|t| {
                let s = perm_sign(&t);
                let mut sorted = t.clone();
                sorted.sort_unstable();
                match alg.structure().get(&sorted) {
                    Some(v) if s != 0 => v.iter().map(|c| s * int(c)).collect(),
                    _ => vec![0; d],
                }
            })
            .collect();
        Table { n, d, values }
    }

    pub fn basis(&self, idx: &[usize]) -> &[i64] {
        &self.values[radix(idx, self.d)]
    }

    /// Multilinear bracket of arbitrary integer vectors.
    pub fn bracket(&self, args: &[Vec<i64>]) -> Vec<i64> {
        assert_eq!(args.len(), self.n);
        let mut out = vec![0; self.d];
        for t in ordered_tuples(self.d, self.n) {
            let c: i64 = t.iter().zip(args).map(|(&i, v)| v[i]).product();
            if c != 0 {
                for (o, b) in out.iter_mut().zip(self.basis(&t)) {
                    *o += c * b;
                }
            }
        }
        out
    }
}

pub fn unit(d: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = 1;
    v
}

/// The setting of a module complex: source, target and the morphism rows.
pub struct Oracle {
    pub n: usize,
    pub ds: usize,
    pub dt: usize,
    pub src: Table,
    pub tgt: Table,
    pub phi: Vec<Vec<i64>>,
}

/// A degree-`p` cochain as a dense tensor over ordered inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    pub degree: usize,
    pub values: Vec<i64>,
}

impl Oracle {
    pub fn module(phi: &Morphism) -> Self {
        let m = phi.matrix();
        Oracle {
            n: phi.source().arity(),
            ds: phi.source().dim(),
            dt: phi.target().dim(),
            src: Table::from_algebra(phi.source()),
            tgt: Table::from_algebra(phi.target()),
            phi: (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| int(m.get(r, c))).collect())
                .collect(),
        }
    }

    pub fn adjoint(alg: &NLieAlgebra) -> Self {
        let d = alg.dim();
        let t = Table::from_algebra(alg);
        Oracle {
            n: alg.arity(),
            ds: d,
            dt: d,
            src: t.clone(),
            tgt: t,
            phi: (0..d).map(|i| unit(d, i)).collect(),
        }
    }

    pub fn args(&self, p: usize) -> usize {
        p * (self.n - 1) + 1
    }

    pub fn tensor_len(&self, p: usize) -> usize {
        self.ds.pow(self.args(p) as u32) * self.dt
    }

    /// Number of canonical generators of `C^p`.
    pub fn generator_count(&self, p: usize) -> usize {
        let choose = |n: usize, k: usize| -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        };
        let top = if p == 0 { self.ds } else { choose(self.ds, self.n) };
        choose(self.ds, self.n - 1).pow(p.saturating_sub(1) as u32) * top * self.dt
    }

    /// Antisymmetrised generators: every block skew, the last block together
    /// with `z` skew, each one supported on a single orbit of inputs.
    pub fn generators(&self, p: usize) -> Vec<Tensor> {
        let k = self.args(p);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for input in ordered_tuples(self.ds, k) {
            if let Some(key) = self.orbit_key(&input, p) {
                if !seen.insert(key.clone()) {
                    continue;
                }
                for t in 0..self.dt {
                    let mut values = vec![0; self.tensor_len(p)];
                    for other in ordered_tuples(self.ds, k) {
                        if let Some((okey, s)) = self.orbit_sign(&other, p) {
                            if okey == key {
                                values[radix(&other, self.ds) * self.dt + t] = s;
                            }
                        }
                    }
                    out.push(Tensor { degree: p, values });
                }
            }
        }
        out
    }

    fn groups(&self, p: usize) -> Vec<std::ops::Range<usize>> {
        let n1 = self.n - 1;
        if p == 0 {
            return vec![0..1];
        }
        let mut g: Vec<_> = (0..p - 1).map(|b| b * n1..(b + 1) * n1).collect();
        g.push((p - 1) * n1..p * n1 + 1);
        g
    }

    fn orbit_sign(&self, input: &[usize], p: usize) -> Option<(Vec<Vec<usize>>, i64)> {
        let mut key = Vec::new();
        let mut sign = 1;
        for r in self.groups(p) {
            let part = &input[r];
            let s = perm_sign(part);
            if s == 0 {
                return None;
            }
            sign *= s;
            let mut sorted = part.to_vec();
            sorted.sort_unstable();
            key.push(sorted);
        }
        Some((key, sign))
    }

    fn orbit_key(&self, input: &[usize], p: usize) -> Option<Vec<Vec<usize>>> {
        self.orbit_sign(input, p).map(|(k, _)| k)
    }

    pub fn value_at(&self, f: &Tensor, input: &[usize]) -> Vec<i64> {
        self.value(f, input).to_vec()
    }

    fn value<'a>(&self, f: &'a Tensor, input: &[usize]) -> &'a [i64] {
        let at = radix(input, self.ds) * self.dt;
        &f.values[at..at + self.dt]
    }

    /// `f` on basis inputs except one slot holding an arbitrary vector.
    fn value_with(&self, f: &Tensor, input: &[usize], slot: usize, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.dt];
        let mut idx = input.to_vec();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                idx[slot] = i;
                for (o, x) in out.iter_mut().zip(self.value(f, &idx)) {
                    *o += c * x;
                }
            }
        }
        out
    }

    fn src_ad(&self, block: &[usize], z: usize) -> Vec<i64> {
        let mut args: Vec<Vec<i64>> = block.iter().map(|&i| unit(self.ds, i)).collect();
        args.push(unit(self.ds, z));
        self.src.bracket(&args)
    }

    fn lprime(&self, block: &[usize], v: Vec<i64>) -> Vec<i64> {
        let mut args: Vec<Vec<i64>> = block.iter().map(|&i| self.phi_col(i)).collect();
        args.push(v);
        self.tgt.bracket(&args)
    }

    fn phi_col(&self, i: usize) -> Vec<i64> {
        self.phi.iter().map(|row| row[i]).collect()
    }

    /// The coboundary evaluated term by term on every ordered input.
    pub fn delta(&self, f: &Tensor) -> Tensor {
        let p = f.degree;
        let n1 = self.n - 1;
        let big = p + 1;
        let k = self.args(big);
        let mut values = vec![0; self.tensor_len(big)];
        let sign = |e: usize| if e.is_multiple_of(2) { 1i64 } else { -1 };
        for input in ordered_tuples(self.ds, k) {
            let blocks: Vec<&[usize]> = (0..big).map(|b| &input[b * n1..(b + 1) * n1]).collect();
            let z = input[k - 1];
            let mut acc = vec![0i64; self.dt];
            let add = |acc: &mut Vec<i64>, s: i64, v: &[i64]| {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a += s * x;
                }
            };
            let without = |i: usize| -> Vec<usize> {
                let mut rest: Vec<usize> = Vec::new();
                for (b, blk) in blocks.iter().enumerate() {
                    if b != i {
                        rest.extend_from_slice(blk);
                    }
                }
                rest.push(z);
                rest
            };
            for i in 0..big {
                let rest = without(i);
                for j in i + 1..big {
                    for s in 0..n1 {
                        let slot = (j - 1) * n1 + s;
                        let v = self.src_ad(blocks[i], rest[slot]);
                        add(&mut acc, sign(i + 1), &self.value_with(f, &rest, slot, &v));
                    }
                }
                let v = self.src_ad(blocks[i], z);
                add(&mut acc, sign(i + 1), &self.value_with(f, &rest, rest.len() - 1, &v));
                let inner = self.value(f, &rest).to_vec();
                add(&mut acc, sign(i), &self.lprime(blocks[i], inner));
            }
            let head: Vec<usize> = input[..p * n1].to_vec();
            let last = blocks[p];
            for s in 0..n1 {
                let mut call = head.clone();
                call.push(last[s]);
                let fv = self.value(f, &call).to_vec();
                let mut args: Vec<Vec<i64>> = last.iter().map(|&i| self.phi_col(i)).collect();
                args[s] = fv;
                args.push(self.phi_col(z));
                add(&mut acc, sign(p), &self.tgt.bracket(&args));
            }
            let at = radix(&input, self.ds) * self.dt;
            values[at..at + self.dt].copy_from_slice(&acc);
        }
        Tensor { degree: big, values }
    }

    /// Rank of `δ` on `C^p`.
    pub fn delta_rank(&self, p: usize) -> usize {
        let rows: Vec<Vec<i64>> = self
            .generators(p)
            .iter()
            .map(|g| self.delta(g).values)
            .collect();
        rank_i64(&rows)
    }

    /// `(dim Z, dim B, dim H)` at structural degree `p`.
    pub fn cohomology(&self, p: usize) -> (usize, usize, usize) {
        let z = self.generator_count(p) - self.delta_rank(p);
        let b = if p == 0 { 0 } else { self.delta_rank(p - 1) };
        (z, b, z - b)
    }

    /// Tensor of a library cochain, by evaluation on every ordered input.
    pub fn tensor_of(&self, c: &nlie_core::Cochain) -> Tensor {
        let p = c.degree();
        let mut values = Vec::with_capacity(self.tensor_len(p));
        for input in ordered_tuples(self.ds, self.args(p)) {
            let args: Vec<Vec<Rational>> = input
                .iter()
                .map(|&i| nlie_core::linalg::unit_vector(self.ds, i))
                .collect();
            values.extend(c.eval_vectors(&args).unwrap().iter().map(int));
        }
        Tensor { degree: p, values }
    }
}

/// Rank of integer rows: duplicate and opposite columns are dropped, then a
/// fraction-free (Bareiss) elimination runs on what is left.
pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut seen = HashSet::new();
    let mut kept = Vec::new();
    for c in 0..cols {
        let mut col: Vec<i64> = rows.iter().map(|r| r[c]).collect();
        match col.iter().find(|x| **x != 0) {
            None => continue,
            Some(&first) if first < 0 => col.iter_mut().for_each(|x| *x = -*x),
            _ => {}
        }
        if seen.insert(col) {
            kept.push(c);
        }
    }
    let m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| kept.iter().map(|&c| BigInt::from(r[c])).collect())
        .collect();
    bareiss_rank(m)
}

pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn rational_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect()
}

pub fn build(n: usize, d: usize, brackets: &[(&[usize], &[i64])]) -> NLieAlgebra {
    let mut s = BTreeMap::new();
    for (k, v) in brackets {
        s.insert(k.to_vec(), v.iter().map(|&c| q(c, 1)).collect());
    }
    NLieAlgebra::new("seed", n, d, NLieAlgebra::default_basis_names(d), s).unwrap()
}

/// Small valid seeds, `n ∈ {2,3}` and `d ≤ 4`.
pub fn seeds() -> Vec<NLieAlgebra> {
    let mut out = vec![
        NLieAlgebra::abelian(2, 3).unwrap(),
        build(2, 2, &[(&[0, 1], &[0, 1])]),
        build(2, 3, &[(&[0, 1], &[0, 0, 1])]),
        build(2, 3, &[(&[0, 1], &[0, 0, 1]), (&[1, 2], &[1, 0, 0]), (&[0, 2], &[0, -1, 0])]),
        build(2, 4, &[(&[0, 1], &[0, 1, 0, 0]), (&[2, 3], &[0, 0, 0, 1])]),
        build(2, 4, &[(&[0, 1], &[0, 1, 0, 0]), (&[0, 2], &[0, 0, 1, 0]), (&[0, 3], &[0, 0, 0, 1])]),
        NLieAlgebra::abelian(3, 4).unwrap(),
        build(3, 3, &[(&[0, 1, 2], &[1, 0, 0])]),
        build(3, 3, &[(&[0, 1, 2], &[0, 2, -1])]),
    ];
    out.extend(ALGEBRAS.iter().map(|name| load_alg(name)));
    out
}

/// Unimodular matrix from elementary row operations.
pub fn unimodular(d: usize, ops: &[(usize, usize, i64)]) -> Matrix {
    let mut g = Matrix::identity(d);
    for &(i, j, c) in ops {
        let (i, j) = (i % d, j % d);
        if i == j || c == 0 {
            continue;
        }
        let mut e = Matrix::identity(d);
        e.set(i, j, q(c, 1));
        g = e.mul(&g).unwrap();
    }
    g
}

#[derive(Clone, Debug)]
pub struct Case {
    pub alg: NLieAlgebra,
    pub g: Matrix,
}

impl Case {
    pub fn moved(&self) -> NLieAlgebra {
        self.alg.change_of_basis(&self.g).unwrap()
    }

    /// `g` as a morphism from the moved algebra back to the seed.
    pub fn iso(&self) -> Morphism {
        Morphism::new(self.moved(), self.alg.clone(), self.g.clone()).unwrap()
    }
}

pub fn case() -> impl Strategy<Value = Case> {
    let n = seeds().len();
    (0..n, prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..5)).prop_map(|(s, ops)| {
        let alg = seeds()[s].clone();
        let g = unimodular(alg.dim(), &ops);
        Case { alg, g }
    })
}

pub fn small_case() -> impl Strategy<Value = Case> {
    case().prop_filter("keep matrices small", |c| c.alg.arity() == 2 || c.alg.dim() <= 3)
}
