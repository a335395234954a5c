//! Cochain spaces `C^p` with their canonical bases, and cochains as
//! coefficient vectors in those bases.
//!
//! For `p ≥ 1` a basis element of the domain is `(I₁,…,I_{p−1}, K)` with every
//! `I_j` an increasing `(n−1)`-tuple and `K` an increasing `n`-tuple holding the
//! last block together with `z`. For `p = 0` it is a single basis vector.
//! Coefficient `(domain, t)` sits at `domain · target_dim + t`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::NLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, zero_vector, Matrix, Vector};
use crate::rational::Rational;
use crate::wedge::{TupleIndex, WedgeForm};

#[derive(Clone)]
pub struct CochainSpace {
    degree: usize,
    arity: usize,
    source_dim: usize,
    target_dim: usize,
    blocks: Arc<TupleIndex>,
    top: Arc<TupleIndex>,
}

impl PartialEq for CochainSpace {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for CochainSpace {}

impl fmt::Debug for CochainSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "C^{}(n={}, d={} -> {})",
            self.degree, self.arity, self.source_dim, self.target_dim
        )
    }
}

/// A canonical domain basis element, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainElement {
    pub blocks: Vec<Vec<usize>>,
    pub last: Vec<usize>,
}

impl CochainSpace {
    pub fn new(degree: usize, arity: usize, source_dim: usize, target_dim: usize) -> Self {
        let top_grade = if degree == 0 { 1 } else { arity };
        CochainSpace {
            degree,
            arity,
            source_dim,
            target_dim,
            blocks: TupleIndex::new(source_dim, arity - 1),
            top: TupleIndex::new(source_dim, top_grade),
        }
    }

    pub fn over(source: &NLieAlgebra, target: &NLieAlgebra, degree: usize) -> Self {
        Self::new(degree, source.arity(), source.dim(), target.dim())
    }

    fn key(&self) -> (usize, usize, usize, usize) {
        (self.degree, self.arity, self.source_dim, self.target_dim)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn domain_len(&self) -> usize {
        if self.degree == 0 {
            self.source_dim
        } else {
            self.blocks.len().pow(self.degree as u32 - 1) * self.top.len()
        }
    }

    pub fn dim(&self) -> usize {
        self.domain_len() * self.target_dim
    }

    pub fn domain_element(&self, mut index: usize) -> DomainElement {
        let last = self.top.tuple(index % self.top.len()).to_vec();
        index /= self.top.len();
        let free = self.degree.saturating_sub(1);
        let mut blocks = vec![Vec::new(); free];
        for slot in (0..free).rev() {
            blocks[slot] = self.blocks.tuple(index % self.blocks.len()).to_vec();
            index /= self.blocks.len();
        }
        DomainElement { blocks, last }
    }

    pub fn domain_index(&self, blocks: &[Vec<usize>], last: &[usize]) -> Option<usize> {
        if blocks.len() != self.degree.saturating_sub(1) {
            return None;
        }
        let mut index = 0;
        for b in blocks {
            index = index * self.blocks.len() + self.blocks.index_of(b)?;
        }
        Some(index * self.top.len() + self.top.index_of(last)?)
    }

    /// Domain coordinates of `(free₁,…,free_{p−1}, last)` where `last` has the
    /// top grade (`n`, or 1 in degree 0).
    pub fn expand(&self, free: &[WedgeForm], last: &WedgeForm) -> Vec<(usize, Rational)> {
        let mut acc = vec![(0usize, Rational::one())];
        for block in free {
            let mut next = Vec::with_capacity(acc.len() * block.len());
            for (i, c) in &acc {
                for (t, cb) in block.terms() {
                    let bi = self.blocks.index_of(t).expect("block grade checked");
                    next.push((i * self.blocks.len() + bi, c * cb));
                }
            }
            acc = next;
        }
        let mut out = Vec::with_capacity(acc.len() * last.len());
        for (i, c) in &acc {
            for (t, cl) in last.terms() {
                let ti = self.top.index_of(t).expect("top grade checked");
                out.push((i * self.top.len() + ti, c * cl));
            }
        }
        out
    }

    /// Domain coordinates of `ψ(args₁,…,args_p, z)` where the last block is
    /// wedged with `z`. In degree 0 `args` is empty and the call is `ψ(z)`.
    pub fn expand_call(&self, args: &[WedgeForm], z: &[Rational]) -> Vec<(usize, Rational)> {
        debug_assert_eq!(args.len(), self.degree);
        let zf = WedgeForm::vector(z);
        match args.split_last() {
            None => self.expand(&[], &zf),
            Some((last, free)) => self.expand(free, &last.wedge(&zf)),
        }
    }

    fn check_inputs(&self, free: &[WedgeForm], last: &WedgeForm) -> Result<()> {
        if free.len() != self.degree.saturating_sub(1) {
            return Err(Error::DegreeMismatch {
                expected: self.degree.saturating_sub(1),
                found: free.len(),
            });
        }
        for f in free {
            if f.grade() != self.arity - 1 {
                return Err(Error::DimensionMismatch {
                    expected: self.arity - 1,
                    found: f.grade(),
                });
            }
        }
        if last.grade() != self.top.grade() {
            return Err(Error::DimensionMismatch {
                expected: self.top.grade(),
                found: last.grade(),
            });
        }
        let bad = free
            .iter()
            .chain(std::iter::once(last))
            .flat_map(|f| f.terms().flat_map(|(t, _)| t.iter().copied()).collect::<Vec<_>>())
            .find(|&i| i >= self.source_dim);
        match bad {
            Some(index) => Err(Error::IndexOutOfRange {
                index,
                dim: self.source_dim,
            }),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    space: CochainSpace,
    coeffs: Vector,
}

impl Cochain {
    pub fn zero(space: CochainSpace) -> Self {
        let coeffs = zero_vector(space.dim());
        Cochain { space, coeffs }
    }

    pub fn from_coeffs(space: CochainSpace, coeffs: Vector) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: coeffs.len(),
            });
        }
        Ok(Cochain { space, coeffs })
    }

    /// The bracket of `alg` as a degree-1 cochain with values in itself.
    pub fn from_algebra(alg: &NLieAlgebra) -> Self {
        let space = CochainSpace::over(alg, alg, 1);
        let mut c = Cochain::zero(space);
        for (k, v) in alg.structure() {
            let d = c.space.domain_index(&[], k).expect("increasing key");
            for (t, x) in v.iter().enumerate() {
                c.coeffs[d * alg.dim() + t] = x.clone();
            }
        }
        c
    }

    /// Reads a degree-1 cochain of `base`'s shape as the bracket of a new algebra.
    pub fn to_algebra(&self, base: &NLieAlgebra, name: &str) -> Result<NLieAlgebra> {
        if self.space != CochainSpace::over(base, base, 1) {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: self.space.degree,
            });
        }
        let mut structure = std::collections::BTreeMap::new();
        for d in 0..self.space.domain_len() {
            let key = self.space.domain_element(d).last;
            structure.insert(key, self.value_at(d).to_vec());
        }
        NLieAlgebra::new(
            name,
            base.arity(),
            base.dim(),
            base.basis_names().to_vec(),
            structure,
        )
    }

    /// A linear map `N → N′` as a degree-0 cochain.
    pub fn from_linear_map(arity: usize, m: &Matrix) -> Self {
        let space = CochainSpace::new(0, arity, m.cols(), m.rows());
        let coeffs = (0..m.cols())
            .flat_map(|i| (0..m.rows()).map(move |t| (i, t)))
            .map(|(i, t)| m.get(t, i).clone())
            .collect();
        Cochain { space, coeffs }
    }

    pub fn to_linear_map(&self) -> Result<Matrix> {
        if self.space.degree != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: self.space.degree,
            });
        }
        let t = self.space.target_dim;
        Ok(Matrix::from_fn(t, self.space.source_dim, |r, c| {
            self.coeffs[c * t + r].clone()
        }))
    }

    pub fn space(&self) -> &CochainSpace {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.space.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vector {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vector(&self.coeffs)
    }

    /// Value on the domain basis element with index `domain`.
    pub fn value_at(&self, domain: usize) -> &[Rational] {
        let t = self.space.target_dim;
        &self.coeffs[domain * t..(domain + 1) * t]
    }

    pub fn set_value(&mut self, domain: usize, value: &[Rational]) -> Result<()> {
        let t = self.space.target_dim;
        if value.len() != t {
            return Err(Error::DimensionMismatch {
                expected: t,
                found: value.len(),
            });
        }
        if domain >= self.space.domain_len() {
            return Err(Error::IndexOutOfRange {
                index: domain,
                dim: self.space.domain_len(),
            });
        }
        self.coeffs[domain * t..(domain + 1) * t].clone_from_slice(value);
        Ok(())
    }

    /// Nonzero entries as `(domain element, target index, value)`.
    pub fn entries(&self) -> Vec<(DomainElement, usize, Rational)> {
        let t = self.space.target_dim;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.space.domain_element(i / t), i % t, c.clone()))
            .collect()
    }

    fn combine(&self, coords: &[(usize, Rational)]) -> Vector {
        let t = self.space.target_dim;
        let mut out = zero_vector(t);
        for (d, c) in coords {
            linalg::add_scaled(&mut out, c, &self.coeffs[d * t..(d + 1) * t]);
        }
        out
    }

    /// `f(blocks₁,…,blocks_{p−1}, x_last, z)` for degree `p ≥ 1`.
    pub fn eval(&self, blocks: &[WedgeForm], x_last: &WedgeForm, z: &[Rational]) -> Result<Vector> {
        if self.space.degree == 0 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: 0,
            });
        }
        if z.len() != self.space.source_dim {
            return Err(Error::DimensionMismatch {
                expected: self.space.source_dim,
                found: z.len(),
            });
        }
        let last = x_last.wedge(&WedgeForm::vector(z));
        self.eval_forms(blocks, &last)
    }

    /// Evaluation with the last block and `z` already combined into a top form.
    pub fn eval_forms(&self, free: &[WedgeForm], last: &WedgeForm) -> Result<Vector> {
        self.space.check_inputs(free, last)?;
        Ok(self.combine(&self.space.expand(free, last)))
    }

    /// Evaluation on a `ψ`-call: `p` blocks, the last wedged with `z`.
    pub fn eval_call(&self, args: &[WedgeForm], z: &[Rational]) -> Vector {
        self.combine(&self.space.expand_call(args, z))
    }

    /// Degree-0 evaluation `f(z)`.
    pub fn apply(&self, z: &[Rational]) -> Result<Vector> {
        if self.space.degree != 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                found: self.space.degree,
            });
        }
        self.eval_forms(&[], &WedgeForm::vector(z))
    }

    /// Evaluation on plain vector arguments: `(p−1)(n−1) + n` of them for
    /// `p ≥ 1`, a single one for `p = 0`.
    pub fn eval_vectors(&self, args: &[Vector]) -> Result<Vector> {
        let n = self.space.arity;
        let p = self.space.degree;
        let expected = if p == 0 { 1 } else { (p - 1) * (n - 1) + n };
        if args.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: args.len(),
            });
        }
        for a in args {
            if a.len() != self.space.source_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.space.source_dim,
                    found: a.len(),
                });
            }
        }
        if p == 0 {
            return self.apply(&args[0]);
        }
        let split = (p - 1) * (n - 1);
        let free: Vec<WedgeForm> = args[..split]
            .chunks(n - 1)
            .map(WedgeForm::from_vectors)
            .collect();
        self.eval_forms(&free, &WedgeForm::from_vectors(&args[split..]))
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_space(other)?;
        Ok(Cochain {
            space: self.space.clone(),
            coeffs: linalg::vec_add(&self.coeffs, &other.coeffs),
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.check_space(other)?;
        Ok(Cochain {
            space: self.space.clone(),
            coeffs: linalg::vec_sub(&self.coeffs, &other.coeffs),
        })
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        Cochain {
            space: self.space.clone(),
            coeffs: linalg::vec_scale(c, &self.coeffs),
        }
    }

    pub fn add_scaled_assign(&mut self, c: &Rational, other: &Cochain) -> Result<()> {
        self.check_space(other)?;
        linalg::add_scaled(&mut self.coeffs, c, &other.coeffs);
        Ok(())
    }

    /// `φ ∘ f`, a cochain with values in the target of `phi`.
    pub fn postcompose(&self, phi: &Matrix) -> Result<Cochain> {
        let space = CochainSpace::new(
            self.space.degree,
            self.space.arity,
            self.space.source_dim,
            phi.rows(),
        );
        let m = post_matrix(&self.space, phi)?;
        Cochain::from_coeffs(space, m.mul_vec(&self.coeffs)?)
    }

    /// `f ∘ (φ̄^{⊗p} ∧ φ)`: the arguments are pushed through `phi` first.
    pub fn pullback(&self, phi: &Matrix) -> Result<Cochain> {
        let space = CochainSpace::new(
            self.space.degree,
            self.space.arity,
            phi.cols(),
            self.space.target_dim,
        );
        let m = pullback_matrix(&self.space, &space, phi)?;
        Cochain::from_coeffs(space, m.mul_vec(&self.coeffs)?)
    }

    fn check_space(&self, other: &Cochain) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: other.space.dim(),
            });
        }
        Ok(())
    }
}

/// Matrix of `f ↦ φ ∘ f` from `space` to the same domain with target `φ.rows()`.
pub fn post_matrix(space: &CochainSpace, phi: &Matrix) -> Result<Matrix> {
    if phi.cols() != space.target_dim {
        return Err(Error::DimensionMismatch {
            expected: space.target_dim,
            found: phi.cols(),
        });
    }
    let (dt, dt2) = (space.target_dim, phi.rows());
    let mut m = Matrix::zeros(space.domain_len() * dt2, space.domain_len() * dt);
    for d in 0..space.domain_len() {
        for r in 0..dt2 {
            for s in 0..dt {
                let x = phi.get(r, s);
                if !x.is_zero() {
                    m.set(d * dt2 + r, d * dt + s, x.clone());
                }
            }
        }
    }
    Ok(m)
}

/// Matrix of `f ↦ f ∘ (φ̄^{⊗p} ∧ φ)` from `from` (domain over the target of
/// `phi`) to `to` (domain over the source of `phi`); both share the value space.
pub fn pullback_matrix(from: &CochainSpace, to: &CochainSpace, phi: &Matrix) -> Result<Matrix> {
    if from.degree != to.degree || from.target_dim != to.target_dim {
        return Err(Error::DegreeMismatch {
            expected: from.degree,
            found: to.degree,
        });
    }
    if phi.rows() != from.source_dim || phi.cols() != to.source_dim {
        return Err(Error::DimensionMismatch {
            expected: from.source_dim,
            found: phi.rows(),
        });
    }
    let dt = to.target_dim;
    let image = |i: usize| phi.column(i);
    let mut m = Matrix::zeros(to.dim(), from.dim());
    for d in 0..to.domain_len() {
        let el = to.domain_element(d);
        let free: Vec<WedgeForm> = el
            .blocks
            .iter()
            .map(|b| WedgeForm::basis(b).map(image))
            .collect();
        let last = WedgeForm::basis(&el.last).map(image);
        for (d2, c) in from.expand(&free, &last) {
            for t in 0..dt {
                m.add_to(d * dt + t, d2 * dt + t, &c);
            }
        }
    }
    Ok(m)
}
