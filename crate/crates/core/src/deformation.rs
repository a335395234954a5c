//! Truncated formal deformations `[·,…,·]_t = Σ tⁱ[·,…,·]_i` of algebras and
//! `φ_t = Σ tⁱφ_i` of morphisms, their obstructions, and equivalence by formal
//! automorphisms `ψ_t = Id + Σ tⁱψ_i`.

use std::sync::Arc;

use crate::algebra::NLieAlgebra;
use crate::cochain::{Cochain, CochainSpace};
use crate::error::{Error, Result};
use crate::linalg::{self, unit_vector, zero_vector, Matrix, Vector};
use crate::morphism::Morphism;
use crate::rational::Rational;
use crate::triple::{triple_coboundary, triple_matrix, CochainTriple, TripleSpace};
use crate::wedge::WedgeForm;

/// A base algebra with bracket terms `[·]_1,…,[·]_k` stored as degree-1
/// cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedAlgebra {
    base: Arc<NLieAlgebra>,
    terms: Vec<Cochain>,
}

impl DeformedAlgebra {
    pub fn new(base: impl Into<Arc<NLieAlgebra>>, terms: Vec<Cochain>) -> Result<Self> {
        let base = base.into();
        let space = CochainSpace::over(&base, &base, 1);
        for t in &terms {
            if t.space() != &space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: t.space().dim(),
                });
            }
        }
        Ok(DeformedAlgebra { base, terms })
    }

    pub fn trivial(base: impl Into<Arc<NLieAlgebra>>, order: usize) -> Self {
        let base = base.into();
        let zero = Cochain::zero(CochainSpace::over(&base, &base, 1));
        DeformedAlgebra {
            base,
            terms: vec![zero; order],
        }
    }

    pub fn base(&self) -> &NLieAlgebra {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<NLieAlgebra> {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Cochain] {
        &self.terms
    }

    /// `[·]_i`; the base bracket for `i = 0` and zero past the order.
    pub fn term(&self, i: usize) -> Cochain {
        match i {
            0 => Cochain::from_algebra(&self.base),
            i if i <= self.terms.len() => self.terms[i - 1].clone(),
            _ => Cochain::zero(CochainSpace::over(&self.base, &self.base, 1)),
        }
    }

    pub fn truncate(&self, k: usize) -> DeformedAlgebra {
        DeformedAlgebra {
            base: self.base.clone(),
            terms: self.terms.iter().take(k).cloned().collect(),
        }
    }

    pub fn push(&mut self, term: Cochain) -> Result<()> {
        let space = CochainSpace::over(&self.base, &self.base, 1);
        if term.space() != &space {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: term.space().dim(),
            });
        }
        self.terms.push(term);
        Ok(())
    }

    fn all_terms(&self, upto: usize) -> Vec<Cochain> {
        (0..=upto).map(|i| self.term(i)).collect()
    }
}

/// `R_{k,l}(x; w) = μ_l(x, μ_k(w)) − Σ_i μ_l(w₁,…,μ_k(x, w_i),…,wₙ)` on basis
/// inputs, for `x` an `(n−1)`-tuple and `w` an `n`-tuple.
fn nambu_term(mu_k: &Cochain, mu_l: &Cochain, x: &[usize], w: &[usize], d: usize) -> Vector {
    let xf = WedgeForm::basis(x);
    let inner = mu_k
        .eval_forms(&[], &WedgeForm::basis(w))
        .expect("basis input");
    let mut out = mu_l
        .eval_forms(&[], &xf.wedge(&WedgeForm::vector(&inner)))
        .expect("basis input");
    for i in 0..w.len() {
        let moved = mu_k
            .eval_forms(&[], &xf.wedge(&WedgeForm::basis(&[w[i]])))
            .expect("basis input");
        if linalg::is_zero_vector(&moved) {
            continue;
        }
        let mut args: Vec<Vector> = w.iter().map(|&j| unit_vector(d, j)).collect();
        args[i] = moved;
        let term = mu_l
            .eval_forms(&[], &WedgeForm::from_vectors(&args))
            .expect("basis input");
        linalg::add_scaled(&mut out, &-Rational::one(), &term);
    }
    out
}

/// `Σ_{k+l=s} R_{k,l}` over the pairs accepted by `keep`, as a degree-2 cochain.
fn nambu_sum(da: &DeformedAlgebra, s: usize, keep: impl Fn(usize, usize) -> bool) -> Cochain {
    let base = da.base();
    let space = CochainSpace::over(base, base, 2);
    let mut out = Cochain::zero(space.clone());
    let mu = da.all_terms(s);
    let pairs: Vec<(usize, usize)> = (0..=s)
        .map(|k| (k, s - k))
        .filter(|&(k, l)| keep(k, l) && !mu[k].is_zero() && !mu[l].is_zero())
        .collect();
    if pairs.is_empty() {
        return out;
    }
    for dom in 0..space.domain_len() {
        let el = space.domain_element(dom);
        let mut v = zero_vector(base.dim());
        for &(k, l) in &pairs {
            let r = nambu_term(&mu[k], &mu[l], &el.blocks[0], &el.last, base.dim());
            linalg::add_scaled(&mut v, &Rational::one(), &r);
        }
        out.set_value(dom, &v).expect("shape");
    }
    out
}

/// The `t^s` coefficient of the deformed Nambu identity, LHS − RHS.
pub fn nambu_residual(da: &DeformedAlgebra, s: usize) -> Cochain {
    nambu_sum(da, s, |_, _| true)
}

/// All ordered tuples of `len` indices in `0..=max` summing to `total`.
fn compositions(total: usize, len: usize, max: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total.min(max) {
        for mut rest in compositions(total - first, len - 1, max) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A morphism of formal deformations, truncated at a common order `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedMorphism {
    source: DeformedAlgebra,
    target: DeformedAlgebra,
    phi_terms: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    Source,
    Target,
    Morphism,
}

impl Component {
    pub fn label(self) -> &'static str {
        match self {
            Component::Source => "source",
            Component::Target => "target",
            Component::Morphism => "morphism",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationFailure {
    pub order: usize,
    pub component: Component,
    pub residual: Cochain,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeformationReport {
    pub failures: Vec<DeformationFailure>,
}

impl DeformationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failing_order(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.order).min()
    }
}

impl DeformedMorphism {
    /// `phi_terms[0]` is the base morphism `φ₀ = φ`.
    pub fn new(source: DeformedAlgebra, target: DeformedAlgebra, phi_terms: Vec<Matrix>) -> Result<Self> {
        let k = source.order();
        if target.order() != k || phi_terms.len() != k + 1 {
            return Err(Error::OrderMismatch(format!(
                "source order {k}, target order {}, {} morphism terms (expected {})",
                target.order(),
                phi_terms.len(),
                k + 1
            )));
        }
        if source.base().arity() != target.base().arity() {
            return Err(Error::ArityMismatch {
                source_arity: source.base().arity(),
                target_arity: target.base().arity(),
            });
        }
        for m in &phi_terms {
            if m.rows() != target.base().dim() || m.cols() != source.base().dim() {
                return Err(Error::DimensionMismatch {
                    expected: target.base().dim() * source.base().dim(),
                    found: m.rows() * m.cols(),
                });
            }
        }
        Ok(DeformedMorphism {
            source,
            target,
            phi_terms,
        })
    }

    pub fn trivial(phi: &Morphism, order: usize) -> Self {
        let mut phi_terms = vec![phi.matrix().clone()];
        phi_terms.extend((0..order).map(|_| Matrix::zeros(phi.matrix().rows(), phi.matrix().cols())));
        DeformedMorphism {
            source: DeformedAlgebra::trivial(phi.source_arc().clone(), order),
            target: DeformedAlgebra::trivial(phi.target_arc().clone(), order),
            phi_terms,
        }
    }

    pub fn order(&self) -> usize {
        self.source.order()
    }

    pub fn source(&self) -> &DeformedAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DeformedAlgebra {
        &self.target
    }

    pub fn phi_terms(&self) -> &[Matrix] {
        &self.phi_terms
    }

    pub fn phi_term(&self, i: usize) -> Matrix {
        self.phi_terms.get(i).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.target.base().dim(), self.source.base().dim())
        })
    }

    pub fn base_morphism(&self) -> Result<Morphism> {
        Morphism::new(
            self.source.base_arc().clone(),
            self.target.base_arc().clone(),
            self.phi_terms[0].clone(),
        )
    }

    pub fn truncate(&self, k: usize) -> DeformedMorphism {
        let k = k.min(self.order());
        DeformedMorphism {
            source: self.source.truncate(k),
            target: self.target.truncate(k),
            phi_terms: self.phi_terms[..=k].to_vec(),
        }
    }

    /// Appends `θ = (μ_{k+1}, μ′_{k+1}, φ_{k+1})` given as a degree-1 triple.
    pub fn extended(&self, theta: &CochainTriple) -> Result<DeformedMorphism> {
        let phi_next = theta
            .c3
            .as_ref()
            .ok_or(Error::DegreeMismatch {
                expected: 1,
                found: theta.degree,
            })?
            .to_linear_map()?;
        let mut out = self.clone();
        out.source.push(theta.c1.clone())?;
        out.target.push(theta.c2.clone())?;
        out.phi_terms.push(phi_next);
        Ok(out)
    }
}

/// `Σ_{i+j=s} φ_i[x]_j − Σ_{i₁+…+iₙ+j=s} [φ_{i₁}x₁,…,φ_{iₙ}xₙ]′_j` restricted to
/// indices accepted by `keep`, as a degree-1 cochain with values in the target.
fn morphism_sum(dm: &DeformedMorphism, s: usize, keep: impl Fn(&[usize]) -> bool) -> Cochain {
    let src = dm.source.base();
    let tgt = dm.target.base();
    let n = src.arity();
    let space = CochainSpace::over(src, tgt, 1);
    let mut out = Cochain::zero(space.clone());
    let mu = dm.source.all_terms(s);
    let mu_t = dm.target.all_terms(s);
    let phis: Vec<Matrix> = (0..=s).map(|i| dm.phi_term(i)).collect();

    let left: Vec<(usize, usize)> = (0..=s)
        .map(|i| (i, s - i))
        .filter(|&(i, j)| keep(&[i, j]))
        .collect();
    let mut right: Vec<(Vec<usize>, usize)> = Vec::new();
    for j in 0..=s {
        if mu_t[j].is_zero() {
            continue;
        }
        for is in compositions(s - j, n, s) {
            let mut all = is.clone();
            all.push(j);
            if keep(&all) && is.iter().all(|&i| !phis[i].is_zero()) {
                right.push((is, j));
            }
        }
    }

    for dom in 0..space.domain_len() {
        let k = space.domain_element(dom).last;
        let mut v = zero_vector(tgt.dim());
        for &(i, j) in &left {
            let inner = mu[j].value_at(dom);
            let term = phis[i].mul_vec(inner).expect("shape");
            linalg::add_scaled(&mut v, &Rational::one(), &term);
        }
        for (is, j) in &right {
            let args: Vec<Vector> = is
                .iter()
                .zip(&k)
                .map(|(&i, &kk)| phis[i].column(kk))
                .collect();
            let term = mu_t[*j]
                .eval_forms(&[], &WedgeForm::from_vectors(&args))
                .expect("shape");
            linalg::add_scaled(&mut v, &-Rational::one(), &term);
        }
        out.set_value(dom, &v).expect("shape");
    }
    out
}

pub fn morphism_residual(dm: &DeformedMorphism, s: usize) -> Cochain {
    morphism_sum(dm, s, |_| true)
}

/// Checks both deformed Nambu identities and the deformed morphism equation
/// at every order `0..=k`.
pub fn validate_deformation(dm: &DeformedMorphism) -> DeformationReport {
    validate_through(dm, dm.order())
}

fn validate_through(dm: &DeformedMorphism, k: usize) -> DeformationReport {
    let mut failures = Vec::new();
    for s in 0..=k {
        for (component, residual) in [
            (Component::Source, nambu_residual(&dm.source, s)),
            (Component::Target, nambu_residual(&dm.target, s)),
            (Component::Morphism, morphism_residual(dm, s)),
        ] {
            if !residual.is_zero() {
                failures.push(DeformationFailure {
                    order: s,
                    component,
                    residual,
                });
            }
        }
    }
    DeformationReport { failures }
}

fn ensure_validated(dm: &DeformedMorphism, k: usize) -> Result<()> {
    match validate_through(dm, k).first_failing_order() {
        None => Ok(()),
        Some(order) => Err(Error::NotValidated { order }),
    }
}

/// The first-order triple `θ₁ = ([·]_1, [·]′_1, φ₁)` and whether it is a
/// cocycle of the morphism complex.
pub fn infinitesimal(dm: &DeformedMorphism) -> Result<(CochainTriple, bool)> {
    if dm.order() < 1 {
        return Err(Error::OrderMismatch("an infinitesimal needs order at least 1".into()));
    }
    ensure_validated(dm, 1)?;
    let theta = order_term(dm, 1)?;
    let phi = dm.base_morphism()?;
    let is_cocycle = triple_coboundary(&phi, &theta)?.is_zero();
    Ok((theta, is_cocycle))
}

/// `θ_i = ([·]_i, [·]′_i, φ_i)` as a degree-1 triple.
pub fn order_term(dm: &DeformedMorphism, i: usize) -> Result<CochainTriple> {
    let arity = dm.source.base().arity();
    CochainTriple::new(
        dm.source.term(i),
        dm.target.term(i),
        Some(Cochain::from_linear_map(arity, &dm.phi_term(i))),
    )
}

/// `Ob = (Ob_N, Ob_{N′}, Ob_φ)` for a deformation validated through its order
/// `N`: every term of the order-`(N+1)` equations whose indices are all `≤ N`.
pub fn obstruction(dm: &DeformedMorphism) -> Result<CochainTriple> {
    let big_n = dm.order();
    ensure_validated(dm, big_n)?;
    let s = big_n + 1;
    let inner = |k: usize, l: usize| (1..=big_n).contains(&k) && (1..=big_n).contains(&l);
    let ob_src = nambu_sum(&dm.source, s, inner).scale(&-Rational::one());
    let ob_tgt = nambu_sum(&dm.target, s, inner).scale(&-Rational::one());
    let ob_phi = morphism_sum(dm, s, |idx| idx.iter().all(|&i| i <= big_n));
    CochainTriple::new(ob_src, ob_tgt, Some(ob_phi))
}

/// Some `θ_{N+1}` with `δθ_{N+1} = Ob`, together with the extended deformation.
pub fn extend_order(dm: &DeformedMorphism) -> Result<Option<(CochainTriple, DeformedMorphism)>> {
    let ob = obstruction(dm)?;
    let phi = dm.base_morphism()?;
    if !triple_coboundary(&phi, &ob)?.is_zero() {
        return Err(Error::ObstructionNotCocycle);
    }
    let m = triple_matrix(&phi, 1)?;
    let Some(x) = linalg::solve(&m, &ob.flatten())? else {
        return Ok(None);
    };
    let theta = TripleSpace::new(&phi, 1).split(&x)?;
    let extended = dm.extended(&theta)?;
    ensure_validated(&extended, extended.order())?;
    Ok(Some((theta, extended)))
}

/// `ψ_t = Id + Σ_{i=1}^k tⁱψ_i` on a space of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalAutomorphism {
    dim: usize,
    terms: Vec<Matrix>,
}

impl FormalAutomorphism {
    /// `terms[i-1] = ψ_i`; `ψ₀ = Id` is implicit.
    pub fn new(dim: usize, terms: Vec<Matrix>) -> Result<Self> {
        for t in &terms {
            if t.rows() != dim || t.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if t.rows() != dim { t.rows() } else { t.cols() },
                });
            }
        }
        Ok(FormalAutomorphism { dim, terms })
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        FormalAutomorphism {
            dim,
            terms: vec![Matrix::zeros(dim, dim); order],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Matrix] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> Matrix {
        match i {
            0 => Matrix::identity(self.dim),
            i if i <= self.terms.len() => self.terms[i - 1].clone(),
            _ => Matrix::zeros(self.dim, self.dim),
        }
    }

    /// `ψ ∘ χ` truncated at `t^k`.
    pub fn compose(&self, other: &FormalAutomorphism, k: usize) -> Result<FormalAutomorphism> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut terms = Vec::with_capacity(k);
        for m in 1..=k {
            let mut acc = Matrix::zeros(self.dim, self.dim);
            for i in 0..=m {
                acc = acc.add(&self.term(i).mul(&other.term(m - i))?)?;
            }
            terms.push(acc);
        }
        Ok(FormalAutomorphism {
            dim: self.dim,
            terms,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.terms.iter().all(Matrix::is_zero)
    }
}

/// `χ` with `ψ ∘ χ ≡ Id (mod t^{k+1})`.
pub fn formal_inverse(psi: &FormalAutomorphism, k: usize) -> FormalAutomorphism {
    let mut chi: Vec<Matrix> = vec![Matrix::identity(psi.dim)];
    for m in 1..=k {
        let mut acc = Matrix::zeros(psi.dim, psi.dim);
        for i in 1..=m {
            acc = acc
                .sub(&psi.term(i).mul(&chi[m - i]).expect("square"))
                .expect("square");
        }
        chi.push(acc);
    }
    chi.remove(0);
    FormalAutomorphism {
        dim: psi.dim,
        terms: chi,
    }
}

/// `ψ_t ∘ [ψ_t⁻¹·,…,ψ_t⁻¹·]_t` truncated at `t^k`.
fn transform_algebra(da: &DeformedAlgebra, psi: &FormalAutomorphism, k: usize) -> Result<DeformedAlgebra> {
    let base = da.base();
    if psi.dim != base.dim() {
        return Err(Error::DimensionMismatch {
            expected: base.dim(),
            found: psi.dim,
        });
    }
    let n = base.arity();
    let chi = formal_inverse(psi, k);
    let psis: Vec<Matrix> = (0..=k).map(|i| psi.term(i)).collect();
    let chis: Vec<Matrix> = (0..=k).map(|i| chi.term(i)).collect();
    let mu = da.all_terms(k);
    let space = CochainSpace::over(base, base, 1);
    let mut terms = Vec::with_capacity(k);
    for s in 1..=k {
        let mut c = Cochain::zero(space.clone());
        for dom in 0..space.domain_len() {
            let key = space.domain_element(dom).last;
            let mut v = zero_vector(base.dim());
            for a in 0..=s {
                if psis[a].is_zero() {
                    continue;
                }
                for j in 0..=s - a {
                    if mu[j].is_zero() {
                        continue;
                    }
                    for bs in compositions(s - a - j, n, s) {
                        let args: Vec<Vector> = bs
                            .iter()
                            .zip(&key)
                            .map(|(&b, &i)| chis[b].column(i))
                            .collect();
                        let inner = mu[j].eval_forms(&[], &WedgeForm::from_vectors(&args))?;
                        if linalg::is_zero_vector(&inner) {
                            continue;
                        }
                        let term = psis[a].mul_vec(&inner)?;
                        linalg::add_scaled(&mut v, &Rational::one(), &term);
                    }
                }
            }
            c.set_value(dom, &v)?;
        }
        terms.push(c);
    }
    DeformedAlgebra::new(da.base_arc().clone(), terms)
}

/// Transforms `dm` by `ψ_N` on the source and `ψ_T` on the target, truncated
/// at `t^k`; the morphism becomes `ψ_T ∘ φ_t ∘ ψ_N⁻¹`.
pub fn apply_automorphism(
    dm: &DeformedMorphism,
    psi_n: &FormalAutomorphism,
    psi_t: &FormalAutomorphism,
    k: usize,
) -> Result<DeformedMorphism> {
    if k > dm.order() {
        return Err(Error::OrderMismatch(format!(
            "cannot transform to order {k}; the deformation has order {}",
            dm.order()
        )));
    }
    let source = transform_algebra(&dm.source, psi_n, k)?;
    let target = transform_algebra(&dm.target, psi_t, k)?;
    let chi_n = formal_inverse(psi_n, k);
    let mut phi_terms = Vec::with_capacity(k + 1);
    for s in 0..=k {
        let mut acc = Matrix::zeros(dm.target.base().dim(), dm.source.base().dim());
        for a in 0..=s {
            for i in 0..=s - a {
                let b = s - a - i;
                let term = psi_t.term(a).mul(&dm.phi_term(i))?.mul(&chi_n.term(b))?;
                acc = acc.add(&term)?;
            }
        }
        phi_terms.push(acc);
    }
    DeformedMorphism::new(source, target, phi_terms)
}

/// First-order equivalence search: `(ψ_{N,1}, ψ_{T,1})` with
/// `θ₁(a) − θ₁(b) = δ(ψ_{N,1}, ψ_{T,1}, 0)`, when one exists.
pub fn find_order1_equivalence(
    a: &DeformedMorphism,
    b: &DeformedMorphism,
) -> Result<Option<(FormalAutomorphism, FormalAutomorphism)>> {
    let phi = a.base_morphism()?;
    if b.base_morphism()? != phi {
        return Err(Error::BaseMismatch);
    }
    let diff = order_term(a, 1)?.sub(&order_term(b, 1)?)?;
    let m = triple_matrix(&phi, 0)?;
    let Some(x) = linalg::solve(&m, &diff.flatten())? else {
        return Ok(None);
    };
    let alpha = TripleSpace::new(&phi, 0).split(&x)?;
    let psi_n = FormalAutomorphism::new(phi.source().dim(), vec![alpha.c1.to_linear_map()?])?;
    let psi_t = FormalAutomorphism::new(phi.target().dim(), vec![alpha.c2.to_linear_map()?])?;
    Ok(Some((psi_n, psi_t)))
}
