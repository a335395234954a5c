//! The morphism complex `C^m(φ,φ) = C^m(N,N) ⊕ C^m(N′,N′) ⊕ C^{m−1}(N,N′)`
//! with the coupled differential
//! `δ(c₁,c₂,c₃) = (δc₁, δc₂, δc₃ + (−1)^m(φ∘c₁ − c₂∘(φ̄^{⊗m}∧φ)))`.

use crate::cochain::{post_matrix, pullback_matrix, Cochain, CochainSpace};
use crate::complex::{self, cohomology, CohomologyReport};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::morphism::Morphism;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainTriple {
    pub degree: usize,
    pub c1: Cochain,
    pub c2: Cochain,
    /// Absent in degree 0, where `C^{−1} = 0`.
    pub c3: Option<Cochain>,
}

/// The three component spaces of `C^m(φ,φ)`.
#[derive(Clone, Debug)]
pub struct TripleSpace {
    pub degree: usize,
    pub s1: CochainSpace,
    pub s2: CochainSpace,
    pub s3: Option<CochainSpace>,
}

impl TripleSpace {
    pub fn new(phi: &Morphism, m: usize) -> Self {
        let (src, tgt) = (phi.source(), phi.target());
        TripleSpace {
            degree: m,
            s1: CochainSpace::over(src, src, m),
            s2: CochainSpace::over(tgt, tgt, m),
            s3: m.checked_sub(1).map(|k| CochainSpace::over(src, tgt, k)),
        }
    }

    pub fn dim(&self) -> usize {
        self.s1.dim() + self.s2.dim() + self.s3.as_ref().map_or(0, CochainSpace::dim)
    }

    pub fn zero(&self) -> CochainTriple {
        CochainTriple {
            degree: self.degree,
            c1: Cochain::zero(self.s1.clone()),
            c2: Cochain::zero(self.s2.clone()),
            c3: self.s3.clone().map(Cochain::zero),
        }
    }

    /// Splits a block vector `[c₁ | c₂ | c₃]`.
    pub fn split(&self, v: &[Rational]) -> Result<CochainTriple> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let (a, rest) = v.split_at(self.s1.dim());
        let (b, c) = rest.split_at(self.s2.dim());
        Ok(CochainTriple {
            degree: self.degree,
            c1: Cochain::from_coeffs(self.s1.clone(), a.to_vec())?,
            c2: Cochain::from_coeffs(self.s2.clone(), b.to_vec())?,
            c3: match &self.s3 {
                Some(s) => Some(Cochain::from_coeffs(s.clone(), c.to_vec())?),
                None => None,
            },
        })
    }

    fn check(&self, t: &CochainTriple) -> Result<()> {
        if t.degree != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: t.degree,
            });
        }
        let same3 = match (&t.c3, &self.s3) {
            (None, None) => true,
            (Some(c), Some(s)) => c.space() == s,
            _ => false,
        };
        if t.c1.space() != &self.s1 || t.c2.space() != &self.s2 || !same3 {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: t.flatten().len(),
            });
        }
        Ok(())
    }
}

impl CochainTriple {
    pub fn new(c1: Cochain, c2: Cochain, c3: Option<Cochain>) -> Result<Self> {
        let m = c1.degree();
        if c2.degree() != m {
            return Err(Error::DegreeMismatch {
                expected: m,
                found: c2.degree(),
            });
        }
        match (&c3, m) {
            (None, 0) => {}
            (Some(c), m) if m >= 1 && c.degree() == m - 1 => {}
            (Some(c), _) => {
                return Err(Error::DegreeMismatch {
                    expected: m.saturating_sub(1),
                    found: c.degree(),
                })
            }
            (None, _) => {
                return Err(Error::DegreeMismatch {
                    expected: m - 1,
                    found: 0,
                })
            }
        }
        Ok(CochainTriple {
            degree: m,
            c1,
            c2,
            c3,
        })
    }

    pub fn flatten(&self) -> Vector {
        let mut v = self.c1.coeffs().to_vec();
        v.extend_from_slice(self.c2.coeffs());
        if let Some(c) = &self.c3 {
            v.extend_from_slice(c.coeffs());
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        linalg::is_zero_vector(&self.flatten())
    }

    pub fn sub(&self, other: &CochainTriple) -> Result<CochainTriple> {
        let c3 = match (&self.c3, &other.c3) {
            (Some(a), Some(b)) => Some(a.sub(b)?),
            (None, None) => None,
            _ => {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: other.degree,
                })
            }
        };
        CochainTriple::new(self.c1.sub(&other.c1)?, self.c2.sub(&other.c2)?, c3)
    }
}

/// Block matrix of `δ: C^m(φ,φ) → C^{m+1}(φ,φ)`.
pub fn triple_matrix(phi: &Morphism, m: usize) -> Result<Matrix> {
    let (src, tgt) = (phi.source(), phi.target());
    let from = TripleSpace::new(phi, m);
    let to = TripleSpace::new(phi, m + 1);
    let d_src = complex::coboundary_matrix_self(src, m)?;
    let d_tgt = complex::coboundary_matrix_self(tgt, m)?;
    phi.ensure_valid()?;

    let mut out = Matrix::zeros(to.dim(), from.dim());
    let (r1, r2) = (to.s1.dim(), to.s2.dim());
    let (k1, k2) = (from.s1.dim(), from.s2.dim());
    out.set_block(0, 0, &d_src);
    out.set_block(r1, k1, &d_tgt);

    let mixed = to.s3.as_ref().expect("degree m+1 ≥ 1");
    let sign = Rational::sign(m);
    let post = post_matrix(&from.s1, phi.matrix())?.scale(&sign);
    let pull = pullback_matrix(&from.s2, mixed, phi.matrix())?.scale(&-sign);
    out.set_block(r1 + r2, 0, &post);
    out.set_block(r1 + r2, k1, &pull);
    if m >= 1 {
        let d_mod = complex::assemble(src, tgt, phi.matrix(), m - 1)?;
        out.set_block(r1 + r2, k1 + k2, &d_mod);
    }
    Ok(out)
}

pub fn triple_coboundary(phi: &Morphism, t: &CochainTriple) -> Result<CochainTriple> {
    let space = TripleSpace::new(phi, t.degree);
    space.check(t)?;
    let image = triple_matrix(phi, t.degree)?.mul_vec(&t.flatten())?;
    TripleSpace::new(phi, t.degree + 1).split(&image)
}

/// `H^r(φ,φ)` in report numbering (`r ≥ 1`).
pub fn morphism_cohomology(phi: &Morphism, r: usize) -> Result<CohomologyReport> {
    let m = complex::structural_degree(r)?;
    let out = triple_matrix(phi, m)?;
    let inc = if m == 0 {
        None
    } else {
        Some(triple_matrix(phi, m - 1)?)
    };
    cohomology(inc.as_ref(), &out)
}

/// Some `α` with `δα = a − b`, when the two cocycles are cohomologous.
pub fn cohomologous_check(
    phi: &Morphism,
    a: &CochainTriple,
    b: &CochainTriple,
) -> Result<Option<CochainTriple>> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch {
            expected: a.degree,
            found: b.degree,
        });
    }
    for t in [a, b] {
        if !triple_coboundary(phi, t)?.is_zero() {
            return Err(Error::NotCocycle);
        }
    }
    if a.degree == 0 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: 0,
        });
    }
    let diff = a.sub(b)?;
    let m = triple_matrix(phi, a.degree - 1)?;
    match linalg::solve(&m, &diff.flatten())? {
        Some(x) => Ok(Some(TripleSpace::new(phi, a.degree - 1).split(&x)?)),
        None => Ok(None),
    }
}
