//! Linear maps between n-Lie algebras and the module structure they induce.

use std::sync::Arc;

use crate::algebra::NLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::rational::Rational;
use crate::wedge::{increasing_tuples, WedgeForm};

/// `φ: N → N′` as a `d′ × d` matrix; column `j` is the image of `e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<NLieAlgebra>,
    target: Arc<NLieAlgebra>,
    matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFailure {
    pub args: Vec<usize>,
    pub residual: Vector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub failures: Vec<MorphismFailure>,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Morphism {
    pub fn new(
        source: impl Into<Arc<NLieAlgebra>>,
        target: impl Into<Arc<NLieAlgebra>>,
        matrix: Matrix,
    ) -> Result<Self> {
        let (source, target) = (source.into(), target.into());
        if source.arity() != target.arity() {
            return Err(Error::ArityMismatch {
                source_arity: source.arity(),
                target_arity: target.arity(),
            });
        }
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: matrix.cols(),
            });
        }
        Ok(Morphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(alg: impl Into<Arc<NLieAlgebra>>) -> Self {
        let alg = alg.into();
        let matrix = Matrix::identity(alg.dim());
        Morphism {
            source: alg.clone(),
            target: alg,
            matrix,
        }
    }

    pub fn zero(
        source: impl Into<Arc<NLieAlgebra>>,
        target: impl Into<Arc<NLieAlgebra>>,
    ) -> Result<Self> {
        let (source, target) = (source.into(), target.into());
        let matrix = Matrix::zeros(target.dim(), source.dim());
        Self::new(source, target, matrix)
    }

    pub fn source(&self) -> &NLieAlgebra {
        &self.source
    }

    pub fn target(&self) -> &NLieAlgebra {
        &self.target
    }

    pub fn source_arc(&self) -> &Arc<NLieAlgebra> {
        &self.source
    }

    pub fn target_arc(&self) -> &Arc<NLieAlgebra> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vector> {
        self.matrix.mul_vec(v)
    }

    /// `φ̄(x)`: the induced map on wedge blocks.
    pub fn phibar(&self, x: &WedgeForm) -> WedgeForm {
        x.map(|i| self.matrix.column(i))
    }

    /// Checks `φ[e_K] = [φe_{k1},…,φe_{kn}]′` on every increasing basis tuple.
    pub fn validate(&self) -> MorphismReport {
        let mut failures = Vec::new();
        for k in increasing_tuples(self.source.dim(), self.source.arity()) {
            let lhs = self
                .matrix
                .mul_vec(&self.source.bracket_basis(&k))
                .expect("shape checked");
            let rhs = self.target.apply_top(&self.phibar(&WedgeForm::basis(&k)));
            let residual = linalg::vec_sub(&lhs, &rhs);
            if !linalg::is_zero_vector(&residual) {
                failures.push(MorphismFailure { args: k, residual });
            }
        }
        MorphismReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidMorphism {
                failures: report.failures.len(),
            })
        }
    }

    /// `L′(x) z = [φx¹,…,φx^{n−1}, z]′` for a source block `x`.
    pub fn lprime(&self, x: &WedgeForm, z: &[Rational]) -> Result<Vector> {
        if x.grade() != self.source.arity() - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.source.arity() - 1,
                found: x.grade(),
            });
        }
        if z.len() != self.target.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.target.dim(),
                found: z.len(),
            });
        }
        Ok(self
            .target
            .apply_top(&self.phibar(x).wedge(&WedgeForm::vector(z))))
    }

    pub fn lprime_matrix(&self, x: &WedgeForm) -> Result<Matrix> {
        let img = self.phibar(x);
        let cols: Vec<Vector> = (0..self.target.dim())
            .map(|j| self.target.apply_top(&img.wedge(&WedgeForm::basis(&[j]))))
            .collect();
        Matrix::from_columns(self.target.dim(), &cols)
    }

    /// Same source and target, another matrix.
    pub fn with_matrix(&self, matrix: Matrix) -> Result<Morphism> {
        Morphism::new(self.source.clone(), self.target.clone(), matrix)
    }
}
