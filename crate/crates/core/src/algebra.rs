//! n-Lie (Filippov) algebras given by structure constants on increasing tuples.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::linalg::{self, unit_vector, zero_vector, Matrix, Vector};
use crate::rational::Rational;
use crate::wedge::{increasing_tuples, is_strictly_increasing, WedgeForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NLieAlgebra {
    name: String,
    arity: usize,
    dim: usize,
    basis_names: Vec<String>,
    structure: BTreeMap<Vec<usize>, Vector>,
}

/// A basis pair `(x, y)` on which the Nambu identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NambuFailure {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub residual: Vector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<NambuFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl NLieAlgebra {
    /// Structure keys are 0-based strictly increasing `arity`-tuples.
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        dim: usize,
        basis_names: Vec<String>,
        structure: BTreeMap<Vec<usize>, Vector>,
    ) -> Result<Self> {
        let name = name.into();
        if arity < 2 {
            return Err(Error::Parse(format!("arity must be at least 2, got {arity}")));
        }
        if dim == 0 {
            return Err(Error::Parse("dimension must be at least 1".into()));
        }
        if basis_names.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: basis_names.len(),
            });
        }
        let unique: BTreeSet<&String> = basis_names.iter().collect();
        if unique.len() != dim {
            return Err(Error::Parse("basis names must be distinct".into()));
        }
        let mut cleaned = BTreeMap::new();
        for (key, value) in structure {
            if key.len() != arity {
                return Err(Error::DimensionMismatch {
                    expected: arity,
                    found: key.len(),
                });
            }
            if let Some(&bad) = key.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            if !is_strictly_increasing(&key) {
                return Err(Error::Parse(format!(
                    "bracket arguments {key:?} are not strictly increasing"
                )));
            }
            if value.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: value.len(),
                });
            }
            if !linalg::is_zero_vector(&value) {
                cleaned.insert(key, value);
            }
        }
        Ok(NLieAlgebra {
            name,
            arity,
            dim,
            basis_names,
            structure: cleaned,
        })
    }

    pub fn default_basis_names(dim: usize) -> Vec<String> {
        (1..=dim).map(|i| format!("e{i}")).collect()
    }

    pub fn abelian(arity: usize, dim: usize) -> Result<Self> {
        Self::new(
            format!("abelian({arity},{dim})"),
            arity,
            dim,
            Self::default_basis_names(dim),
            BTreeMap::new(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn structure(&self) -> &BTreeMap<Vec<usize>, Vector> {
        &self.structure
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `[e_{i1},…,e_{in}]` for arbitrary basis indices.
    pub fn bracket_basis(&self, indices: &[usize]) -> Vector {
        self.apply_top(&WedgeForm::basis(indices))
    }

    /// Evaluates the bracket on a top-degree form `Σ c_K e_K`.
    pub fn apply_top(&self, form: &WedgeForm) -> Vector {
        let mut out = zero_vector(self.dim);
        for (t, c) in form.terms() {
            if let Some(v) = self.structure.get(t) {
                linalg::add_scaled(&mut out, c, v);
            }
        }
        out
    }

    pub fn bracket(&self, args: &[Vector]) -> Result<Vector> {
        if args.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        self.check_vectors(args)?;
        Ok(self.apply_top(&WedgeForm::from_vectors(args)))
    }

    /// `ad(x) z = [x¹,…,x^{n−1},z]`, linear in the form `x`.
    pub fn ad_action(&self, x: &WedgeForm, z: &[Rational]) -> Result<Vector> {
        self.check_block(x)?;
        self.check_vectors(std::slice::from_ref(&z.to_vec()))?;
        Ok(self.apply_top(&x.wedge(&WedgeForm::vector(z))))
    }

    /// Matrix of `ad(x)`, column `j` = `ad(x) e_j`.
    pub fn ad_matrix(&self, x: &WedgeForm) -> Result<Matrix> {
        self.check_block(x)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.apply_top(&x.wedge(&WedgeForm::basis(&[j]))))
            .collect();
        Matrix::from_columns(self.dim, &cols)
    }

    /// `[x, y] = Σ_i y₁∧…∧ad(x)y_i∧…∧y_{n−1}`.
    pub fn fundamental_bracket(&self, x: &WedgeForm, y: &WedgeForm) -> Result<WedgeForm> {
        self.check_block(x)?;
        self.check_block(y)?;
        let ad = self.ad_matrix(x)?;
        let mut out = WedgeForm::zero(self.arity - 1);
        for (t, c) in y.terms() {
            for k in 0..t.len() {
                let mut factors: Vec<Vector> = t.iter().map(|&i| unit_vector(self.dim, i)).collect();
                factors[k] = ad.column(t[k]);
                out.add_scaled(c, &WedgeForm::from_vectors(&factors));
            }
        }
        Ok(out)
    }

    /// Checks the Nambu identity
    /// `ad(x)[y₁,…,yₙ] = Σ_i [y₁,…,ad(x)y_i,…,yₙ]` on basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        let ys = increasing_tuples(self.dim, self.arity);
        for x in increasing_tuples(self.dim, self.arity - 1) {
            let xf = WedgeForm::basis(&x);
            let ad = self.ad_matrix(&xf).expect("basis form has the right grade");
            if ad.is_zero() {
                continue;
            }
            for y in &ys {
                let lhs = ad.mul_vec(&self.bracket_basis(y)).expect("square");
                let mut rhs = zero_vector(self.dim);
                for k in 0..y.len() {
                    let mut factors: Vec<Vector> =
                        y.iter().map(|&i| unit_vector(self.dim, i)).collect();
                    factors[k] = ad.column(y[k]);
                    let term = self.apply_top(&WedgeForm::from_vectors(&factors));
                    linalg::add_scaled(&mut rhs, &Rational::one(), &term);
                }
                let residual = linalg::vec_sub(&lhs, &rhs);
                if !linalg::is_zero_vector(&residual) {
                    failures.push(NambuFailure {
                        x: x.clone(),
                        y: y.clone(),
                        residual,
                    });
                }
            }
        }
        ValidationReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra {
                name: self.name.clone(),
                failures: report.failures.len(),
            })
        }
    }

    /// The algebra transported along the basis change `g`:
    /// `[x₁,…,xₙ]_g = g⁻¹[g x₁,…,g xₙ]`.
    pub fn change_of_basis(&self, g: &Matrix) -> Result<NLieAlgebra> {
        let g_inv = linalg::inverse(g)?.ok_or_else(|| Error::Parse("basis change is singular".into()))?;
        if g.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: g.rows(),
            });
        }
        let mut structure = BTreeMap::new();
        for k in increasing_tuples(self.dim, self.arity) {
            let images: Vec<Vector> = k.iter().map(|&i| g.column(i)).collect();
            let v = g_inv.mul_vec(&self.bracket(&images)?)?;
            structure.insert(k, v);
        }
        NLieAlgebra::new(
            self.name.clone(),
            self.arity,
            self.dim,
            self.basis_names.clone(),
            structure,
        )
    }

    /// Direct sum with an abelian algebra of dimension `extra`.
    pub fn extend_abelian(&self, extra: usize) -> Result<NLieAlgebra> {
        let dim = self.dim + extra;
        let structure = self
            .structure
            .iter()
            .map(|(k, v)| {
                let mut w = v.clone();
                w.resize(dim, Rational::zero());
                (k.clone(), w)
            })
            .collect();
        NLieAlgebra::new(
            format!("{}+ab{extra}", self.name),
            self.arity,
            dim,
            Self::default_basis_names(dim),
            structure,
        )
    }

    fn check_vectors(&self, vs: &[Vector]) -> Result<()> {
        for v in vs {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: v.len(),
                });
            }
        }
        Ok(())
    }

    fn check_block(&self, x: &WedgeForm) -> Result<()> {
        if x.grade() != self.arity - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.arity - 1,
                found: x.grade(),
            });
        }
        if let Some(&bad) = x.terms().flat_map(|(t, _)| t).find(|&&i| i >= self.dim) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        Ok(())
    }
}

/// An element `x₁∧…∧x_{n−1}` kept with its factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalObject {
    pub components: Vec<Vector>,
}

impl FundamentalObject {
    pub fn new(components: Vec<Vector>) -> Self {
        FundamentalObject { components }
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        FundamentalObject {
            components: indices.iter().map(|&i| unit_vector(dim, i)).collect(),
        }
    }

    pub fn to_wedge(&self) -> WedgeForm {
        WedgeForm::from_vectors(&self.components)
    }
}
