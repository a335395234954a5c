//! Coboundary operators as matrices in the canonical cochain bases, and
//! cohomology of a pair of consecutive differentials.
//!
//! Degrees here are structural: `δ` maps `C^p` to `C^{p+1}`, and the group
//! built from `C^p` is reported as `H^{p+1}`.

use std::collections::HashMap;

use crate::algebra::NLieAlgebra;
use crate::cochain::CochainSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, unit_vector, Matrix, Vector};
use crate::morphism::Morphism;
use crate::rational::Rational;
use crate::wedge::{increasing_tuples, WedgeForm};

/// `δ: C^p(N, N′) → C^{p+1}(N, N′)` where `N′` is a module through `phi`.
/// With `phi` the identity of `N` this is the adjoint complex.
pub(crate) fn assemble(
    src: &NLieAlgebra,
    tgt: &NLieAlgebra,
    phi: &Matrix,
    p: usize,
) -> Result<Matrix> {
    let n = src.arity();
    let (d, dt) = (src.dim(), tgt.dim());
    let from = CochainSpace::new(p, n, d, dt);
    let to = CochainSpace::new(p + 1, n, d, dt);
    let mut out = Matrix::zeros(to.dim(), from.dim());

    let blocks = increasing_tuples(d, n - 1);
    let block_form: HashMap<&[usize], WedgeForm> = blocks
        .iter()
        .map(|b| (b.as_slice(), WedgeForm::basis(b)))
        .collect();
    let mut ad: HashMap<&[usize], Matrix> = HashMap::new();
    let mut lp: HashMap<&[usize], Matrix> = HashMap::new();
    let phi_img = Morphism::new(src.clone(), tgt.clone(), phi.clone())?;
    for b in &blocks {
        let x = &block_form[b.as_slice()];
        ad.insert(b.as_slice(), src.ad_matrix(x)?);
        lp.insert(b.as_slice(), phi_img.lprime_matrix(x)?);
    }
    let mut fund: HashMap<(usize, usize), WedgeForm> = HashMap::new();
    let block_idx: HashMap<&[usize], usize> =
        blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();

    for row in 0..to.domain_len() {
        let el = to.domain_element(row);
        let (xl, z) = el.last.split_at(n - 1);
        let z = z[0];
        let mut a: Vec<&[usize]> = el.blocks.iter().map(Vec::as_slice).collect();
        a.push(xl);
        let forms: Vec<WedgeForm> = a.iter().map(|b| block_form[*b].clone()).collect();
        let ez = unit_vector(d, z);
        let big_p = p + 1;
        let mut add = |coef: Rational, args: Vec<WedgeForm>, zv: &Vector, post: Option<&Matrix>| {
            for (col, c) in from.expand_call(&args, zv) {
                let c = &coef * &c;
                match post {
                    None => {
                        for s in 0..dt {
                            out.add_to(row * dt + s, col * dt + s, &c);
                        }
                    }
                    Some(m) => {
                        for r in 0..dt {
                            for s in 0..dt {
                                let x = m.get(r, s);
                                if !x.is_zero() {
                                    out.add_to(row * dt + r, col * dt + s, &(&c * x));
                                }
                            }
                        }
                    }
                }
            }
        };
        let without = |i: usize| -> Vec<WedgeForm> {
            forms
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, f)| f.clone())
                .collect()
        };

        for i in 0..big_p {
            for j in i + 1..big_p {
                let key = (block_idx[a[i]], block_idx[a[j]]);
                let br = match fund.get(&key) {
                    Some(f) => f.clone(),
                    None => {
                        let f = src.fundamental_bracket(&forms[i], &forms[j])?;
                        fund.insert(key, f.clone());
                        f
                    }
                };
                let mut args = without(i);
                args[j - 1] = br;
                add(Rational::sign(i + 1), args, &ez, None);
            }
        }
        for i in 0..big_p {
            let adz = ad[a[i]].column(z);
            add(Rational::sign(i + 1), without(i), &adz, None);
            add(Rational::sign(i), without(i), &ez, Some(&lp[a[i]]));
        }
        let phi_z = phi.column(z);
        let phi_x: Vec<Vector> = xl.iter().map(|&i| phi.column(i)).collect();
        for k in 0..n - 1 {
            let cols: Vec<Vector> = (0..dt)
                .map(|s| {
                    let mut args = phi_x.clone();
                    args[k] = unit_vector(dt, s);
                    args.push(phi_z.clone());
                    tgt.apply_top(&WedgeForm::from_vectors(&args))
                })
                .collect();
            let post = Matrix::from_columns(dt, &cols)?;
            let ek = unit_vector(d, xl[k]);
            add(Rational::sign(p), forms[..p].to_vec(), &ek, Some(&post));
        }
    }
    Ok(out)
}

/// Matrix of `δ^{p+1}: C^p(N,N) → C^{p+1}(N,N)`.
pub fn coboundary_matrix_self(alg: &NLieAlgebra, p: usize) -> Result<Matrix> {
    alg.ensure_valid()?;
    assemble(alg, alg, &Matrix::identity(alg.dim()), p)
}

/// Matrix of `δ^{m+1}: C^m(N,N′) → C^{m+1}(N,N′)` for the module structure
/// induced by `phi`.
pub fn coboundary_matrix_module(phi: &Morphism, m: usize) -> Result<Matrix> {
    phi.source().ensure_valid()?;
    phi.target().ensure_valid()?;
    phi.ensure_valid()?;
    assemble(phi.source(), phi.target(), phi.matrix(), m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    pub cocycle_basis: Vec<Vector>,
    pub representatives: Vec<Vector>,
}

/// Cohomology at the middle of `delta_in` then `delta_out`. Without an
/// incoming map the group is the kernel itself.
pub fn cohomology(delta_in: Option<&Matrix>, delta_out: &Matrix) -> Result<CohomologyReport> {
    let boundaries = match delta_in {
        Some(din) => {
            if din.rows() != delta_out.cols() {
                return Err(Error::DimensionMismatch {
                    expected: delta_out.cols(),
                    found: din.rows(),
                });
            }
            if !delta_out.mul(din)?.is_zero() {
                return Err(Error::BrokenComplex);
            }
            linalg::column_space_basis(din)
        }
        None => Vec::new(),
    };
    let cocycle_basis = linalg::kernel_basis(delta_out);
    let quotient = linalg::quotient_data(&cocycle_basis, &boundaries).map_err(|e| match e {
        Error::SubspaceViolation { .. } => Error::BrokenComplex,
        other => other,
    })?;
    Ok(CohomologyReport {
        dim_z: cocycle_basis.len(),
        dim_b: boundaries.len(),
        dim_h: quotient.dim,
        cocycle_basis,
        representatives: quotient.representatives,
    })
}

/// `H^r(N, N)` with `r ≥ 1` in report numbering.
pub fn cohomology_self(alg: &NLieAlgebra, r: usize) -> Result<CohomologyReport> {
    let p = structural_degree(r)?;
    let out = coboundary_matrix_self(alg, p)?;
    let inc = if p == 0 {
        None
    } else {
        Some(coboundary_matrix_self(alg, p - 1)?)
    };
    cohomology(inc.as_ref(), &out)
}

/// `H^r(N, N′)` for the module induced by `phi`.
pub fn cohomology_module(phi: &Morphism, r: usize) -> Result<CohomologyReport> {
    let m = structural_degree(r)?;
    let out = coboundary_matrix_module(phi, m)?;
    let inc = if m == 0 {
        None
    } else {
        Some(coboundary_matrix_module(phi, m - 1)?)
    };
    cohomology(inc.as_ref(), &out)
}

/// Report degree `r` to the structural degree `r − 1`.
pub fn structural_degree(r: usize) -> Result<usize> {
    r.checked_sub(1).ok_or(Error::DegreeMismatch {
        expected: 1,
        found: 0,
    })
}
