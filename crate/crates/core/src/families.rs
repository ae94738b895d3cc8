//! Matrix solutions of `YX − γXY = I` and the explicit solution families.
//!
//! Layouts follow the classical displays exactly:
//!
//! * singular family: `X` the `l×l` upper shift, `Y_β` with the partial geometric
//!   sums `Σ_{i=0}^{l-1-k} γ^i` on the subdiagonal and `β` in the top right corner;
//! * the `α`-family `Y_α`, entry `(i, j)` for `j ≥ i` equal to `γ^{l−j} α_{l+i−j}`
//!   (1-based), same subdiagonal;
//! * nonsingular family: `X_λ = λ·diag(γ, …, γ^l)` and `Y_{λ,b}` with diagonal
//!   `((1−γ)γ^k λ)⁻¹`, `b_k` at `(k, k+1)` and `b_l` at `(l, 1)`.

use crate::field::{geometric_sum, FieldCtx, FieldElem, FieldKind};
use crate::matrix::{Mat, MatrixError};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("expected {expected} parameters, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("{what} = {value} outside {lo}..={hi}")]
    RangeError {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },
    #[error("x and y must be square matrices of the same size, got {x:?} and {y:?}")]
    ShapeMismatch { x: (usize, usize), y: (usize, usize) },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A pair `(X, Y)` of `n×n` matrices over one field.
///
/// Whether `YX − γXY = I` holds is computed once at construction; foreign pairs
/// are allowed so that they can be reported on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    x: Mat,
    y: Mat,
    relation_holds: bool,
}

/// Outcome of checking the defining relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub holds: bool,
    /// `YX − γXY − I`; zero exactly when the relation holds.
    pub residual: Mat,
    /// `YX = XY`, the excluded commutative case.
    pub commutative: bool,
}

impl Solution {
    pub fn new(x: Mat, y: Mat) -> Result<Self, FamilyError> {
        if !x.is_square() || x.shape() != y.shape() {
            return Err(FamilyError::ShapeMismatch {
                x: x.shape(),
                y: y.shape(),
            });
        }
        if x.ctx() != y.ctx() {
            return Err(MatrixError::CtxMismatch.into());
        }
        let relation_holds = residual(&x, &y).is_zero();
        Ok(Solution { x, y, relation_holds })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.x.ctx()
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn size(&self) -> usize {
        self.x.rows()
    }

    pub fn relation_holds(&self) -> bool {
        self.relation_holds
    }

    pub fn is_commutative(&self) -> bool {
        &self.y * &self.x == &self.x * &self.y
    }

    pub fn verify_relation(&self) -> RelationReport {
        let residual = residual(&self.x, &self.y);
        RelationReport {
            holds: residual.is_zero(),
            residual,
            commutative: self.is_commutative(),
        }
    }

    /// `(g·X·g⁻¹, g·Y·g⁻¹)`.
    pub fn conjugate(&self, g: &Mat) -> Result<Solution, MatrixError> {
        let g_inv = g.inverse()?;
        Ok(Solution {
            x: self.x.conjugate(g, &g_inv),
            y: self.y.conjugate(g, &g_inv),
            relation_holds: self.relation_holds,
        })
    }

    /// Block diagonal sum, a reducible solution whenever both parts are solutions.
    pub fn direct_sum(&self, other: &Solution) -> Solution {
        let (a, b) = (self.size(), other.size());
        let block = |m: &Mat, o: &Mat| {
            Mat::from_fn(self.ctx(), a + b, a + b, |i, j| match (i < a, j < a) {
                (true, true) => m[(i, j)].clone(),
                (false, false) => o[(i - a, j - a)].clone(),
                _ => self.ctx().zero(),
            })
        };
        Solution::new(block(&self.x, &other.x), block(&self.y, &other.y)).expect("square blocks")
    }
}

fn residual(x: &Mat, y: &Mat) -> Mat {
    let ctx = x.ctx();
    &(&(y * x) - &(x * y).scale(&ctx.gamma())) - &Mat::identity(ctx, x.rows())
}

/// Parameters of the singular family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularParams {
    /// `Y_β`, any `β` (zero allowed).
    Beta(FieldElem),
    /// `Y_α` with `(α_1, …, α_l)`.
    Alphas(Vec<FieldElem>),
}

/// Off-diagonal data of the nonsingular family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffDiagonal {
    /// `(b_1, …, b_l)`, all nonzero.
    Bs(Vec<FieldElem>),
    /// Superdiagonal ones and `η` at `(l, 1)`.
    Eta(FieldElem),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingularParams {
    pub lambda: FieldElem,
    pub off: OffDiagonal,
}

/// The `l×l` upper shift matrix.
pub fn shift_x(ctx: &FieldCtx) -> Mat {
    Mat::block_shift(ctx, &[ctx.order()])
}

fn put_subdiagonal(ctx: &FieldCtx, m: &mut Mat) {
    let l = ctx.order();
    for k in 1..l {
        // 1-based entry (k+1, k)
        m[(k, k - 1)] = geometric_sum(ctx, l - 1 - k);
    }
}

/// `Y_β`.
pub fn singular_y(ctx: &FieldCtx, beta: &FieldElem) -> Mat {
    let l = ctx.order();
    let mut m = Mat::zero(ctx, l, l);
    put_subdiagonal(ctx, &mut m);
    m[(0, l - 1)] = beta.clone();
    m
}

/// `Y_α` for `α = (α_1, …, α_l)`.
pub fn singular_y_alphas(ctx: &FieldCtx, alphas: &[FieldElem]) -> Result<Mat, FamilyError> {
    let l = ctx.order();
    if alphas.len() != l {
        return Err(FamilyError::BadLength {
            expected: l,
            got: alphas.len(),
        });
    }
    let mut m = Mat::zero(ctx, l, l);
    put_subdiagonal(ctx, &mut m);
    for i in 1..=l {
        for j in i..=l {
            m[(i - 1, j - 1)] = &ctx.gamma_pow((l - j) as i64) * &alphas[l + i - j - 1];
        }
    }
    Ok(m)
}

/// `X_λ = λ·diag(γ, γ², …, γ^l)`.
pub fn nonsingular_x(ctx: &FieldCtx, lambda: &FieldElem) -> Result<Mat, FamilyError> {
    if lambda.is_zero() {
        return Err(FamilyError::ZeroParameter("lambda"));
    }
    let diag: Vec<FieldElem> = (1..=ctx.order()).map(|k| lambda * &ctx.gamma_pow(k as i64)).collect();
    Ok(Mat::diagonal(ctx, &diag))
}

/// Diagonal entry `k` (1-based) of the nonsingular `Y`: `((1−γ)γ^k λ)⁻¹`.
pub fn nonsingular_y_diagonal(ctx: &FieldCtx, lambda: &FieldElem, k: usize) -> Result<FieldElem, FamilyError> {
    let denom = &(&(ctx.one() - ctx.gamma()) * &ctx.gamma_pow(k as i64)) * lambda;
    denom.inv().map_err(|_| FamilyError::ZeroParameter("lambda"))
}

pub fn nonsingular_y(ctx: &FieldCtx, params: &NonsingularParams) -> Result<Mat, FamilyError> {
    let l = ctx.order();
    if params.lambda.is_zero() {
        return Err(FamilyError::ZeroParameter("lambda"));
    }
    let bs: Vec<FieldElem> = match &params.off {
        OffDiagonal::Bs(bs) => {
            if bs.len() != l {
                return Err(FamilyError::BadLength {
                    expected: l,
                    got: bs.len(),
                });
            }
            if bs.iter().any(FieldElem::is_zero) {
                return Err(FamilyError::ZeroParameter("b"));
            }
            bs.clone()
        }
        OffDiagonal::Eta(eta) => {
            if eta.is_zero() {
                return Err(FamilyError::ZeroParameter("eta"));
            }
            let mut bs = vec![ctx.one(); l - 1];
            bs.push(eta.clone());
            bs
        }
    };
    let mut m = Mat::zero(ctx, l, l);
    for k in 1..=l {
        m[(k - 1, k - 1)] = nonsingular_y_diagonal(ctx, &params.lambda, k)?;
    }
    for k in 1..l {
        m[(k - 1, k)] = bs[k - 1].clone();
    }
    m[(l - 1, 0)] = bs[l - 1].clone();
    Ok(m)
}

pub fn singular_solution(ctx: &FieldCtx, params: &SingularParams) -> Result<Solution, FamilyError> {
    let y = match params {
        SingularParams::Beta(beta) => singular_y(ctx, beta),
        SingularParams::Alphas(alphas) => singular_y_alphas(ctx, alphas)?,
    };
    Solution::new(shift_x(ctx), y)
}

pub fn nonsingular_solution(ctx: &FieldCtx, params: &NonsingularParams) -> Result<Solution, FamilyError> {
    Solution::new(nonsingular_x(ctx, &params.lambda)?, nonsingular_y(ctx, params)?)
}

/// `Π_{j=l−v+1}^{l} Σ_{i=0}^{l−j} γ^i`, the only nonzero entry of row `l` of `Y_β^v`
/// (found in column `l − v`).
pub fn power_row_value(ctx: &FieldCtx, v: usize) -> Result<FieldElem, FamilyError> {
    let l = ctx.order();
    if v == 0 || v >= l {
        return Err(FamilyError::RangeError {
            what: "v",
            value: v,
            lo: 1,
            hi: l - 1,
        });
    }
    Ok((l - v + 1..=l).fold(ctx.one(), |acc, j| acc * geometric_sum(ctx, l - j)))
}

/// A nonzero eigenvalue of `x` lying in the field.
///
/// `Ok(None)` means `x` has no nonzero eigenvalue in `K`. Over `Q(ζ_l)` only
/// eigenvalues of the form `r·ω` (`r` rational, `ω` a root of unity in the field)
/// are searched for, and only when `x^l` is a rational scalar; anything else is
/// [`EigenSearch::Unsupported`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EigenSearch {
    Found(FieldElem),
    None,
    Unsupported,
}

pub fn nonzero_eigenvalue(x: &Mat) -> EigenSearch {
    let ctx = x.ctx();
    let n = x.rows();
    let l = ctx.order() as u64;
    let is_eigen = |mu: &FieldElem| {
        (x - &Mat::scalar(ctx, n, mu))
            .det()
            .map(|d| d.is_zero())
            .unwrap_or(false)
    };
    let power = x.pow(l).ok().and_then(|m| m.is_scalar());
    match ctx.kind() {
        FieldKind::Prime => {
            let candidates = ctx.elements().skip(1);
            let found = match &power {
                Some(c) => candidates.filter(|mu| mu.pow(l) == *c).find(is_eigen),
                None => ctx.elements().skip(1).find(is_eigen),
            };
            match found {
                Some(mu) => EigenSearch::Found(mu),
                None => EigenSearch::None,
            }
        }
        FieldKind::Cyclotomic => {
            let Some(c) = power else {
                return EigenSearch::Unsupported;
            };
            if c.is_zero() {
                return EigenSearch::None;
            }
            let Some(q) = c.to_rational() else {
                return EigenSearch::Unsupported;
            };
            let Some(r) = rational_root(&q.abs(), l as u32) else {
                return EigenSearch::Unsupported;
            };
            let r = ctx.from_rational(&r).expect("rational embeds");
            // roots of unity in Q(ζ_l): ±γ^k
            for k in 0..l as i64 {
                for sign in [1, -1] {
                    let mu = &(&r * &ctx.gamma_pow(k)) * &ctx.from_int(sign);
                    if mu.pow(l) == c && is_eigen(&mu) {
                        return EigenSearch::Found(mu);
                    }
                }
            }
            EigenSearch::Unsupported
        }
    }
}

/// Exact `k`-th root of a nonnegative rational, if it is rational.
fn rational_root(q: &num_rational::BigRational, k: u32) -> Option<num_rational::BigRational> {
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    (n.pow(k) == *q.numer() && d.pow(k) == *q.denom() && !d.is_zero())
        .then(|| num_rational::BigRational::new(n, d))
}

/// Outcome of the eigenvalue-orbit check on `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectrumCheck {
    /// `X` has no nonzero eigenvalue in the field.
    NotApplicable,
    /// The eigenvalue search is not supported for this input over this field.
    Unsupported,
    /// `μ` is an eigenvalue; `holds` says whether all of `γμ, …, γ^l μ` are
    /// distinct eigenvalues too.
    Orbit { eigenvalue: FieldElem, holds: bool },
}

/// Structural facts every irreducible noncommutative solution satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    /// `c` with `X^l = c·I`, if scalar.
    pub x_power_scalar: Option<FieldElem>,
    pub y_power_scalar: Option<FieldElem>,
    /// `U = YX − XY`.
    pub u: Mat,
    /// `UX = γXU`.
    pub u_skew_x: bool,
    /// `YU = γUY`.
    pub u_skew_y: bool,
    pub u_nonsingular: bool,
    pub spectrum: SpectrumCheck,
}

impl StructuralReport {
    pub fn all_pass(&self) -> bool {
        self.x_power_scalar.is_some()
            && self.y_power_scalar.is_some()
            && self.u_skew_x
            && self.u_skew_y
            && self.u_nonsingular
            && !matches!(self.spectrum, SpectrumCheck::Orbit { holds: false, .. })
    }
}

pub fn structural_report(s: &Solution) -> StructuralReport {
    let ctx = s.ctx();
    let (x, y) = (s.x(), s.y());
    let l = ctx.order() as u64;
    let gamma = ctx.gamma();
    let u = &(y * x) - &(x * y);
    let x_power_scalar = x.pow(l).expect("square").is_scalar();
    let y_power_scalar = y.pow(l).expect("square").is_scalar();
    let u_skew_x = &u * x == (x * &u).scale(&gamma);
    let u_skew_y = y * &u == (&u * y).scale(&gamma);
    let u_nonsingular = !u.det().expect("square").is_zero();
    let spectrum = match nonzero_eigenvalue(x) {
        EigenSearch::None => SpectrumCheck::NotApplicable,
        EigenSearch::Unsupported => SpectrumCheck::Unsupported,
        EigenSearch::Found(mu) => {
            let n = x.rows();
            let orbit: Vec<FieldElem> = (1..=l as i64).map(|k| &mu * &ctx.gamma_pow(k)).collect();
            let distinct = orbit
                .iter()
                .enumerate()
                .all(|(i, a)| orbit[i + 1..].iter().all(|b| a != b));
            let all_eigen = orbit
                .iter()
                .all(|e| (x - &Mat::scalar(ctx, n, e)).det().map(|d| d.is_zero()).unwrap_or(false));
            SpectrumCheck::Orbit {
                eigenvalue: mu,
                holds: distinct && all_eigen,
            }
        }
    };
    StructuralReport {
        x_power_scalar,
        y_power_scalar,
        u,
        u_skew_x,
        u_skew_y,
        u_nonsingular,
        spectrum,
    }
}
