//! Canonical forms of irreducible solutions and explicit equivalence witnesses.
//!
//! Every irreducible noncommutative solution is equivalent to exactly one of
//!
//! * `(X, Y_β)`: `X` the upper shift, when `X` is nilpotent;
//! * `(X_λ, Y_{λ,η})`: `X` diagonal, when `X` has a nonzero eigenvalue, with `λ`
//!   normalized to a fixed representative of its orbit under multiplication by `γ`.
//!
//! Witnesses always follow the convention `Q·A·Q⁻¹ = canonical`.

use crate::burnside::{is_irreducible, BurnsideError};
use crate::families::{
    nonsingular_solution, nonsingular_y_diagonal, nonzero_eigenvalue, singular_solution,
    singular_y_alphas, EigenSearch, FamilyError, NonsingularParams, OffDiagonal, SingularParams, Solution,
};
use crate::field::{geometric_sum, FieldCtx, FieldElem};
use crate::matrix::{solve_affine, sylvester_operator, Mat, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("pair does not satisfy yx - gamma*xy = 1")]
    NotASolution,
    #[error("yx = xy; commutative pairs are excluded")]
    CommutativePair,
    #[error("pair is not irreducible")]
    NotIrreducible,
    #[error("x is not nilpotent")]
    NotNilpotent,
    #[error("pair does not have the shape of an irreducible solution: {0}")]
    NotIrreducibleShape(String),
    #[error("x has no nonzero eigenvalue in the field")]
    NoEigenvalueInField,
    #[error("eigenvalues of x are not computable over this field")]
    UnsupportedOverThisField,
    #[error("an off-diagonal parameter b_{0} vanishes")]
    ZeroOffdiagonal(usize),
    #[error("expected {expected} alphas, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl From<FamilyError> for ReduceError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::BadLength { expected, got } => ReduceError::BadLength { expected, got },
            FamilyError::Matrix(m) => ReduceError::Matrix(m),
            other => ReduceError::NotIrreducibleShape(other.to_string()),
        }
    }
}

/// Names an equivalence class of irreducible solutions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalForm {
    SingularBeta { beta: FieldElem },
    NonsingularLambdaEta { lambda_rep: FieldElem, eta: FieldElem },
}

impl CanonicalForm {
    /// The canonical representative of the class.
    pub fn solution(&self, ctx: &FieldCtx) -> Solution {
        match self {
            CanonicalForm::SingularBeta { beta } => {
                singular_solution(ctx, &SingularParams::Beta(beta.clone())).expect("singular family")
            }
            CanonicalForm::NonsingularLambdaEta { lambda_rep, eta } => nonsingular_solution(
                ctx,
                &NonsingularParams {
                    lambda: lambda_rep.clone(),
                    off: OffDiagonal::Eta(eta.clone()),
                },
            )
            .expect("lambda and eta are nonzero"),
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, CanonicalForm::SingularBeta { .. })
    }
}

/// An invertible `Q` with `Q·A·Q⁻¹ = B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationWitness {
    pub q: Mat,
}

impl ConjugationWitness {
    /// Checks `Q·x₁ = x₂·Q`, `Q·y₁ = y₂·Q` and that `Q` is invertible.
    pub fn certifies(&self, from: &Solution, to: &Solution) -> bool {
        let q = &self.q;
        q.shape() == from.x().shape()
            && to.x().shape() == from.x().shape()
            && q * from.x() == to.x() * q
            && q * from.y() == to.y() * q
            && !q.det().map(|d| d.is_zero()).unwrap_or(true)
    }
}

/// Intermediate data of the singular reduction.
///
/// Witness = `P · Q_jordan`, where `Q_jordan` brings `x` to the shift and `P` is
/// the unipotent Toeplitz matrix built from `p_1, …, p_{l−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularTrace {
    pub block_sizes: Vec<usize>,
    pub jordan_q: Mat,
    /// `Q_jordan · y · Q_jordan⁻¹`, of the `Y_α` shape.
    pub d: Mat,
    pub alphas: Vec<FieldElem>,
    /// `p_1, …, p_{l−1}`.
    pub p: Vec<FieldElem>,
    pub p_matrix: Mat,
    pub beta: FieldElem,
}

/// Intermediate data of the nonsingular reduction.
///
/// Witness = `P_diag · C^rotation · S⁻¹`: `S` holds eigenvectors for
/// `λ₀γ, …, λ₀γ^l`, `C` is the cyclic permutation moving `λ₀` to its orbit
/// representative, and `P_diag = diag(1, b_1, b_1 b_2, …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsingularTrace {
    pub eigenvalue: FieldElem,
    pub lambda0: FieldElem,
    pub eigenbasis_inv: Mat,
    /// `b`'s read off `S⁻¹·y·S`.
    pub bs_found: Vec<FieldElem>,
    pub rotation: usize,
    pub permutation: Mat,
    pub lambda_rep: FieldElem,
    /// `b`'s after the cyclic relabelling.
    pub bs: Vec<FieldElem>,
    pub diagonal: Mat,
    pub eta: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionTrace {
    Singular(SingularTrace),
    Nonsingular(NonsingularTrace),
}

impl ReductionTrace {
    /// Recomposes the witness from the recorded factors.
    pub fn witness(&self) -> Mat {
        match self {
            ReductionTrace::Singular(t) => &t.p_matrix * &t.jordan_q,
            ReductionTrace::Nonsingular(t) => &(&t.diagonal * &t.permutation) * &t.eigenbasis_inv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub canonical: CanonicalForm,
    pub witness: ConjugationWitness,
    pub trace: ReductionTrace,
}

/// Solution set of `D·S − γ·S·D = I` for the `n×n` upper shift `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftEquationSolutions {
    Infeasible,
    Affine { particular: Mat, directions: Vec<Mat> },
}

impl ShiftEquationSolutions {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            ShiftEquationSolutions::Infeasible => None,
            ShiftEquationSolutions::Affine { directions, .. } => Some(directions.len()),
        }
    }
}

/// All `D` with `D·S − γ·S·D = I`, `S` the `n×n` upper shift.
///
/// The diagonal equations telescope to `Σ_{i<n} γ^i = 0`, so this is infeasible
/// unless `l | n`.
pub fn solve_d_for_shift(ctx: &FieldCtx, n: usize) -> ShiftEquationSolutions {
    let shift = Mat::block_shift(ctx, &[n]);
    let op = sylvester_operator(&shift, &shift, &ctx.gamma());
    let rhs = Mat::identity(ctx, n).vectorize();
    match solve_affine(&op, &rhs) {
        None => ShiftEquationSolutions::Infeasible,
        Some(sol) => ShiftEquationSolutions::Affine {
            particular: Mat::from_vector(ctx, n, n, sol.particular),
            directions: sol
                .kernel
                .into_iter()
                .map(|v| Mat::from_vector(ctx, n, n, v))
                .collect(),
        },
    }
}

/// `p_1, …, p_{l−1}` and `β` from `α_1, …, α_l`:
///
/// ```text
/// p_{l−1} = α_l
/// p_k     = (Σ_{i=0}^{l−1−k} γ^i)⁻¹ · (α_{k+1} + Σ_{i=k+1}^{l−1} α_{l+k+1−i} p_i),  k = l−2, …, 1
/// β       = α_1 + Σ_{i=1}^{l−1} α_{l+1−i} p_i
/// ```
pub fn recursion_p(ctx: &FieldCtx, alphas: &[FieldElem]) -> Result<(Vec<FieldElem>, FieldElem), ReduceError> {
    let l = ctx.order();
    if alphas.len() != l {
        return Err(ReduceError::BadLength {
            expected: l,
            got: alphas.len(),
        });
    }
    // 1-based views
    let alpha = |k: usize| &alphas[k - 1];
    let mut p = vec![ctx.zero(); l]; // p[k] for k in 1..l; p[0] unused
    p[l - 1] = alpha(l).clone();
    for k in (1..l - 1).rev() {
        let mut acc = alpha(k + 1).clone();
        for i in k + 1..l {
            acc = &acc + &(alpha(l + k + 1 - i) * &p[i]);
        }
        let divisor = geometric_sum(ctx, l - 1 - k).inv().expect("partial geometric sums are nonzero");
        p[k] = &acc * &divisor;
    }
    let mut beta = alpha(1).clone();
    for (i, p_i) in p.iter().enumerate().skip(1) {
        beta = &beta + &(alpha(l + 1 - i) * p_i);
    }
    p.remove(0);
    Ok((p, beta))
}

/// Unipotent upper triangular Toeplitz matrix with first row
/// `(1, p_{l−1}, p_{l−2}, …, p_1)`.
pub fn toeplitz_from_p(ctx: &FieldCtx, p: &[FieldElem]) -> Mat {
    let l = p.len() + 1;
    Mat::from_fn(ctx, l, l, |i, j| {
        if i == j {
            ctx.one()
        } else if j > i {
            p[l - (j - i) - 1].clone()
        } else {
            ctx.zero()
        }
    })
}

/// The cyclic permutation `e_k ↦ e_{k+1}` (indices mod `l`).
pub fn cyclic_permutation(ctx: &FieldCtx, l: usize) -> Mat {
    let mut c = Mat::zero(ctx, l, l);
    for k in 0..l {
        c[((k + 1) % l, k)] = ctx.one();
    }
    c
}

/// Orbit representative of `λ` under `λ ↦ γλ` and the exponent `i` with
/// `rep = γ^i λ`. Prime fields take the smallest residue; cyclotomic fields
/// the lexicographically least coefficient vector.
pub fn orbit_representative(lambda: &FieldElem) -> (FieldElem, usize) {
    let ctx = lambda.ctx();
    (0..ctx.order())
        .map(|i| (lambda * &ctx.gamma_pow(i as i64), i))
        .min_by(|a, b| a.0.canonical_cmp(&b.0))
        .expect("l ≥ 2")
}

fn shape_error(what: impl Into<String>) -> ReduceError {
    ReduceError::NotIrreducibleShape(what.into())
}

/// Reduces a solution with nilpotent `x` to `(X, Y_β)`.
pub fn reduce_singular(s: &Solution) -> Result<Reduction, ReduceError> {
    if !s.relation_holds() {
        return Err(ReduceError::NotASolution);
    }
    let ctx = s.ctx();
    let l = ctx.order();
    let (jordan_q, block_sizes) = match s.x().nilpotent_normalize() {
        Ok(r) => r,
        Err(MatrixError::NotNilpotent) => return Err(ReduceError::NotNilpotent),
        Err(e) => return Err(e.into()),
    };
    if block_sizes != [l] {
        return Err(shape_error(format!("nilpotent blocks {block_sizes:?}, expected [{l}]")));
    }
    let jordan_inv = jordan_q.inverse()?;
    let d = s.y().conjugate(&jordan_q, &jordan_inv);
    let alphas: Vec<FieldElem> = (0..l).map(|i| d[(i, l - 1)].clone()).collect();
    if d != singular_y_alphas(ctx, &alphas)? {
        return Err(shape_error("conjugated y is not of the Y_alpha form"));
    }
    let (p, beta) = recursion_p(ctx, &alphas)?;
    let p_matrix = toeplitz_from_p(ctx, &p);
    let q = &p_matrix * &jordan_q;
    let canonical = CanonicalForm::SingularBeta { beta: beta.clone() };
    let witness = ConjugationWitness { q };
    debug_assert!(witness.certifies(s, &canonical.solution(ctx)));
    Ok(Reduction {
        canonical,
        witness,
        trace: ReductionTrace::Singular(SingularTrace {
            block_sizes,
            jordan_q,
            d,
            alphas,
            p,
            p_matrix,
            beta,
        }),
    })
}

/// Reduces a solution whose `x` has a nonzero eigenvalue to `(X_λ, Y_{λ,η})`.
pub fn reduce_nonsingular(s: &Solution) -> Result<Reduction, ReduceError> {
    if !s.relation_holds() {
        return Err(ReduceError::NotASolution);
    }
    let ctx = s.ctx();
    let l = ctx.order();
    let (x, y) = (s.x(), s.y());
    let eigenvalue = match nonzero_eigenvalue(x) {
        EigenSearch::Found(mu) => mu,
        EigenSearch::None => return Err(ReduceError::NoEigenvalueInField),
        EigenSearch::Unsupported => return Err(ReduceError::UnsupportedOverThisField),
    };
    if s.size() != l {
        return Err(shape_error(format!("size {} with nonsingular x, expected {l}", s.size())));
    }
    // eigenvalue sits in position 1: λ₀γ = μ
    let lambda0 = &eigenvalue * &ctx.gamma_pow(-1);
    let mut columns = Vec::with_capacity(l);
    for k in 1..=l {
        let e = &lambda0 * &ctx.gamma_pow(k as i64);
        let mut kernel = (x - &Mat::scalar(ctx, l, &e)).kernel_vectors();
        if kernel.len() != 1 {
            return Err(shape_error(format!("eigenspace of dimension {} for λ₀γ^{k}", kernel.len())));
        }
        columns.push(kernel.pop().unwrap());
    }
    let basis = Mat::from_columns(ctx, &columns);
    let eigenbasis_inv = basis.inverse()?;
    let d = &(&eigenbasis_inv * y) * &basis;

    let mut bs_found = Vec::with_capacity(l);
    for k in 1..=l {
        let pos = if k < l { (k - 1, k) } else { (l - 1, 0) };
        bs_found.push(d[pos].clone());
    }
    for i in 0..l {
        for j in 0..l {
            let expected_nonzero = i == j || j == (i + 1) % l;
            if i == j {
                if d[(i, j)] != nonsingular_y_diagonal(ctx, &lambda0, i + 1)? {
                    return Err(shape_error("diagonal of conjugated y"));
                }
            } else if !expected_nonzero && !d[(i, j)].is_zero() {
                return Err(shape_error(format!("conjugated y has entry at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    if let Some(k) = bs_found.iter().position(FieldElem::is_zero) {
        return Err(ReduceError::ZeroOffdiagonal(k + 1));
    }

    let (lambda_rep, up) = orbit_representative(&lambda0);
    // λ₀ = γ^rotation · λ_rep, each C step lowers the exponent by one
    let rotation = (l - up) % l;
    let permutation = cyclic_permutation(ctx, l).pow(rotation as u64)?;
    let mut bs = bs_found.clone();
    bs.rotate_right(rotation);

    let mut running = ctx.one();
    let mut diag = Vec::with_capacity(l);
    for b in &bs {
        diag.push(running.clone());
        running = &running * b;
    }
    let eta = running;
    let diagonal = Mat::diagonal(ctx, &diag);

    let q = &(&diagonal * &permutation) * &eigenbasis_inv;
    let canonical = CanonicalForm::NonsingularLambdaEta {
        lambda_rep: lambda_rep.clone(),
        eta: eta.clone(),
    };
    let witness = ConjugationWitness { q };
    debug_assert!(witness.certifies(s, &canonical.solution(ctx)));
    Ok(Reduction {
        canonical,
        witness,
        trace: ReductionTrace::Nonsingular(NonsingularTrace {
            eigenvalue,
            lambda0,
            eigenbasis_inv,
            bs_found,
            rotation,
            permutation,
            lambda_rep,
            bs,
            diagonal,
            eta,
        }),
    })
}

/// Full reduction with trace: checks the relation, noncommutativity and
/// irreducibility, then dispatches on whether `x` is nilpotent.
pub fn reduce(s: &Solution) -> Result<Reduction, ReduceError> {
    if !s.relation_holds() {
        return Err(ReduceError::NotASolution);
    }
    if s.is_commutative() {
        return Err(ReduceError::CommutativePair);
    }
    match is_irreducible(s) {
        Ok(true) => {}
        Ok(false) => return Err(ReduceError::NotIrreducible),
        Err(BurnsideError::NotASolution) => return Err(ReduceError::NotASolution),
        Err(e) => return Err(shape_error(e.to_string())),
    }
    if s.x().is_nilpotent() {
        reduce_singular(s)
    } else {
        reduce_nonsingular(s)
    }
}

pub fn canonicalize(s: &Solution) -> Result<(CanonicalForm, ConjugationWitness), ReduceError> {
    reduce(s).map(|r| (r.canonical, r.witness))
}

/// Basis of `{Q : Q·x₁ = x₂·Q, Q·y₁ = y₂·Q}`.
pub fn intertwiners(s1: &Solution, s2: &Solution) -> Vec<Mat> {
    let n = s1.size();
    if s2.size() != n || s1.ctx() != s2.ctx() {
        return Vec::new();
    }
    let ctx = s1.ctx();
    let one = ctx.one();
    let ox = sylvester_operator(s1.x(), s2.x(), &one);
    let oy = sylvester_operator(s1.y(), s2.y(), &one);
    let stacked = Mat::from_fn(ctx, 2 * n * n, n * n, |i, j| {
        if i < n * n {
            ox[(i, j)].clone()
        } else {
            oy[(i - n * n, j)].clone()
        }
    });
    stacked
        .kernel_vectors()
        .into_iter()
        .map(|v| Mat::from_vector(ctx, n, n, v))
        .collect()
}

/// Cap on the number of combinations tried when no basis intertwiner is invertible.
const COMBINATION_CAP: usize = 4096;

/// An invertible intertwiner `Q` with `Q·s1·Q⁻¹ = s2`, if one is found.
///
/// For irreducible inputs the intertwiner space has dimension 0 or 1 and the
/// answer is exact. Otherwise combinations with coefficients `0..=min(n, p−1)`
/// are tried; that grid always hits an invertible member when one exists and
/// `p > n` (the determinant is a nonzero polynomial of degree `n`), but the
/// search stops after a fixed cap, so larger spaces may be missed.
pub fn are_equivalent(s1: &Solution, s2: &Solution) -> Option<ConjugationWitness> {
    let basis = intertwiners(s1, s2);
    let invertible = |q: &Mat| !q.det().expect("square").is_zero();
    if let Some(q) = basis.iter().find(|q| invertible(q)) {
        return Some(ConjugationWitness { q: q.clone() });
    }
    if basis.len() < 2 {
        return None;
    }
    let ctx = s1.ctx();
    let n = s1.size() as u64;
    let top = match ctx.characteristic() {
        0 => n,
        p => n.min(p - 1),
    };
    let base = top + 1;
    let total = base.checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    for idx in 0..total.min(COMBINATION_CAP as u64) {
        let mut rest = idx;
        let mut q = Mat::zero(ctx, s1.size(), s1.size());
        for b in &basis {
            let c = ctx.from_int((rest % base) as i64);
            rest /= base;
            q = &q + &b.scale(&c);
        }
        if invertible(&q) {
            return Some(ConjugationWitness { q });
        }
    }
    None
}
