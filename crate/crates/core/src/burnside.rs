//! Irreducibility through the algebra generated by `X` and `Y`.
//!
//! A pair is irreducible when every `n×n` matrix is a noncommutative polynomial
//! in `X` and `Y`, i.e. the unital algebra they generate has dimension `n²`.
//! For the singular family the spanning set `{X^i Y^j}` is explicit, and
//! [`elementary_in_monomials`] writes each elementary matrix `e_mn` in it.

use std::collections::{BTreeMap, VecDeque};

use crate::families::{power_row_value, shift_x, singular_y, Solution};
use crate::field::FieldElem;
use crate::matrix::{Mat, SpanBuilder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BurnsideError {
    #[error("pair does not satisfy yx - gamma*xy = 1")]
    NotASolution,
    #[error("pair is not of the form (shift X, Y_beta)")]
    WrongFamily,
    #[error("index ({m}, {n}) outside 1..={l}")]
    RangeError { m: usize, n: usize, l: usize },
}

/// A basis of the unital algebra generated by `X` and `Y`.
#[derive(Clone, Debug)]
pub struct SubalgebraBasis {
    pub n: usize,
    /// Basis matrices, in discovery order.
    pub basis: Vec<Mat>,
    /// The word in `X`, `Y` that produced each basis matrix (`""` is `I`).
    pub words: Vec<String>,
}

impl SubalgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n * self.n
    }
}

/// Span closure of `{I}` under left and right multiplication by `X` and `Y`.
///
/// Words are explored breadth first, `X` before `Y`, right products before left
/// ones, so bases are reproducible. Non-solutions are refused unless
/// `allow_non_solution` is set.
///
/// Over `Q(ζ_l)` the closure is first run on the images modulo a large prime.
/// Words independent there are independent here, so when the image algebra is
/// full its words are evaluated exactly and returned. Otherwise the exact
/// closure runs.
pub fn generated_algebra(s: &Solution, allow_non_solution: bool) -> Result<SubalgebraBasis, BurnsideError> {
    if !allow_non_solution && !s.relation_holds() {
        return Err(BurnsideError::NotASolution);
    }
    let n = s.size();
    if let (Some(x), Some(y)) = (s.x().modular_image(), s.y().modular_image()) {
        let (_, words) = closure(&x, &y);
        if words.len() == n * n {
            let basis = words.iter().map(|w| evaluate_word(s.x(), s.y(), w)).collect();
            return Ok(SubalgebraBasis { n, basis, words });
        }
    }
    let (basis, words) = closure(s.x(), s.y());
    Ok(SubalgebraBasis { n, basis, words })
}

fn evaluate_word(x: &Mat, y: &Mat, word: &str) -> Mat {
    word.chars().fold(Mat::identity(x.ctx(), x.rows()), |acc, c| match c {
        'X' => &acc * x,
        _ => &acc * y,
    })
}

fn closure(x: &Mat, y: &Mat) -> (Vec<Mat>, Vec<String>) {
    let n = x.rows();
    let ctx = x.ctx();
    let gens = [("X", x), ("Y", y)];
    let mut span = SpanBuilder::new(n * n);
    let mut basis = Vec::new();
    let mut words = Vec::new();
    let mut queue = VecDeque::new();

    let id = Mat::identity(ctx, n);
    span.insert(id.vectorize());
    basis.push(id.clone());
    words.push(String::new());
    queue.push_back((id, String::new()));

    while let Some((m, w)) = queue.pop_front() {
        if span.rank() == n * n {
            break;
        }
        for (name, g) in gens {
            let right = (&m * g, format!("{w}{name}"));
            let left = (g * &m, format!("{name}{w}"));
            for (cand, word) in [right, left] {
                if span.insert(cand.vectorize()) {
                    basis.push(cand.clone());
                    words.push(word.clone());
                    queue.push_back((cand, word));
                }
            }
        }
    }
    (basis, words)
}

pub fn is_irreducible(s: &Solution) -> Result<bool, BurnsideError> {
    Ok(generated_algebra(s, false)?.is_full())
}

/// One monomial `coeff · X^i Y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub i: usize,
    pub j: usize,
    pub coeff: FieldElem,
}

/// `e_mn = Σ coeff · X^i Y^j`, indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryCombination {
    pub m: usize,
    pub n: usize,
    /// Sorted by `(i, j)`; zero coefficients are dropped.
    pub terms: Vec<Term>,
    /// The unique nonzero entry of row `m` of `X^{l−m} Y^{l−n}`.
    pub leading: FieldElem,
}

impl ElementaryCombination {
    pub fn evaluate(&self, x: &Mat, y: &Mat) -> Mat {
        let ctx = x.ctx();
        let n = x.rows();
        self.terms.iter().fold(Mat::zero(ctx, n, n), |acc, t| {
            let mono = &x.pow(t.i as u64).expect("square") * &y.pow(t.j as u64).expect("square");
            &acc + &mono.scale(&t.coeff)
        })
    }
}

fn check_family(s: &Solution) -> Result<(), BurnsideError> {
    let ctx = s.ctx();
    let l = ctx.order();
    if s.size() != l || *s.x() != shift_x(ctx) || *s.y() != singular_y(ctx, &s.y()[(0, l - 1)]) {
        return Err(BurnsideError::WrongFamily);
    }
    Ok(())
}

/// All `e_mn` for a `(shift X, Y_β)` pair, by induction on the row `m`.
///
/// `X^{l−m} Y^{l−n}` vanishes below row `m`, and row `m` is row `l` of
/// `Y^{l−n}`, whose only nonzero entry sits in column `n`. Subtracting the
/// already known `e_st` for `s < m` and dividing by that entry leaves `e_mn`.
pub fn elementary_table(s: &Solution) -> Result<Vec<ElementaryCombination>, BurnsideError> {
    check_family(s)?;
    let ctx = s.ctx();
    let l = ctx.order();
    let x_pows: Vec<Mat> = (0..l).map(|k| s.x().pow(k as u64).expect("square")).collect();
    let y_pows: Vec<Mat> = (0..l).map(|k| s.y().pow(k as u64).expect("square")).collect();

    let mut known: BTreeMap<(usize, usize), BTreeMap<(usize, usize), FieldElem>> = BTreeMap::new();
    let mut out = Vec::with_capacity(l * l);
    for m in 1..=l {
        for n in 1..=l {
            let (i, j) = (l - m, l - n);
            let mono = &x_pows[i] * &y_pows[j];
            let leading = mono[(m - 1, n - 1)].clone();
            debug_assert!(!leading.is_zero());
            debug_assert!((0..l).all(|c| c == n - 1 || mono[(m - 1, c)].is_zero()));
            debug_assert!((m..l).all(|r| (0..l).all(|c| mono[(r, c)].is_zero())));

            let mut terms: BTreeMap<(usize, usize), FieldElem> = BTreeMap::new();
            terms.insert((i, j), ctx.one());
            for srow in 1..m {
                for t in 1..=l {
                    let e = &mono[(srow - 1, t - 1)];
                    if e.is_zero() {
                        continue;
                    }
                    for (&key, c) in &known[&(srow, t)] {
                        let entry = terms.entry(key).or_insert_with(|| ctx.zero());
                        *entry = &*entry - &(e * c);
                    }
                }
            }
            let inv = leading.inv().expect("leading entry is a product of partial geometric sums");
            let terms: BTreeMap<(usize, usize), FieldElem> = terms
                .into_iter()
                .map(|(k, c)| (k, &c * &inv))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            known.insert((m, n), terms.clone());
            out.push(ElementaryCombination {
                m,
                n,
                terms: terms
                    .into_iter()
                    .map(|((i, j), coeff)| Term { i, j, coeff })
                    .collect(),
                leading,
            });
        }
    }
    Ok(out)
}

/// `e_mn` as a combination of the monomials `X^i Y^j`, `0 ≤ i, j ≤ l−1`.
pub fn elementary_in_monomials(s: &Solution, m: usize, n: usize) -> Result<ElementaryCombination, BurnsideError> {
    let l = s.ctx().order();
    if m == 0 || n == 0 || m > l || n > l {
        return Err(BurnsideError::RangeError { m, n, l });
    }
    let table = elementary_table(s)?;
    Ok(table.into_iter().find(|c| c.m == m && c.n == n).expect("table is complete"))
}

/// `Π_{j=n+1}^{l} Σ_{i=0}^{l−j} γ^i`, the leading coefficient for column `n`.
pub fn leading_coefficient(ctx: &crate::field::FieldCtx, n: usize) -> FieldElem {
    let l = ctx.order();
    if n == l {
        ctx.one()
    } else {
        power_row_value(ctx, l - n).expect("1 ≤ l − n ≤ l − 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{nonsingular_solution, singular_solution, NonsingularParams, OffDiagonal, SingularParams};
    use crate::field::FieldCtx;

    fn singular(ctx: &FieldCtx, beta: i64) -> Solution {
        singular_solution(ctx, &SingularParams::Beta(ctx.from_int(beta))).unwrap()
    }

    #[test]
    fn intro_pair_is_irreducible() {
        let q2 = FieldCtx::cyclotomic(2).unwrap();
        for beta in [0, 1, -5] {
            let a = generated_algebra(&singular(&q2, beta), false).unwrap();
            assert_eq!(a.dim(), 4);
        }
    }

    #[test]
    fn zero_pair_generates_scalars() {
        let ctx = FieldCtx::prime(3, 2, None).unwrap();
        let z = Mat::zero(&ctx, 2, 2);
        let s = Solution::new(z.clone(), z).unwrap();
        assert_eq!(generated_algebra(&s, false).unwrap_err(), BurnsideError::NotASolution);
        let a = generated_algebra(&s, true).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.words, vec![String::new()]);
    }

    #[test]
    fn nonsingular_l3_full() {
        let ctx = FieldCtx::cyclotomic(3).unwrap();
        let s = nonsingular_solution(
            &ctx,
            &NonsingularParams {
                lambda: ctx.from_int(2),
                off: OffDiagonal::Eta(ctx.from_int(5)),
            },
        )
        .unwrap();
        assert_eq!(generated_algebra(&s, false).unwrap().dim(), 9);
    }

    #[test]
    fn direct_sum_is_reducible() {
        let ctx = FieldCtx::prime(5, 2, None).unwrap();
        let s = singular(&ctx, 1);
        let sum = s.direct_sum(&s);
        assert!(sum.relation_holds());
        assert!(!is_irreducible(&sum).unwrap());
    }

    #[test]
    fn closure_is_idempotent() {
        let ctx = FieldCtx::prime(7, 3, None).unwrap();
        let s = singular(&ctx, 4);
        let a = generated_algebra(&s, false).unwrap();
        let mut span = SpanBuilder::new(9);
        for b in &a.basis {
            span.insert(b.vectorize());
        }
        for b in &a.basis {
            for g in [s.x(), s.y()] {
                assert!(span.contains(&(b * g).vectorize()));
                assert!(span.contains(&(g * b).vectorize()));
            }
        }
    }

    #[test]
    fn elementary_l2_base_case() {
        let q2 = FieldCtx::cyclotomic(2).unwrap();
        let s = singular(&q2, 0);
        let e11 = elementary_in_monomials(&s, 1, 1).unwrap();
        assert_eq!(
            e11.terms,
            vec![Term {
                i: 1,
                j: 1,
                coeff: q2.one()
            }]
        );
        assert_eq!(e11.evaluate(s.x(), s.y()), Mat::from_ints(&q2, &[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn first_row_is_a_single_monomial() {
        for l in 2..=5 {
            let ctx = FieldCtx::cyclotomic(l).unwrap();
            let s = singular(&ctx, 3);
            for n in 1..=l {
                let c = elementary_in_monomials(&s, 1, n).unwrap();
                assert_eq!(c.terms.len(), 1);
                assert_eq!(c.leading, leading_coefficient(&ctx, n));
                assert_eq!(c.terms[0].coeff, c.leading.inv().unwrap());
            }
        }
    }

    #[test]
    fn wrong_family_and_range() {
        let ctx = FieldCtx::prime(7, 3, None).unwrap();
        let s = singular(&ctx, 1);
        assert!(matches!(elementary_in_monomials(&s, 0, 1), Err(BurnsideError::RangeError { .. })));
        assert!(matches!(elementary_in_monomials(&s, 1, 4), Err(BurnsideError::RangeError { .. })));
        let alphas = singular_solution(&ctx, &SingularParams::Alphas(vec![ctx.one(); 3])).unwrap();
        assert_eq!(elementary_in_monomials(&alphas, 1, 1), Err(BurnsideError::WrongFamily));
    }

    #[test]
    fn modular_shortcut_agrees_with_exact_closure() {
        let ctx = FieldCtx::cyclotomic(4).unwrap();
        let s = singular_solution(&ctx, &SingularParams::Alphas(vec![ctx.parse_elem("1/3,2").unwrap(); 4])).unwrap();
        let fast = generated_algebra(&s, false).unwrap();
        let (exact, _) = closure(s.x(), s.y());
        assert_eq!(fast.dim(), exact.len());
        let mut span = SpanBuilder::new(16);
        assert!(fast.basis.iter().all(|b| span.insert(b.vectorize())));
        for (b, w) in fast.basis.iter().zip(&fast.words) {
            assert_eq!(*b, evaluate_word(s.x(), s.y(), w));
        }
        let sum = s.direct_sum(&s);
        assert_eq!(generated_algebra(&sum, false).unwrap().dim(), 16);
    }
}
