//! Exact coefficient fields carrying a chosen primitive `l`-th root of unity `γ`.
//!
//! Two kinds are supported:
//!
//! * the prime field `F_p` with `l | p - 1`, elements stored as residues in `[0, p)`;
//! * the cyclotomic field `Q(ζ_l) = Q[t]/Φ_l(t)`, elements stored as fully reduced
//!   rational coefficient vectors of length `φ(l)`, with `γ` the class of `t`.
//!
//! Every element carries its context, so mixing elements of different fields is
//! detected. The `try_*` methods report [`FieldError::CtxMismatch`]; the operator
//! impls panic on it, the same way shape mismatches panic in most matrix crates.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest supported prime; products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the supported maximum {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("root order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("no primitive {l}-th root of unity mod {p}: {l} does not divide {p} - 1")]
    NoRootOfUnity { p: u64, l: usize },
    #[error("{hint} is not a primitive {l}-th root of unity mod {p}")]
    HintNotPrimitive { p: u64, l: usize, hint: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    CtxMismatch,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Cyclotomic,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Prime(u64),
    Cyclo(Cyclo),
}

/// `num / den` with integer coefficients in `t`, `den > 0`, and no factor
/// common to `den` and every coefficient. Zero is stored with `den = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Cyclo {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    fn new(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for n in &mut num {
                *n = -std::mem::take(n);
            }
        }
        if num.iter().all(Zero::is_zero) {
            return Cyclo { num, den: BigInt::one() };
        }
        if !den.is_one() {
            let mut g = den.clone();
            for n in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(n);
            }
            if !g.is_one() {
                den /= &g;
                for n in &mut num {
                    *n /= &g;
                }
            }
        }
        Cyclo { num, den }
    }

    fn integer(len: usize, c0: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); len];
        num[0] = c0;
        Cyclo { num, den: BigInt::one() }
    }

    fn from_rationals(c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = c.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        Cyclo::new(num, den)
    }

    fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.num[i].clone(), self.den.clone())
    }

    fn to_rationals(&self) -> Vec<BigRational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }
}

#[derive(Debug)]
struct Inner {
    kind: FieldKind,
    l: usize,
    p: u64,
    /// Φ_l, low degree first, monic. Empty for prime fields.
    modulus: Vec<i64>,
    gamma: Repr,
    /// Lazily chosen prime image, cyclotomic fields only.
    image: OnceLock<Option<FieldCtx>>,
}

/// A coefficient field together with `l` and the chosen primitive root `γ`.
///
/// Cheap to clone; all clones share one immutable allocation.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind
                && self.0.l == other.0.l
                && self.0.p == other.0.p
                && self.0.gamma == other.0.gamma)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.gamma {
            Repr::Prime(g) => write!(f, "F_{}(gamma={}, l={})", self.0.p, g, self.0.l),
            Repr::Cyclo(_) => write!(f, "Q(zeta_{})", self.0.l),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo `p` by the extended Euclidean algorithm.
fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i64) as u64)
}

fn is_primitive_mod(g: u64, l: usize, p: u64) -> bool {
    if pow_mod(g, l as u64, p) != 1 {
        return false;
    }
    (1..l).all(|k| pow_mod(g, k as u64, p) != 1)
}

/// Integer coefficients of the `l`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(l: usize) -> Vec<i64> {
    assert!(l >= 1);
    // t^l - 1 = prod_{d | l} Φ_d
    let mut num = vec![0i64; l + 1];
    num[0] = -1;
    num[l] = 1;
    for d in (1..l).filter(|d| l % d == 0) {
        num = int_exact_div(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn int_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for k in (0..quo.len()).rev() {
        let c = rem[k + dn];
        quo[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

impl FieldCtx {
    /// `F_p` with a verified primitive `l`-th root of unity.
    ///
    /// With no hint, the smallest residue that is a primitive root is used, so the
    /// choice is reproducible.
    pub fn prime(p: u64, l: usize, gamma_hint: Option<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if l < 2 {
            return Err(FieldError::InvalidOrder(l));
        }
        if (p - 1) % l as u64 != 0 {
            return Err(FieldError::NoRootOfUnity { p, l });
        }
        let gamma = match gamma_hint {
            Some(hint) => {
                if hint >= p || !is_primitive_mod(hint, l, p) {
                    return Err(FieldError::HintNotPrimitive { p, l, hint });
                }
                hint
            }
            None => (2..p)
                .find(|&g| is_primitive_mod(g, l, p))
                .expect("l | p - 1 guarantees a primitive root"),
        };
        Ok(FieldCtx(Arc::new(Inner {
            kind: FieldKind::Prime,
            l,
            p,
            modulus: Vec::new(),
            gamma: Repr::Prime(gamma),
            image: OnceLock::new(),
        })))
    }

    /// The smallest prime `p ≡ 1 (mod l)` with its default root.
    pub fn smallest_prime(l: usize) -> Result<Self, FieldError> {
        if l < 2 {
            return Err(FieldError::InvalidOrder(l));
        }
        let p = (1..)
            .map(|k| k * l as u64 + 1)
            .find(|&p| is_prime(p))
            .expect("Dirichlet");
        Self::prime(p, l, None)
    }

    /// `Q[t]/Φ_l(t)` with `γ` the class of `t`.
    pub fn cyclotomic(l: usize) -> Result<Self, FieldError> {
        if l < 2 {
            return Err(FieldError::InvalidOrder(l));
        }
        let modulus = cyclotomic_polynomial(l);
        let deg = modulus.len() - 1;
        let mut t = vec![BigInt::zero(); deg];
        if deg == 1 {
            // Q(ζ_2) = Q, t ≡ -Φ_2(0)
            t[0] = BigInt::from(-modulus[0]);
        } else {
            t[1] = BigInt::one();
        }
        let t = Cyclo { num: t, den: BigInt::one() };
        Ok(FieldCtx(Arc::new(Inner {
            kind: FieldKind::Cyclotomic,
            l,
            p: 0,
            modulus,
            gamma: Repr::Cyclo(t),
            image: OnceLock::new(),
        })))
    }

    /// For `Q(ζ_l)`: the field `F_q`, `q` the largest prime `≤ MAX_PRIME` with
    /// `q ≡ 1 (mod l)`, together with the ring map sending `ζ_l` to its `γ`.
    ///
    /// Ranks never grow under the map, so full rank of an image certifies full
    /// rank of the original. `None` for prime fields.
    pub fn modular_image(&self) -> Option<&FieldCtx> {
        self.0
            .image
            .get_or_init(|| {
                if self.0.kind != FieldKind::Cyclotomic {
                    return None;
                }
                let l = self.0.l as u64;
                let q = (1..)
                    .map(|k| (MAX_PRIME - 1) / l * l + 1 - (k - 1) * l)
                    .find(|&q| is_prime(q))
                    .expect("primes ≡ 1 mod l below 2^31");
                let g = (2..q)
                    .map(|a| pow_mod(a, (q - 1) / l, q))
                    .find(|&g| is_primitive_mod(g, self.0.l, q))
                    .expect("the multiplicative group is cyclic");
                Some(FieldCtx::prime(q, self.0.l, Some(g)).expect("valid by construction"))
            })
            .as_ref()
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    /// Order `l` of `γ`.
    pub fn order(&self) -> usize {
        self.0.l
    }

    /// Characteristic; 0 for cyclotomic fields.
    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Coefficients of Φ_l (cyclotomic only; empty otherwise).
    pub fn modulus(&self) -> &[i64] {
        &self.0.modulus
    }

    /// Dimension over the prime field: `φ(l)` for cyclotomic, 1 for prime.
    pub fn degree(&self) -> usize {
        match self.0.kind {
            FieldKind::Prime => 1,
            FieldKind::Cyclotomic => self.0.modulus.len() - 1,
        }
    }

    fn wrap(&self, repr: Repr) -> FieldElem {
        FieldElem {
            ctx: self.clone(),
            repr,
        }
    }

    pub fn gamma(&self) -> FieldElem {
        self.wrap(self.0.gamma.clone())
    }

    /// `γ^k` for any integer `k`.
    pub fn gamma_pow(&self, k: i64) -> FieldElem {
        let l = self.0.l as i64;
        self.gamma().pow(k.rem_euclid(l) as u64)
    }

    pub fn zero(&self) -> FieldElem {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        match self.0.kind {
            FieldKind::Prime => self.wrap(Repr::Prime(n.rem_euclid(self.0.p as i64) as u64)),
            FieldKind::Cyclotomic => self.wrap(Repr::Cyclo(Cyclo::integer(self.degree(), n.into()))),
        }
    }

    /// Image of a rational number; fails only when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElem, FieldError> {
        match self.0.kind {
            FieldKind::Prime => {
                let p = BigInt::from(self.0.p);
                let n = q.numer().mod_floor(&p).to_u64().unwrap();
                let d = q.denom().mod_floor(&p).to_u64().unwrap();
                let dinv = inv_mod(d, self.0.p).ok_or(FieldError::DivisionByZero)?;
                Ok(self.wrap(Repr::Prime(n * dinv % self.0.p)))
            }
            FieldKind::Cyclotomic => {
                let mut c = Cyclo::integer(self.degree(), q.numer().clone());
                c.den = q.denom().clone();
                Ok(self.wrap(Repr::Cyclo(Cyclo::new(c.num, c.den))))
            }
        }
    }

    /// Prime field residue; taken mod p.
    pub fn from_residue(&self, r: u64) -> FieldElem {
        assert_eq!(self.0.kind, FieldKind::Prime, "residues only exist in prime fields");
        self.wrap(Repr::Prime(r % self.0.p))
    }

    /// Cyclotomic element from polynomial coefficients in `t`, reduced mod Φ_l.
    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> FieldElem {
        assert_eq!(self.0.kind, FieldKind::Cyclotomic, "coefficients need a cyclotomic field");
        let c = Cyclo::from_rationals(&coeffs);
        self.wrap(Repr::Cyclo(Cyclo::new(self.reduce_poly(c.num), c.den)))
    }

    /// All elements of a prime field in residue order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        assert_eq!(self.0.kind, FieldKind::Prime, "only prime fields are enumerable");
        (0..self.0.p).map(move |r| self.from_residue(r))
    }

    /// Parses the textual element form: a decimal integer for prime fields, and
    /// a comma separated list of `num/den` (or plain integer) coefficients for
    /// cyclotomic fields. A single rational is accepted for cyclotomic fields.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, FieldError> {
        let bad = || FieldError::Parse(s.to_string());
        match self.0.kind {
            FieldKind::Prime => {
                let n: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(self.from_int(n))
            }
            FieldKind::Cyclotomic => {
                let parts: Vec<&str> = s.split(',').map(str::trim).collect();
                if parts.len() > self.degree() || parts.is_empty() {
                    return Err(bad());
                }
                let mut coeffs = Vec::with_capacity(self.degree());
                for part in parts {
                    coeffs.push(parse_rational(part).ok_or_else(bad)?);
                }
                coeffs.resize(self.degree(), BigRational::zero());
                Ok(self.wrap(Repr::Cyclo(Cyclo::from_rationals(&coeffs))))
            }
        }
    }

    /// Remainder modulo the monic integer polynomial `Φ_l`.
    fn reduce_poly(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let m = &self.0.modulus;
        let deg = m.len() - 1;
        for k in (deg..c.len()).rev() {
            let lead = std::mem::take(&mut c[k]);
            if lead.is_zero() {
                continue;
            }
            for (j, &mc) in m.iter().enumerate().take(deg) {
                match mc {
                    0 => {}
                    1 => c[k - deg + j] -= &lead,
                    -1 => c[k - deg + j] += &lead,
                    _ => c[k - deg + j] -= &lead * mc,
                }
            }
        }
        c.resize(deg, BigInt::zero());
        c
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// An exact element of a [`FieldCtx`].
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    repr: Repr,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.ctx == other.ctx
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prime elements print as their residue, cyclotomic ones as `n/d,n/d,...`.
impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(r) => write!(f, "{r}"),
            Repr::Cyclo(c) => {
                for i in 0..c.num.len() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    let q = c.coeff(i);
                    write!(f, "{}/{}", q.numer(), q.denom())?;
                }
                Ok(())
            }
        }
    }
}

impl FieldElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 0,
            Repr::Cyclo(c) => c.num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 1,
            Repr::Cyclo(c) => c.den.is_one() && c.num[0].is_one() && c.num[1..].iter().all(Zero::is_zero),
        }
    }

    /// Residue in `[0, p)` for prime field elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Prime(r) => Some(*r),
            Repr::Cyclo(_) => None,
        }
    }

    /// Coefficient vector for cyclotomic elements.
    pub fn coeffs(&self) -> Option<Vec<BigRational>> {
        match &self.repr {
            Repr::Prime(_) => None,
            Repr::Cyclo(c) => Some(c.to_rationals()),
        }
    }

    /// Image under [`FieldCtx::modular_image`]; `None` if a denominator
    /// vanishes modulo the image prime or this is a prime-field element.
    pub fn modular_image(&self) -> Option<FieldElem> {
        let Repr::Cyclo(c) = &self.repr else {
            return None;
        };
        let target = self.ctx.modular_image()?;
        let q = target.characteristic();
        let qb = BigInt::from(q);
        let residue = |n: &BigInt| n.mod_floor(&qb).to_u64().expect("below q");
        let den_inv = target.from_residue(inv_mod(residue(&c.den), q)?);
        let gamma = target.gamma();
        let mut acc = target.zero();
        let mut power = target.one();
        for n in &c.num {
            acc = &acc + &(&target.from_residue(residue(n)) * &power);
            power = &power * &gamma;
        }
        Some(&acc * &den_inv)
    }

    /// The element as a rational number, if it lies in `Q` (cyclotomic only).
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Prime(_) => None,
            Repr::Cyclo(c) => c.num[1..].iter().all(Zero::is_zero).then(|| c.coeff(0)),
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FieldError::CtxMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => Repr::Prime((a + b) % self.ctx.0.p),
            (Repr::Cyclo(a), Repr::Cyclo(b)) => Repr::Cyclo(cyclo_add(a, b, false)),
            _ => unreachable!(),
        };
        Ok(self.ctx.wrap(repr))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.ctx.0.p;
                Repr::Prime((a + p - b) % p)
            }
            (Repr::Cyclo(a), Repr::Cyclo(b)) => Repr::Cyclo(cyclo_add(a, b, true)),
            _ => unreachable!(),
        };
        Ok(self.ctx.wrap(repr))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => Repr::Prime(a * b % self.ctx.0.p),
            (Repr::Cyclo(a), Repr::Cyclo(b)) => {
                let mut prod = vec![BigInt::zero(); a.num.len() + b.num.len() - 1];
                for (i, x) in a.num.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in b.num.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        prod[i + j] += x * y;
                    }
                }
                Repr::Cyclo(Cyclo::new(self.ctx.reduce_poly(prod), &a.den * &b.den))
            }
            _ => unreachable!(),
        };
        Ok(self.ctx.wrap(repr))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Prime(a) => Repr::Prime(inv_mod(*a, self.ctx.0.p).ok_or(FieldError::DivisionByZero)?),
            Repr::Cyclo(a) => {
                let m: Vec<BigRational> = self
                    .ctx
                    .0
                    .modulus
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect();
                let inv = Cyclo::from_rationals(&poly::inverse_mod(&a.to_rationals(), &m));
                Repr::Cyclo(Cyclo::new(self.ctx.reduce_poly(inv.num), inv.den))
            }
        };
        Ok(self.ctx.wrap(repr))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents invert first.
    pub fn pow_signed(&self, exp: i64) -> Result<Self, FieldError> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs()))
        }
    }

    /// Fixed total order on representatives: residue order for prime fields,
    /// lexicographic coefficient order (constant term first) for cyclotomic.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => a.cmp(b),
            (Repr::Cyclo(a), Repr::Cyclo(b)) => a
                .num
                .iter()
                .zip(&b.num)
                .map(|(x, y)| (x * &b.den).cmp(&(y * &a.den)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal),
            (Repr::Prime(_), Repr::Cyclo(_)) => Ordering::Less,
            (Repr::Cyclo(_), Repr::Prime(_)) => Ordering::Greater,
        }
    }
}

fn cyclo_add(a: &Cyclo, b: &Cyclo, subtract: bool) -> Cyclo {
    let combine = |x: BigInt, y: BigInt| if subtract { x - y } else { x + y };
    if a.den == b.den {
        let num = a.num.iter().zip(&b.num).map(|(x, y)| combine(x.clone(), y.clone())).collect();
        return Cyclo::new(num, a.den.clone());
    }
    let num = a
        .num
        .iter()
        .zip(&b.num)
        .map(|(x, y)| combine(x * &b.den, y * &a.den))
        .collect();
    Cyclo::new(num, &a.den * &b.den)
}

/// Polynomial helpers over `Q`, low degree first.
mod poly {
    use num_rational::BigRational;
    use num_traits::Zero;

    fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = b.last().unwrap().clone();
        let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() / &lead;
            for (j, bc) in b.iter().enumerate() {
                r[shift + j] -= &c * bc;
            }
            q[shift] = c;
            r = trim(r);
        }
        (q, r)
    }

    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(q.len() + b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in q.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
        trim(out)
    }

    /// `s` with `s * a ≡ 1 (mod m)`; `a` must be coprime to `m`.
    pub(super) fn inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
        let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::from_integer(1.into())]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub_mul(&s0, &q, &s1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        assert_eq!(r0.len(), 1, "element not invertible modulo Φ_l");
        let c = r0[0].clone();
        s0.into_iter().map(|x| x / &c).collect()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$try(rhs).expect("field context mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$try(&rhs).expect("field context mismatch")
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$try(rhs).expect("field context mismatch")
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$try(&rhs).expect("field context mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.ctx.zero() - self
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// `Σ_{i=0}^{k} γ^i`.
pub fn geometric_sum(ctx: &FieldCtx, k: usize) -> FieldElem {
    let gamma = ctx.gamma();
    let mut term = ctx.one();
    let mut acc = ctx.zero();
    for _ in 0..=k {
        acc = &acc + &term;
        term = &term * &gamma;
    }
    acc
}
