//! Independent oracles over `F_p` on plain `u64` residues.
//!
//! Nothing here calls into the library's arithmetic; library matrices are only
//! read entry by entry.

#![allow(dead_code)]

use std::collections::HashSet;

use qweyl::{FieldCtx, Mat};

pub type M = Vec<Vec<u64>>;

pub fn from_mat(m: &Mat) -> M {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| e.residue().expect("prime field")).collect())
        .collect()
}

pub fn gamma(ctx: &FieldCtx) -> u64 {
    ctx.gamma().residue().expect("prime field")
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse by Fermat.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    pow_mod(a, p - 2, p)
}

pub fn identity(n: usize) -> M {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

pub fn zero(n: usize) -> M {
    vec![vec![0; n]; n]
}

pub fn mul(a: &M, b: &M, p: u64) -> M {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(0, |acc, t| (acc + a[i][t] * b[t][j]) % p)).collect())
        .collect()
}

pub fn lin(a: &M, ca: u64, b: &M, cb: u64, p: u64) -> M {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x * ca + y * cb) % p).collect())
        .collect()
}

pub fn pow(a: &M, e: u64, p: u64) -> M {
    (0..e).fold(identity(a.len()), |acc, _| mul(&acc, a, p))
}

pub fn scalar_of(a: &M) -> Option<u64> {
    let c = a[0][0];
    let n = a.len();
    (0..n)
        .all(|i| (0..n).all(|j| a[i][j] == if i == j { c } else { 0 }))
        .then_some(c)
}

/// Rank of a list of row vectors.
pub fn rank(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let f = inv(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * f % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let g = rows[i][c];
                for j in 0..width {
                    rows[i][j] = (rows[i][j] + (p - g) * rows[r][j]) % p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn det_nonzero(a: &M, p: u64) -> bool {
    rank(a.clone(), p) == a.len()
}

fn flat(a: &M) -> Vec<u64> {
    a.iter().flatten().copied().collect()
}

/// Dimension of the unital algebra generated by `x` and `y`: grow a set of
/// products until multiplying by `x` or `y` on either side adds nothing.
pub fn algebra_dim(x: &M, y: &M, p: u64) -> usize {
    let mut basis = vec![identity(x.len())];
    let mut frontier = basis.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in [x, y] {
                for cand in [mul(m, g, p), mul(g, m, p)] {
                    let mut rows: Vec<_> = basis.iter().map(flat).collect();
                    let before = rank(rows.clone(), p);
                    rows.push(flat(&cand));
                    if rank(rows, p) > before {
                        basis.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    basis.len()
}

/// `Σ_{i=0}^{k} γ^i`.
pub fn geo(g: u64, k: usize, p: u64) -> u64 {
    (0..=k as u64).fold(0, |acc, i| (acc + pow_mod(g, i, p)) % p)
}

/// `YX − γXY − I`.
pub fn residual(x: &M, y: &M, g: u64, p: u64) -> M {
    let yx = mul(y, x, p);
    let xy = mul(x, y, p);
    let r = lin(&yx, 1, &xy, (p - g) % p, p);
    lin(&r, 1, &identity(x.len()), p - 1, p)
}

/// `β` from `α_1..α_l` by the backward recursion, written out from scratch.
pub fn beta_from_alphas(alphas: &[u64], g: u64, p: u64) -> u64 {
    let l = alphas.len();
    let a = |k: usize| alphas[k - 1];
    let mut pk = vec![0u64; l];
    pk[l - 1] = a(l);
    for k in (1..l - 1).rev() {
        let mut acc = a(k + 1);
        for i in k + 1..l {
            acc = (acc + a(l + k + 1 - i) * pk[i]) % p;
        }
        pk[k] = acc * inv(geo(g, l - 1 - k, p), p) % p;
    }
    let mut beta = a(1);
    for (i, &v) in pk.iter().enumerate().skip(1) {
        beta = (beta + a(l + 1 - i) * v) % p;
    }
    beta
}

/// Dimension of `{Q : Q·x1 = x2·Q, Q·y1 = y2·Q}` from the rank of the linear
/// system in the `n²` entries of `Q`.
pub fn intertwiner_dim(x1: &M, y1: &M, x2: &M, y2: &M, p: u64) -> usize {
    let n = x1.len();
    let mut rows = Vec::new();
    for (a, b) in [(x1, x2), (y1, y2)] {
        for i in 0..n {
            for j in 0..n {
                // (Q a − b Q)_{ij} = Σ_k q_{ik} a_{kj} − Σ_k b_{ik} q_{kj}
                let mut row = vec![0u64; n * n];
                for k in 0..n {
                    row[i * n + k] = (row[i * n + k] + a[k][j]) % p;
                    row[k * n + j] = (row[k * n + j] + p - b[i][k]) % p;
                }
                rows.push(row);
            }
        }
    }
    n * n - rank(rows, p)
}

/// Result of the independent `2×2` census for `l = 2`.
pub struct Census2 {
    pub solutions: usize,
    pub irreducible: usize,
    pub classes: usize,
    /// Classes containing a matrix pair of the canonical families.
    pub classes_with_canonical: usize,
    /// Canonical pairs found in irreducible classes.
    pub canonical_pairs: usize,
}

type Pair = [u64; 8];

fn pair_of(x: &M, y: &M) -> Pair {
    [x[0][0], x[0][1], x[1][0], x[1][1], y[0][0], y[0][1], y[1][0], y[1][1]]
}

fn mats(k: &Pair) -> (M, M) {
    (vec![vec![k[0], k[1]], vec![k[2], k[3]]], vec![vec![k[4], k[5]], vec![k[6], k[7]]])
}

/// Every pair in `M_2(F_p)²`, relation checked directly; orbits under
/// conjugation by the whole of `GL_2(F_p)`.
pub fn census_l2(p: u64) -> Census2 {
    let g = p - 1;
    let mut sols = 0;
    let mut irreducible: Vec<Pair> = Vec::new();
    let total = p.pow(8);
    for idx in 0..total {
        let mut k = [0u64; 8];
        let mut r = idx;
        for d in k.iter_mut().rev() {
            *d = r % p;
            r /= p;
        }
        let (x, y) = mats(&k);
        if residual(&x, &y, g, p).iter().flatten().any(|&v| v != 0) {
            continue;
        }
        sols += 1;
        if mul(&x, &y, p) == mul(&y, &x, p) {
            continue;
        }
        if algebra_dim(&x, &y, p) == 4 {
            irreducible.push(k);
        }
    }

    let mut gl = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = (a * d + p * p - b * c) % p;
                    if det != 0 {
                        let di = inv(det, p);
                        let gm = vec![vec![a, b], vec![c, d]];
                        let gi = vec![vec![d * di % p, (p - b) * di % p], vec![(p - c) * di % p, a * di % p]];
                        gl.push((gm, gi));
                    }
                }
            }
        }
    }

    let mut canonical: HashSet<Pair> = HashSet::new();
    let shift = vec![vec![0, 1], vec![0, 0]];
    for beta in 0..p {
        canonical.insert(pair_of(&shift, &vec![vec![0, beta], vec![1, 0]]));
    }
    let two_inv = inv(2, p);
    // one λ per orbit {λ, −λ}: the smaller residue
    for lambda in (1..p).filter(|&l| l <= p - l) {
        // X = λ·diag(γ, γ²) = diag(−λ, λ); Y diagonal ((1−γ)γ^k λ)⁻¹ = (2γ^k λ)⁻¹
        let x = vec![vec![(p - lambda) % p, 0], vec![0, lambda]];
        let li = inv(lambda, p);
        for eta in 1..p {
            let y = vec![
                vec![(p - two_inv * li % p) % p, 1],
                vec![eta, two_inv * li % p],
            ];
            canonical.insert(pair_of(&x, &y));
        }
    }

    let set: HashSet<Pair> = irreducible.iter().copied().collect();
    let mut seen: HashSet<Pair> = HashSet::new();
    let mut classes = 0;
    let mut with_canonical = 0;
    let mut canonical_pairs = 0;
    for k in &irreducible {
        if seen.contains(k) {
            continue;
        }
        classes += 1;
        let (x, y) = mats(k);
        let mut orbit: HashSet<Pair> = HashSet::new();
        for (gm, gi) in &gl {
            let cx = mul(&mul(gm, &x, p), gi, p);
            let cy = mul(&mul(gm, &y, p), gi, p);
            orbit.insert(pair_of(&cx, &cy));
        }
        assert!(orbit.is_subset(&set), "orbits stay inside the irreducible set");
        let hits = orbit.iter().filter(|o| canonical.contains(*o)).count();
        if hits > 0 {
            with_canonical += 1;
        }
        canonical_pairs += hits;
        seen.extend(orbit);
    }
    Census2 {
        solutions: sols,
        irreducible: irreducible.len(),
        classes,
        classes_with_canonical: with_canonical,
        canonical_pairs,
    }
}
