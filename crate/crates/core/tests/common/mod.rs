//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use kantorovich::measure::shortest_path_closure;
use kantorovich::{Matrix, Partition, ProbabilitySpace, Rational, RectangleFamily, Scalar, SubsetMask, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Rational probability vector; with `zeros`, roughly a quarter of the
/// points get weight 0.
pub fn weights(rng: &mut impl Rng, n: usize, zeros: bool) -> Vec<Rational> {
    let mut raw: Vec<i64> =
        (0..n).map(|_| if zeros && rng.random_ratio(1, 4) { 0 } else { rng.random_range(1..=9) }).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[rng.random_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| q(w, total)).collect()
}

/// Entries `k/d` with `k ∈ [-6, 12]` and `d ∈ {1, 2, 3}`.
pub fn cost(rng: &mut impl Rng, m: usize, n: usize) -> Matrix<Rational> {
    Matrix::from_fn(m, n, |_, _| q(rng.random_range(-6..=12), rng.random_range(1..=3)))
}

/// Shortest-path closure of random positive integer edge lengths.
pub fn metric(rng: &mut impl Rng, n: usize) -> Matrix<Rational> {
    let raw = Matrix::from_fn(n, n, |i, j| if i == j { q(0, 1) } else { q(rng.random_range(1..=10), 1) });
    shortest_path_closure(&raw).expect("nonnegative generator")
}

pub fn metric_space(rng: &mut impl Rng, n: usize, zeros: bool) -> ProbabilitySpace<Rational> {
    let w = weights(rng, n, zeros);
    let d = metric(rng, n);
    ProbabilitySpace::from_weights(w, Tolerance::EXACT)
        .and_then(|s| s.with_metric(d, Tolerance::EXACT))
        .expect("generated space is valid")
}

pub fn subset(rng: &mut impl Rng, n: usize) -> SubsetMask {
    SubsetMask::from_bits((0..n).map(|_| rng.random_bool(0.5)).collect())
}

pub fn family(rng: &mut impl Rng, m: usize, n: usize, max_rects: usize) -> RectangleFamily {
    let k = rng.random_range(0..=max_rects);
    let rects = (0..k).map(|_| (subset(rng, m), subset(rng, n))).collect();
    RectangleFamily::new(m, n, rects).expect("sizes match")
}

/// Rectangles whose `A` side avoids the support of `mu` or whose `B` side
/// avoids the support of `nu`, so the union is null under every coupling.
pub fn null_family(rng: &mut impl Rng, mu: &[Rational], nu: &[Rational], max_rects: usize) -> RectangleFamily {
    let null_of = |w: &[Rational]| -> Vec<usize> { (0..w.len()).filter(|&i| w[i] == q(0, 1)).collect() };
    let (zx, zy) = (null_of(mu), null_of(nu));
    let k = rng.random_range(1..=max_rects);
    let mut rects = Vec::new();
    for _ in 0..k {
        let pick = |rng: &mut dyn rand::RngCore, from: &[usize], len: usize| {
            SubsetMask::from_bits((0..len).map(|i| from.contains(&i) && rng.next_u32().is_multiple_of(2)).collect())
        };
        if rng.random_bool(0.5) {
            rects.push((pick(rng, &zx, mu.len()), subset(rng, nu.len())));
        } else {
            rects.push((subset(rng, mu.len()), pick(rng, &zy, nu.len())));
        }
    }
    RectangleFamily::new(mu.len(), nu.len(), rects).expect("sizes match")
}

/// Random labels in `0..max_cells`.
pub fn partition(rng: &mut impl Rng, n: usize, max_cells: usize) -> Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..max_cells)).collect();
    Partition::from_labels(&labels)
}

/// A coupling of `a` and `b` that is neither a product nor a vertex in
/// general: the midpoint of `a × b` and the north-west-corner coupling.
pub fn coupling(a: &[Rational], b: &[Rational]) -> Matrix<Rational> {
    let (m, n) = (a.len(), b.len());
    let mut nw = Matrix::zeros(m, n);
    let (mut ra, mut rb) = (a.to_vec(), b.to_vec());
    let (mut i, mut j) = (0, 0);
    while i < m && j < n {
        let t = ra[i].clone().min(rb[j].clone());
        nw[(i, j)] = t.clone();
        ra[i] -= t.clone();
        rb[j] -= t;
        if ra[i] == q(0, 1) {
            i += 1;
        } else {
            j += 1;
        }
    }
    Matrix::from_fn(m, n, |x, y| (a[x].clone() * b[y].clone() + nw[(x, y)].clone()) / q(2, 1))
}

pub fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}

pub fn matrix_to_f64(c: &Matrix<Rational>) -> Matrix<f64> {
    c.convert(Scalar::to_f64)
}

/// Exhaustive minimum of `μ(A) + ν(B)` over all `2^(m+n)` crosses containing `set`.
pub fn brute_force_cover(set: &[Vec<bool>], mu: &[Rational], nu: &[Rational]) -> Rational {
    let (m, n) = (mu.len(), nu.len());
    let mut best: Option<Rational> = None;
    for bits in 0u32..(1 << (m + n)) {
        let in_a = |x: usize| bits >> x & 1 == 1;
        let in_b = |y: usize| bits >> (m + y) & 1 == 1;
        let covered = (0..m).all(|x| in_a(x) || (0..n).all(|y| !set[x][y] || in_b(y)));
        if covered {
            let value: Rational = (0..m).filter(|&x| in_a(x)).map(|x| mu[x].clone()).sum::<Rational>()
                + (0..n).filter(|&y| in_b(y)).map(|y| nu[y].clone()).sum::<Rational>();
            best = Some(best.map_or(value.clone(), |b: Rational| b.min(value)));
        }
    }
    best.expect("the full cross always covers")
}

/// Every subset of `0..k` as a bit pattern.
pub fn all_subsets(k: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u32..(1 << k)).map(move |bits| (0..k).map(|i| bits >> i & 1 == 1).collect())
}
