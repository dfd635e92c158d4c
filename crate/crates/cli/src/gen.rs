//! Seeded random instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Arithmetic, CellSpec, CostSpec, Instance, Num, PartitionSpec, RectSpec, SpaceSpec};

fn weights(rng: &mut impl Rng, n: usize) -> Vec<Num> {
    let mut raw: Vec<i64> = (0..n).map(|_| if rng.random_ratio(1, 5) { 0 } else { rng.random_range(1..=9) }).collect();
    if raw.iter().all(|&w| w == 0) {
        raw[0] = 1;
    }
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| Num(reduced(w, total))).collect()
}

fn reduced(p: i64, q: i64) -> String {
    let (mut a, mut b) = (p.abs(), q.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    let g = a.max(1);
    format!("{}/{}", p / g, q / g)
}

/// Distinct integer positions in `0..4n`, and the metric `|s − t|` they induce.
fn line_space(rng: &mut impl Rng, n: usize) -> SpaceSpec {
    let coords: Vec<i64> = sample(rng, 4 * n, n).into_iter().map(|c| c as i64).collect();
    let metric = coords.iter().map(|a| coords.iter().map(|b| Num((a - b).abs().to_string())).collect()).collect();
    SpaceSpec {
        points: None,
        weights: weights(rng, n),
        metric: Some(metric),
        coords: Some(coords.iter().map(|c| Num(c.to_string())).collect()),
    }
}

fn subset(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

/// A rational `rows × cols` instance with metrics, a cost matrix, three
/// rectangles and a partition of `x`. Identical seeds give identical output.
pub fn generate(seed: u64, rows: usize, cols: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = line_space(&mut rng, rows);
    let y = line_space(&mut rng, cols);
    let cost = (0..rows)
        .map(|_| (0..cols).map(|_| Num(reduced(rng.random_range(-6..=12), rng.random_range(1..=3)))).collect())
        .collect();
    let rectangles = (0..3).map(|_| RectSpec { a: subset(&mut rng, rows), b: subset(&mut rng, cols) }).collect();

    let cell_count = rows.div_ceil(2);
    let labels: Vec<usize> = (0..rows).map(|_| rng.random_range(0..cell_count)).collect();
    let mut cells: Vec<CellSpec> = Vec::new();
    for label in 0..cell_count {
        let members: Vec<usize> = (0..rows).filter(|&i| labels[i] == label).collect();
        if let Some(&first) = members.first() {
            cells.push(CellSpec { members, representative: Some(first) });
        }
    }

    Instance {
        arithmetic: Arithmetic::Rational,
        x,
        y,
        cost: Some(CostSpec::Matrix { rows: cost }),
        rectangles: Some(rectangles),
        partition: Some(PartitionSpec { cells, null_cell: None }),
        map: None,
        coarse_coupling: None,
    }
}
