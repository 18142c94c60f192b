//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use phiconv::{PointCloud, ScalarField};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cloud of `n` distinct points in `[0,1]²`. Half of the points sit on
/// a 1/8 lattice so that collinear triples (and hence nontrivial
/// betweenness) occur often.
pub fn random_cloud_2d(rng: &mut ChaCha8Rng, n: usize) -> PointCloud {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = if rng.random_bool(0.5) {
            vec![
                f64::from(rng.random_range(0..=8u32)) / 8.0,
                f64::from(rng.random_range(0..=8u32)) / 8.0,
            ]
        } else {
            vec![rng.random::<f64>(), rng.random::<f64>()]
        };
        if pts.iter().all(|q| (q[0] - p[0]).abs() + (q[1] - p[1]).abs() > 1e-9) {
            pts.push(p);
        }
    }
    PointCloud::new(pts).unwrap()
}

/// Like [`random_cloud_2d`] but without lattice points.
pub fn generic_cloud_2d(rng: &mut ChaCha8Rng, n: usize) -> PointCloud {
    let pts = (0..n)
        .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
        .collect();
    PointCloud::new(pts).unwrap()
}

pub fn field(cloud: &PointCloud, f: impl Fn(&[f64]) -> f64) -> ScalarField {
    ScalarField::new(cloud.points().iter().map(|p| f(p)).collect()).unwrap()
}

/// Random positive semidefinite 2×2 matrix `LLᵀ`.
pub fn random_psd(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
    let l = [
        [rng.random_range(-1.0..1.0), 0.0],
        [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
    ];
    let mut q = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            q[i][j] = (0..2).map(|k| l[i][k] * l[j][k]).sum();
        }
    }
    q
}

pub fn quadratic(cloud: &PointCloud, q: [[f64; 2]; 2], b: [f64; 2]) -> ScalarField {
    field(cloud, |p| {
        let quad: f64 = (0..2).map(|i| (0..2).map(|j| p[i] * q[i][j] * p[j]).sum::<f64>()).sum();
        quad + b[0] * p[0] + b[1] * p[1]
    })
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain: indices of the strict hull vertices (collinear
/// boundary points dropped), sorted ascending.
pub fn monotone_chain_vertices(points: &[Vec<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        points[i][0]
            .partial_cmp(&points[j][0])
            .unwrap()
            .then(points[i][1].partial_cmp(&points[j][1]).unwrap())
    });
    if idx.len() < 3 {
        return {
            let mut v = idx;
            v.sort_unstable();
            v
        };
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let order: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().copied().collect() };
        for &i in &order {
            while hull.len() >= start + 2
                && cross(&points[hull[hull.len() - 2]], &points[hull[hull.len() - 1]], &points[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.sort_unstable();
    hull.dedup();
    hull
}

/// Random nonempty subset of `0..n`.
pub fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let k = rng.random_range(1..=n);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all.sort_unstable();
    all
}
