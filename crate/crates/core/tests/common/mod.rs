//! Reference computations that share no code path with the library beyond the
//! plain data types.

#![allow(dead_code)]

use probvar::{Partition, ProbabilitySpace};

pub fn die6() -> (ProbabilitySpace, Partition, probvar::Event) {
    let space = ProbabilitySpace::uniform(6).unwrap();
    let partition = Partition::from_indices(&space, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
    let a = space.event([1, 3, 5]).unwrap();
    (space, partition, a)
}

pub fn skew() -> (ProbabilitySpace, Partition, probvar::Event) {
    let space = ProbabilitySpace::new(vec![0.5, 0.3, 0.2]).unwrap();
    let partition = Partition::from_indices(&space, &[vec![0], vec![1, 2]]).unwrap();
    let a = space.event([0, 1]).unwrap();
    (space, partition, a)
}

/// Probability of an outcome set given as a membership predicate, summed over
/// raw weights.
pub fn brute_prob(weights: &[f64], member: impl Fn(usize) -> bool) -> f64 {
    (0..weights.len())
        .filter(|&i| member(i))
        .map(|i| weights[i])
        .sum()
}

/// Orthogonal projection of `x` onto span{1_{B_j}} in L²(P), computed by
/// assembling the full Gram matrix `G_ij = E(1_{B_i} 1_{B_j})` and right-hand
/// side `b_i = E(x 1_{B_i})` and solving `G α = b` by Gaussian elimination with
/// partial pivoting. Nothing here assumes the blocks are disjoint.
#[allow(clippy::needless_range_loop)]
pub fn projection_coefficients(weights: &[f64], blocks: &[Vec<usize>], x: &[f64]) -> Vec<f64> {
    let n = weights.len();
    let m = blocks.len();
    let ind: Vec<Vec<f64>> = blocks
        .iter()
        .map(|b| {
            (0..n)
                .map(|i| if b.contains(&i) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut a = vec![vec![0.0; m + 1]; m];
    for i in 0..m {
        for j in 0..m {
            a[i][j] = (0..n).map(|k| weights[k] * ind[i][k] * ind[j][k]).sum();
        }
        a[i][m] = (0..n).map(|k| weights[k] * ind[i][k] * x[k]).sum();
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..m).map(|i| a[i][m] / a[i][i]).collect()
}
