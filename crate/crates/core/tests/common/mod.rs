//! Independent oracles shared by several integration test files.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Intersection numbers on a smooth complete toric variety, from its rays
/// and maximal cones (sets of ray indices) through the Chow ring relations
/// `Σ_j <m, u_j> D_j = 0`.
pub struct ToricChow {
    pub rays: Vec<Vec<i64>>,
    pub maximal: Vec<BTreeSet<usize>>,
}

fn inverse_integral(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    // Unimodular n×n inverse by fraction-free Gauss–Jordan on i128.
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| (i == j) as i128));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| a[r][c] != 0).expect("unimodular");
        a.swap(c, p);
        for r in 0..n {
            if r != c && a[r][c] != 0 {
                let (x, y) = (a[c][c], a[r][c]);
                for k in 0..2 * n {
                    a[r][k] = a[r][k] * x - a[c][k] * y;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            let d = a[i][i];
            (n..2 * n)
                .map(|k| {
                    assert_eq!(a[i][k] % d, 0);
                    (a[i][k] / d) as i64
                })
                .collect()
        })
        .collect()
}

impl ToricChow {
    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    /// Degree of `Π D_i^{k_i}` with `Σ k_i = dim`.
    pub fn degree(&self, monomial: &BTreeMap<usize, u32>) -> i64 {
        let support: BTreeSet<usize> = monomial.keys().copied().collect();
        let Some(cone) = self.maximal.iter().find(|c| support.is_subset(c)) else {
            return 0;
        };
        let Some((&i, _)) = monomial.iter().find(|(_, &k)| k >= 2) else {
            return 1;
        };
        // Dual basis vector m with <m, u_i> = 1 and <m, u_j> = 0 on the cone.
        let order: Vec<usize> = cone.iter().copied().collect();
        let mt: Vec<Vec<i64>> = order.iter().map(|&j| self.rays[j].clone()).collect();
        let inv = inverse_integral(&mt);
        let pos = order.iter().position(|&j| j == i).unwrap();
        let m: Vec<i64> = (0..self.dim()).map(|r| inv[r][pos]).collect();
        let mut total = 0;
        for (j, u) in self.rays.iter().enumerate() {
            if cone.contains(&j) {
                continue;
            }
            let c: i64 = m.iter().zip(u).map(|(a, b)| a * b).sum();
            if c == 0 {
                continue;
            }
            let mut next = monomial.clone();
            *next.get_mut(&i).unwrap() -= 1;
            *next.entry(j).or_insert(0) += 1;
            total -= c * self.degree(&next);
        }
        total
    }

    /// `#(X_A ∩ X_B)` for faces given by their tight facet sets.
    pub fn intersect(&self, a: &[usize], b: &[usize]) -> i64 {
        if a.len() + b.len() != self.dim() {
            return 0;
        }
        let mut m = BTreeMap::new();
        for &i in a.iter().chain(b) {
            *m.entry(i).or_insert(0) += 1;
        }
        self.degree(&m)
    }
}
