use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::factorial;

/// Weakly decreasing positive row lengths.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut rows: Vec<usize>) -> Result<Self> {
        while rows.last() == Some(&0) {
            rows.pop();
        }
        if rows.windows(2).any(|w| w[0] < w[1]) || rows.contains(&0) {
            return Err(Error::Domain(format!("{:?} is not a partition", rows)));
        }
        Ok(Partition(rows))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn rows(&self) -> &[usize] {
        &self.0
    }

    pub fn row(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn first_row(&self) -> usize {
        self.row(0)
    }

    /// Boxes outside the first row.
    pub fn b(&self) -> usize {
        self.size() - self.first_row()
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.first_row();
        Partition((0..m).map(|j| self.0.iter().filter(|&&r| r > j).count()).collect())
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().enumerate().all(|(i, &r)| r <= self.0[i])
    }

    /// The partition with the first row removed.
    pub fn tail(&self) -> Partition {
        Partition(self.0.iter().skip(1).copied().collect())
    }

    /// Prepend a first row of the given length.
    pub fn with_first_row(&self, first: usize) -> Result<Partition> {
        let mut v = vec![first];
        v.extend_from_slice(&self.0);
        Partition::new(v)
    }

    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &r) in self.0.iter().enumerate() {
            for j in 0..r {
                out.push((r - j - 1) + (conj.0[j] - i - 1) + 1);
            }
        }
        out
    }

    /// Partitions obtained by adding one box.
    pub fn add_one(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            if i == 0 || self.row(i) < self.row(i - 1) {
                let mut v = self.0.clone();
                if i == v.len() {
                    v.push(1);
                } else {
                    v[i] += 1;
                }
                out.push(Partition(v));
            }
        }
        out
    }

    /// Partitions obtained by removing one box.
    pub fn remove_one(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            if self.row(i) > self.row(i + 1) {
                let mut v = self.0.clone();
                v[i] -= 1;
                out.push(Partition::new(v).unwrap());
            }
        }
        out
    }

    /// All `mu` with `self ⊆ mu ⊆ outer` and `|mu| = |self| + k`.
    pub fn between(&self, outer: &Partition, k: usize) -> Vec<Partition> {
        let mut level = vec![self.clone()];
        for _ in 0..k {
            let mut next: Vec<Partition> = level
                .iter()
                .flat_map(|p| p.add_one())
                .filter(|p| outer.contains(p))
                .collect();
            next.sort();
            next.dedup();
            level = next;
        }
        level
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            rec(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Hook-length dimension.
pub fn dim(lambda: &Partition) -> BigUint {
    let h: BigUint = lambda.hooks().into_iter().map(BigUint::from).product();
    factorial(lambda.size()) / h
}

pub fn dim_u128(lambda: &Partition) -> u128 {
    dim(lambda).to_u128().expect("dimension fits in u128")
}

/// Skew shape `outer / inner`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewShape {
    pub outer: Partition,
    pub inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::Domain(format!("{} does not contain {}", outer, inner)));
        }
        Ok(SkewShape { outer, inner })
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Boxes `(row, col)` in reading order.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &r) in self.outer.rows().iter().enumerate() {
            for j in self.inner.row(i)..r {
                out.push((i, j));
            }
        }
        out
    }

    /// Boxes outside the first row.
    pub fn b(&self) -> usize {
        self.size() - (self.outer.first_row() - self.inner.first_row())
    }

    /// Boxes outside the first column.
    pub fn b_check(&self) -> usize {
        let oc = self.outer.len();
        let ic = self.inner.len();
        self.size() - (oc - ic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dims() {
        assert_eq!(dim(&p(&[5])), BigUint::from(1u32));
        assert_eq!(dim(&p(&[2, 1])), BigUint::from(2u32));
        assert_eq!(dim(&p(&[4, 3, 1])), BigUint::from(70u32));
    }

    #[test]
    fn sum_of_squares_is_factorial() {
        for n in 0..=10 {
            let s: BigUint = partitions(n).iter().map(|l| dim(l) * dim(l)).sum();
            assert_eq!(s, factorial(n));
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn dimension_bounds_near_trivial() {
        for n in 2..=12usize {
            for l in partitions(n) {
                let b = l.b();
                if 2 * l.first_row() >= n {
                    let d = dim(&l).to_f64().unwrap();
                    let lower = crate::perm::factorial(n - b).to_f64().unwrap()
                        / (crate::perm::factorial(b).to_f64().unwrap()
                            * crate::perm::factorial(n - 2 * b).to_f64().unwrap());
                    assert!(d >= lower - 1e-9, "{} {}", l, d);
                    assert!(d <= (n as f64).powi(b as i32) + 1e-9);
                }
            }
        }
    }
}
