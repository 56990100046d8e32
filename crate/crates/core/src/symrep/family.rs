use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::asympt::{q, LaurentSeries, EXACT};
use crate::error::{Error, Result};

use super::module::{Content, Diagram};
use super::partition::Partition;

/// `G(n) = prod (n - r) / denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimPolynomial {
    pub roots: Vec<i64>,
    pub denom: BigUint,
}

impl DimPolynomial {
    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// The polynomial `G(n - s)`.
    pub fn shifted(&self, s: i64) -> DimPolynomial {
        DimPolynomial { roots: self.roots.iter().map(|r| r + s).collect(), denom: self.denom.clone() }
    }

    pub fn eval(&self, n: i64) -> BigRational {
        let num: BigInt = self.roots.iter().map(|r| BigInt::from(n - r)).product();
        BigRational::new(num, BigInt::from(self.denom.clone()))
    }

    /// Coefficients of `n^0, n^1, ...`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut c = vec![q(1)];
        for r in &self.roots {
            let mut next = vec![BigRational::zero(); c.len() + 1];
            for (i, x) in c.iter().enumerate() {
                next[i + 1] += x;
                next[i] -= x * q(*r);
            }
            c = next;
        }
        let d = BigRational::from_integer(BigInt::from(self.denom.clone()));
        c.into_iter().map(|x| x / &d).collect()
    }

    pub fn leading_coefficient(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.denom.clone()))
    }

    /// `G(n)` as an exact series in `u = 1/n`.
    pub fn series(&self) -> LaurentSeries {
        let mut s = LaurentSeries::constant(self.leading_coefficient(), EXACT);
        for r in &self.roots {
            s = s.mul(&LaurentSeries::new(0, vec![q(1), q(-r)], EXACT));
        }
        s.shift(-(self.roots.len() as i64))
    }
}

/// Dimension of `(n - |tail|, tail)` as a polynomial in `n`.
pub fn dim_polynomial(tail: &Partition) -> DimPolynomial {
    let k = tail.size() as i64;
    let m = tail.first_row() as i64;
    let conj = tail.conjugate();
    let removed: Vec<i64> = (1..=m).map(|j| k + j - 1 - conj.row((j - 1) as usize) as i64).collect();
    let roots: Vec<i64> = (0..k + m).filter(|r| !removed.contains(r)).collect();
    let denom: BigUint = tail.hooks().into_iter().map(BigUint::from).product();
    DimPolynomial { roots, denom }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Growth {
    Row,
    Column,
}

/// The skew shape `lambda(n) / nu(n)` where `lambda(n) ⊢ n - outer_deficit` and
/// `nu(n) ⊢ n - inner_deficit` share a long first row (or column) and have the
/// fixed remainders `outer_tail`, `inner_tail`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyShape {
    pub outer_tail: Partition,
    pub inner_tail: Partition,
    pub outer_deficit: i64,
    pub inner_deficit: i64,
    pub growth: Growth,
}

impl FamilyShape {
    pub fn new(
        outer_tail: Partition,
        inner_tail: Partition,
        outer_deficit: i64,
        inner_deficit: i64,
        growth: Growth,
    ) -> Result<Self> {
        if !outer_tail.contains(&inner_tail) {
            return Err(Error::Domain("family tails are not nested".into()));
        }
        let s = FamilyShape { outer_tail, inner_tail, outer_deficit, inner_deficit, growth };
        if s.first_row_boxes() < 0 {
            return Err(Error::Domain("family has a negative number of first-row boxes".into()));
        }
        Ok(s)
    }

    pub fn size(&self) -> i64 {
        self.inner_deficit - self.outer_deficit
    }

    /// Skew boxes in the growing row (or column).
    pub fn first_row_boxes(&self) -> i64 {
        self.size() - (self.outer_tail.size() as i64 - self.inner_tail.size() as i64)
    }

    /// Skew boxes outside the growing row (or column).
    pub fn b(&self) -> usize {
        self.outer_tail.size() - self.inner_tail.size()
    }

    /// Boxes of the skew shape with symbolic contents.
    ///
    /// Tail boxes come first in reading order, then the growing-row boxes.
    pub fn diagram(&self) -> Diagram {
        let mut boxes = Vec::new();
        let mut contents = Vec::new();
        for (i, &r) in self.outer_tail.rows().iter().enumerate() {
            for j in self.inner_tail.row(i)..r {
                let (row, col) = (i as i64 + 1, j as i64);
                boxes.push((row, col));
                contents.push(Content::fixed(col - row));
            }
        }
        let start = -(self.inner_deficit + self.inner_tail.size() as i64);
        for j in 0..self.first_row_boxes() {
            boxes.push((0, 1_000_000 + j));
            contents.push(Content { alpha: 1, beta: start + j });
        }
        match self.growth {
            Growth::Row => Diagram { boxes, contents },
            Growth::Column => Diagram {
                boxes: boxes.into_iter().map(|(r, c)| (c, r)).collect(),
                contents: contents.into_iter().map(|c| Content { alpha: -c.alpha, beta: -c.beta }).collect(),
            },
        }
    }

    /// Concrete partitions at a given `n`, when they are valid.
    pub fn at(&self, n: i64) -> Option<(Partition, Partition)> {
        let of = n - self.outer_deficit - self.outer_tail.size() as i64;
        let inf = n - self.inner_deficit - self.inner_tail.size() as i64;
        if inf < self.outer_tail.first_row() as i64 || inf < 0 {
            return None;
        }
        let o = self.outer_tail.with_first_row(of as usize).ok()?;
        let i = self.inner_tail.with_first_row(inf as usize).ok()?;
        match self.growth {
            Growth::Row => Some((o, i)),
            Growth::Column => Some((o.conjugate(), i.conjugate())),
        }
    }
}
