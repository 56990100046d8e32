//! Truncated Laurent series in `u = 1/n` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `sum_{k=low}^{order-1} c_k u^k + O(u^order)`.
///
/// `coeffs[i]` is the coefficient of `u^(low+i)`. A series with
/// `order = i64::MAX` is exact (a Laurent polynomial).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    low: i64,
    coeffs: Vec<BigRational>,
    order: i64,
}

pub const EXACT: i64 = i64::MAX;

impl LaurentSeries {
    pub fn new(low: i64, coeffs: Vec<BigRational>, order: i64) -> Self {
        let mut s = LaurentSeries { low, coeffs, order };
        s.normalize();
        s
    }

    pub fn zero(order: i64) -> Self {
        LaurentSeries { low: 0, coeffs: Vec::new(), order }
    }

    pub fn constant(c: BigRational, order: i64) -> Self {
        Self::new(0, vec![c], order)
    }

    pub fn one(order: i64) -> Self {
        Self::constant(BigRational::one(), order)
    }

    /// `c * u^k`, exact.
    pub fn monomial(c: BigRational, k: i64) -> Self {
        Self::new(k, vec![c], EXACT)
    }

    /// Polynomial in `n` given by coefficients of `n^0, n^1, ...`, as an exact series in `u`.
    pub fn from_poly_in_n(p: &[BigRational]) -> Self {
        if p.is_empty() {
            return Self::zero(EXACT);
        }
        let deg = p.len() as i64 - 1;
        let coeffs: Vec<BigRational> = p.iter().rev().cloned().collect();
        Self::new(-deg, coeffs, EXACT)
    }

    fn normalize(&mut self) {
        let mut lead = 0;
        while lead < self.coeffs.len() && self.coeffs[lead].is_zero() {
            lead += 1;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.order != EXACT {
            let keep = (self.order - self.low).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
            }
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order == EXACT
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest power with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.low)
        }
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        if k < self.low {
            return BigRational::zero();
        }
        self.coeffs
            .get((k - self.low) as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero coefficients keyed by power of `u`.
    pub fn terms(&self) -> BTreeMap<i64, BigRational> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.low + i as i64, c.clone()))
            .collect()
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.low, self.coeffs.clone(), order.min(self.order))
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.is_zero() {
            return other.truncate(order);
        }
        if other.is_zero() {
            return self.truncate(order);
        }
        let low = self.low.min(other.low);
        let high = (self.low + self.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
        let high = if order == EXACT { high } else { high.min(order) };
        let coeffs = (low..high.max(low)).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(low, coeffs, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|x| x * c).collect(), self.order)
    }

    /// Multiply by `u^k`.
    pub fn shift(&self, k: i64) -> Self {
        let order = if self.order == EXACT { EXACT } else { self.order + k };
        Self::new(self.low + k, self.coeffs.clone(), order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let add = |o: i64, v: i64| if o == EXACT { EXACT } else { o + v };
        let v1 = self.valuation();
        let v2 = other.valuation();
        let order = match (v1, v2) {
            (Some(v1), Some(v2)) => add(self.order, v2).min(add(other.order, v1)),
            (None, Some(v2)) => add(self.order, v2),
            (Some(v1), None) => add(other.order, v1),
            (None, None) => add(self.order, 0).min(other.order),
        };
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let low = self.low + other.low;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if order != EXACT {
            len = len.min((order - low).max(0) as usize);
        }
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::new(low, coeffs, order)
    }

    /// Multiplicative inverse, keeping `terms` coefficients when `self` is exact.
    pub fn invert_to(&self, terms: usize) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| Error::Domain("cannot invert a zero series".into()))?;
        let rel = if self.order == EXACT { terms as i64 } else { (self.order - v).min(terms as i64) };
        let a0_inv = self.coeffs[0].recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(rel as usize);
        for k in 0..rel as usize {
            if k == 0 {
                out.push(a0_inv.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &a0_inv);
        }
        Ok(Self::new(-v, out, -v + rel))
    }

    /// Inverse truncated at absolute order `order`.
    pub fn invert(&self, order: i64) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| Error::Domain("cannot invert a zero series".into()))?;
        let terms = (order + v).max(0) as usize;
        Ok(self.invert_to(terms)?.truncate(order))
    }

    /// Square root of a series with constant term 1 and no negative powers.
    pub fn sqrt(&self, order: i64) -> Result<Self> {
        if self.low < 0 && !self.is_zero() {
            return Err(Error::Domain("sqrt needs a series without negative powers".into()));
        }
        if self.coeff(0) != BigRational::one() {
            return Err(Error::Domain("sqrt needs constant term 1".into()));
        }
        let order = order.min(self.order);
        let len = order.max(0) as usize;
        let half = q_frac(1, 2);
        let mut r: Vec<BigRational> = vec![BigRational::zero(); len];
        if len > 0 {
            r[0] = BigRational::one();
        }
        for k in 1..len {
            let mut acc = self.coeff(k as i64);
            for j in 1..k {
                acc -= &r[j] * &r[k - j];
            }
            r[k] = acc * &half;
        }
        Ok(Self::new(0, r, order))
    }

    /// Substitute `u = 1/n`, ignoring the truncation tail.
    pub fn eval_at(&self, n: i64) -> BigRational {
        let nn = q(n);
        let mut acc = BigRational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            let p = if k >= 0 {
                num_traits::pow(nn.recip(), k as usize)
            } else {
                num_traits::pow(nn.clone(), (-k) as usize)
            };
            acc += c * p;
        }
        acc
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap_or(f64::NAN) * n.powi(-((self.low + i as i64) as i32)))
            .sum()
    }

    /// Render as `a_{-1}·n + a_0 + a_1/n + ...`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.terms() {
            let mono = match k {
                0 => String::new(),
                -1 => "n".to_string(),
                1 => "/n".to_string(),
                k if k < 0 => format!("n^{}", -k),
                k => format!("/n^{}", k),
            };
            let cs = if c.is_integer() { c.to_integer().to_string() } else { format!("({})", c) };
            parts.push(match k {
                0 => cs,
                k if k < 0 => format!("{}·{}", cs, mono),
                _ => format!("{}{}", cs, mono),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.order == EXACT {
            body
        } else {
            format!("{} + O(n^{})", body, -self.order)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms()
            .into_iter()
            .map(|(k, c)| (k.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::json!({
            "coefficients": map,
            "order": if self.order == EXACT { serde_json::Value::Null } else { self.order.into() },
        })
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `(n)_l = n (n-1) ... (n-l+1) = n^l prod_{j<l} (1 - j u)`, exact.
pub fn pochhammer_series(l: usize) -> LaurentSeries {
    let mut s = LaurentSeries::one(EXACT);
    for j in 0..l as i64 {
        s = s.mul(&LaurentSeries::new(0, vec![q(1), q(-j)], EXACT));
    }
    s.shift(-(l as i64))
}

/// `P(n) / Q(n)` with polynomials given by coefficients of `n^0, n^1, ...`.
pub fn rational_fn_series(p: &[BigRational], qd: &[BigRational], order: i64) -> Result<LaurentSeries> {
    let den = LaurentSeries::from_poly_in_n(qd);
    if den.is_zero() {
        return Err(Error::Domain("denominator polynomial is zero".into()));
    }
    let num = LaurentSeries::from_poly_in_n(p);
    let nv = num.valuation().unwrap_or(0);
    let inv = den.invert(order - nv)?;
    Ok(num.mul(&inv).truncate(order))
}

/// `1/(n + beta) = u / (1 + beta u)` to the given order.
pub fn inv_linear(beta: i64, order: i64) -> LaurentSeries {
    let len = (order - 1).max(0) as usize;
    let mut c = Vec::with_capacity(len);
    let mut p = BigInt::one();
    for _ in 0..len {
        c.push(BigRational::from_integer(p.clone()));
        p *= -beta;
    }
    LaurentSeries::new(1, c, order)
}

/// Maximum of `|s(n) - f(n)|` over `range`, evaluated exactly then converted.
pub fn compare_numeric<F>(s: &LaurentSeries, f: F, range: std::ops::RangeInclusive<i64>) -> f64
where
    F: Fn(i64) -> f64,
{
    range
        .map(|n| (s.eval_at(n).to_f64().unwrap_or(f64::NAN) - f(n)).abs())
        .fold(0.0, f64::max)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

pub fn is_integer_valued(c: &BigRational) -> bool {
    c.is_integer()
}

pub fn abs_f64(c: &BigRational) -> f64 {
    c.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesReport {
    pub rendered: String,
    pub coefficients: BTreeMap<i64, String>,
    pub order: Option<i64>,
}

impl From<&LaurentSeries> for SeriesReport {
    fn from(s: &LaurentSeries) -> Self {
        SeriesReport {
            rendered: s.render(),
            coefficients: s.terms().into_iter().map(|(k, c)| (k, c.to_string())).collect(),
            order: if s.is_exact() { None } else { Some(s.order()) },
        }
    }
}
