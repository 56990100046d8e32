use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::asympt::{pochhammer_series, LaurentSeries, SeriesReport, EXACT};
use crate::core_surface::verify_core;
use crate::error::{Error, Result};
use crate::modular::{add_mod, crt, from_bigint, from_i64, inv_mod, mul_mod, rational_reconstruct, sub_mod, PRIMES};
use crate::perm::adjacent_factors;
use crate::resolve::growing_resolution;
use crate::symrep::{dim_polynomial, partitions, zeta_inv_poly, Content, FamilyShape, Growth, Partition, SkewModule};
use crate::tiled::TiledSurface;
use crate::words::{max_root, Word, RANK};

use super::contract::{series_mul, weighted_sum, Block, Modular};
use super::frame::{build_frame, AuxiliaryFrame};
use super::upsilon::Split;
use super::cyclic_core;

/// One family of index pairs with the data reused across primes.
struct Prepared {
    module: SkewModule,
    splits: Vec<Split>,
    /// `weights[f][class]`: tail of `mu_f` and the shift `e_f`.
    tails: [Vec<Partition>; RANK],
    /// Smallest tail size per letter.
    wmin: [usize; RANK],
    lambda_tail: Partition,
    nu_tail: Partition,
    /// Number of series terms kept for the inner sum.
    len: usize,
    /// Exponent of `u` of the first kept term.
    low: i64,
}

/// Tail of `mu_f` for the boxes `key` of a row-growth family diagram.
fn class_tail(row_boxes: &[(i64, i64)], nu_tail: &Partition, key: &[u16]) -> Result<Partition> {
    let mut rows = nu_tail.rows().to_vec();
    for &b in key {
        let r = row_boxes[b as usize].0;
        if r >= 1 {
            let i = (r - 1) as usize;
            if rows.len() <= i {
                rows.resize(i + 1, 0);
            }
            rows[i] += 1;
        }
    }
    Partition::new(rows)
}

/// Families `lambda(n) / nu(n)` whose `nu` has fewer than `b` boxes outside
/// the first row, and their transposes.
pub fn xi_families(frame: &AuxiliaryFrame, b: usize) -> Result<Vec<FamilyShape>> {
    let (v, f) = (frame.vertices, frame.octagons);
    let k = v - f;
    let big = Partition::new(vec![k + b; k + b])?;
    let mut out = Vec::new();
    for size in 0..b {
        for tau in partitions(size) {
            for j in 0..=k {
                for sigma in tau.between(&big, j) {
                    for growth in [Growth::Row, Growth::Column] {
                        out.push(FamilyShape::new(sigma.clone(), tau.clone(), f as i64, v as i64, growth)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn prepare(frame: &AuxiliaryFrame, fam: &FamilyShape, order: i64) -> Result<Option<Prepared>> {
    let row_boxes = FamilyShape { growth: Growth::Row, ..fam.clone() }.diagram().boxes;
    let module = SkewModule::new(fam.diagram());
    let splits: Vec<Split> = (0..RANK).map(|g| Split::new(&module, frame.vertices - frame.edges[g])).collect();
    let mut tails: [Vec<Partition>; RANK] = Default::default();
    let mut wmin = [0usize; RANK];
    for g in 0..RANK {
        tails[g] = splits[g].keys.iter().map(|k| class_tail(&row_boxes, &fam.inner_tail, k)).collect::<Result<_>>()?;
        wmin[g] = tails[g].iter().map(|t| t.size()).min().unwrap_or(0);
    }
    let scale = (fam.outer_tail.size() + fam.inner_tail.size()) as i64;
    let len = order + scale - wmin.iter().sum::<usize>() as i64;
    if len <= 0 || module.dim() == 0 {
        return Ok(None);
    }
    Ok(Some(Prepared {
        module,
        splits,
        tails,
        wmin,
        lambda_tail: fam.outer_tail.clone(),
        nu_tail: fam.inner_tail.clone(),
        len: len as usize,
        low: order - len,
    }))
}

/// `u^{-deg} G(n - shift)` as a polynomial in `u`, modulo `p`, where `G` is the
/// dimension polynomial of the tail.
fn dim_poly_mod(tail: &Partition, shift: usize, p: u64) -> Vec<u64> {
    let g = dim_polynomial(tail).shifted(shift as i64);
    let mut c = vec![inv_mod(from_bigint(&BigInt::from(g.denom.clone()), p), p)];
    for r in &g.roots {
        let mut next = vec![0u64; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] = add_mod(next[i], x, p);
            next[i + 1] = sub_mod(next[i + 1], mul_mod(x, from_i64(*r, p), p), p);
        }
        c = next;
    }
    c
}

/// `u^{|tail| - skip} / G(n - shift)` to `len` terms modulo `p`.
fn inv_dim_series(tail: &Partition, shift: usize, skip: usize, len: usize, p: u64) -> Vec<u64> {
    let g = dim_polynomial(tail).shifted(shift as i64);
    let mut s = vec![0u64; len];
    let lead = tail.size() - skip;
    if lead >= len {
        return s;
    }
    s[lead] = from_bigint(&BigInt::from(g.denom.clone()), p);
    for r in &g.roots {
        let r = from_i64(*r, p);
        for i in lead + 1..len {
            s[i] = add_mod(s[i], mul_mod(s[i - 1], r, p), p);
        }
    }
    s
}

/// `1 / (alpha n + beta)` as a series in `u` modulo `p`.
fn inv_content(c: Content, len: usize, p: u64) -> Result<Vec<u64>> {
    let mut s = vec![0u64; len];
    if c.alpha == 0 {
        if c.beta == 0 {
            return Err(Error::Internal("adjacent entries share a content".into()));
        }
        if len > 0 {
            s[0] = inv_mod(from_i64(c.beta, p), p);
        }
        return Ok(s);
    }
    let ia = inv_mod(from_i64(c.alpha, p), p);
    let ratio = sub_mod(0, mul_mod(from_i64(c.beta, p), ia, p), p);
    let mut x = ia;
    for slot in s.iter_mut().skip(1) {
        *slot = x;
        x = mul_mod(x, ratio, p);
    }
    Ok(s)
}

/// Junction matrices in the seminormal basis as series modulo `p`.
fn seminormal_series(module: &SkewModule, words: &[Vec<usize>], len: usize, p: u64) -> Result<Vec<Block<u64>>> {
    let f = Modular { p };
    let d = module.dim();
    let k = module.degree();
    let mut diag = Vec::with_capacity(k.saturating_sub(1));
    let mut off = Vec::with_capacity(k.saturating_sub(1));
    for i in 0..k.saturating_sub(1) {
        let mut di = Vec::with_capacity(d);
        let mut oi = Vec::with_capacity(d);
        for t in 0..d {
            let a = inv_content(module.delta[i][t], len, p)?;
            let o = if module.lower[i][t] {
                let mut sq = series_mul(&f, &a, &a);
                sq.iter_mut().for_each(|x| *x = sub_mod(0, *x, p));
                sq[0] = add_mod(sq[0], 1, p);
                sq
            } else {
                let mut one = vec![0u64; len];
                one[0] = 1;
                one
            };
            di.push(a);
            oi.push(o);
        }
        diag.push(di);
        off.push(oi);
    }
    let mut mats = Vec::with_capacity(words.len());
    for word in words {
        let mut m = vec![vec![0u64; d * d]; len];
        for col in 0..d {
            let mut v = vec![vec![0u64; len]; d];
            v[col][0] = 1;
            for &j in word {
                let mut out = vec![vec![0u64; len]; d];
                for t in 0..d {
                    if v[t].iter().all(|&x| x == 0) {
                        continue;
                    }
                    let a = series_mul(&f, &v[t], &diag[j][t]);
                    for (o, x) in out[t].iter_mut().zip(&a) {
                        *o = add_mod(*o, *x, p);
                    }
                    if let Some(s) = module.partner[j][t] {
                        let b = series_mul(&f, &v[t], &off[j][t]);
                        for (o, x) in out[s].iter_mut().zip(&b) {
                            *o = add_mod(*o, *x, p);
                        }
                    }
                }
                v = out;
            }
            for (row, series) in v.iter().enumerate() {
                for (layer, &x) in series.iter().enumerate() {
                    m[layer][row * d + col] = x;
                }
            }
        }
        mats.push(m);
    }
    Ok(mats)
}

/// The family's contribution modulo `p`, as coefficients of `u^low, ..., u^{order-1}`.
fn family_residues(frame: &AuxiliaryFrame, fam: &Prepared, words: &[Vec<usize>], p: u64) -> Result<Vec<u64>> {
    let len = fam.len;
    let f = Modular { p };
    let mats = seminormal_series(&fam.module, words, len, p)?;
    let weights: [Vec<Vec<u64>>; RANK] = std::array::from_fn(|g| {
        fam.tails[g].iter().map(|t| inv_dim_series(t, frame.edges[g], fam.wmin[g], len, p)).collect()
    });
    let inner = weighted_sum(&f, fam.module.dim(), &mats, &fam.splits, &weights);
    let a = dim_poly_mod(&fam.lambda_tail, frame.octagons, p);
    let b = dim_poly_mod(&fam.nu_tail, frame.vertices, p);
    let mut q = vec![0u64; len];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < len {
                q[i + j] = add_mod(q[i + j], mul_mod(x, y, p), p);
            }
        }
    }
    Ok(series_mul(&f, &q, &inner))
}

/// Coefficients from residues modulo the given primes, if two successive
/// reconstructions agree.
fn reconstruct(residues: &[Vec<u64>], primes: &[u64]) -> Option<Vec<BigRational>> {
    let at = |k: usize, i: usize| -> Option<BigRational> {
        let r: Vec<u64> = residues[..k].iter().map(|v| v[i]).collect();
        let (x, m) = crt(&r, &primes[..k]);
        rational_reconstruct(&x, &m)
    };
    let n = residues.len();
    let terms = residues.first().map_or(0, |v| v.len());
    let mut out = Vec::with_capacity(terms);
    for i in 0..terms {
        let full = at(n, i)?;
        if n < 2 || at(n - 1, i)? != full {
            return None;
        }
        out.push(full);
    }
    Some(out)
}

/// Laurent expansion of the sum at truncation order `order` (error `O(u^order)`).
pub fn xi_series(frame: &AuxiliaryFrame, order: i64) -> Result<LaurentSeries> {
    let k = (frame.vertices - frame.octagons) as i64;
    let b = ((k + order).max(0) as usize).div_ceil(2);
    let fams = xi_families(frame, b)?;
    let prepared: Vec<Prepared> = fams
        .par_iter()
        .map(|fam| prepare(frame, fam, order))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let Some(low) = prepared.iter().map(|p| p.low).min() else {
        return Ok(LaurentSeries::zero(order));
    };
    let words: Vec<Vec<usize>> = frame.reduced_junctions().iter().map(|p| adjacent_factors(p)).collect();
    let terms = (order - low) as usize;
    let mut residues: Vec<Vec<u64>> = Vec::new();
    for (used, &p) in PRIMES.iter().enumerate() {
        let parts: Vec<Vec<u64>> =
            prepared.par_iter().map(|fam| family_residues(frame, fam, &words, p)).collect::<Result<_>>()?;
        let mut total = vec![0u64; terms];
        for (fam, part) in prepared.iter().zip(&parts) {
            let off = (fam.low - low) as usize;
            for (i, &x) in part.iter().enumerate() {
                total[off + i] = add_mod(total[off + i], x, p);
            }
        }
        residues.push(total);
        if used >= 1 {
            if let Some(c) = reconstruct(&residues, &PRIMES[..residues.len()]) {
                return Ok(LaurentSeries::new(low, c, order));
            }
        }
    }
    Err(Error::Internal("rational reconstruction did not stabilise".into()))
}

/// `(n)_v (n)_f / prod_f (n)_{e_f}` as an exact Laurent series, truncated.
fn pochhammer_ratio(y: &TiledSurface, order: i64) -> Result<LaurentSeries> {
    let num = pochhammer_series(y.vertex_count()).mul(&pochhammer_series(y.octagon_count()));
    let den = y.edge_counts().iter().fold(LaurentSeries::one(EXACT), |acc, &e| acc.mul(&pochhammer_series(e)));
    Ok(num.mul(&den.invert(order + (y.vertex_count() + y.octagon_count()) as i64)?).truncate(order))
}

/// Laurent expansion of `E_n^emb(Y)` with error `O(n^{-order})`.
pub fn e_emb_series(y: &TiledSurface, order: i64) -> Result<LaurentSeries> {
    e_emb_series_with_seed(y, order, 0)
}

pub fn e_emb_series_with_seed(y: &TiledSurface, order: i64, seed: u64) -> Result<LaurentSeries> {
    let chi = y.euler_char();
    let inner = order + chi;
    if inner <= 0 {
        return Ok(LaurentSeries::zero(order));
    }
    let frame = build_frame(y, seed)?;
    let xi = xi_series(&frame, inner)?;
    let zeta = zeta_inv_poly(2, inner as usize)?;
    let half = LaurentSeries::constant(BigRational::new(1.into(), 2.into()), EXACT);
    let t = xi.mul(&zeta).mul(&half);
    let Some(vt) = t.valuation() else {
        return Ok(LaurentSeries::zero(order));
    };
    let ratio = pochhammer_ratio(y, order - vt.min(0) + 1)?;
    Ok(ratio.mul(&t).truncate(order))
}

/// Series expansion of a fixed-point expectation with the leading coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct FixSeriesReport {
    pub order: i64,
    pub series: SeriesReport,
    /// Coefficient of `n`.
    pub a_minus_1: String,
    /// Constant coefficient.
    pub a_0: String,
    /// Divisor count of the maximal root exponent, for cyclic subgroups.
    pub expected_a_0: Option<usize>,
    pub exponent: Option<usize>,
    /// Resolution elements that contribute at this order.
    pub elements: usize,
    /// Coefficient of `n^chi` for the largest Euler characteristic present.
    pub chi_max: Option<i64>,
    pub leading: Option<String>,
    #[serde(skip)]
    pub value: LaurentSeries,
}

impl FixSeriesReport {
    fn new(value: LaurentSeries, order: i64, elements: usize, chi_max: Option<i64>) -> Self {
        let leading = chi_max.map(|c| value.coeff(-c).to_string());
        FixSeriesReport {
            order,
            series: SeriesReport::from(&value),
            a_minus_1: value.coeff(-1).to_string(),
            a_0: value.coeff(0).to_string(),
            expected_a_0: None,
            exponent: None,
            elements,
            chi_max,
            leading,
            value,
        }
    }

    pub fn eval_f64(&self, n: f64) -> f64 {
        self.value.eval_f64(n)
    }
}

/// `E_n[fix_J]` to `O(n^{-order})` from the growing resolution of a core
/// surface: elements with Euler characteristic at most `-order` are bounded
/// by `n^{-order}` and are dropped.
pub fn e_fix_series_of_core(core: &TiledSurface, order: i64) -> Result<FixSeriesReport> {
    if order < 1 {
        return Err(Error::Domain("series order must be at least 1".into()));
    }
    let chi0 = 1 - order;
    let r = growing_resolution(core, chi0)?;
    let kept: Vec<&TiledSurface> =
        r.elements.iter().map(|e| &e.surface).filter(|s| s.euler_char() >= chi0).collect();
    let parts: Vec<LaurentSeries> = kept.iter().map(|s| e_emb_series(s, order)).collect::<Result<_>>()?;
    let total = parts.iter().fold(LaurentSeries::zero(order), |a, b| a.add(b));
    let chi_max = kept.iter().map(|s| s.euler_char()).max();
    Ok(FixSeriesReport::new(total, order, kept.len(), chi_max))
}

/// `E_n[fix_gamma]` to `O(n^{-order})`, with the expected constant term.
pub fn e_fix_series(w: &Word, order: i64) -> Result<FixSeriesReport> {
    let core = cyclic_core(w)?;
    let mut rep = e_fix_series_of_core(&core, order)?;
    let root = max_root(w)?;
    rep.expected_a_0 = Some(root.divisor_count);
    rep.exponent = Some(root.exponent);
    Ok(rep)
}

/// The same for a subgroup given by a verified core surface.
pub fn e_fix_subgroup_series(core: &TiledSurface, order: i64) -> Result<FixSeriesReport> {
    verify_core(core)?;
    e_fix_series_of_core(core, order)
}

/// Largest gap between a series and exact values over a range of degrees.
pub fn series_gap(s: &LaurentSeries, exact: &[(usize, f64)]) -> f64 {
    exact
        .iter()
        .map(|&(n, x)| (s.eval_at(n as i64).to_f64().unwrap_or(f64::NAN) - x).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expect::{e_emb_exact, xi_exact};
    use crate::words::parse_word;

    fn core(w: &str) -> TiledSurface {
        cyclic_core(&parse_word(w).unwrap()).unwrap()
    }

    #[test]
    fn loop_series_matches_exact() {
        let y = core("a");
        let fr = build_frame(&y, 0).unwrap();
        let s = xi_series(&fr, 4).unwrap();
        for n in [12usize, 14, 16] {
            let e = xi_exact(&fr, n).unwrap();
            let d = (s.eval_at(n as i64).to_f64().unwrap() - e).abs();
            assert!(d < 200.0 / (n as f64).powi(4), "n {} diff {}", n, d);
        }
        assert!(!num_traits::Zero::is_zero(&s.coeff(0)));
    }

    #[test]
    fn embedding_series_tracks_exact_values() {
        for (w, order) in [("aa", 3), ("ab", 2), ("[a,b]", 1)] {
            let y = core(w);
            let s = e_emb_series(&y, order).unwrap();
            let e = |n: usize| e_emb_exact(&y, n).unwrap();
            let g1 = (s.eval_at(9).to_f64().unwrap() - e(9)).abs();
            let g2 = (s.eval_at(12).to_f64().unwrap() - e(12)).abs();
            assert!(g2 < g1 || g2 < 1e-9, "{}: {} {}", w, g1, g2);
            assert_eq!(s.coeff(0), BigRational::from_integer(1.into()), "{}", w);
        }
    }
}
