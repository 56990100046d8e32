use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symrep::{perm_action, Partition, SkewModule, SkewShape};
use crate::words::RANK;

use super::contract::{weighted_sum, Block, Real};
use super::frame::AuxiliaryFrame;

/// Partitions `nu ⊂ mu_f ⊂ lambda` indexing one term of the sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SumIndex {
    pub nu: Partition,
    pub mu: [Partition; RANK],
    pub lambda: Partition,
}

impl SumIndex {
    pub fn validate(&self, frame: &AuxiliaryFrame) -> Result<()> {
        let (v, f) = (frame.vertices, frame.octagons);
        if self.lambda.size() < self.nu.size() || self.lambda.size() - self.nu.size() != v - f {
            return Err(Error::Domain("lambda / nu must have v - f boxes".into()));
        }
        if !self.lambda.contains(&self.nu) {
            return Err(Error::Domain("lambda does not contain nu".into()));
        }
        for (g, mu) in self.mu.iter().enumerate() {
            if !mu.contains(&self.nu) || !self.lambda.contains(mu) || mu.size() - self.nu.size() != v - frame.edges[g] {
                return Err(Error::Domain(format!("invalid intermediate partition for letter {}", g)));
            }
        }
        Ok(())
    }
}

/// Splitting of the standard tableaux of a skew shape by the sub-shape filled
/// by their first `m` entries.
#[derive(Clone, Debug)]
pub struct Split {
    /// For each tableau: (class, index of the first part, index of the second part).
    pub parts: Vec<(usize, usize, usize)>,
    /// `tab[class][r][s]`: the tableau glued from the two parts.
    pub tab: Vec<Vec<Vec<usize>>>,
    /// Box sets of each class, sorted.
    pub keys: Vec<Vec<u16>>,
}

impl Split {
    pub fn new(module: &SkewModule, m: usize) -> Self {
        let mut class_of: HashMap<Vec<u16>, usize> = HashMap::new();
        let mut firsts: Vec<HashMap<Vec<u16>, usize>> = Vec::new();
        let mut seconds: Vec<HashMap<Vec<u16>, usize>> = Vec::new();
        let mut keys = Vec::new();
        let mut parts = Vec::with_capacity(module.dim());
        for t in &module.tabs {
            let mut key: Vec<u16> = t[..m].to_vec();
            key.sort();
            let c = *class_of.entry(key.clone()).or_insert_with(|| {
                firsts.push(HashMap::new());
                seconds.push(HashMap::new());
                keys.push(key);
                firsts.len() - 1
            });
            let nf = firsts[c].len();
            let r = *firsts[c].entry(t[..m].to_vec()).or_insert(nf);
            let ns = seconds[c].len();
            let s = *seconds[c].entry(t[m..].to_vec()).or_insert(ns);
            parts.push((c, r, s));
        }
        let mut tab: Vec<Vec<Vec<usize>>> =
            (0..keys.len()).map(|c| vec![vec![usize::MAX; seconds[c].len()]; firsts[c].len()]).collect();
        for (i, &(c, r, s)) in parts.iter().enumerate() {
            tab[c][r][s] = i;
        }
        Split { parts, tab, keys }
    }

    pub fn classes(&self) -> usize {
        self.tab.len()
    }

    pub fn sizes(&self, c: usize) -> (usize, usize) {
        (self.tab[c].len(), self.tab[c].first().map_or(0, |x| x.len()))
    }
}

/// Dense row-major square matrix.
#[derive(Clone, Debug)]
pub struct Mat {
    pub d: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(d: usize) -> Self {
        Mat { d, a: vec![0.0; d * d] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let d = rows.len();
        Mat { d, a: rows.iter().flatten().copied().collect() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.d + c]
    }
}

/// The eight junction matrices on one skew module, with the tableau splittings.
pub struct UpsilonContext {
    pub dim: usize,
    pub mats: Vec<Mat>,
    pub splits: Vec<Split>,
}

impl UpsilonContext {
    /// Builds the context from explicit junction matrices (`mats[j][row][col] =
    /// <pi_j w_col, w_row>`).
    pub fn from_matrices(module: &SkewModule, mats: Vec<Mat>, frame: &AuxiliaryFrame) -> Self {
        let splits = (0..RANK).map(|g| Split::new(module, frame.vertices - frame.edges[g])).collect();
        UpsilonContext { dim: module.dim(), mats, splits }
    }

    pub fn new(module: &SkewModule, frame: &AuxiliaryFrame) -> Result<Self> {
        let mats = frame
            .reduced_junctions()
            .iter()
            .map(|p| perm_action(module, p, 0.0).map(|m| Mat::from_rows(&m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_matrices(module, mats, frame))
    }

    /// `sum` over all tableau choices of the eight-fold product, each letter's
    /// tableaux weighted by `weights[f][class]`.
    pub fn weighted_sum(&self, weights: &[Vec<f64>; RANK]) -> f64 {
        let mats: Vec<Block<f64>> = self.mats.iter().map(|m| vec![m.a.clone()]).collect();
        let w: [Vec<Vec<f64>>; RANK] = std::array::from_fn(|g| weights[g].iter().map(|&x| vec![x]).collect());
        weighted_sum(&Real, self.dim, &mats, &self.splits, &w)[0]
    }

    /// Class index of a partition in letter `g`'s splitting, given the skew
    /// diagram the module was built from.
    pub fn class_of(&self, g: usize, boxes: &[u16]) -> Option<usize> {
        let mut key = boxes.to_vec();
        key.sort();
        self.splits[g].keys.iter().position(|k| *k == key)
    }
}

/// Box indices of `mu / nu` inside the diagram of `lambda / nu`.
pub fn sub_boxes(shape: &SkewShape, mu: &Partition) -> Vec<u16> {
    shape
        .boxes()
        .iter()
        .enumerate()
        .filter(|(_, &(r, c))| c < mu.row(r))
        .map(|(i, _)| i as u16)
        .collect()
}

/// `Upsilon_n` for one index, by exact-at-`n` matrix coefficients.
pub fn upsilon(frame: &AuxiliaryFrame, idx: &SumIndex) -> Result<f64> {
    idx.validate(frame)?;
    let shape = SkewShape::new(idx.lambda.clone(), idx.nu.clone())?;
    let module = SkewModule::from_skew(&shape);
    let ctx = UpsilonContext::new(&module, frame)?;
    let weights: [Vec<f64>; RANK] = std::array::from_fn(|g| {
        let key = sub_boxes(&shape, &idx.mu[g]);
        let c = ctx.class_of(g, &key);
        (0..ctx.splits[g].classes()).map(|k| if Some(k) == c { 1.0 } else { 0.0 }).collect()
    });
    Ok(ctx.weighted_sum(&weights))
}

/// The same quantity by direct summation over all sixteen tableaux; only
/// feasible for tiny modules.
pub fn upsilon_direct(frame: &AuxiliaryFrame, idx: &SumIndex) -> Result<f64> {
    idx.validate(frame)?;
    let shape = SkewShape::new(idx.lambda.clone(), idx.nu.clone())?;
    let module = SkewModule::from_skew(&shape);
    let ctx = UpsilonContext::new(&module, frame)?;
    let cls: Vec<usize> = (0..RANK)
        .map(|g| ctx.class_of(g, &sub_boxes(&shape, &idx.mu[g])).ok_or_else(|| Error::Domain("empty class".into())))
        .collect::<Result<_>>()?;
    let tabs: Vec<&Vec<Vec<usize>>> = (0..RANK).map(|g| &ctx.splits[g].tab[cls[g]]).collect();
    let ranges: Vec<(usize, usize)> = tabs.iter().map(|t| (t.len(), t[0].len())).collect();
    let m = &ctx.mats;
    let mut total = 0.0;
    // Per letter: (R+, R-, S, T).
    let counts: Vec<usize> = ranges.iter().flat_map(|&(p, q)| [p, p, q, q]).collect();
    let mut idxs = [0usize; 16];
    loop {
        let t = |g: usize, r: usize, s: usize| tabs[g][idxs[4 * g + r]][idxs[4 * g + s]];
        let (rp, rm, s_, t_) = (0, 1, 2, 3);
        let prod = m[0].get(t(1, rm, s_), t(0, rp, s_))
            * m[1].get(t(0, rp, t_), t(1, rp, s_))
            * m[2].get(t(1, rp, t_), t(0, rm, t_))
            * m[3].get(t(2, rm, s_), t(1, rm, t_))
            * m[4].get(t(3, rm, s_), t(2, rp, s_))
            * m[5].get(t(2, rp, t_), t(3, rp, s_))
            * m[6].get(t(3, rp, t_), t(2, rm, t_))
            * m[7].get(t(0, rm, s_), t(3, rm, t_));
        total += prod;
        let mut k = 0;
        loop {
            if k == 16 {
                return Ok(total);
            }
            idxs[k] += 1;
            if idxs[k] < counts[k] {
                break;
            }
            idxs[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::xi::grow;
    use crate::expect::{build_frame, cyclic_core, index_pairs};
    use crate::symrep::perm_action_seminormal;
    use crate::words::parse_word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn indices(frame: &AuxiliaryFrame, n: usize, max_dim: usize) -> Vec<SumIndex> {
        let mut out = Vec::new();
        for (nu, lambda) in index_pairs(frame, n) {
            let shape = SkewShape::new(lambda.clone(), nu.clone()).unwrap();
            let module = SkewModule::from_skew(&shape);
            if module.dim() > max_dim {
                continue;
            }
            let splits: Vec<Split> = (0..RANK).map(|g| Split::new(&module, frame.vertices - frame.edges[g])).collect();
            let classes: Vec<usize> = splits.iter().map(|s| s.classes()).collect();
            let mut pick = [0usize; RANK];
            'outer: loop {
                let mu: [Partition; RANK] = std::array::from_fn(|g| grow(&nu, &shape, &splits[g].keys[pick[g]]));
                out.push(SumIndex { nu: nu.clone(), mu, lambda: lambda.clone() });
                for g in 0..RANK {
                    pick[g] += 1;
                    if pick[g] < classes[g] {
                        continue 'outer;
                    }
                    pick[g] = 0;
                }
                break;
            }
        }
        out
    }

    #[test]
    fn contraction_matches_direct_sum() {
        for (w, n) in [("a", 4), ("ab", 4), ("aa", 5)] {
            let y = cyclic_core(&parse_word(w).unwrap()).unwrap();
            let fr = build_frame(&y, 3).unwrap();
            let idx = indices(&fr, n, 3);
            assert!(!idx.is_empty());
            for i in &idx {
                let (a, b) = (upsilon(&fr, i).unwrap(), upsilon_direct(&fr, i).unwrap());
                assert!((a - b).abs() < 1e-9, "{}: {:?} {} vs {}", w, i, a, b);
            }
        }
    }

    #[test]
    fn seminormal_basis_gives_the_same_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (w, n) in [("ab", 7), ("[a,b]", 9), ("a", 6)] {
            let y = cyclic_core(&parse_word(w).unwrap()).unwrap();
            let fr = build_frame(&y, 5).unwrap();
            for (nu, lambda) in index_pairs(&fr, n).into_iter().take(12) {
                let shape = SkewShape::new(lambda, nu).unwrap();
                let module = SkewModule::from_skew(&shape);
                let ortho = UpsilonContext::new(&module, &fr).unwrap();
                let mats = fr
                    .reduced_junctions()
                    .iter()
                    .map(|p| Mat::from_rows(&perm_action_seminormal(&module, p, 0.0).unwrap()))
                    .collect();
                let semi = UpsilonContext::from_matrices(&module, mats, &fr);
                let weights: [Vec<f64>; RANK] =
                    std::array::from_fn(|g| (0..ortho.splits[g].classes()).map(|_| rng.gen_range(-1.0..1.0)).collect());
                let (a, b) = (ortho.weighted_sum(&weights), semi.weighted_sum(&weights));
                assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{}: {} vs {}", w, a, b);
            }
        }
    }

    #[test]
    fn trivial_skew_rows_give_one() {
        let y = cyclic_core(&parse_word("ab").unwrap()).unwrap();
        let fr = build_frame(&y, 0).unwrap();
        for i in indices(&fr, 8, 6) {
            if i.lambda.b() == i.nu.b() || i.lambda.conjugate().b() == i.nu.conjugate().b() {
                assert!((upsilon(&fr, &i).unwrap() - 1.0).abs() < 1e-9, "{:?}", i);
            }
        }
    }
}
