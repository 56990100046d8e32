use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::adjacent_factors;

use super::partition::SkewShape;

/// Content `alpha * n + beta` of a box; `alpha = 0` for fixed diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Content {
    pub alpha: i64,
    pub beta: i64,
}

impl Content {
    pub fn fixed(c: i64) -> Self {
        Content { alpha: 0, beta: c }
    }

    pub fn at(&self, n: f64) -> f64 {
        self.alpha as f64 * n + self.beta as f64
    }
}

/// A finite set of boxes with standardness given by left and upper neighbours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    pub boxes: Vec<(i64, i64)>,
    pub contents: Vec<Content>,
}

impl Diagram {
    pub fn from_skew(shape: &SkewShape) -> Self {
        let boxes: Vec<(i64, i64)> = shape.boxes().into_iter().map(|(r, c)| (r as i64, c as i64)).collect();
        let contents = boxes.iter().map(|&(r, c)| Content::fixed(c - r)).collect();
        Diagram { boxes, contents }
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let pos: HashMap<(i64, i64), usize> = self.boxes.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        self.boxes
            .iter()
            .map(|&(r, c)| {
                [(r, c - 1), (r - 1, c)]
                    .iter()
                    .filter_map(|b| pos.get(b).copied())
                    .collect()
            })
            .collect()
    }

    /// Standard fillings as `entry -> box` vectors, in lexicographic order.
    pub fn fillings(&self) -> Vec<Vec<u16>> {
        let preds = self.predecessors();
        let k = self.len();
        let mut out = Vec::new();
        let mut filled = vec![false; k];
        let mut cur: Vec<u16> = Vec::with_capacity(k);
        fn rec(
            preds: &[Vec<usize>],
            filled: &mut Vec<bool>,
            cur: &mut Vec<u16>,
            out: &mut Vec<Vec<u16>>,
        ) {
            if cur.len() == filled.len() {
                out.push(cur.clone());
                return;
            }
            for b in 0..filled.len() {
                if !filled[b] && preds[b].iter().all(|&p| filled[p]) {
                    filled[b] = true;
                    cur.push(b as u16);
                    rec(preds, filled, cur, out);
                    cur.pop();
                    filled[b] = false;
                }
            }
        }
        rec(&preds, &mut filled, &mut cur, &mut out);
        out
    }
}

/// A standard skew tableau: `cells[i]` holds the box of entry `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub cells: Vec<(usize, usize)>,
}

impl Tableau {
    /// Entries (1-based) lying in the first row.
    pub fn top(&self) -> Vec<usize> {
        self.cells.iter().enumerate().filter(|(_, c)| c.0 == 0).map(|(i, _)| i + 1).collect()
    }

    /// Entries (1-based) lying in the first column.
    pub fn left(&self) -> Vec<usize> {
        self.cells.iter().enumerate().filter(|(_, c)| c.1 == 0).map(|(i, _)| i + 1).collect()
    }
}

pub fn skew_tableaux(shape: &SkewShape) -> Vec<Tableau> {
    let d = Diagram::from_skew(shape);
    d.fillings()
        .into_iter()
        .map(|f| Tableau {
            cells: f.iter().map(|&b| (d.boxes[b as usize].0 as usize, d.boxes[b as usize].1 as usize)).collect(),
        })
        .collect()
}

pub fn skew_dim(shape: &SkewShape) -> usize {
    Diagram::from_skew(shape).fillings().len()
}

/// The skew module of a diagram with the data needed for the Coxeter action.
#[derive(Clone, Debug)]
pub struct SkewModule {
    pub diagram: Diagram,
    pub tabs: Vec<Vec<u16>>,
    pub index: HashMap<Vec<u16>, usize>,
    /// `partner[i][t]`: the tableau with entries `i+1, i+2` swapped, if standard.
    pub partner: Vec<Vec<Option<usize>>>,
    /// `delta[i][t]`: content of entry `i+2` minus content of entry `i+1`.
    pub delta: Vec<Vec<Content>>,
    /// `lower[i][t]`: entry `i+2` sits in a strictly lower row than entry `i+1`.
    pub lower: Vec<Vec<bool>>,
}

impl SkewModule {
    pub fn new(diagram: Diagram) -> Self {
        let tabs = diagram.fillings();
        let index: HashMap<Vec<u16>, usize> = tabs.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let k = diagram.len();
        let mut partner = Vec::new();
        let mut delta = Vec::new();
        let mut lower = Vec::new();
        for i in 0..k.saturating_sub(1) {
            let mut p = Vec::with_capacity(tabs.len());
            let mut d = Vec::with_capacity(tabs.len());
            let mut l = Vec::with_capacity(tabs.len());
            for t in &tabs {
                let mut s = t.clone();
                s.swap(i, i + 1);
                p.push(index.get(&s).copied());
                let c1 = diagram.contents[t[i] as usize];
                let c2 = diagram.contents[t[i + 1] as usize];
                d.push(Content { alpha: c2.alpha - c1.alpha, beta: c2.beta - c1.beta });
                l.push(diagram.boxes[t[i + 1] as usize].0 > diagram.boxes[t[i] as usize].0);
            }
            partner.push(p);
            delta.push(d);
            lower.push(l);
        }
        SkewModule { diagram, tabs, index, partner, delta, lower }
    }

    pub fn from_skew(shape: &SkewShape) -> Self {
        Self::new(Diagram::from_skew(shape))
    }

    pub fn dim(&self) -> usize {
        self.tabs.len()
    }

    pub fn degree(&self) -> usize {
        self.diagram.len()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i + 1 >= self.degree().max(1) {
            return Err(Error::Domain(format!(
                "transposition index {} out of range for {} entries",
                i + 1,
                self.degree()
            )));
        }
        Ok(())
    }

    /// `v <- s_i v` in the orthonormal basis; contents evaluated at `n`.
    pub fn apply_orthonormal(&self, i: usize, v: &[f64], n: f64) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for t in 0..v.len() {
            let a = self.delta[i][t].at(n);
            out[t] += v[t] / a;
            if let Some(s) = self.partner[i][t] {
                out[s] += v[t] * (1.0 - 1.0 / (a * a)).sqrt();
            }
        }
        out
    }

    /// `v <- s_i v` in the seminormal basis.
    pub fn apply_seminormal(&self, i: usize, v: &[f64], n: f64) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for t in 0..v.len() {
            let a = self.delta[i][t].at(n);
            out[t] += v[t] / a;
            if let Some(s) = self.partner[i][t] {
                let c = if self.lower[i][t] { 1.0 - 1.0 / (a * a) } else { 1.0 };
                out[s] += v[t] * c;
            }
        }
        out
    }

    /// Dense matrix of `s_i`; entry `[row][col] = <s_i w_col, w_row>`.
    pub fn yor_matrix(&self, i: usize, n: f64) -> Result<Vec<Vec<f64>>> {
        self.check_index(i)?;
        let d = self.dim();
        let mut m = vec![vec![0.0; d]; d];
        for col in 0..d {
            let mut e = vec![0.0; d];
            e[col] = 1.0;
            let c = self.apply_orthonormal(i, &e, n);
            for row in 0..d {
                m[row][col] = c[row];
            }
        }
        Ok(m)
    }

    fn action(&self, perm: &[usize], n: f64, seminormal: bool) -> Result<Vec<Vec<f64>>> {
        if perm.len() != self.degree() {
            return Err(Error::Domain("permutation size does not match the skew module".into()));
        }
        let word = adjacent_factors(perm);
        let d = self.dim();
        let mut m = vec![vec![0.0; d]; d];
        for col in 0..d {
            let mut v = vec![0.0; d];
            v[col] = 1.0;
            for &j in &word {
                v = if seminormal { self.apply_seminormal(j, &v, n) } else { self.apply_orthonormal(j, &v, n) };
            }
            for row in 0..d {
                m[row][col] = v[row];
            }
        }
        Ok(m)
    }
}

/// Matrix of the adjacent transposition `(i+1, i+2)` in Young's orthogonal form.
pub fn yor_matrix(shape: &SkewShape, i: usize) -> Result<Vec<Vec<f64>>> {
    SkewModule::from_skew(shape).yor_matrix(i, 0.0)
}

/// Matrix of a permutation of the entries (`perm[x] = image of x`, 0-based).
pub fn perm_action(module: &SkewModule, perm: &[usize], n: f64) -> Result<Vec<Vec<f64>>> {
    module.action(perm, n, false)
}

/// The same action in the seminormal basis.
pub fn perm_action_seminormal(module: &SkewModule, perm: &[usize], n: f64) -> Result<Vec<Vec<f64>>> {
    module.action(perm, n, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_perms, compose};
    use crate::symrep::Partition;

    fn shape(o: &[usize], i: &[usize]) -> SkewShape {
        SkewShape::new(Partition::new(o.to_vec()).unwrap(), Partition::new(i.to_vec()).unwrap()).unwrap()
    }

    fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    #[test]
    fn tableau_counts() {
        assert_eq!(skew_dim(&shape(&[2, 1], &[2, 1])), 1);
        assert_eq!(skew_dim(&shape(&[2, 1], &[1])), 2);
        assert_eq!(skew_dim(&shape(&[7], &[3])), 1);
        assert_eq!(skew_dim(&shape(&[4, 3, 1], &[])), 70);
    }

    #[test]
    fn degenerate_generators() {
        let m = yor_matrix(&shape(&[2], &[]), 0).unwrap();
        assert_eq!(m, vec![vec![1.0]]);
        let m = yor_matrix(&shape(&[1, 1], &[]), 0).unwrap();
        assert_eq!(m, vec![vec![-1.0]]);
    }

    #[test]
    fn two_one_swap_of_two_and_three() {
        let m = yor_matrix(&shape(&[2, 1], &[]), 1).unwrap();
        let r = 3f64.sqrt() / 2.0;
        let entries: Vec<f64> = m.iter().flatten().map(|x| x.abs()).collect();
        assert!((entries[0] - 0.5).abs() < 1e-12 && (entries[3] - 0.5).abs() < 1e-12);
        assert!((entries[1] - r).abs() < 1e-12 && (entries[2] - r).abs() < 1e-12);
    }

    #[test]
    fn action_is_a_homomorphism() {
        let m = SkewModule::from_skew(&shape(&[3, 2, 1], &[1]));
        let ps = all_perms(5);
        for (k, p) in ps.iter().enumerate().step_by(7) {
            let q = &ps[(k * 13 + 5) % ps.len()];
            let lhs = perm_action(&m, &compose(p, q), 0.0).unwrap();
            let rhs = matmul(&perm_action(&m, p, 0.0).unwrap(), &perm_action(&m, q, 0.0).unwrap());
            for (a, b) in lhs.iter().flatten().zip(rhs.iter().flatten()) {
                assert!((a - b).abs() < 1e-10);
            }
            let s1 = perm_action_seminormal(&m, &compose(p, q), 0.0).unwrap();
            let s2 = matmul(
                &perm_action_seminormal(&m, p, 0.0).unwrap(),
                &perm_action_seminormal(&m, q, 0.0).unwrap(),
            );
            for (a, b) in s1.iter().flatten().zip(s2.iter().flatten()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn orthogonality() {
        let m = SkewModule::from_skew(&shape(&[4, 2, 1], &[2]));
        let p = vec![3, 0, 4, 1, 2];
        let a = perm_action(&m, &p, 0.0).unwrap();
        let d = a.len();
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| a[k][i] * a[k][j]).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
            }
        }
    }
}
