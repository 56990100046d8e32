use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symrep::{partitions, perm_action, Partition, SkewModule, SkewShape};
use crate::tiled::TiledSurface;
use crate::words::RANK;

use super::frame::AuxiliaryFrame;
use super::xi::grow;
use super::upsilon::{sub_boxes, upsilon, Split, SumIndex};

/// Tableau choices within the classes fixed by the `mu_f`: indices of the
/// first parts `R+`, `R-` and the second parts `S`, `T` for each letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableauChoice {
    pub r_plus: [usize; RANK],
    pub r_minus: [usize; RANK],
    pub s: [usize; RANK],
    pub t: [usize; RANK],
}

/// `(row letter, row first part, row second part, col letter, col first part, col second part)`
/// for each junction factor, with parts coded as `R+ = 0`, `R- = 1`, `S = 2`, `T = 3`.
const FACTORS: [(usize, usize, usize, usize, usize, usize); 8] = [
    (1, 1, 2, 0, 0, 2),
    (0, 0, 3, 1, 0, 2),
    (1, 0, 3, 0, 1, 3),
    (2, 1, 2, 1, 1, 3),
    (3, 1, 2, 2, 0, 2),
    (2, 0, 3, 3, 0, 2),
    (3, 0, 3, 2, 1, 3),
    (0, 1, 2, 3, 1, 3),
];

/// `d(A, B) = |A \ B|`.
pub fn set_distance(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| !b.contains(x)).count()
}

/// Boxes outside the first row of `outer / inner`.
pub fn b_skew(outer: &Partition, inner: &Partition) -> usize {
    outer.b() - inner.b()
}

/// Boxes outside the first column of `outer / inner`.
pub fn b_check_skew(outer: &Partition, inner: &Partition) -> usize {
    outer.conjugate().b() - inner.conjugate().b()
}

/// One summand: a module, its splittings and the sixteen chosen tableaux.
struct Summand {
    module: SkewModule,
    boxes: Vec<(usize, usize)>,
    /// `tab[f][part]` for parts `(R+,S)`, `(R+,T)`, `(R-,S)`, `(R-,T)` keyed by
    /// `(first, second)` codes.
    tabs: [[[usize; 2]; 2]; RANK],
}

impl Summand {
    fn new(frame: &AuxiliaryFrame, idx: &SumIndex, choice: &TableauChoice) -> Result<Self> {
        idx.validate(frame)?;
        let shape = SkewShape::new(idx.lambda.clone(), idx.nu.clone())?;
        let module = SkewModule::from_skew(&shape);
        let mut tabs = [[[0usize; 2]; 2]; RANK];
        for g in 0..RANK {
            let split = Split::new(&module, frame.vertices - frame.edges[g]);
            let mut key = sub_boxes(&shape, &idx.mu[g]);
            key.sort();
            let c = split.keys.iter().position(|k| *k == key).ok_or_else(|| Error::Domain("empty class".into()))?;
            let (p, q) = split.sizes(c);
            let (rp, rm, s, t) = (choice.r_plus[g], choice.r_minus[g], choice.s[g], choice.t[g]);
            if rp >= p || rm >= p || s >= q || t >= q {
                return Err(Error::Domain(format!("tableau choice out of range for letter {}", g)));
            }
            let tab = &split.tab[c];
            tabs[g] = [[tab[rp][s], tab[rp][t]], [tab[rm][s], tab[rm][t]]];
        }
        Ok(Summand { module, boxes: shape.boxes(), tabs })
    }

    fn tableau(&self, g: usize, first: usize, second: usize) -> usize {
        self.tabs[g][first][second - 2]
    }

    /// Entries of a tableau whose boxes satisfy `pick`.
    fn entries(&self, t: usize, pick: impl Fn((usize, usize)) -> bool) -> Vec<usize> {
        self.module.tabs[t].iter().enumerate().filter(|(_, &b)| pick(self.boxes[b as usize])).map(|(e, _)| e).collect()
    }

    /// Per-factor distances `d(pi top(col), top(row))` (or with first columns).
    fn distances(&self, junctions: &[Vec<usize>], left: bool) -> [usize; 8] {
        let pick = |b: (usize, usize)| if left { b.1 == 0 } else { b.0 == 0 };
        std::array::from_fn(|j| {
            let (rg, rf, rs, cg, cf, cs) = FACTORS[j];
            let col = self.entries(self.tableau(cg, cf, cs), pick);
            let row = self.entries(self.tableau(rg, rf, rs), pick);
            let moved: Vec<usize> = col.iter().map(|&x| junctions[j][x]).collect();
            set_distance(&moved, &row)
        })
    }
}

/// `D_top` for one summand.
pub fn d_top(frame: &AuxiliaryFrame, idx: &SumIndex, choice: &TableauChoice) -> Result<usize> {
    Ok(Summand::new(frame, idx, choice)?.distances(&frame.reduced_junctions(), false).iter().sum())
}

/// `D_left` for one summand.
pub fn d_left(frame: &AuxiliaryFrame, idx: &SumIndex, choice: &TableauChoice) -> Result<usize> {
    Ok(Summand::new(frame, idx, choice)?.distances(&frame.reduced_junctions(), true).iter().sum())
}

/// One checked inequality.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub n: usize,
    pub max_defect: Option<i64>,
    pub boundary_reduced: bool,
    pub strongly_boundary_reduced: bool,
    pub b_lambda: usize,
    pub b_mu: [usize; RANK],
    pub d_top: usize,
    pub b_check_lambda: usize,
    pub b_check_mu: [usize; RANK],
    pub d_left: usize,
    pub checks: Vec<BoundCheck>,
}

impl DefectReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().filter(|c| !c.holds).count()
    }
}

fn push(checks: &mut Vec<BoundCheck>, name: &str, holds: bool, detail: String) {
    checks.push(BoundCheck { name: name.to_string(), holds, detail });
}

/// Checks the defect inequalities and the matrix-coefficient decay bounds
/// for one summand.
pub fn defect_bound_check(
    y: &TiledSurface,
    frame: &AuxiliaryFrame,
    idx: &SumIndex,
    choice: &TableauChoice,
) -> Result<DefectReport> {
    let summand = Summand::new(frame, idx, choice)?;
    let junctions = frame.reduced_junctions();
    let flags = y.boundary_flags();
    let max_defect = y.max_defect().ok();
    let k = frame.vertices - frame.octagons;
    let size = idx.lambda.size();
    let n = size + frame.octagons;
    let mut checks = Vec::new();

    let sides = [
        (false, idx.lambda.clone(), idx.nu.clone()),
        (true, idx.lambda.conjugate(), idx.nu.conjugate()),
    ];
    let mut out = [(0usize, [0usize; RANK], 0usize); 2];
    for (i, (left, lam, nu)) in sides.iter().enumerate() {
        let label = if *left { "left" } else { "top" };
        let b_lambda = b_skew(lam, nu);
        let b_mu: [usize; RANK] = std::array::from_fn(|g| {
            let mu = if *left { idx.mu[g].conjugate() } else { idx.mu[g].clone() };
            b_skew(&mu, nu)
        });
        let dist = summand.distances(&junctions, *left);
        let d: usize = dist.iter().sum();
        let excess = b_lambda as i64 - b_mu.iter().sum::<usize>() as i64 - d as i64;
        if b_lambda == 0 {
            push(
                &mut checks,
                &format!("{}: trivial skew row", label),
                d == 0 && b_mu.iter().all(|&x| x == 0),
                format!("D = {}, b_mu = {:?}", d, b_mu),
            );
        } else {
            if let Some(md) = max_defect {
                push(
                    &mut checks,
                    &format!("{}: defect inequality", label),
                    8 * excess <= md,
                    format!("8 (b - sum b_mu - D) = {} vs maxDefect {}", 8 * excess, md),
                );
            }
            if flags.boundary_reduced {
                push(&mut checks, &format!("{}: D lower bound", label), excess <= 0, format!("excess {}", excess));
            }
            if flags.strongly_boundary_reduced {
                push(&mut checks, &format!("{}: strict D lower bound", label), excess <= -1, format!("excess {}", excess));
            }
        }
        let gap = lam.row(0) as i64 + nu.row(0) as i64 - size as i64;
        if gap > (k * k) as i64 {
            let ratio = (k * k) as f64 / gap as f64;
            let mut product = 1.0;
            for (j, &dj) in dist.iter().enumerate() {
                let (rg, rf, rs, cg, cf, cs) = FACTORS[j];
                let m = perm_action(&summand.module, &junctions[j], 0.0)?;
                let x = m[summand.tableau(rg, rf, rs)][summand.tableau(cg, cf, cs)].abs();
                product *= x;
                let bound = ratio.powi(dj as i32);
                push(
                    &mut checks,
                    &format!("{}: coefficient decay, factor {}", label, j + 1),
                    x <= bound * (1.0 + 1e-9) + 1e-12,
                    format!("|coef| = {:.3e} vs {:.3e}", x, bound),
                );
            }
            let bound = ratio.powi(d as i32);
            push(
                &mut checks,
                &format!("{}: product decay", label),
                product <= bound * (1.0 + 1e-9) + 1e-12,
                format!("|product| = {:.3e} vs {:.3e}", product, bound),
            );
        }
        out[i] = (b_lambda, b_mu, d);
    }
    Ok(DefectReport {
        n,
        max_defect,
        boundary_reduced: flags.boundary_reduced,
        strongly_boundary_reduced: flags.strongly_boundary_reduced,
        b_lambda: out[0].0,
        b_mu: out[0].1,
        d_top: out[0].2,
        b_check_lambda: out[1].0,
        b_check_mu: out[1].1,
        d_left: out[1].2,
        checks,
    })
}

/// Checks on the whole index: the coarse bound `|Upsilon| <= ((v-f)!)^8`, and
/// `Upsilon = 1` when all skew boxes lie in one row or one column.
pub fn upsilon_bound_checks(frame: &AuxiliaryFrame, idx: &SumIndex) -> Result<Vec<BoundCheck>> {
    let u = upsilon(frame, idx)?;
    let k = frame.vertices - frame.octagons;
    let fact: f64 = (1..=k).map(|x| x as f64).product();
    let mut checks = Vec::new();
    push(&mut checks, "coarse bound", u.abs() <= fact.powi(8) * (1.0 + 1e-9), format!("|Upsilon| = {:.3e}", u));
    if b_skew(&idx.lambda, &idx.nu) == 0 || b_check_skew(&idx.lambda, &idx.nu) == 0 {
        push(&mut checks, "trivial skew shape", (u - 1.0).abs() < 1e-9, format!("Upsilon = {}", u));
    }
    Ok(checks)
}

/// A random summand near the families that dominate at large `n`.
#[derive(Clone, Debug, Serialize)]
pub struct Trial {
    pub index: SumIndex,
    pub choice: TableauChoice,
}

/// Draws `nu ⊢ n - v` with at most `max_tail` boxes outside its first row (or
/// column), `lambda` by adding `v - f` random boxes, the `mu_f` from random
/// standard fillings, and random tableaux inside the resulting classes.
/// Returns `None` when the skew module exceeds `max_dim`.
pub fn random_trial<R: Rng>(
    frame: &AuxiliaryFrame,
    n: usize,
    max_tail: usize,
    max_dim: usize,
    rng: &mut R,
) -> Result<Option<Trial>> {
    let (v, f) = (frame.vertices, frame.octagons);
    if n < v {
        return Err(Error::Domain(format!("n = {} is smaller than the vertex count {}", n, v)));
    }
    let m = n - v;
    let size = rng.gen_range(0..=max_tail.min(m / 2));
    let tails = partitions(size);
    let tail = tails.choose(rng).expect("partitions are nonempty");
    let mut nu = tail.with_first_row(m - size)?;
    if rng.gen_bool(0.5) {
        nu = nu.conjugate();
    }
    let mut lambda = nu.clone();
    for _ in 0..v - f {
        let next = lambda.add_one();
        lambda = next.choose(rng).expect("a box can always be added").clone();
    }
    let shape = SkewShape::new(lambda.clone(), nu.clone())?;
    let module = SkewModule::from_skew(&shape);
    if module.dim() > max_dim {
        return Ok(None);
    }
    let mut mu: [Partition; RANK] = Default::default();
    let mut choice = TableauChoice { r_plus: [0; RANK], r_minus: [0; RANK], s: [0; RANK], t: [0; RANK] };
    for g in 0..RANK {
        let split = Split::new(&module, v - frame.edges[g]);
        let t = rng.gen_range(0..module.dim());
        let c = split.parts[t].0;
        mu[g] = grow(&nu, &shape, &split.keys[c]);
        let (p, q) = split.sizes(c);
        choice.r_plus[g] = rng.gen_range(0..p);
        choice.r_minus[g] = rng.gen_range(0..p);
        choice.s[g] = rng.gen_range(0..q);
        choice.t[g] = rng.gen_range(0..q);
    }
    Ok(Some(Trial { index: SumIndex { nu, mu, lambda }, choice }))
}
