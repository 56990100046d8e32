//! The eight-fold matrix-coefficient contraction, generic over the scalars.
//!
//! Matrices are stored as truncated power series in one variable: a
//! `Block` holds one row-major layer per power. Plain numbers use one layer.

use crate::modular::{add_mod, mul_mod};
use crate::words::RANK;

use super::upsilon::Split;

/// Layers of a row-major matrix, `block[k]` the coefficient of the `k`-th power.
pub type Block<S> = Vec<Vec<S>>;

pub trait Scalars: Sync {
    type S: Copy + Send + Sync + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::S;
    fn add(&self, a: Self::S, b: Self::S) -> Self::S;
    fn mul(&self, a: Self::S, b: Self::S) -> Self::S;
    /// `out += a b` for row-major blocks of the given sizes.
    fn gemm_acc(&self, a: &[Self::S], b: &[Self::S], out: &mut [Self::S], rows: usize, inner: usize, cols: usize);
}

/// Double-precision reals.
pub struct Real;

impl Scalars for Real {
    type S = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn add(&self, a: f64, b: f64) -> f64 {
        a + b
    }

    fn mul(&self, a: f64, b: f64) -> f64 {
        a * b
    }

    fn gemm_acc(&self, a: &[f64], b: &[f64], out: &mut [f64], rows: usize, inner: usize, cols: usize) {
        for i in 0..rows {
            let o = &mut out[i * cols..(i + 1) * cols];
            for k in 0..inner {
                let x = a[i * inner + k];
                if x == 0.0 {
                    continue;
                }
                for (y, z) in o.iter_mut().zip(&b[k * cols..(k + 1) * cols]) {
                    *y += x * z;
                }
            }
        }
    }
}

/// Integers modulo a prime below `2^62`.
pub struct Modular {
    pub p: u64,
}

impl Scalars for Modular {
    type S = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    fn gemm_acc(&self, a: &[u64], b: &[u64], out: &mut [u64], rows: usize, inner: usize, cols: usize) {
        let p = self.p as u128;
        let mut acc = vec![0u128; cols];
        for i in 0..rows {
            for (s, &o) in acc.iter_mut().zip(&out[i * cols..(i + 1) * cols]) {
                *s = o as u128;
            }
            let mut pending = 0;
            for k in 0..inner {
                let x = a[i * inner + k];
                if x == 0 {
                    continue;
                }
                for (s, &z) in acc.iter_mut().zip(&b[k * cols..(k + 1) * cols]) {
                    *s += x as u128 * z as u128;
                }
                pending += 1;
                if pending == 15 {
                    acc.iter_mut().for_each(|s| *s %= p);
                    pending = 0;
                }
            }
            for (o, s) in out[i * cols..(i + 1) * cols].iter_mut().zip(&acc) {
                *o = (s % p) as u64;
            }
        }
    }
}

fn zeros<F: Scalars>(f: &F, layers: usize, len: usize) -> Block<F::S> {
    vec![vec![f.zero(); len]; layers]
}

/// Truncated product of two series of matrices.
pub fn matmul<F: Scalars>(f: &F, a: &Block<F::S>, b: &Block<F::S>, rows: usize, inner: usize, cols: usize) -> Block<F::S> {
    let l = a.len();
    let mut out = zeros(f, l, rows * cols);
    for i in 0..l {
        for j in 0..l - i {
            f.gemm_acc(&a[i], &b[j], &mut out[i + j], rows, inner, cols);
        }
    }
    out
}

/// Truncated product of two scalar series.
pub fn series_mul<F: Scalars>(f: &F, a: &[F::S], b: &[F::S]) -> Vec<F::S> {
    let l = a.len();
    let mut out = vec![f.zero(); l];
    for i in 0..l {
        for j in 0..l - i {
            out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
        }
    }
    out
}

/// Multiplies entry `e` of `m` by the series `w(e)`.
fn scale_entries<'a, F: Scalars + 'a>(f: &F, m: &mut Block<F::S>, w: impl Fn(usize) -> &'a [F::S]) {
    let l = m.len();
    if l == 1 {
        for (e, x) in m[0].iter_mut().enumerate() {
            *x = f.mul(*x, w(e)[0]);
        }
        return;
    }
    for e in 0..m[0].len() {
        let s: Vec<F::S> = (0..l).map(|k| m[k][e]).collect();
        let r = series_mul(f, &s, w(e));
        for k in 0..l {
            m[k][e] = r[k];
        }
    }
}

fn gather<S: Copy>(src: &Block<S>, pos: &[usize]) -> Block<S> {
    src.iter().map(|layer| pos.iter().map(|&i| layer[i]).collect()).collect()
}

/// Contracts the three matrix coefficients joining letters `f` (first) and
/// `g` (second) across their shared junctions:
///
/// `X[(f: R-, S)][(g: R-, T)] = sum M1[(g: R-, S)][(f: R+, S)] M2[(f: R+, T)][(g: R+, S)] M3[(g: R+, T)][(f: R-, T)]`.
pub fn contract_pair<F: Scalars>(
    f: &F,
    m1: &Block<F::S>,
    m2: &Block<F::S>,
    m3: &Block<F::S>,
    d: usize,
    sf: &Split,
    sg: &Split,
) -> Block<F::S> {
    let l = m1.len();
    let mut x = zeros(f, l, d * d);
    for cf in 0..sf.classes() {
        let (pf, qf) = sf.sizes(cf);
        for cg in 0..sg.classes() {
            let (pg, qg) = sg.sizes(cg);
            let tf = &sf.tab[cf];
            let tg = &sg.tab[cg];
            // A[(gRm, fS)][(fRp, gS)] = M1[(gRm, gS)][(fRp, fS)]
            let mut pa = Vec::with_capacity(pg * qf * pf * qg);
            for grm in 0..pg {
                for fs in 0..qf {
                    for frp in 0..pf {
                        for gs in 0..qg {
                            pa.push(tg[grm][gs] * d + tf[frp][fs]);
                        }
                    }
                }
            }
            // B[(fRp, gS)][(fT, gRp)] = M2[(fRp, fT)][(gRp, gS)]
            let mut pb = Vec::with_capacity(pf * qg * qf * pg);
            for frp in 0..pf {
                for gs in 0..qg {
                    for ft in 0..qf {
                        for grp in 0..pg {
                            pb.push(tf[frp][ft] * d + tg[grp][gs]);
                        }
                    }
                }
            }
            // C[(fT, gRp)][(fRm, gT)] = M3[(gRp, gT)][(fRm, fT)]
            let mut pc = Vec::with_capacity(qf * pg * pf * qg);
            for ft in 0..qf {
                for grp in 0..pg {
                    for frm in 0..pf {
                        for gt in 0..qg {
                            pc.push(tg[grp][gt] * d + tf[frm][ft]);
                        }
                    }
                }
            }
            let (a, b, c) = (gather(m1, &pa), gather(m2, &pb), gather(m3, &pc));
            let h = if pg * qf <= pf * qg {
                let g = matmul(f, &a, &b, pg * qf, pf * qg, qf * pg);
                matmul(f, &g, &c, pg * qf, qf * pg, pf * qg)
            } else {
                let g = matmul(f, &b, &c, pf * qg, qf * pg, pf * qg);
                matmul(f, &a, &g, pg * qf, pf * qg, pf * qg)
            };
            for k in 0..l {
                let mut i = 0;
                for grm in 0..pg {
                    for fs in 0..qf {
                        for frm in 0..pf {
                            for gt in 0..qg {
                                x[k][tf[frm][fs] * d + tg[grm][gt]] = h[k][i];
                                i += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    x
}

/// `sum` over all tableau choices of the eight-fold product of the junction
/// matrices `mats`, each letter's tableaux weighted by the series
/// `weights[f][class]`.
pub fn weighted_sum<F: Scalars>(
    f: &F,
    d: usize,
    mats: &[Block<F::S>],
    splits: &[Split],
    weights: &[Vec<Vec<F::S>>; RANK],
) -> Vec<F::S> {
    let l = mats[0].len();
    if d == 0 {
        return vec![f.zero(); l];
    }
    let w = |g: usize, t: usize| -> &[F::S] { &weights[g][splits[g].parts[t].0] };
    let x = contract_pair(f, &mats[0], &mats[1], &mats[2], d, &splits[0], &splits[1]);
    let y = contract_pair(f, &mats[4], &mats[5], &mats[6], d, &splits[2], &splits[3]);
    // P[alpha][gamma] = sum_beta X[alpha][beta] w_b[beta] M4[gamma][beta]
    let mut xw = x;
    scale_entries(f, &mut xw, |e| w(1, e % d));
    let m4t: Block<F::S> = mats[3].iter().map(|m| (0..d * d).map(|i| m[(i % d) * d + i / d]).collect()).collect();
    let mut p = matmul(f, &xw, &m4t, d, d, d);
    scale_entries(f, &mut p, |e| w(2, e % d));
    let qm = matmul(f, &p, &y, d, d, d);
    // total = sum w_a[alpha] Q[alpha][delta] w_d[delta] M8[alpha][delta]
    let mut h = zeros(f, l, d * d);
    for i in 0..l {
        for j in 0..l - i {
            for e in 0..d * d {
                h[i + j][e] = f.add(h[i + j][e], f.mul(qm[i][e], mats[7][j][e]));
            }
        }
    }
    scale_entries(f, &mut h, |e| w(3, e % d));
    let mut total = vec![f.zero(); l];
    for alpha in 0..d {
        let row: Vec<F::S> = (0..l)
            .map(|k| h[k][alpha * d..(alpha + 1) * d].iter().fold(f.zero(), |s, &z| f.add(s, z)))
            .collect();
        let r = series_mul(f, &row, w(0, alpha));
        for k in 0..l {
            total[k] = f.add(total[k], r[k]);
        }
    }
    total
}
