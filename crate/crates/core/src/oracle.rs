//! Brute-force ground truth: all homomorphisms from the surface group to a
//! small symmetric group, their covers, and exact-weight sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{all_perms, centralizer_order_u64, compose, conjugator, cycles, fixed_points, inverse, random_perm, Perm};
use crate::symrep::zeta_exact;
use crate::tiled::{count_morphisms, embeddings, TiledSurface};
use crate::words::{Letter, Word, RANK};

/// Largest degree accepted by exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 5;

/// Images of `a, b, c, d`; the cover has an `f`-edge `i -> g_f(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoint {
    pub gens: [Perm; RANK],
}

impl HomPoint {
    pub fn degree(&self) -> usize {
        self.gens[0].len()
    }

    fn letter_perm(&self, l: Letter) -> Perm {
        let g = &self.gens[l.gen as usize];
        if l.pos {
            g.clone()
        } else {
            inverse(g)
        }
    }

    /// Permutation sending a start sheet to the endpoint of the lift of `w`.
    pub fn word_perm(&self, w: &Word) -> Perm {
        let mut p: Perm = (0..self.degree()).collect();
        for &l in w.letters() {
            p = compose(&self.letter_perm(l), &p);
        }
        p
    }

    pub fn fix(&self, w: &Word) -> usize {
        fixed_points(&self.word_perm(w))
    }

    /// Whether every lift of the relator closes up.
    pub fn satisfies_relation(&self) -> bool {
        let r = Word::new(crate::words::relator());
        self.word_perm(&r).iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// `g_d` solving the relation for given `g_a, g_b, g_c`: the pair
/// `(particular solution, centralizer of g_c^{-1})`, or `None`.
fn solve_last(ga: &[usize], gb: &[usize], gc: &[usize]) -> Option<(Perm, Perm)> {
    // g_d^{-1} g_c^{-1} g_d g_c P = 1 with P = g_b^{-1} g_a^{-1} g_b g_a.
    let p = compose(&inverse(gb), &compose(&inverse(ga), &compose(gb, ga)));
    let a = inverse(gc);
    let b = compose(&inverse(&p), &a);
    conjugator(&a, &b).map(|x| (x, a))
}

fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::Domain(format!("exhaustive enumeration is capped at n = {}", ENUMERATION_CAP)));
    }
    Ok(())
}

/// Map-reduce over all homomorphisms to `S_n`, parallel over `(g_a, g_b)`.
pub fn fold_homs<T, F, R>(n: usize, identity: T, map: F, reduce: R) -> Result<T>
where
    T: Send + Sync + Clone,
    F: Fn(&HomPoint) -> T + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    check_cap(n)?;
    let perms = all_perms(n);
    let pairs: Vec<(usize, usize)> = (0..perms.len()).flat_map(|i| (0..perms.len()).map(move |j| (i, j))).collect();
    let total = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ga, gb) = (&perms[i], &perms[j]);
            let mut acc = identity.clone();
            for gc in &perms {
                let Some((x0, a)) = solve_last(ga, gb, gc) else { continue };
                for c in crate::perm::centralizer(&a) {
                    let gd = compose(&c, &x0);
                    let h = HomPoint { gens: [ga.clone(), gb.clone(), gc.clone(), gd] };
                    acc = reduce(acc, map(&h));
                }
            }
            acc
        })
        .reduce(|| identity.clone(), &reduce);
    Ok(total)
}

/// Every homomorphism to `S_n`.
pub fn enum_homs(n: usize) -> Result<Vec<HomPoint>> {
    fold_homs(
        n,
        Vec::new(),
        |h| vec![h.clone()],
        |mut a, b| {
            a.extend(b);
            a
        },
    )
}

/// `|Hom(Γ, S_n)|`, counted through centralizer orders.
pub fn count_homs(n: usize) -> Result<BigInt> {
    check_cap(n)?;
    let perms = all_perms(n);
    let total: u64 = perms
        .par_iter()
        .map(|ga| {
            let mut s = 0u64;
            for gb in &perms {
                for gc in &perms {
                    if let Some((_, a)) = solve_last(ga, gb, gc) {
                        s += centralizer_order_u64(&a);
                    }
                }
            }
            s
        })
        .sum();
    Ok(BigInt::from(total))
}

/// The degree-`n` cover: `n` vertices, `f`-edges `i -> g_f(i)` and all octagons.
pub fn cover_of(h: &HomPoint) -> Result<TiledSurface> {
    if !h.satisfies_relation() {
        return Err(Error::Domain("the permutations do not satisfy the surface relation".into()));
    }
    let n = h.degree();
    let mut y = TiledSurface::new(n);
    for (g, p) in h.gens.iter().enumerate() {
        for (i, &j) in p.iter().enumerate() {
            y.add_edge(g, i, j)?;
        }
    }
    for v in 0..n {
        y.add_octagon(v)?;
    }
    Ok(y)
}

pub fn all_covers(n: usize) -> Result<Vec<TiledSurface>> {
    enum_homs(n)?.iter().map(cover_of).collect()
}

fn average(sum: BigInt, n: usize) -> Result<BigRational> {
    Ok(BigRational::new(sum, count_homs(n)?))
}

/// Exact `E_n[fix_w]`.
pub fn brute_e_fix(w: &Word, n: usize) -> Result<BigRational> {
    let sum = fold_homs(n, 0u64, |h| h.fix(w) as u64, |a, b| a + b)?;
    average(BigInt::from(sum), n)
}

/// Exact expected number of embeddings of `y` into the random cover.
pub fn brute_e_emb(y: &TiledSurface, n: usize) -> Result<BigRational> {
    let sum = fold_homs(
        n,
        0u64,
        |h| embeddings(y, &cover_of(h).expect("homomorphisms give covers")).len() as u64,
        |a, b| a + b,
    )?;
    average(BigInt::from(sum), n)
}

/// Exact expected number of morphisms of `y` into the random cover.
pub fn brute_e_hom(y: &TiledSurface, n: usize) -> Result<BigRational> {
    let sum = fold_homs(
        n,
        0u64,
        |h| count_morphisms(y, &cover_of(h).expect("homomorphisms give covers")) as u64,
        |a, b| a + b,
    )?;
    average(BigInt::from(sum), n)
}

/// A uniform element of the centralizer of `a`.
fn random_centralizer_element<R: Rng>(a: &[usize], rng: &mut R) -> Perm {
    let mut by_len: std::collections::BTreeMap<usize, Vec<Vec<usize>>> = Default::default();
    for c in cycles(a) {
        by_len.entry(c.len()).or_default().push(c);
    }
    let mut y = vec![0; a.len()];
    for (len, group) in by_len {
        let arr = random_perm(group.len(), rng);
        for (i, c) in group.iter().enumerate() {
            let target = &group[arr[i]];
            let rot = rng.gen_range(0..len);
            for k in 0..len {
                y[c[k]] = target[(k + rot) % len];
            }
        }
    }
    y
}

/// Estimate of `E_n[fix_w]` with its standard error.
///
/// Triples `(g_a, g_b, g_c)` are drawn uniformly and weighted by the exact
/// number of `g_d` completing them; `g_d` is then drawn uniformly.
pub fn sample_estimate(w: &Word, n: usize, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::Domain("at least two samples are needed".into()));
    }
    const CHUNK: usize = 1024;
    let chunks = samples.div_ceil(CHUNK);
    let (s1, s2) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let count = CHUNK.min(samples - k * CHUNK);
            let (mut s1, mut s2) = (0.0f64, 0.0f64);
            for _ in 0..count {
                let ga = random_perm(n, &mut rng);
                let gb = random_perm(n, &mut rng);
                let gc = random_perm(n, &mut rng);
                let value = match solve_last(&ga, &gb, &gc) {
                    None => 0.0,
                    Some((x0, a)) => {
                        let weight = centralizer_order_u64(&a) as f64;
                        let gd = compose(&random_centralizer_element(&a, &mut rng), &x0);
                        let h = HomPoint { gens: [ga, gb, gc, gd] };
                        weight * h.fix(w) as f64
                    }
                };
                s1 += value;
                s2 += value * value;
            }
            (s1, s2)
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = (s2 / m - mean * mean).max(0.0) * m / (m - 1.0);
    let zeta = zeta_exact(n, 2).to_f64().unwrap_or(f64::NAN);
    Ok((mean / zeta, (var / m).sqrt() / zeta))
}

pub fn is_zero(x: &BigRational) -> bool {
    x.is_zero()
}
