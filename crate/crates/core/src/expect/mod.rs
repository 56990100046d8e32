//! Expected embedding and fixed-point counts from the representation theory
//! of the symmetric group.

mod contract;
mod defect;
mod frame;
mod series;
mod upsilon;
mod xi;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::core_surface::{core_cyclic, verify_core};
use crate::error::{Error, Result};
use crate::resolve::image_resolution;
use crate::symrep::zeta_exact;
use crate::tiled::TiledSurface;
use crate::words::Word;

pub use defect::{
    b_check_skew, b_skew, d_left, d_top, defect_bound_check, random_trial, set_distance, upsilon_bound_checks, BoundCheck,
    DefectReport, TableauChoice, Trial,
};
pub use contract::{Block, Modular, Real, Scalars};
pub use frame::{build_frame, side_corner, AuxiliaryFrame, Side, SideKey, JUNCTIONS, MINUS, PLUS};
pub use series::{
    e_emb_series, e_emb_series_with_seed, e_fix_series, e_fix_series_of_core, e_fix_subgroup_series, series_gap, xi_families,
    xi_series, FixSeriesReport,
};
pub use upsilon::{upsilon, upsilon_direct, Mat, SumIndex, UpsilonContext};
pub use xi::{index_pairs, xi_exact, xi_term, xi_truncated};

/// Falling factorial `(n)_k`.
pub fn falling(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n as i64 - i as i64))
}

/// The exact prefactor `(n)_v (n)_f / (prod_f (n)_{e_f} zeta_n(2))`.
pub fn emb_prefactor(y: &TiledSurface, n: usize) -> BigRational {
    let v = y.vertex_count();
    let f = y.octagon_count();
    let num = falling(n, v) * falling(n, f);
    let den: BigInt = y.edge_counts().iter().map(|&e| falling(n, e)).product();
    BigRational::new(num, den) / zeta_exact(n, 2)
}

/// `E_n^emb(Y)` at degree `n` (zero when `n` is below the vertex count).
pub fn e_emb_exact(y: &TiledSurface, n: usize) -> Result<f64> {
    e_emb_exact_with_seed(y, n, 0)
}

pub fn e_emb_exact_with_seed(y: &TiledSurface, n: usize, seed: u64) -> Result<f64> {
    if n < y.vertex_count() {
        return Ok(0.0);
    }
    let frame = build_frame(y, seed)?;
    let xi = xi_exact(&frame, n)?;
    Ok(emb_prefactor(y, n).to_f64().unwrap_or(f64::NAN) * xi)
}

/// Core surface of the cyclic subgroup generated by a non-trivial word.
pub fn cyclic_core(w: &Word) -> Result<TiledSurface> {
    if w.is_empty() {
        return Err(Error::Domain("the trivial word generates the trivial subgroup".into()));
    }
    Ok(core_cyclic(w)?.0)
}

/// `E_n[fix_J]` as the sum of `E_n^emb` over the image resolution of the core.
pub fn e_fix_of_core(core: &TiledSurface, n: usize) -> Result<f64> {
    let r = image_resolution(core);
    let mut total = 0.0;
    for el in &r.elements {
        total += e_emb_exact(&el.surface, n)?;
    }
    Ok(total)
}

/// `E_n[fix_gamma]` at degree `n`.
pub fn e_fix_exact(w: &Word, n: usize) -> Result<f64> {
    e_fix_of_core(&cyclic_core(w)?, n)
}

/// `E_n[fix_J]` for a subgroup given by a verified core surface.
pub fn e_fix_subgroup(core: &TiledSurface, n: usize) -> Result<f64> {
    verify_core(core)?;
    e_fix_of_core(core, n)
}

/// A value at a fixed degree with the exact rational part kept separate.
#[derive(Clone, Debug, Serialize)]
pub struct ExactValue {
    pub n: usize,
    pub value: f64,
    pub tolerance: f64,
    pub prefactor: String,
}

pub fn e_emb_report(y: &TiledSurface, n: usize) -> Result<ExactValue> {
    let value = e_emb_exact(y, n)?;
    let prefactor = if n < y.vertex_count() { BigRational::zero() } else { emb_prefactor(y, n) };
    Ok(ExactValue { n, value, tolerance: 1e-9 * value.abs().max(1.0), prefactor: prefactor.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_e_emb, brute_e_fix};
    use crate::tiled::{octagon_disc, point, single_edge};
    use crate::words::parse_word;

    fn close(a: f64, b: &BigRational) {
        let b = b.to_f64().unwrap();
        assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn point_embeds_n_times() {
        for n in 1..8 {
            assert!((e_emb_exact(&point(), n).unwrap() - n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn embeddings_match_oracle() {
        let mut ys = vec![point(), single_edge(0), single_edge(2), octagon_disc()];
        for w in ["a", "aa", "ab", "[a,b]", "abc"] {
            ys.push(cyclic_core(&parse_word(w).unwrap()).unwrap());
        }
        for y in &ys {
            for n in 2..=4 {
                close(e_emb_exact(y, n).unwrap(), &brute_e_emb(y, n).unwrap());
            }
        }
    }

    #[test]
    fn fixed_points_match_oracle() {
        for w in ["a", "aa", "ab", "[a,b]"] {
            let w = parse_word(w).unwrap();
            for n in 2..=4 {
                close(e_fix_exact(&w, n).unwrap(), &brute_e_fix(&w, n).unwrap());
            }
        }
    }
}
