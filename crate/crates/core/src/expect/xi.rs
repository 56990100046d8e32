use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symrep::{dim, partitions, Partition, SkewModule, SkewShape};
use crate::words::RANK;

use super::frame::AuxiliaryFrame;
use super::upsilon::UpsilonContext;

fn dim_f64(p: &Partition) -> f64 {
    dim(p).to_f64().unwrap_or(f64::INFINITY)
}

/// The partition `nu` enlarged by the given boxes of the skew diagram.
pub(crate) fn grow(nu: &Partition, shape: &SkewShape, boxes: &[u16]) -> Partition {
    let all = shape.boxes();
    let mut rows: Vec<usize> = nu.rows().to_vec();
    for &b in boxes {
        let r = all[b as usize].0;
        if rows.len() <= r {
            rows.resize(r + 1, 0);
        }
        rows[r] += 1;
    }
    Partition::new(rows).expect("tableau prefix is a partition")
}

/// The `(nu, lambda)` term `d_lambda d_nu sum_mu Upsilon / prod d_mu`.
pub fn xi_term(frame: &AuxiliaryFrame, nu: &Partition, lambda: &Partition) -> Result<f64> {
    let shape = SkewShape::new(lambda.clone(), nu.clone())?;
    let module = SkewModule::from_skew(&shape);
    let ctx = UpsilonContext::new(&module, frame)?;
    let weights: [Vec<f64>; RANK] = std::array::from_fn(|g| {
        ctx.splits[g].keys.iter().map(|k| 1.0 / dim_f64(&grow(nu, &shape, k))).collect()
    });
    Ok(dim_f64(lambda) * dim_f64(nu) * ctx.weighted_sum(&weights))
}

/// All pairs `nu ⊂ lambda` with `nu ⊢ n - v`, `lambda ⊢ n - f`, in a fixed order.
pub fn index_pairs(frame: &AuxiliaryFrame, n: usize) -> Vec<(Partition, Partition)> {
    let (v, f) = (frame.vertices, frame.octagons);
    let mut out = Vec::new();
    for nu in partitions(n - v) {
        for lambda in nu.between(&Partition::new(vec![n; n]).unwrap(), v - f) {
            out.push((nu.clone(), lambda));
        }
    }
    out
}

fn sum_terms(frame: &AuxiliaryFrame, pairs: Vec<(Partition, Partition)>) -> Result<f64> {
    let terms: Vec<f64> = pairs
        .par_iter()
        .map(|(nu, lambda)| xi_term(frame, nu, lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.iter().sum())
}

fn check_n(frame: &AuxiliaryFrame, n: usize) -> Result<()> {
    if n < frame.vertices {
        return Err(Error::Domain(format!("n = {} is smaller than the vertex count {}", n, frame.vertices)));
    }
    Ok(())
}

/// The full sum at degree `n`.
pub fn xi_exact(frame: &AuxiliaryFrame, n: usize) -> Result<f64> {
    check_n(frame, n)?;
    sum_terms(frame, index_pairs(frame, n))
}

/// The sum restricted to `nu` with fewer than `b` boxes outside the first row
/// or outside the first column.
pub fn xi_truncated(frame: &AuxiliaryFrame, n: usize, b: usize) -> Result<f64> {
    check_n(frame, n)?;
    let pairs = index_pairs(frame, n)
        .into_iter()
        .filter(|(nu, _)| nu.b() < b || nu.conjugate().b() < b)
        .collect();
    sum_terms(frame, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expect::{build_frame, cyclic_core};
    use crate::words::parse_word;

    #[test]
    fn independent_of_the_frame() {
        for w in ["a", "ab", "[a,b]"] {
            let y = cyclic_core(&parse_word(w).unwrap()).unwrap();
            let n = y.vertex_count() + 3;
            let values: Vec<f64> = (0..3).map(|s| xi_exact(&build_frame(&y, s).unwrap(), n).unwrap()).collect();
            for v in &values {
                assert!((v - values[0]).abs() < 1e-9 * values[0].abs().max(1.0), "{}: {:?}", w, values);
            }
        }
    }

    #[test]
    fn truncation_converges() {
        let y = cyclic_core(&parse_word("a").unwrap()).unwrap();
        let fr = build_frame(&y, 0).unwrap();
        let n = 14;
        let exact = xi_exact(&fr, n).unwrap();
        let errs: Vec<f64> = (1..=3).map(|b| (xi_truncated(&fr, n, b).unwrap() - exact).abs()).collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{:?}", errs);
        let full = xi_truncated(&fr, n, n).unwrap();
        assert!((full - exact).abs() < 1e-9);
    }

    #[test]
    fn approaches_two() {
        let y = cyclic_core(&parse_word("ab").unwrap()).unwrap();
        let fr = build_frame(&y, 0).unwrap();
        let gaps: Vec<f64> = (6..=10).map(|n| (xi_exact(&fr, n).unwrap() - 2.0).abs() * n as f64).collect();
        assert!(gaps.iter().all(|&g| g < 10.0), "{:?}", gaps);
    }
}
