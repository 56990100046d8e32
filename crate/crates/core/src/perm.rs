//! Permutations of `0..n` in one-line notation. Composition is right to left:
//! `compose(p, q)(x) = p(q(x))`.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Perm = Vec<usize>;

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

pub fn is_perm(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn fixed_points(p: &[usize]) -> usize {
    p.iter().enumerate().filter(|(i, &x)| *i == x).count()
}

pub fn cycles(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = p[x];
        }
        out.push(c);
    }
    out
}

/// Multiplicities `m[k]` of cycles of length `k`.
pub fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut m = vec![0; p.len() + 1];
    for c in cycles(p) {
        m[c.len()] += 1;
    }
    m
}

/// `|C(p)| = prod_k k^{m_k} m_k!`.
pub fn centralizer_order(p: &[usize]) -> BigUint {
    centralizer_order_of_type(&cycle_type(p))
}

pub fn centralizer_order_of_type(m: &[usize]) -> BigUint {
    let mut r = BigUint::from(1u32);
    for (k, &mk) in m.iter().enumerate().skip(1) {
        for j in 1..=mk {
            r *= BigUint::from(k) * BigUint::from(j);
        }
    }
    r
}

pub fn centralizer_order_u64(p: &[usize]) -> u64 {
    let m = cycle_type(p);
    let mut r: u64 = 1;
    for (k, &mk) in m.iter().enumerate().skip(1) {
        for j in 1..=mk {
            r = r.saturating_mul((k * j) as u64);
        }
    }
    r
}

/// Some `x` with `x^{-1} a x = b`, if `a` and `b` are conjugate.
pub fn conjugator(a: &[usize], b: &[usize]) -> Option<Perm> {
    let n = a.len();
    let mut ca = cycles(a);
    let mut cb = cycles(b);
    if ca.len() != cb.len() {
        return None;
    }
    ca.sort_by_key(|c| c.len());
    cb.sort_by_key(|c| c.len());
    let mut x = vec![usize::MAX; n];
    for (p, q) in ca.iter().zip(&cb) {
        if p.len() != q.len() {
            return None;
        }
        // a x = x b: x maps the b-cycle q onto the a-cycle p.
        for (k, &qk) in q.iter().enumerate() {
            x[qk] = p[k];
        }
    }
    Some(x)
}

/// All elements of the centralizer of `a`.
pub fn centralizer(a: &[usize]) -> Vec<Perm> {
    let n = a.len();
    let cs = cycles(a);
    let mut by_len: std::collections::BTreeMap<usize, Vec<&Vec<usize>>> = Default::default();
    for c in &cs {
        by_len.entry(c.len()).or_default().push(c);
    }
    let mut out = vec![vec![usize::MAX; n]];
    for (len, group) in by_len {
        let mut next = Vec::new();
        let arrangements = all_perms(group.len());
        for partial in &out {
            for arr in &arrangements {
                for rots in 0..len.pow(group.len() as u32) {
                    let mut y = partial.clone();
                    let mut r = rots;
                    for (i, c) in group.iter().enumerate() {
                        let rot = r % len;
                        r /= len;
                        let target = group[arr[i]];
                        for k in 0..len {
                            y[c[k]] = target[(k + rot) % len];
                        }
                    }
                    next.push(y);
                }
            }
        }
        out = next;
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut p: Perm = identity(n);
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

pub fn random_perm<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
    let mut p = identity(n);
    p.shuffle(rng);
    p
}

/// Indices `j_1, ..., j_k` with `p = s_{j_k} ... s_{j_1}` where `s_j` swaps `j, j+1`.
///
/// Applying the transpositions to a vector in the returned order realises `p`.
pub fn adjacent_factors(p: &[usize]) -> Vec<usize> {
    let mut a = p.to_vec();
    let mut out = Vec::new();
    let n = a.len();
    loop {
        let mut swapped = false;
        for j in 0..n.saturating_sub(1) {
            if a[j] > a[j + 1] {
                a.swap(j, j + 1);
                out.push(j);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    out
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacent_factors_realise_permutation() {
        for p in all_perms(4) {
            let mut acc = identity(4);
            for j in adjacent_factors(&p) {
                let mut s = identity(4);
                s.swap(j, j + 1);
                acc = compose(&s, &acc);
            }
            assert_eq!(acc, p);
        }
    }

    #[test]
    fn conjugator_solves() {
        let a = vec![1, 2, 0, 4, 3];
        let b = [0, 2, 1, 4, 3].to_vec();
        assert!(conjugator(&a, &b).is_none());
        let b = vec![3, 2, 1, 4, 0];
        let x = conjugator(&a, &b).unwrap();
        assert_eq!(compose(&inverse(&x), &compose(&a, &x)), b);
    }

    #[test]
    fn centralizer_matches_order() {
        for p in [vec![1, 0, 3, 2], vec![0, 1, 2, 3], vec![1, 2, 0, 3], vec![1, 2, 3, 0]] {
            let c = centralizer(&p);
            assert_eq!(c.len() as u64, centralizer_order_u64(&p));
            for y in c {
                assert_eq!(compose(&y, &p), compose(&p, &y));
            }
        }
    }
}
