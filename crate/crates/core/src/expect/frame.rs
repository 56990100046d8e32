use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{compose, inverse, is_perm};
use crate::tiled::TiledSurface;
use crate::words::{Letter, RANK, RELATOR_LEN};

/// Index of the minus (outgoing) and plus (incoming) versions of a letter.
pub const MINUS: usize = 0;
pub const PLUS: usize = 1;

/// Which side of a half-edge a permutation records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Sigma,
    Tau,
}

/// One of the sixteen side permutations, as `(letter, sign, side)`.
pub type SideKey = (usize, usize, Side);

/// The eight junctions `left * right^{-1}`, one per vertex corner, in the
/// order used by the matrix-coefficient product.
pub const JUNCTIONS: [(SideKey, SideKey); RELATOR_LEN] = [
    ((1, MINUS, Side::Sigma), (0, PLUS, Side::Sigma)),
    ((0, PLUS, Side::Tau), (1, PLUS, Side::Sigma)),
    ((1, PLUS, Side::Tau), (0, MINUS, Side::Tau)),
    ((2, MINUS, Side::Sigma), (1, MINUS, Side::Tau)),
    ((3, MINUS, Side::Sigma), (2, PLUS, Side::Sigma)),
    ((2, PLUS, Side::Tau), (3, PLUS, Side::Sigma)),
    ((3, PLUS, Side::Tau), (2, MINUS, Side::Tau)),
    ((0, MINUS, Side::Sigma), (3, MINUS, Side::Tau)),
];

/// Vertex corner swept by a side of a half-edge.
pub fn side_corner(gen: usize, sign: usize, side: Side) -> usize {
    let slot = Letter::gen_slot(gen as u8, sign == MINUS);
    let before = (slot + RELATOR_LEN - 1) % RELATOR_LEN;
    match (sign, side) {
        (MINUS, Side::Sigma) | (PLUS, Side::Tau) => before,
        _ => slot,
    }
}

/// Numberings of a compact tiled surface inside the window of its `v` top
/// indices, with the side permutations they induce.
///
/// Window positions are 0-based: position `p` stands for `n - v + 1 + p`.
#[derive(Clone, Debug, Serialize)]
pub struct AuxiliaryFrame {
    pub seed: u64,
    pub vertices: usize,
    pub octagons: usize,
    pub edges: [usize; RANK],
    /// Window position of each vertex.
    pub labels: Vec<usize>,
    /// `sigma[f][sign]`, `tau[f][sign]`: window permutations.
    pub sigma: [[Vec<usize>; 2]; RANK],
    pub tau: [[Vec<usize>; 2]; RANK],
    pub g0: [Vec<usize>; RANK],
    /// Window positions of vertices with an outgoing (`MINUS`) or incoming
    /// (`PLUS`) edge of each letter.
    pub sets: [[Vec<usize>; 2]; RANK],
}

impl AuxiliaryFrame {
    pub fn side(&self, key: SideKey) -> &[usize] {
        match key.2 {
            Side::Sigma => &self.sigma[key.0][key.1],
            Side::Tau => &self.tau[key.0][key.1],
        }
    }

    /// The eight junction permutations on the window.
    pub fn junctions(&self) -> Vec<Vec<usize>> {
        JUNCTIONS.iter().map(|&(l, r)| compose(self.side(l), &inverse(self.side(r)))).collect()
    }

    /// Junctions restricted to the first `v - f` positions, which they preserve.
    pub fn reduced_junctions(&self) -> Vec<Vec<usize>> {
        let k = self.vertices - self.octagons;
        self.junctions().into_iter().map(|p| p[..k].to_vec()).collect()
    }

    /// Checks the four structural properties, naming the first one violated.
    pub fn check(&self) -> Result<()> {
        let v = self.vertices;
        let fail = |p: &str, msg: String| Err(Error::Internal(format!("frame property {} fails: {}", p, msg)));
        for f in 0..RANK {
            for s in [MINUS, PLUS] {
                for side in [Side::Sigma, Side::Tau] {
                    if !is_perm(self.side((f, s, side))) || self.side((f, s, side)).len() != v {
                        return fail("P0", format!("side permutation ({}, {}, {:?}) is not a permutation", f, s, side));
                    }
                }
            }
        }
        for f in 0..RANK {
            let top: Vec<usize> = (v - self.edges[f]..v).collect();
            for s in [MINUS, PLUS] {
                for side in [Side::Sigma, Side::Tau] {
                    let mut img: Vec<usize> = self.sets[f][s].iter().map(|&x| self.side((f, s, side))[x]).collect();
                    img.sort();
                    if img != top {
                        return fail("P1", format!("letter {} does not map its vertex set onto the top window", f));
                    }
                }
            }
            for side in [Side::Sigma, Side::Tau] {
                let p = compose(&inverse(self.side((f, PLUS, side))), self.side((f, MINUS, side)));
                if p != self.g0[f] {
                    return fail("P2", format!("letter {} side {:?} does not recover g0", f, side));
                }
            }
            for s in [MINUS, PLUS] {
                for x in 0..v {
                    if !self.sets[f][s].contains(&x) && self.sigma[f][s][x] != self.tau[f][s][x] {
                        return fail("P3", format!("letter {} sides disagree at position {}", f, x));
                    }
                }
            }
        }
        for (j, p) in self.junctions().iter().enumerate() {
            if (v - self.octagons..v).any(|x| p[x] != x) {
                return fail("P4", format!("junction {} moves an octagon index", j + 1));
            }
        }
        Ok(())
    }
}

/// Builds a frame for a compact tiled surface with numberings drawn from `seed`.
pub fn build_frame(y: &TiledSurface, seed: u64) -> Result<AuxiliaryFrame> {
    y.validate()?;
    let v = y.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..v).collect();
    labels.shuffle(&mut rng);
    let octs: Vec<usize> = y.octagons().collect();
    let f = octs.len();
    let edges = y.edge_counts();

    let mut oct_num = vec![0usize; v];
    let mut order: Vec<usize> = (0..f).collect();
    order.shuffle(&mut rng);
    for (i, &o) in octs.iter().enumerate() {
        oct_num[o] = v - f + order[i];
    }

    let mut g0: [Vec<usize>; RANK] = Default::default();
    let mut sets: [[Vec<usize>; 2]; RANK] = Default::default();
    let mut sigma: [[Vec<usize>; 2]; RANK] = Default::default();
    let mut tau: [[Vec<usize>; 2]; RANK] = Default::default();
    let filled = y.filled_corners();

    for gen in 0..RANK {
        let e = edges[gen];
        let mut g = vec![usize::MAX; v];
        for (u, w) in y.edges(gen) {
            g[labels[u]] = labels[w];
        }
        let mut outs: Vec<usize> = (0..v).filter(|&x| g[x] == usize::MAX).collect();
        let mut hit = vec![false; v];
        for &x in g.iter().filter(|&&x| x != usize::MAX) {
            hit[x] = true;
        }
        let ins: Vec<usize> = (0..v).filter(|&x| !hit[x]).collect();
        for (&x, &z) in outs.iter().zip(&ins) {
            g[x] = z;
        }
        sets[gen][MINUS] = (0..v).filter(|&u| y.next_of(gen, u).is_some()).map(|u| labels[u]).collect();
        sets[gen][PLUS] = (0..v).filter(|&u| y.prev_of(gen, u).is_some()).map(|u| labels[u]).collect();
        sets[gen][MINUS].sort();
        sets[gen][PLUS].sort();

        // Exposed sides of full edges, indexed by tail vertex.
        let tails: Vec<usize> = y.edges(gen).iter().map(|&(u, _)| u).collect();
        let mut left_num = vec![usize::MAX; v];
        let mut right_num = vec![usize::MAX; v];
        for (side, nums) in [(Side::Sigma, &mut left_num), (Side::Tau, &mut right_num)] {
            let corner = side_corner(gen, MINUS, side);
            let mut exposed: Vec<usize> = tails.iter().copied().filter(|&u| !filled[u][corner]).collect();
            if exposed.len() != e - f {
                return Err(Error::Internal(format!(
                    "letter {} has {} exposed sides, expected {}",
                    gen,
                    exposed.len(),
                    e - f
                )));
            }
            exposed.shuffle(&mut rng);
            for (i, u) in exposed.into_iter().enumerate() {
                nums[u] = v - e + i;
            }
        }

        // Hanging half-edges, numbered at their outgoing end.
        let mut hang_num = vec![usize::MAX; v];
        outs.shuffle(&mut rng);
        for (i, &x) in outs.iter().enumerate() {
            hang_num[x] = i;
        }

        for sign in [MINUS, PLUS] {
            for side in [Side::Sigma, Side::Tau] {
                let corner = side_corner(gen, sign, side);
                let mut p = vec![usize::MAX; v];
                for u in 0..v {
                    let other = if sign == MINUS { y.next_of(gen, u) } else { y.prev_of(gen, u) };
                    p[labels[u]] = match other {
                        None => {
                            let start = if sign == MINUS { labels[u] } else { g.iter().position(|&z| z == labels[u]).unwrap() };
                            hang_num[start]
                        }
                        Some(w) => match y.octagon_at_corner(u, corner) {
                            Some(o) => oct_num[o],
                            None => {
                                let tail = if sign == MINUS { u } else { w };
                                match side {
                                    Side::Sigma => left_num[tail],
                                    Side::Tau => right_num[tail],
                                }
                            }
                        },
                    };
                }
                match side {
                    Side::Sigma => sigma[gen][sign] = p,
                    Side::Tau => tau[gen][sign] = p,
                }
            }
        }
        g0[gen] = g;
    }
    let frame = AuxiliaryFrame { seed, vertices: v, octagons: f, edges, labels, sigma, tau, g0, sets };
    frame.check()?;
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_surface::{core_ab, core_cyclic};
    use crate::tiled::{octagon_disc, one_vertex_surface, point};
    use crate::words::parse_word;

    #[test]
    fn junction_sides_share_a_corner() {
        for &(l, r) in &JUNCTIONS {
            assert_eq!(side_corner(l.0, l.1, l.2), side_corner(r.0, r.1, r.2));
        }
        let mut corners: Vec<usize> = JUNCTIONS.iter().map(|&(l, _)| side_corner(l.0, l.1, l.2)).collect();
        corners.sort();
        assert_eq!(corners, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn loop_frame_is_trivial() {
        let (y, _) = core_cyclic(&parse_word("a").unwrap()).unwrap();
        let fr = build_frame(&y, 3).unwrap();
        assert_eq!(fr.vertices, 1);
        for p in fr.junctions() {
            assert_eq!(p, vec![0]);
        }
    }

    #[test]
    fn frames_pass_checks_on_fixtures() {
        let mut ys = vec![point(), octagon_disc(), one_vertex_surface(), core_ab()];
        for w in ["[a,b]", "aa", "ab", "aba^-2b^-1c"] {
            ys.push(core_cyclic(&parse_word(w).unwrap()).unwrap().0);
        }
        for y in &ys {
            for seed in 0..4 {
                build_frame(y, seed).unwrap();
            }
        }
    }

    #[test]
    fn seeds_give_different_frames() {
        let (y, _) = core_cyclic(&parse_word("aa").unwrap()).unwrap();
        let a = build_frame(&y, 1).unwrap();
        let b = (2..20).map(|s| build_frame(&y, s).unwrap()).find(|b| b.labels != a.labels);
        assert!(b.is_some());
    }
}
