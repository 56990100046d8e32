use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{blocks, is_cyclic_chain, long_chains, side_flags, Letter, SideFlags, RELATOR_LEN};

use super::{slot_generator, TiledSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PartKind {
    /// Exposed side of the full edge `tail --gen--> head`.
    Side { gen: usize, tail: usize, left: bool },
    /// Hanging half-edge at a vertex.
    Hanging { gen: usize, vertex: usize, outgoing: bool },
}

/// One element of the boundary of the surface with hanging half-edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Part {
    pub kind: PartKind,
}

impl Part {
    pub fn defect(&self) -> i64 {
        match self.kind {
            PartKind::Side { .. } => 1,
            PartKind::Hanging { .. } => -3,
        }
    }
}

/// A boundary component, oriented with the surface on its right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryCycle {
    /// Start vertex of each traversed edge.
    pub vertices: Vec<usize>,
    pub letters: Vec<Letter>,
    /// `gaps[i]`: hanging slots between `letters[i]` and `letters[i+1]`.
    pub gaps: Vec<usize>,
    pub parts: Vec<Part>,
}

impl BoundaryCycle {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn word(&self) -> String {
        self.letters.iter().map(|l| l.to_char()).collect()
    }

    pub fn flags(&self) -> SideFlags {
        side_flags(&self.letters)
    }

    /// Maximal blocks `(start, len)`; a boundary reading the relator
    /// repeatedly is a single block of its full length.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        if self.letters.is_empty() {
            return Vec::new();
        }
        blocks(&self.letters).unwrap_or_else(|| vec![(0, self.letters.len())])
    }

    /// Blocks the growing process annexes octagons along: blocks of length at
    /// least 4, blocks of long chains, and all blocks of a half-chain.
    pub fn flagged_blocks(&self) -> Vec<(usize, usize)> {
        let b = self.blocks();
        if b.is_empty() {
            return b;
        }
        if blocks(&self.letters).is_none() {
            return b;
        }
        let mut keep = vec![false; b.len()];
        for (j, x) in b.iter().enumerate() {
            if x.1 >= 4 {
                keep[j] = true;
            }
        }
        for (j, k) in long_chains(&self.letters, &b) {
            for t in 0..k {
                keep[(j + t) % b.len()] = true;
            }
        }
        if is_cyclic_chain(&self.letters, &b) && b.iter().all(|x| x.1 == 3) {
            keep.iter_mut().for_each(|x| *x = true);
        }
        b.into_iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x).collect()
    }

    /// Best value of `sum (Defect - 8 chi)` over nonempty piece collections
    /// inside this cycle.
    pub fn best_pieces(&self) -> i64 {
        let vals: Vec<i64> = self.parts.iter().map(|p| p.defect()).collect();
        best_nonempty_collection(&vals)
    }
}

fn best_nonempty_collection(vals: &[i64]) -> i64 {
    let m = vals.len();
    let whole: i64 = vals.iter().sum();
    let mut best = whole;
    for cut in 0..m {
        let seq: Vec<i64> = (0..m).map(|i| vals[(cut + i) % m]).collect();
        let mut any = vec![0i64; m + 1];
        let mut nonempty = vec![i64::MIN; m + 1];
        for i in 1..=m {
            any[i] = any[i - 1];
            nonempty[i] = nonempty[i - 1];
            let mut sum = 0;
            for j in (0..i).rev() {
                sum += seq[j];
                let with = any[j] + sum - 8;
                any[i] = any[i].max(with);
                nonempty[i] = nonempty[i].max(with);
            }
        }
        best = best.max(nonempty[m]);
    }
    best
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryFlags {
    pub cycles: Vec<SideFlags>,
    pub has_long_block: bool,
    pub has_long_chain: bool,
    pub has_half_block: bool,
    pub has_half_chain: bool,
    pub boundary_reduced: bool,
    pub strongly_boundary_reduced: bool,
}

impl TiledSurface {
    /// Boundary components of the thickened surface with hanging half-edges.
    pub fn boundary_cycles(&self) -> Vec<BoundaryCycle> {
        let filled = self.filled_corners();
        let n = self.vertex_count();
        let occupied: Vec<[bool; RELATOR_LEN]> = (0..n)
            .map(|v| {
                let mut o = [false; RELATOR_LEN];
                for (s, x) in o.iter_mut().enumerate() {
                    *x = self.slot_edge(v, s).is_some();
                }
                o
            })
            .collect();
        let next_slot = |v: usize, s: usize| -> usize {
            (1..=RELATOR_LEN).map(|k| (s + k) % RELATOR_LEN).find(|&t| occupied[v][t]).unwrap()
        };
        let open = |v: usize, s: usize| -> bool {
            let t = next_slot(v, s);
            !(t == (s + 1) % RELATOR_LEN && filled[v][s])
        };
        let mut seen = vec![[false; RELATOR_LEN]; n];
        let mut out = Vec::new();
        for v0 in 0..n {
            if !occupied[v0].iter().any(|&x| x) {
                let parts = (0..RELATOR_LEN)
                    .map(|s| {
                        let (gen, outgoing) = slot_generator(s);
                        Part { kind: PartKind::Hanging { gen, vertex: v0, outgoing } }
                    })
                    .collect();
                out.push(BoundaryCycle { vertices: Vec::new(), letters: Vec::new(), gaps: vec![], parts });
                continue;
            }
            for s0 in 0..RELATOR_LEN {
                if !occupied[v0][s0] || seen[v0][s0] || !open(v0, s0) {
                    continue;
                }
                let mut vertices = Vec::new();
                let mut letters = Vec::new();
                let mut before = Vec::new();
                let mut parts = Vec::new();
                let (mut v, mut s) = (v0, s0);
                while !seen[v][s] {
                    seen[v][s] = true;
                    let t = next_slot(v, s);
                    let mut k = (s + 1) % RELATOR_LEN;
                    let mut hanging = 0;
                    while k != t {
                        let (gen, outgoing) = slot_generator(k);
                        parts.push(Part { kind: PartKind::Hanging { gen, vertex: v, outgoing } });
                        hanging += 1;
                        k = (k + 1) % RELATOR_LEN;
                    }
                    let (l, w) = self.slot_edge(v, t).unwrap();
                    let tail = if l.pos { v } else { w };
                    let left = matches!(t % 4, 0 | 3);
                    parts.push(Part { kind: PartKind::Side { gen: l.gen as usize, tail, left } });
                    vertices.push(v);
                    letters.push(l);
                    before.push(hanging);
                    v = w;
                    s = l.arrival_slot();
                }
                let m = letters.len();
                let gaps = (0..m).map(|i| before[(i + 1) % m]).collect();
                // Rotate parts so that they start with the first traversed side.
                let first = parts.iter().position(|p| matches!(p.kind, PartKind::Side { .. })).unwrap();
                parts.rotate_left(first);
                out.push(BoundaryCycle { vertices, letters, gaps, parts });
            }
        }
        out
    }

    pub fn boundary_flags(&self) -> BoundaryFlags {
        let cycles: Vec<SideFlags> = self.boundary_cycles().iter().map(|c| c.flags()).collect();
        let has_long_block = cycles.iter().any(|c| c.has_long_block);
        let has_long_chain = cycles.iter().any(|c| c.has_long_chain);
        let has_half_block = cycles.iter().any(|c| c.has_half_block);
        let has_half_chain = cycles.iter().any(|c| c.has_half_chain);
        BoundaryFlags {
            cycles,
            has_long_block,
            has_long_chain,
            has_half_block,
            has_half_chain,
            boundary_reduced: !has_long_block && !has_long_chain,
            strongly_boundary_reduced: !has_half_block && !has_half_chain,
        }
    }

    pub fn is_boundary_reduced(&self) -> bool {
        self.boundary_flags().boundary_reduced
    }

    pub fn is_strongly_boundary_reduced(&self) -> bool {
        self.boundary_flags().strongly_boundary_reduced
    }

    /// Maximum over nonempty piece collections of `sum (Defect - 8 chi)`.
    pub fn max_defect(&self) -> Result<i64> {
        let cycles = self.boundary_cycles();
        if cycles.is_empty() {
            return Err(Error::Domain("the surface has empty boundary".into()));
        }
        let best: Vec<i64> = cycles.iter().map(|c| c.best_pieces()).collect();
        if best.iter().any(|&b| b >= 0) {
            Ok(best.iter().map(|&b| b.max(0)).sum())
        } else {
            Ok(*best.iter().max().unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiled::{octagon_disc, point};

    fn loop_a() -> TiledSurface {
        let mut y = TiledSurface::new(1);
        y.add_edge(0, 0, 0).unwrap();
        y
    }

    #[test]
    fn loop_boundary() {
        let y = loop_a();
        let c = y.boundary_cycles();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| x.len() == 1));
        let mut g: Vec<usize> = c.iter().map(|x| x.gaps[0]).collect();
        g.sort();
        assert_eq!(g, vec![1, 5]);
        assert!(y.is_boundary_reduced() && y.is_strongly_boundary_reduced());
        assert_eq!(y.max_defect().unwrap(), -2);
    }

    #[test]
    fn octagon_disc_boundary() {
        let y = octagon_disc();
        let c = y.boundary_cycles();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len(), 8);
        assert!(c[0].gaps.iter().all(|&g| g == 6));
        assert!(y.is_strongly_boundary_reduced());
        assert_eq!(y.max_defect().unwrap(), -7);
    }

    #[test]
    fn point_boundary() {
        let y = point();
        let c = y.boundary_cycles();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].parts.len(), 8);
        assert_eq!(y.max_defect().unwrap(), -11);
    }

    #[test]
    fn bare_relator_cycle_has_full_block() {
        let mut y = TiledSurface::new(8);
        let r = crate::words::relator();
        for (i, l) in r.iter().enumerate() {
            let (u, v) = if l.pos { (i, (i + 1) % 8) } else { ((i + 1) % 8, i) };
            y.add_edge(l.gen as usize, u, v).unwrap();
        }
        assert!(y.validate().is_ok());
        let f = y.boundary_flags();
        assert!(f.has_long_block);
        assert!(!f.boundary_reduced);
    }

    #[test]
    fn collection_dp() {
        assert_eq!(best_nonempty_collection(&[1, -3]), -2);
        assert_eq!(best_nonempty_collection(&[1; 10]), 10);
        assert_eq!(best_nonempty_collection(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, -3, -3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]), 14);
        assert_eq!(best_nonempty_collection(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, -3, -3, -3, -3, -3, -3, -3, -3]), 2);
    }
}
