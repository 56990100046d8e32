//! Tiled surfaces: finite subcomplexes of covers of the genus-2 surface.

mod boundary;
mod fixtures;
mod io;
mod morph;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::words::{relator, relator_letter, Letter, RANK, RELATOR_LEN};

pub use boundary::{BoundaryCycle, BoundaryFlags, Part, PartKind};
pub use fixtures::{octagon_disc, one_vertex_surface, point, single_edge};
pub use io::{SurfaceJson, DOT_COLORS};
pub use morph::{
    canonical_form, count_morphisms, embeddings, fold_edges, is_isomorphic, morphisms, quotients, quotients_injective_on,
    rooted_canonical_form, CanonicalForm, Morphism,
};

/// Corner filled at the `p`-th vertex of an octagon.
pub const OCTAGON_CORNERS: [usize; RELATOR_LEN] = [7, 2, 1, 0, 3, 6, 5, 4];

/// Vertex counts, per-letter partial injections and octagons (stored by the
/// vertex where their relator reading starts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TiledSurface {
    vcount: usize,
    next: Vec<Vec<Option<usize>>>,
    prev: Vec<Vec<Option<usize>>>,
    octagons: BTreeSet<usize>,
}

impl TiledSurface {
    pub fn new(vertices: usize) -> Self {
        TiledSurface {
            vcount: vertices,
            next: vec![vec![None; vertices]; RANK],
            prev: vec![vec![None; vertices]; RANK],
            octagons: BTreeSet::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vcount
    }

    pub fn edge_count_of(&self, gen: usize) -> usize {
        self.next[gen].iter().filter(|x| x.is_some()).count()
    }

    pub fn edge_counts(&self) -> [usize; RANK] {
        let mut e = [0; RANK];
        for (g, x) in e.iter_mut().enumerate() {
            *x = self.edge_count_of(g);
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        (0..RANK).map(|g| self.edge_count_of(g)).sum()
    }

    pub fn octagon_count(&self) -> usize {
        self.octagons.len()
    }

    /// Total boundary length `2e - 8f`.
    pub fn boundary_length(&self) -> i64 {
        2 * self.edge_count() as i64 - RELATOR_LEN as i64 * self.octagon_count() as i64
    }

    pub fn euler_char(&self) -> i64 {
        self.vcount as i64 - self.edge_count() as i64 + self.octagon_count() as i64
    }

    pub fn add_vertex(&mut self) -> usize {
        for g in 0..RANK {
            self.next[g].push(None);
            self.prev[g].push(None);
        }
        self.vcount += 1;
        self.vcount - 1
    }

    pub fn next_of(&self, gen: usize, v: usize) -> Option<usize> {
        self.next[gen][v]
    }

    pub fn prev_of(&self, gen: usize, v: usize) -> Option<usize> {
        self.prev[gen][v]
    }

    pub fn add_edge(&mut self, gen: usize, u: usize, v: usize) -> Result<()> {
        if gen >= RANK || u >= self.vcount || v >= self.vcount {
            return Err(Error::Invalid(format!("edge ({}, {}) out of range", u, v)));
        }
        let name = Letter::new(gen as u8, true).to_char();
        match (self.next[gen][u], self.prev[gen][v]) {
            (Some(x), _) if x == v => Ok(()),
            (Some(_), _) => Err(Error::Invalid(format!("duplicate outgoing {} at vertex {}", name, u))),
            (_, Some(_)) => Err(Error::Invalid(format!("duplicate incoming {} at vertex {}", name, v))),
            _ => {
                self.next[gen][u] = Some(v);
                self.prev[gen][v] = Some(u);
                Ok(())
            }
        }
    }

    pub fn edges(&self, gen: usize) -> Vec<(usize, usize)> {
        (0..self.vcount).filter_map(|u| self.next[gen][u].map(|v| (u, v))).collect()
    }

    pub fn follow(&self, v: usize, l: Letter) -> Option<usize> {
        if l.pos {
            self.next[l.gen as usize][v]
        } else {
            self.prev[l.gen as usize][v]
        }
    }

    /// Vertices visited reading `letters` from `v`, if every edge exists.
    pub fn read_path(&self, v: usize, letters: &[Letter]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(letters.len() + 1);
        out.push(v);
        let mut cur = v;
        for &l in letters {
            cur = self.follow(cur, l)?;
            out.push(cur);
        }
        Some(out)
    }

    /// The closed relator path from `v0`, as its eight vertices.
    pub fn octagon_vertices(&self, v0: usize) -> Option<[usize; RELATOR_LEN]> {
        let p = self.read_path(v0, &relator())?;
        if p[RELATOR_LEN] != v0 {
            return None;
        }
        let mut out = [0; RELATOR_LEN];
        out.copy_from_slice(&p[..RELATOR_LEN]);
        Some(out)
    }

    pub fn add_octagon(&mut self, v0: usize) -> Result<()> {
        if self.octagon_vertices(v0).is_none() {
            return Err(Error::Invalid(format!("no closed relator path starts at vertex {}", v0)));
        }
        if !self.octagons.insert(v0) {
            return Err(Error::Invalid(format!("duplicate octagon at vertex {}", v0)));
        }
        Ok(())
    }

    pub fn has_octagon(&self, v0: usize) -> bool {
        self.octagons.contains(&v0)
    }

    pub fn octagons(&self) -> impl Iterator<Item = usize> + '_ {
        self.octagons.iter().copied()
    }

    /// `filled[v][k]`: corner `k` at `v` lies in an octagon.
    pub fn filled_corners(&self) -> Vec<[bool; RELATOR_LEN]> {
        let mut filled = vec![[false; RELATOR_LEN]; self.vcount];
        for &o in &self.octagons {
            if let Some(vs) = self.octagon_vertices(o) {
                for (p, &v) in vs.iter().enumerate() {
                    filled[v][OCTAGON_CORNERS[p]] = true;
                }
            }
        }
        filled
    }

    /// Octagon containing corner `k` at `v`, as its start vertex.
    pub fn octagon_at_corner(&self, v: usize, k: usize) -> Option<usize> {
        let p = OCTAGON_CORNERS.iter().position(|&c| c == k)?;
        let mut cur = v;
        for j in (0..p).rev() {
            cur = self.follow(cur, relator_letter(j).inv())?;
        }
        (self.octagons.contains(&cur) && self.octagon_vertices(cur).map(|vs| vs[p]) == Some(v)).then_some(cur)
    }

    /// Letter read when leaving `v` through `slot`, with the far endpoint.
    pub fn slot_edge(&self, v: usize, slot: usize) -> Option<(Letter, usize)> {
        let (gen, outgoing) = slot_generator(slot);
        let l = Letter::new(gen as u8, outgoing);
        self.follow(v, l).map(|w| (l, w))
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..RELATOR_LEN).filter(|&s| self.slot_edge(v, s).is_some()).count()
    }

    /// Connected components (by edges), each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.vcount];
        let mut out = Vec::new();
        for s in 0..self.vcount {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for slot in 0..RELATOR_LEN {
                    if let Some((_, w)) = self.slot_edge(v, slot) {
                        if comp[w] == usize::MAX {
                            comp[w] = id;
                            stack.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Check every axiom; the first violation is reported.
    pub fn validate(&self) -> Result<()> {
        for g in 0..RANK {
            for u in 0..self.vcount {
                if let Some(v) = self.next[g][u] {
                    if v >= self.vcount || self.prev[g][v] != Some(u) {
                        return Err(Error::Invalid(format!("inconsistent edge {} -> {}", u, v)));
                    }
                }
            }
        }
        for &o in &self.octagons {
            if o >= self.vcount || self.octagon_vertices(o).is_none() {
                return Err(Error::Invalid(format!("octagon at vertex {} is not a closed relator path", o)));
            }
        }
        let r = relator();
        for v in 0..self.vcount {
            for rot in 0..RELATOR_LEN {
                let word: Vec<Letter> = (0..RELATOR_LEN).map(|k| r[(rot + k) % RELATOR_LEN]).collect();
                if let Some(p) = self.read_path(v, &word) {
                    if p[RELATOR_LEN] != v {
                        return Err(Error::Invalid(format!(
                            "relator path not closed: from vertex {} reading rotation {}",
                            v, rot
                        )));
                    }
                }
            }
        }
        if self.boundary_length() < 0 {
            return Err(Error::Invalid("negative boundary length".into()));
        }
        Ok(())
    }

    pub fn disjoint_union(&self, other: &TiledSurface) -> TiledSurface {
        let off = self.vcount;
        let mut s = self.clone();
        for _ in 0..other.vcount {
            s.add_vertex();
        }
        for g in 0..RANK {
            for (u, v) in other.edges(g) {
                s.add_edge(g, u + off, v + off).expect("disjoint edges never clash");
            }
        }
        for o in other.octagons() {
            s.octagons.insert(o + off);
        }
        s
    }

    /// Image of the surface under a vertex map onto `0..count`.
    ///
    /// Errors if two edges with the same label and source (or target) land
    /// on different vertices.
    pub fn image(&self, map: &[usize], count: usize) -> Result<TiledSurface> {
        let mut s = TiledSurface::new(count);
        for g in 0..RANK {
            for (u, v) in self.edges(g) {
                s.add_edge(g, map[u], map[v])?;
            }
        }
        for &o in &self.octagons {
            let t = map[o];
            if !s.octagons.contains(&t) {
                s.add_octagon(t)?;
            }
        }
        Ok(s)
    }

    /// Restriction to a vertex subset (in the given order); octagons are kept
    /// when all their vertices survive.
    pub fn induced(&self, keep: &[usize]) -> TiledSurface {
        let mut idx = vec![usize::MAX; self.vcount];
        for (i, &v) in keep.iter().enumerate() {
            idx[v] = i;
        }
        let mut s = TiledSurface::new(keep.len());
        for g in 0..RANK {
            for (u, v) in self.edges(g) {
                if idx[u] != usize::MAX && idx[v] != usize::MAX {
                    s.add_edge(g, idx[u], idx[v]).unwrap();
                }
            }
        }
        for &o in &self.octagons {
            if let Some(vs) = self.octagon_vertices(o) {
                if vs.iter().all(|&v| idx[v] != usize::MAX) {
                    s.octagons.insert(idx[o]);
                }
            }
        }
        s
    }

    pub fn stats(&self) -> serde_json::Value {
        let flags = self.boundary_flags();
        serde_json::json!({
            "vertices": self.vertex_count(),
            "edges": self.edge_count(),
            "edges_by_letter": self.edge_counts(),
            "octagons": self.octagon_count(),
            "euler_characteristic": self.euler_char(),
            "boundary_length": self.boundary_length(),
            "boundary_reduced": flags.boundary_reduced,
            "strongly_boundary_reduced": flags.strongly_boundary_reduced,
            "max_defect": self.max_defect().ok(),
        })
    }
}

/// Generator and direction (`true` = outgoing) occupying a slot.
pub fn slot_generator(slot: usize) -> (usize, bool) {
    let k = 2 * (slot / 4);
    match slot % 4 {
        0 => (k, true),
        1 => (k + 1, false),
        2 => (k, false),
        _ => (k + 1, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_round_trip() {
        for s in 0..RELATOR_LEN {
            let (g, out) = slot_generator(s);
            assert_eq!(Letter::gen_slot(g as u8, out), s);
        }
    }

    #[test]
    fn loop_is_valid() {
        let mut y = TiledSurface::new(1);
        y.add_edge(0, 0, 0).unwrap();
        assert!(y.validate().is_ok());
        assert_eq!(y.euler_char(), 0);
    }

    #[test]
    fn duplicate_outgoing_rejected() {
        let mut y = TiledSurface::new(3);
        y.add_edge(0, 0, 1).unwrap();
        let e = y.add_edge(0, 0, 2).unwrap_err();
        assert!(e.to_string().contains("duplicate outgoing a"));
    }

    #[test]
    fn open_relator_path_rejected() {
        let mut y = TiledSurface::new(9);
        let r = relator();
        for (i, l) in r.iter().enumerate() {
            let (u, v) = if l.pos { (i, i + 1) } else { (i + 1, i) };
            y.add_edge(l.gen as usize, u, v).unwrap();
        }
        let e = y.validate().unwrap_err();
        assert!(e.to_string().contains("relator path not closed"));
    }

    #[test]
    fn octagon_disc_counts() {
        let y = octagon_disc();
        assert!(y.validate().is_ok());
        assert_eq!((y.vertex_count(), y.edge_count(), y.octagon_count()), (8, 8, 1));
        assert_eq!(y.euler_char(), 1);
        let filled = y.filled_corners();
        assert_eq!(filled.iter().map(|c| c.iter().filter(|&&x| x).count()).sum::<usize>(), 8);
        for v in 0..8 {
            for k in 0..8 {
                assert_eq!(y.octagon_at_corner(v, k).is_some(), filled[v][k]);
            }
        }
    }
}
