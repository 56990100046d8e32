//! Resolutions of compact tiled surfaces: finite families of morphisms
//! through which every map into a closed surface factors uniquely.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::core_surface::block_anchor;
use crate::error::{Error, Result};
use crate::words::{relator_letter, RANK, RELATOR_LEN};
use crate::tiled::{embeddings, fold_edges, morphisms, quotients, quotients_injective_on, rooted_canonical_form, Morphism, TiledSurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResolutionKind {
    Image,
    Growing { chi0: i64 },
}

#[derive(Clone, Debug)]
pub struct ResolutionElement {
    pub surface: TiledSurface,
    pub map: Morphism,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub base: TiledSurface,
    pub kind: ResolutionKind,
    pub elements: Vec<ResolutionElement>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements whose codomain has Euler characteristic at least `chi`.
    pub fn with_chi_at_least(&self, chi: i64) -> Vec<&ResolutionElement> {
        self.elements.iter().filter(|e| e.surface.euler_char() >= chi).collect()
    }

    pub fn manifest(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .elements
            .iter()
            .map(|e| {
                let mut s = e.surface.stats();
                s["map"] = serde_json::json!(e.map.map);
                s
            })
            .collect();
        serde_json::json!({ "kind": self.kind, "elements": items })
    }
}

/// All images of `y`: one element per valid quotient.
pub fn image_resolution(y: &TiledSurface) -> Resolution {
    let elements = quotients(y).into_iter().map(|(surface, map)| ResolutionElement { surface, map }).collect();
    Resolution { base: y.clone(), kind: ResolutionKind::Image, elements }
}

/// Bound on the number of octagons the growing process may add.
pub fn octagon_budget(y: &TiledSurface, chi0: i64) -> i64 {
    let d = y.boundary_length();
    let comps = y.components().len() as i64;
    let c = 2 * comps - chi0;
    let steps = d / 2 + (d + 1) * (c + (c + 1) * d / 2);
    (d / 3 + 1) * (steps + 1)
}

/// Add the octagon along every flagged boundary block of `w`, folding any
/// forced identifications. `None` if the folding merges two vertices of `w`.
fn free_annexation(w: &TiledSurface) -> Option<TiledSurface> {
    let k = w.vertex_count();
    let mut count = k;
    let mut edges: Vec<(usize, usize, usize)> = (0..RANK).flat_map(|g| w.edges(g).into_iter().map(move |(u, v)| (g, u, v))).collect();
    let mut octagon_starts = Vec::new();
    for c in w.boundary_cycles() {
        let m = c.len();
        for (s, len) in c.flagged_blocks() {
            let (_, p) = block_anchor(&c, (s, len));
            let known = len.min(RELATOR_LEN);
            let mut path: Vec<usize> = (0..=known).map(|i| c.vertices[(s + i) % m]).collect();
            while path.len() < RELATOR_LEN {
                path.push(count);
                count += 1;
            }
            path.push(path[0]);
            if known == RELATOR_LEN && path[RELATOR_LEN] != c.vertices[(s + RELATOR_LEN) % m] {
                return None;
            }
            for i in known..RELATOR_LEN {
                let l = relator_letter(p + i);
                let (u, v) = if l.pos { (path[i], path[i + 1]) } else { (path[i + 1], path[i]) };
                edges.push((l.gen as usize, u, v));
            }
            octagon_starts.push(path[(RELATOR_LEN - p % RELATOR_LEN) % RELATOR_LEN]);
        }
    }
    let (map, classes) = fold_edges(count, &edges);
    if (0..k).any(|v| map[v] != v) {
        return None;
    }
    let mut out = TiledSurface::new(classes);
    for &(g, u, v) in &edges {
        out.add_edge(g, map[u], map[v]).ok()?;
    }
    for o in w.octagons().chain(octagon_starts) {
        if !out.has_octagon(map[o]) {
            out.add_octagon(map[o]).ok()?;
        }
    }
    Some(out)
}

fn stops(w: &TiledSurface, chi0: i64) -> bool {
    let f = w.boundary_flags();
    f.strongly_boundary_reduced || (f.boundary_reduced && w.euler_char() < chi0)
}

/// The growing-process resolution, branching over every way a closed
/// target could identify the annexed octagons with existing cells.
pub fn growing_resolution(y: &TiledSurface, chi0: i64) -> Result<Resolution> {
    let budget = octagon_budget(y, chi0);
    let mut emitted: BTreeMap<_, ResolutionElement> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    let mut stack: Vec<(TiledSurface, Morphism, i64)> = Vec::new();
    for (w, m) in quotients(y) {
        let key = rooted_canonical_form(&w, &m.map);
        if seen.insert(key) {
            let f = w.octagon_count() as i64;
            stack.push((w, m, f));
        }
    }
    while let Some((w, m, start_octagons)) = stack.pop() {
        if stops(&w, chi0) {
            let key = rooted_canonical_form(&w, &m.map);
            emitted.entry(key).or_insert(ResolutionElement { surface: w, map: m });
            continue;
        }
        if w.octagon_count() as i64 - start_octagons > budget {
            return Err(Error::Internal(format!("growing process exceeded the octagon budget {}", budget)));
        }
        let Some(grown) = free_annexation(&w) else { continue };
        if grown.octagon_count() == w.octagon_count() {
            return Err(Error::Internal("growing process made no progress".into()));
        }
        for (w2, q) in quotients_injective_on(&grown, w.vertex_count()) {
            let m2 = Morphism { map: m.map.iter().map(|&v| q.map[v]).collect() };
            let key = rooted_canonical_form(&w2, &m2.map);
            if seen.insert(key) {
                stack.push((w2, m2, start_octagons));
            }
        }
    }
    Ok(Resolution { base: y.clone(), kind: ResolutionKind::Growing { chi0 }, elements: emitted.into_values().collect() })
}

/// A morphism into a cover that does not factor exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationFailure {
    pub cover: usize,
    pub morphism: Morphism,
    pub count: usize,
}

/// Check unique factorization of every morphism from the base into each cover.
pub fn verify_resolution(r: &Resolution, covers: &[TiledSurface]) -> std::result::Result<(), FactorizationFailure> {
    for (ci, x) in covers.iter().enumerate() {
        let mut tally: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &r.elements {
            for emb in embeddings(&e.surface, x) {
                *tally.entry(e.map.then(&emb).map).or_default() += 1;
            }
        }
        for h in morphisms(&r.base, x) {
            let count = tally.remove(&h.map).unwrap_or(0);
            if count != 1 {
                return Err(FactorizationFailure { cover: ci, morphism: h, count });
            }
        }
        if let Some((map, count)) = tally.into_iter().next() {
            return Err(FactorizationFailure { cover: ci, morphism: Morphism { map }, count });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_surface::core_cyclic;
    use crate::oracle::all_covers;
    use crate::tiled::is_isomorphic;
    use crate::words::{divisor_count, parse_word};

    fn core(s: &str) -> TiledSurface {
        core_cyclic(&parse_word(s).unwrap()).unwrap().0
    }

    #[test]
    fn image_resolution_sizes() {
        assert_eq!(image_resolution(&core("a")).len(), 1);
        assert_eq!(image_resolution(&core("a^2")).len(), 2);
        let two = core("a").disjoint_union(&core("a"));
        assert_eq!(image_resolution(&two).len(), 2);
    }

    #[test]
    fn growing_resolution_of_powers() {
        for q in [1usize, 2, 3, 4, 6] {
            let y = core(&format!("a^{}", q));
            let r = growing_resolution(&y, 0).unwrap();
            let top = r.with_chi_at_least(0);
            assert_eq!(top.len(), divisor_count(q), "q = {}", q);
            for m in (1..=q).filter(|m| q % m == 0) {
                let c = core(&format!("a^{}", m));
                assert!(top.iter().any(|e| is_isomorphic(&e.surface, &c)));
            }
        }
    }

    #[test]
    fn resolutions_factor_uniquely() {
        let covers = all_covers(3).unwrap();
        for s in ["a", "a^2", "ab"] {
            let y = core(s);
            assert!(verify_resolution(&image_resolution(&y), &covers).is_ok(), "{}", s);
            assert!(verify_resolution(&growing_resolution(&y, 0).unwrap(), &covers).is_ok(), "{}", s);
        }
        let mut r = image_resolution(&core("a^2"));
        r.elements.pop();
        let e = verify_resolution(&r, &covers).unwrap_err();
        assert_eq!(e.count, 0);
    }

    #[test]
    fn commutator_core_growing() {
        let y = core("[a,b]");
        let r = growing_resolution(&y, 0).unwrap();
        assert_eq!(r.with_chi_at_least(0).len(), 1);
        for e in &r.elements {
            let f = e.surface.boundary_flags();
            assert!(f.boundary_reduced);
            if e.surface.euler_char() >= 0 {
                assert!(f.strongly_boundary_reduced);
            }
        }
        assert!(verify_resolution(&r, &all_covers(3).unwrap()).is_ok());
    }
}
