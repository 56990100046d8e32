use std::collections::VecDeque;

use serde::Serialize;

use crate::words::{Letter, RANK, RELATOR_LEN};

use super::TiledSurface;

/// A morphism of tiled surfaces, given by its vertex map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Morphism {
    pub map: Vec<usize>,
}

impl Morphism {
    pub fn identity(n: usize) -> Self {
        Morphism { map: (0..n).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|v| seen.insert(*v))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism { map: self.map.iter().map(|&v| other.map[v]).collect() }
    }

    pub fn is_morphism(&self, y: &TiledSurface, z: &TiledSurface) -> bool {
        if self.map.len() != y.vertex_count() || self.map.iter().any(|&v| v >= z.vertex_count()) {
            return false;
        }
        (0..RANK).all(|g| y.edges(g).into_iter().all(|(u, v)| z.next_of(g, self.map[u]) == Some(self.map[v])))
            && y.octagons().all(|o| z.has_octagon(self.map[o]))
    }
}

/// Extend a partial map from `seed` through the component of `seed`.
fn propagate(y: &TiledSurface, z: &TiledSurface, map: &mut [usize], seed: usize) -> bool {
    let mut queue = VecDeque::from([seed]);
    while let Some(u) = queue.pop_front() {
        let x = map[u];
        for slot in 0..RELATOR_LEN {
            let Some((l, w)) = y.slot_edge(u, slot) else { continue };
            let Some(xw) = z.follow(x, l) else { return false };
            if map[w] == usize::MAX {
                map[w] = xw;
                queue.push_back(w);
            } else if map[w] != xw {
                return false;
            }
        }
    }
    true
}

/// All morphisms `y -> z`.
pub fn morphisms(y: &TiledSurface, z: &TiledSurface) -> Vec<Morphism> {
    let comps = y.components();
    let mut partial = vec![vec![usize::MAX; y.vertex_count()]];
    for comp in &comps {
        let mut next = Vec::new();
        for m in &partial {
            for x in 0..z.vertex_count() {
                let mut m2 = m.clone();
                m2[comp[0]] = x;
                if propagate(y, z, &mut m2, comp[0]) {
                    next.push(m2);
                }
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .filter(|m| y.octagons().all(|o| z.has_octagon(m[o])))
        .map(|map| Morphism { map })
        .collect()
}

pub fn embeddings(y: &TiledSurface, z: &TiledSurface) -> Vec<Morphism> {
    morphisms(y, z).into_iter().filter(|m| m.is_injective()).collect()
}

pub fn count_morphisms(y: &TiledSurface, z: &TiledSurface) -> usize {
    morphisms(y, z).len()
}

struct Folding {
    parent: Vec<usize>,
    next: Vec<[Option<usize>; RANK]>,
    prev: Vec<[Option<usize>; RANK]>,
}

impl Folding {
    fn new(y: &TiledSurface) -> Self {
        let n = y.vertex_count();
        let mut next = vec![[None; RANK]; n];
        let mut prev = vec![[None; RANK]; n];
        for g in 0..RANK {
            for (u, v) in y.edges(g) {
                next[u][g] = Some(v);
                prev[v][g] = Some(u);
            }
        }
        Folding { parent: (0..n).collect(), next, prev }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Identify `a` and `b`, folding edges; the smaller representative wins.
    fn union(&mut self, a: usize, b: usize) {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[gone] = keep;
            for g in 0..RANK {
                match (self.next[keep][g], self.next[gone][g]) {
                    (Some(x), Some(y)) => stack.push((x, y)),
                    (None, Some(y)) => self.next[keep][g] = Some(y),
                    _ => {}
                }
                match (self.prev[keep][g], self.prev[gone][g]) {
                    (Some(x), Some(y)) => stack.push((x, y)),
                    (None, Some(y)) => self.prev[keep][g] = Some(y),
                    _ => {}
                }
            }
        }
    }
}

/// Fold a labelled multigraph on `0..n` into partial injections.
///
/// Returns the class of each vertex (classes numbered by least member) and
/// the number of classes.
pub fn fold_edges(n: usize, edges: &[(usize, usize, usize)]) -> (Vec<usize>, usize) {
    let mut f = Folding { parent: (0..n).collect(), next: vec![[None; RANK]; n], prev: vec![[None; RANK]; n] };
    for &(g, u, v) in edges {
        let (ru, rv) = (f.find(u), f.find(v));
        match f.next[ru][g] {
            Some(x) => f.union(x, v),
            None => f.next[ru][g] = Some(v),
        }
        let rv = if f.find(rv) == rv { rv } else { f.find(rv) };
        match f.prev[rv][g] {
            Some(x) => f.union(x, u),
            None => f.prev[rv][g] = Some(u),
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut map = vec![0; n];
    for v in 0..n {
        let r = f.find(v);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        map[v] = label[r];
    }
    (map, count)
}

#[derive(Clone)]
struct QuotientState {
    parent: Vec<usize>,
    next: Vec<[Option<usize>; RANK]>,
    prev: Vec<[Option<usize>; RANK]>,
    distinct: Vec<(usize, usize)>,
}

impl QuotientState {
    fn folding(&self) -> Folding {
        Folding { parent: self.parent.clone(), next: self.next.clone(), prev: self.prev.clone() }
    }

    fn from_folding(f: Folding, distinct: Vec<(usize, usize)>) -> Self {
        QuotientState { parent: f.parent, next: f.next, prev: f.prev, distinct }
    }
}

/// All surjective quotients of `y` whose image is a valid tiled surface,
/// one per vertex partition; the vertices `0..fixed` stay distinct.
///
/// Classes are numbered by their least vertex.
pub fn quotients_injective_on(y: &TiledSurface, fixed: usize) -> Vec<(TiledSurface, Morphism)> {
    let n = y.vertex_count();
    let mut distinct = Vec::new();
    for i in 0..fixed.min(n) {
        for j in 0..i {
            distinct.push((j, i));
        }
    }
    let start = QuotientState::from_folding(Folding::new(y), distinct);
    let mut out = Vec::new();
    let mut stack = vec![(start, fixed.min(n))];
    while let Some((state, i)) = stack.pop() {
        if i == n {
            let mut f = state.folding();
            let mut label = vec![usize::MAX; n];
            let mut count = 0;
            let mut map = vec![0; n];
            for v in 0..n {
                let r = f.find(v);
                if label[r] == usize::MAX {
                    label[r] = count;
                    count += 1;
                }
                map[v] = label[r];
            }
            if let Ok(z) = y.image(&map, count) {
                if z.validate().is_ok() {
                    out.push((z, Morphism { map }));
                }
            }
            continue;
        }
        let mut f = state.folding();
        if f.find(i) != i {
            stack.push((state, i + 1));
            continue;
        }
        let reps: Vec<usize> = (0..i).filter(|&j| f.find(j) == j).collect();
        let mut sep = state.distinct.clone();
        for &r in &reps {
            sep.push((r, i));
        }
        stack.push((QuotientState::from_folding(f, sep), i + 1));
        for &r in reps.iter().rev() {
            let mut f = state.folding();
            f.union(r, i);
            let ok = state.distinct.iter().all(|&(p, q)| f.find(p) != f.find(q));
            if ok {
                stack.push((QuotientState::from_folding(f, state.distinct.clone()), i + 1));
            }
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

pub fn quotients(y: &TiledSurface) -> Vec<(TiledSurface, Morphism)> {
    quotients_injective_on(y, 0)
}

/// Isomorphism-invariant encoding of a tiled surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalForm(pub Vec<Vec<usize>>);

const NONE: usize = usize::MAX;

/// BFS numbering from the given starts (which must be distinct); the
/// encoding lists each vertex's successors followed by octagon starts.
fn encode_from(y: &TiledSurface, starts: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut num = vec![NONE; y.vertex_count()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for &s in starts {
        if num[s] == NONE {
            num[s] = order.len();
            order.push(s);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for g in 0..RANK {
            for pos in [true, false] {
                if let Some(w) = y.follow(u, Letter::new(g as u8, pos)) {
                    if num[w] == NONE {
                        num[w] = order.len();
                        order.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let mut code = vec![order.len()];
    for &u in &order {
        for g in 0..RANK {
            code.push(y.next_of(g, u).map_or(NONE, |w| num[w]));
        }
    }
    let mut octs: Vec<usize> = y.octagons().filter(|&o| num[o] != NONE).map(|o| num[o]).collect();
    octs.sort_unstable();
    code.extend(octs);
    (code, num)
}

fn component_code(y: &TiledSurface, comp: &[usize]) -> Vec<usize> {
    comp.iter().map(|&s| encode_from(y, &[s]).0).min().unwrap_or_default()
}

pub fn canonical_form(y: &TiledSurface) -> CanonicalForm {
    let mut codes: Vec<Vec<usize>> = y.components().iter().map(|c| component_code(y, c)).collect();
    codes.sort();
    CanonicalForm(codes)
}

/// Canonical form of `z` relative to the images of a base surface's vertices.
pub fn rooted_canonical_form(z: &TiledSurface, roots: &[usize]) -> CanonicalForm {
    let (code, num) = encode_from(z, roots);
    let root_code: Vec<usize> = roots.iter().map(|&r| num[r]).collect();
    let mut rest: Vec<Vec<usize>> = z
        .components()
        .iter()
        .filter(|c| num[c[0]] == NONE)
        .map(|c| component_code(z, c))
        .collect();
    rest.sort();
    let mut all = vec![root_code, code];
    all.extend(rest);
    CanonicalForm(all)
}

pub fn is_isomorphic(a: &TiledSurface, b: &TiledSurface) -> bool {
    a.vertex_count() == b.vertex_count() && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiled::{octagon_disc, one_vertex_surface, point};

    fn loop_a() -> TiledSurface {
        let mut y = TiledSurface::new(1);
        y.add_edge(0, 0, 0).unwrap();
        y
    }

    #[test]
    fn morphisms_from_point() {
        let z = octagon_disc();
        assert_eq!(morphisms(&point(), &z).len(), 8);
    }

    #[test]
    fn loop_into_closed_surface() {
        assert_eq!(morphisms(&loop_a(), &one_vertex_surface()).len(), 1);
        assert_eq!(morphisms(&octagon_disc(), &one_vertex_surface()).len(), 1);
    }

    #[test]
    fn identity_is_embedding() {
        let y = octagon_disc();
        assert!(embeddings(&y, &y).contains(&Morphism::identity(8)));
    }

    #[test]
    fn quotient_counts() {
        assert_eq!(quotients(&loop_a()).len(), 1);
        let two = loop_a().disjoint_union(&loop_a());
        assert_eq!(quotients(&two).len(), 2);
        let mut a2 = TiledSurface::new(2);
        a2.add_edge(0, 0, 1).unwrap();
        a2.add_edge(0, 1, 0).unwrap();
        assert_eq!(quotients(&a2).len(), 2);
    }

    #[test]
    fn octagon_disc_quotients_are_valid_images() {
        let y = octagon_disc();
        let qs = quotients(&y);
        assert!(qs.iter().any(|(z, _)| z.vertex_count() == 7 && z.edge_count() == 8));
        assert!(qs.iter().any(|(z, _)| is_isomorphic(z, &one_vertex_surface())));
        for (z, m) in &qs {
            assert!(m.is_morphism(&y, z));
        }
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let y = octagon_disc();
        let perm: Vec<usize> = vec![3, 5, 0, 7, 1, 2, 6, 4];
        let z = y.image(&perm, 8).unwrap();
        assert!(is_isomorphic(&y, &z));
        assert!(!is_isomorphic(&y, &loop_a()));
    }
}
