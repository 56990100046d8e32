use crate::words::{relator, RANK, RELATOR_LEN};

use super::TiledSurface;

/// A single vertex with no edges.
pub fn point() -> TiledSurface {
    TiledSurface::new(1)
}

/// Two vertices joined by one edge labelled `gen`.
pub fn single_edge(gen: usize) -> TiledSurface {
    let mut y = TiledSurface::new(2);
    y.add_edge(gen, 0, 1).expect("fresh edge");
    y
}

/// A single octagon on eight distinct vertices; its relator reading starts at 0.
pub fn octagon_disc() -> TiledSurface {
    let mut y = TiledSurface::new(RELATOR_LEN);
    for (i, l) in relator().iter().enumerate() {
        let j = (i + 1) % RELATOR_LEN;
        let (u, v) = if l.pos { (i, j) } else { (j, i) };
        y.add_edge(l.gen as usize, u, v).expect("fresh edge");
    }
    y.add_octagon(0).expect("closed relator path");
    y
}

/// The closed surface with one vertex, four loops and one octagon.
pub fn one_vertex_surface() -> TiledSurface {
    let mut y = TiledSurface::new(1);
    for g in 0..RANK {
        y.add_edge(g, 0, 0).expect("fresh loop");
    }
    y.add_octagon(0).expect("closed relator path");
    y
}
