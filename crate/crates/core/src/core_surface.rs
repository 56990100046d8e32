//! Core surfaces of subgroups: automatic construction for cyclic subgroups,
//! loading and checking for supplied surfaces.

use std::path::Path;

use crate::error::{Error, Result};
use crate::tiled::{BoundaryCycle, TiledSurface};
use crate::words::{dehn_reduce, relator_letter, relator_position, CyclicWord, Word, RELATOR_LEN};

/// Annex the octagon whose relator reading visits `anchor` at position `pos`,
/// following existing edges from both ends and adding fresh vertices in
/// between. Returns the octagon's start vertex.
pub fn annex(y: &mut TiledSurface, anchor: usize, pos: usize) -> Result<usize> {
    let pos = pos % RELATOR_LEN;
    // verts[k] = vertex at relator position pos + k (k may be negative, shifted by 8).
    let mut fwd = vec![anchor];
    while fwd.len() <= RELATOR_LEN {
        let l = relator_letter(pos + fwd.len() - 1);
        match y.follow(*fwd.last().unwrap(), l) {
            Some(w) => fwd.push(w),
            None => break,
        }
    }
    let mut bwd = vec![anchor];
    if fwd.len() <= RELATOR_LEN {
        while fwd.len() - 1 + bwd.len() - 1 < RELATOR_LEN {
            let l = relator_letter(pos + RELATOR_LEN - bwd.len());
            match y.follow(*bwd.last().unwrap(), l.inv()) {
                Some(w) => bwd.push(w),
                None => break,
            }
        }
    }
    let f = fwd.len() - 1;
    let b = bwd.len() - 1;
    let mut path = [usize::MAX; RELATOR_LEN + 1];
    for (k, &v) in fwd.iter().enumerate() {
        path[k] = v;
    }
    for (k, &v) in bwd.iter().enumerate() {
        let idx = RELATOR_LEN - k;
        if path[idx] != usize::MAX && path[idx] != v {
            return Err(Error::Invalid(format!("annexed octagon does not close at vertex {}", v)));
        }
        path[idx] = v;
    }
    if f + b < RELATOR_LEN {
        for k in f + 1..RELATOR_LEN - b {
            path[k] = y.add_vertex();
        }
        for k in f..RELATOR_LEN - b {
            let l = relator_letter(pos + k);
            let (u, v) = if l.pos { (path[k], path[k + 1]) } else { (path[k + 1], path[k]) };
            y.add_edge(l.gen as usize, u, v)?;
        }
    }
    if path[0] != path[RELATOR_LEN] {
        return Err(Error::Invalid(format!("annexed octagon does not close at vertex {}", path[0])));
    }
    let start = path[(RELATOR_LEN - pos) % RELATOR_LEN];
    if !y.has_octagon(start) {
        y.add_octagon(start)?;
    }
    Ok(start)
}

/// Vertex and relator position at the beginning of a boundary block.
pub fn block_anchor(cycle: &BoundaryCycle, block: (usize, usize)) -> (usize, usize) {
    (cycle.vertices[block.0], relator_position(cycle.letters[block.0]))
}

/// The closed path reading `letters`, laid down as edges `i -> i+1`, with no octagons.
pub fn word_cycle(letters: &[crate::words::Letter]) -> Result<TiledSurface> {
    let n = letters.len();
    let mut y = TiledSurface::new(n);
    for (i, l) in letters.iter().enumerate() {
        let j = (i + 1) % n;
        let (u, v) = if l.pos { (i, j) } else { (j, i) };
        y.add_edge(l.gen as usize, u, v)?;
    }
    Ok(y)
}

/// Core surface of the cyclic subgroup generated by `w`, with basepoint 0.
pub fn core_cyclic(w: &Word) -> Result<(TiledSurface, usize)> {
    let red = dehn_reduce(&CyclicWord::from_word(w));
    if red.is_empty() {
        return Err(Error::Domain("the word is trivial in the surface group".into()));
    }
    let letters = red.letters();
    let len = letters.len();
    let mut y = word_cycle(&letters)?;
    let rounds = 6 * y.boundary_length() as usize + len;
    for _ in 0..=rounds {
        let cycles = y.boundary_cycles();
        let lens: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
        if lens != [len, len] {
            return Err(Error::Internal(format!("annexation changed the boundary lengths to {:?}", lens)));
        }
        if let Some(c) = cycles.iter().find(|c| c.flags().has_half_chain) {
            for b in c.blocks() {
                let (v, p) = block_anchor(c, b);
                annex(&mut y, v, p)?;
            }
            continue;
        }
        let half = cycles
            .iter()
            .find_map(|c| c.blocks().into_iter().find(|b| b.1 == 4).map(|b| block_anchor(c, b)));
        match half {
            Some((v, p)) => {
                annex(&mut y, v, p)?;
            }
            None => {
                y.validate()?;
                return Ok((y, 0));
            }
        }
    }
    Err(Error::Internal("strongly boundary reduced closure did not terminate".into()))
}

pub fn load_core(path: &Path) -> Result<TiledSurface> {
    TiledSurface::load(path)
}

/// Necessary conditions for a core surface: valid, connected, nonempty and
/// strongly boundary reduced.
pub fn verify_core(y: &TiledSurface) -> Result<()> {
    y.validate()?;
    if y.vertex_count() == 0 {
        return Err(Error::Invalid("not connected: the surface is empty".into()));
    }
    if !y.is_connected() {
        return Err(Error::Invalid("not connected".into()));
    }
    if !y.is_strongly_boundary_reduced() {
        return Err(Error::Invalid("not strongly boundary reduced".into()));
    }
    Ok(())
}

/// Euler characteristic of the subgroup whose core surface is `y`.
pub fn euler_char(y: &TiledSurface) -> i64 {
    y.euler_char()
}

/// Core surface of the subgroup generated by `a` and `b`: a one-holed torus.
pub fn core_ab() -> TiledSurface {
    let mut y = TiledSurface::new(4);
    for (g, u, v) in [(0, 0, 0), (1, 0, 0), (2, 0, 1), (3, 1, 2), (2, 3, 2), (3, 0, 3)] {
        y.add_edge(g, u, v).expect("fixture edges are consistent");
    }
    y.add_octagon(0).expect("fixture octagon is closed");
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiled::{is_isomorphic, octagon_disc};
    use crate::words::parse_word;

    fn core(s: &str) -> TiledSurface {
        core_cyclic(&parse_word(s).unwrap()).unwrap().0
    }

    fn shape(y: &TiledSurface) -> (usize, usize, usize) {
        (y.vertex_count(), y.edge_count(), y.octagon_count())
    }

    #[test]
    fn cyclic_cores() {
        assert_eq!(shape(&core("a")), (1, 1, 0));
        assert_eq!(shape(&core("aba^-2b^-1c")), (12, 14, 2));
        assert_eq!(shape(&core("[a,b]")), (7, 8, 1));
        for s in ["a", "ab", "a^2", "[a,b]", "abab", "aba^-2b^-1c", "a^6"] {
            let y = core(s);
            assert!(verify_core(&y).is_ok(), "{}", s);
            assert_eq!(y.euler_char(), 0);
        }
    }

    #[test]
    fn conjugate_words_give_isomorphic_cores() {
        assert!(is_isomorphic(&core("aba^-2b^-1c"), &core("cd^-1c^-1a^-1dc")));
        assert!(is_isomorphic(&core("ab"), &core("ba")));
        assert!(is_isomorphic(&core("aba^-2b^-1c"), &core("CbaaBA")));
    }

    #[test]
    fn fixtures() {
        let y = core_ab();
        assert!(verify_core(&y).is_ok());
        assert_eq!(euler_char(&y), -1);
        assert!(verify_core(&octagon_disc()).is_ok());
    }

    #[test]
    fn trivial_word_rejected() {
        assert!(core_cyclic(&parse_word("[a,b][c,d]").unwrap()).is_err());
    }
}
