use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{relator, Letter, GENUS, RANK, RELATOR_LEN};

use super::TiledSurface;

/// Edge colours used by the DOT export, indexed by generator.
pub const DOT_COLORS: [&str; RANK] = ["red", "blue", "darkgreen", "orange"];

/// Serialised form of a tiled surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub genus: usize,
    pub vertices: usize,
    pub edges: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default)]
    pub octagons: Vec<Vec<(usize, String, i32)>>,
}

fn gen_name(g: usize) -> String {
    Letter::new(g as u8, true).to_char().to_string()
}

impl From<&TiledSurface> for SurfaceJson {
    fn from(y: &TiledSurface) -> Self {
        let edges = (0..RANK)
            .map(|g| (gen_name(g), y.edges(g).into_iter().map(|(u, v)| [u, v]).collect()))
            .collect();
        let octagons = y
            .octagons()
            .map(|o| {
                let vs = y.octagon_vertices(o).expect("stored octagons are closed");
                relator()
                    .iter()
                    .zip(vs)
                    .map(|(l, v)| (v, gen_name(l.gen as usize), if l.pos { 1 } else { -1 }))
                    .collect()
            })
            .collect();
        SurfaceJson { genus: GENUS, vertices: y.vertex_count(), edges, octagons }
    }
}

impl TryFrom<&SurfaceJson> for TiledSurface {
    type Error = Error;

    fn try_from(j: &SurfaceJson) -> Result<Self> {
        if j.genus != GENUS {
            return Err(Error::Invalid(format!("unsupported genus {}", j.genus)));
        }
        let mut y = TiledSurface::new(j.vertices);
        for (name, list) in &j.edges {
            let g = generator_index(name)?;
            for &[u, v] in list {
                y.add_edge(g, u, v)?;
            }
        }
        let r = relator();
        for oct in &j.octagons {
            if oct.len() != RELATOR_LEN {
                return Err(Error::Invalid(format!("octagon with {} sides", oct.len())));
            }
            let letters: Vec<Letter> = oct
                .iter()
                .map(|(_, name, sign)| Ok(Letter::new(generator_index(name)? as u8, *sign > 0)))
                .collect::<Result<_>>()?;
            let rot = (0..RELATOR_LEN)
                .find(|&k| (0..RELATOR_LEN).all(|i| letters[(k + i) % RELATOR_LEN] == r[i]))
                .ok_or_else(|| Error::Invalid("octagon does not read the relator".into()))?;
            let v0 = oct[rot].0;
            let vs = y
                .octagon_vertices(v0)
                .ok_or_else(|| Error::Invalid(format!("no closed relator path starts at vertex {}", v0)))?;
            for i in 0..RELATOR_LEN {
                if vs[i] != oct[(rot + i) % RELATOR_LEN].0 {
                    return Err(Error::Invalid(format!("octagon vertices disagree with edges at vertex {}", v0)));
                }
            }
            y.add_octagon(v0)?;
        }
        Ok(y)
    }
}

fn generator_index(name: &str) -> Result<usize> {
    let mut cs = name.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => match Letter::from_char(c) {
            Some(l) if l.pos => Ok(l.gen as usize),
            _ => Err(Error::Invalid(format!("unknown edge label {:?}", name))),
        },
        _ => Err(Error::Invalid(format!("unknown edge label {:?}", name))),
    }
}

impl TiledSurface {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SurfaceJson::from(self)).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: SurfaceJson = serde_json::from_str(text)?;
        let y = TiledSurface::try_from(&j)?;
        y.validate()?;
        Ok(y)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph tiled {\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  {};", v);
        }
        for g in 0..RANK {
            for (u, v) in self.edges(g) {
                let _ = writeln!(s, "  {} -> {} [label=\"{}\", color={}];", u, v, gen_name(g), DOT_COLORS[g]);
            }
        }
        for o in self.octagons() {
            let vs = self.octagon_vertices(o).expect("stored octagons are closed");
            let list: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "  // octagon {}", list.join(" "));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiled::{octagon_disc, one_vertex_surface};

    #[test]
    fn json_round_trip() {
        for y in [octagon_disc(), one_vertex_surface()] {
            let back = TiledSurface::from_json(&y.to_json()).unwrap();
            assert_eq!(back, y);
        }
    }

    #[test]
    fn rotated_octagon_accepted() {
        let y = octagon_disc();
        let mut j = SurfaceJson::from(&y);
        j.octagons[0].rotate_left(3);
        assert_eq!(TiledSurface::try_from(&j).unwrap(), y);
    }

    #[test]
    fn dot_mentions_octagon() {
        assert!(octagon_disc().to_dot().contains("// octagon 0 1 2 3 4 5 6 7"));
    }
}
