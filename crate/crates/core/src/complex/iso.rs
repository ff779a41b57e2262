//! Isomorphism testing for finite set systems.
//!
//! A set system (points plus a family of blocks) is turned into its bipartite
//! incidence graph. Both graphs are colour-refined jointly so that colour ids are
//! comparable; points are then individualized one at a time with backtracking
//! until the colouring is discrete, and the induced point bijection is checked
//! against the blocks.

use std::collections::{BTreeMap, BTreeSet};

use super::{CubicalComplex, SimplicialComplex};

/// Points `0..points` and a family of blocks (sorted point lists).
#[derive(Clone, Debug)]
pub struct SetSystem {
    pub points: usize,
    pub blocks: Vec<Vec<usize>>,
}

struct Incidence {
    points: usize,
    adj: Vec<Vec<usize>>,
}

impl Incidence {
    fn new(s: &SetSystem) -> Self {
        let mut adj = vec![Vec::new(); s.points + s.blocks.len()];
        for (b, block) in s.blocks.iter().enumerate() {
            for &p in block {
                adj[p].push(s.points + b);
                adj[s.points + b].push(p);
            }
        }
        Incidence {
            points: s.points,
            adj,
        }
    }

    fn initial_colours(&self) -> Vec<u32> {
        (0..self.adj.len())
            .map(|v| if v < self.points { 0 } else { 1 + self.adj[v].len() as u32 })
            .collect()
    }
}

fn distinct(c: &[u32]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

/// Refines both colourings to a common stable partition. Returns false as soon
/// as the colour histograms disagree.
fn refine(g: &Incidence, ca: &mut Vec<u32>, h: &Incidence, cb: &mut Vec<u32>) -> bool {
    let mut classes = distinct(ca);
    loop {
        let sig = |graph: &Incidence, col: &[u32]| -> Vec<(u32, Vec<u32>)> {
            (0..graph.adj.len())
                .map(|v| {
                    let mut n: Vec<u32> = graph.adj[v].iter().map(|&w| col[w]).collect();
                    n.sort_unstable();
                    (col[v], n)
                })
                .collect()
        };
        let sa = sig(g, ca);
        let sb = sig(h, cb);
        let mut ids: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            ids.entry(s).or_insert(0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i as u32;
        }
        let na: Vec<u32> = sa.iter().map(|s| ids[s]).collect();
        let nb: Vec<u32> = sb.iter().map(|s| ids[s]).collect();
        let mut hist = vec![0i64; ids.len()];
        for &c in &na {
            hist[c as usize] += 1;
        }
        for &c in &nb {
            hist[c as usize] -= 1;
        }
        if hist.iter().any(|&x| x != 0) {
            return false;
        }
        *ca = na;
        *cb = nb;
        let now = ids.len();
        if now == classes {
            return true;
        }
        classes = now;
    }
}

fn search(
    g: &Incidence,
    ca: Vec<u32>,
    h: &Incidence,
    cb: Vec<u32>,
    a: &SetSystem,
    b_blocks: &BTreeSet<Vec<usize>>,
) -> Option<Vec<usize>> {
    let mut class_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &ca[..g.points] {
        *class_size.entry(c).or_insert(0) += 1;
    }
    let target = class_size
        .iter()
        .filter(|&(_, &n)| n > 1)
        .min_by_key(|&(&c, &n)| (n, c))
        .map(|(&c, _)| c);

    let Some(colour) = target else {
        // Discrete on points: the bijection is forced.
        let mut by_colour = BTreeMap::new();
        for p in 0..h.points {
            by_colour.insert(cb[p], p);
        }
        let map: Vec<usize> = (0..g.points).map(|p| by_colour[&ca[p]]).collect();
        let ok = a.blocks.iter().all(|blk| {
            let mut img: Vec<usize> = blk.iter().map(|&p| map[p]).collect();
            img.sort_unstable();
            b_blocks.contains(&img)
        });
        return ok.then_some(map);
    };

    let fresh = ca.iter().chain(cb.iter()).max().copied().unwrap_or(0) + 1;
    let x = (0..g.points).find(|&p| ca[p] == colour)?;
    for y in (0..h.points).filter(|&p| cb[p] == colour) {
        let mut na = ca.clone();
        let mut nb = cb.clone();
        na[x] = fresh;
        nb[y] = fresh;
        if refine(g, &mut na, h, &mut nb) {
            if let Some(map) = search(g, na, h, nb, a, b_blocks) {
                return Some(map);
            }
        }
    }
    None
}

/// Returns a point bijection `map[a_point] = b_point` carrying the blocks of `a`
/// onto the blocks of `b`, or `None`.
pub fn find_set_isomorphism(a: &SetSystem, b: &SetSystem) -> Option<Vec<usize>> {
    if a.points != b.points || a.blocks.len() != b.blocks.len() {
        return None;
    }
    let sizes = |s: &SetSystem| {
        let mut v: Vec<usize> = s.blocks.iter().map(|b| b.len()).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return None;
    }
    let b_blocks: BTreeSet<Vec<usize>> = b
        .blocks
        .iter()
        .map(|blk| {
            let mut s = blk.clone();
            s.sort_unstable();
            s
        })
        .collect();
    if b_blocks.len() != b.blocks.len() {
        return None;
    }
    let g = Incidence::new(a);
    let h = Incidence::new(b);
    let mut ca = g.initial_colours();
    let mut cb = h.initial_colours();
    if !refine(&g, &mut ca, &h, &mut cb) {
        return None;
    }
    search(&g, ca, &h, cb, a, &b_blocks)
}

fn simplicial_system(k: &SimplicialComplex) -> (SetSystem, Vec<usize>) {
    let used = k.used_vertices();
    let mut pos = vec![usize::MAX; k.vertex_count()];
    for (i, &v) in used.iter().enumerate() {
        pos[v] = i;
    }
    let blocks = k
        .facets()
        .iter()
        .map(|f| f.iter().map(|&v| pos[v]).collect())
        .collect();
    (
        SetSystem {
            points: used.len(),
            blocks,
        },
        used,
    )
}

/// Facet-preserving bijection between the vertices used by `a` and by `b`.
pub fn isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> Option<BTreeMap<usize, usize>> {
    if a.f_vector() != b.f_vector() {
        return None;
    }
    let (sa, ua) = simplicial_system(a);
    let (sb, ub) = simplicial_system(b);
    let map = find_set_isomorphism(&sa, &sb)?;
    Some(map.iter().enumerate().map(|(i, &j)| (ua[i], ub[j])).collect())
}

/// Isomorphism of cube complexes, as a bijection between vertex indices.
///
/// Every cell is recorded as the set of its corners, so a bijection carrying
/// these sets onto each other preserves the whole face poset.
pub fn cubical_isomorphic(a: &CubicalComplex, b: &CubicalComplex) -> Option<Vec<usize>> {
    if a.f_vector() != b.f_vector() {
        return None;
    }
    find_set_isomorphism(&a.corner_system(), &b.corner_system())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra_boundary(labels: [usize; 4]) -> SimplicialComplex {
        let mut facets = Vec::new();
        for skip in 0..4 {
            facets.push(
                (0..4)
                    .filter(|&i| i != skip)
                    .map(|i| labels[i])
                    .collect::<Vec<_>>(),
            );
        }
        SimplicialComplex::new(4, facets).unwrap()
    }

    #[test]
    fn relabeled_tetrahedra_match() {
        let a = tetra_boundary([0, 1, 2, 3]);
        let b = tetra_boundary([3, 0, 2, 1]);
        assert!(isomorphic(&a, &b).is_some());
    }

    #[test]
    fn triangle_vs_path() {
        let tri = SimplicialComplex::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let path = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        assert!(isomorphic(&tri, &path).is_none());
        assert!(isomorphic(&path, &tri).is_none());
    }

    #[test]
    fn hexagon_vs_two_triangles() {
        // Same f-vector and degree sequence, so refinement alone cannot separate them.
        let hex = SimplicialComplex::new(
            6,
            (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        )
        .unwrap();
        let two = SimplicialComplex::new(
            6,
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap();
        assert!(isomorphic(&hex, &two).is_none());
        assert!(isomorphic(&hex, &hex).is_some());
    }

    #[test]
    fn bijection_is_facet_preserving() {
        let a = tetra_boundary([0, 1, 2, 3]);
        let b = tetra_boundary([2, 3, 1, 0]);
        let map = isomorphic(&a, &b).unwrap();
        for f in a.facets() {
            let mut img: Vec<usize> = f.iter().map(|v| map[v]).collect();
            img.sort();
            assert!(b.facets().contains(&img));
        }
    }
}
