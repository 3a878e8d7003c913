//! Standard representatives of coordinates as unions of normal arcs.
//!
//! In each triangle the arcs of the standard hexagon system are laid out
//! along every slot in counter-clockwise order: first the corner arcs around
//! the slot's starting corner, then the arcs running to the opposite
//! boundary side, then the corner arcs around the ending corner. A strand at
//! local position `p` on a slot continues at local position `x - 1 - p` on
//! the slot across the edge, since every gluing reverses orientation.

use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::coords::{validate, CoordError, TCoord};
use crate::hexagon::{hex_from_coord, in_triangle_set, HexArcType, HexError};
use crate::surface::{IdealTriangulation, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error(transparent)]
    Hex(#[from] HexError),
    #[error("malformed curve system: {0}")]
    Malformed(String),
}

/// Where a normal arc ends: a strand position on a slot, or a point on the
/// boundary side at a corner (flat corner index `3t + k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Endpoint {
    Edge { slot: Slot, pos: usize },
    Boundary { corner: usize, pos: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalArc {
    pub triangle: usize,
    pub kind: HexArcType,
    pub ends: [Endpoint; 2],
}

impl NormalArc {
    pub fn slot_end(&self, e: usize) -> Option<(Slot, usize)> {
        match self.ends[e] {
            Endpoint::Edge { slot, pos } => Some((slot, pos)),
            Endpoint::Boundary { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Component {
    /// Cyclic sequence of arc indices.
    Closed(Vec<usize>),
    /// Arc indices from one boundary point to another.
    Arc(Vec<usize>),
    /// A parallel copy of an edge.
    EdgeCopy(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Closed,
    Arc,
}

impl Component {
    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Closed(_) => ComponentKind::Closed,
            _ => ComponentKind::Arc,
        }
    }
}

/// A realized curve system: normal arcs in the triangles plus parallel
/// copies of edges, which are never drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSystem {
    arcs: Vec<NormalArc>,
    by_triangle: Vec<Range<usize>>,
    /// Flat slot `3t + k` to the `(arc, end)` at each local position.
    slots: Vec<Vec<(usize, usize)>>,
    edge_copies: Vec<u64>,
}

impl CurveSystem {
    pub fn arcs(&self) -> &[NormalArc] {
        &self.arcs
    }

    pub fn arcs_in(&self, triangle: usize) -> Range<usize> {
        self.by_triangle[triangle].clone()
    }

    /// The arc end sitting at local position `pos` of `slot`.
    pub fn at(&self, slot: Slot, pos: usize) -> (usize, usize) {
        self.slots[flat(slot)][pos]
    }

    pub fn strands(&self, slot: Slot) -> usize {
        self.slots[flat(slot)].len()
    }

    pub fn edge_copies(&self) -> &[u64] {
        &self.edge_copies
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() && self.edge_copies.iter().all(|&n| n == 0)
    }
}

fn flat(slot: Slot) -> usize {
    3 * slot.triangle + slot.side
}

/// Realize a valid coordinate as its standard representative.
pub fn standard_representative(tri: &IdealTriangulation, c: &TCoord) -> Result<CurveSystem, CurveError> {
    validate(tri, c)?;
    let tcount = tri.triangle_count();
    let mut arcs = Vec::new();
    let mut by_triangle = Vec::with_capacity(tcount);
    let mut slots: Vec<Vec<(usize, usize)>> = Vec::with_capacity(3 * tcount);
    for t in 0..tcount {
        let h = c.hex_x(tri, t);
        let s = hex_from_coord(&h)?;
        let x = h.x.map(|v| v as usize);
        let start = arcs.len();
        let slot = |k: usize| Slot { triangle: t, side: k };
        for m in 0..3 {
            for j in 0..s.b[m] as usize {
                arcs.push(NormalArc {
                    triangle: t,
                    kind: HexArcType::b(m),
                    ends: [
                        Endpoint::Edge { slot: slot((m + 2) % 3), pos: j },
                        Endpoint::Edge { slot: slot((m + 1) % 3), pos: x[(m + 1) % 3] - 1 - j },
                    ],
                });
            }
        }
        for k in 0..3 {
            let before = s.b[(k + 1) % 3] as usize;
            let n = s.c[k] as usize;
            for j in 0..n {
                arcs.push(NormalArc {
                    triangle: t,
                    kind: HexArcType::c(k),
                    ends: [
                        Endpoint::Edge { slot: slot(k), pos: before + j },
                        Endpoint::Boundary { corner: 3 * t + k, pos: n - 1 - j },
                    ],
                });
            }
        }
        for &n in &x {
            slots.push(vec![(usize::MAX, 0); n]);
        }
        for (a, arc) in arcs.iter().enumerate().skip(start) {
            for (e, end) in arc.ends.iter().enumerate() {
                if let Endpoint::Edge { slot, pos } = *end {
                    slots[flat(slot)][pos] = (a, e);
                }
            }
        }
        by_triangle.push(start..arcs.len());
    }
    Ok(CurveSystem { arcs, by_triangle, slots, edge_copies: c.xp.clone() })
}

/// The arc end across the edge from `(slot, pos)`.
pub fn continue_across(tri: &IdealTriangulation, s: &CurveSystem, slot: Slot, pos: usize) -> (Slot, usize) {
    let other = tri.across(slot);
    (other, s.strands(other) - 1 - pos)
}

/// Read the coordinate back off a curve system.
pub fn coord_of(tri: &IdealTriangulation, s: &CurveSystem) -> Result<TCoord, CurveError> {
    let n = tri.edge_count();
    if s.edge_copies.len() != n || s.slots.len() != 3 * tri.triangle_count() {
        return Err(CurveError::Malformed("size does not match the triangulation".into()));
    }
    let mut x = vec![0u64; n];
    for (e, xe) in x.iter_mut().enumerate() {
        let [p, q] = tri.edge_slots(e);
        let (np, nq) = (s.strands(p), s.strands(q));
        if np != nq {
            return Err(CurveError::Malformed(format!("edge {e} has {np} and {nq} strands on its two sides")));
        }
        *xe = np as u64;
    }
    for (f, list) in s.slots.iter().enumerate() {
        if let Some(pos) = list.iter().position(|&(a, _)| a == usize::MAX) {
            return Err(CurveError::Malformed(format!("slot {f} has no arc at position {pos}")));
        }
    }
    Ok(TCoord { x, xp: s.edge_copies.clone() })
}

/// Connected components, obtained by following strands across edges.
pub fn components(tri: &IdealTriangulation, s: &CurveSystem) -> Vec<Component> {
    let mut seen = vec![false; s.arcs.len()];
    let mut out = Vec::new();
    // from the arc `a`, leave through end `e` until a boundary or `a` again
    let walk = |a: usize, e: usize, seen: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut path = vec![a];
        seen[a] = true;
        let (mut cur, mut exit) = (a, e);
        loop {
            let Some((slot, pos)) = s.arcs[cur].slot_end(exit) else {
                return (path, false);
            };
            let (slot, pos) = continue_across(tri, s, slot, pos);
            let (next, entry) = s.at(slot, pos);
            if next == a {
                return (path, true);
            }
            seen[next] = true;
            path.push(next);
            cur = next;
            exit = 1 - entry;
        }
    };
    for a in 0..s.arcs.len() {
        if seen[a] {
            continue;
        }
        if let Some(b) = s.arcs[a].ends.iter().position(|e| matches!(e, Endpoint::Boundary { .. })) {
            let (path, _) = walk(a, 1 - b, &mut seen);
            out.push(Component::Arc(path));
        }
    }
    for a in 0..s.arcs.len() {
        if !seen[a] {
            let (path, closed) = walk(a, 1, &mut seen);
            debug_assert!(closed);
            out.push(Component::Closed(path));
        }
    }
    for (e, &n) in s.edge_copies.iter().enumerate() {
        for _ in 0..n {
            out.push(Component::EdgeCopy(e));
        }
    }
    out
}

/// Number of corner arcs of the standard system at each corner (flat index
/// `3t + k`), i.e. the number of arcs cutting off that boundary side.
pub fn corner_arc_counts(tri: &IdealTriangulation, c: &TCoord) -> Result<Vec<u64>, CurveError> {
    validate(tri, c)?;
    let mut out = Vec::with_capacity(3 * tri.triangle_count());
    for t in 0..tri.triangle_count() {
        out.extend(hex_from_coord(&c.hex_x(tri, t))?.b);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classes {
    /// Essential 1-submanifold: any valid coordinate.
    pub es: bool,
    /// No component parallel to the boundary.
    pub cs: bool,
    /// Closed curve system: only closed components, none boundary parallel.
    pub cs0: bool,
}

/// A boundary component carries a parallel loop exactly when every corner
/// around it has a corner arc.
pub fn classify_class(tri: &IdealTriangulation, c: &TCoord) -> Result<Classes, CurveError> {
    let corners = corner_arc_counts(tri, c)?;
    let no_peripheral = tri
        .boundaries()
        .iter()
        .all(|b| b.iter().map(|&k| corners[k]).min().unwrap_or(0) == 0);
    let closed = c.xp.iter().all(|&v| v == 0)
        && (0..tri.triangle_count()).all(|t| in_triangle_set(c.hex_x(tri, t).x));
    Ok(Classes { es: true, cs: no_peripheral, cs0: no_peripheral && closed })
}
