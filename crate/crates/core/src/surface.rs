//! Combinatorial ideal triangulations of compact orientable surfaces with
//! boundary.
//!
//! A triangulation is a list of triangles, each an ordered triple of edge
//! slots listed counter-clockwise, together with the perfect matching on slots
//! implied by repeated edge ids. Truncating the ideal vertices turns every
//! triangle into a hexagon whose A-sides lie along the edges and whose
//! B-sides (the corners) lie along the boundary.
//!
//! Conventions used throughout the crate:
//!
//! * slot `k` of a triangle runs counter-clockwise from corner `k + 1` to
//!   corner `k + 2` (indices mod 3), so corner `k` is the B-side opposite
//!   slot `k`;
//! * gluings reverse orientation, so the same edge read from its two slots
//!   runs in opposite directions;
//! * corner `k` of triangle `t` has the flat index `3 * t + k`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("surface of genus {genus} with {boundary} boundary components has non-negative Euler characteristic")]
    NonNegativeEuler { genus: u32, boundary: u32 },
    #[error("surface must have at least one boundary component")]
    NoBoundary,
    #[error("expected {expected} triangles, found {found}")]
    TriangleCount { expected: usize, found: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge id {edge} is out of range (ids must be 0..{count})")]
    EdgeIdOutOfRange { edge: usize, count: usize },
    #[error("edge {edge} labels {occurrences} slots; every edge must label exactly two")]
    UnmatchedEdge { edge: usize, occurrences: usize },
    #[error("glued complex is disconnected")]
    Disconnected,
    #[error("gluing is not orientable (conflict at edge {edge})")]
    NonOrientable { edge: usize },
    #[error("traced {found} boundary cycles, expected {expected}")]
    BoundaryCount { expected: usize, found: usize },
}

/// Topological type of a compact orientable surface with boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub boundary: u32,
}

impl SurfaceSpec {
    pub fn new(genus: u32, boundary: u32) -> Result<Self, SurfaceError> {
        if boundary == 0 {
            return Err(SurfaceError::NoBoundary);
        }
        let spec = SurfaceSpec { genus, boundary };
        if spec.euler_characteristic() >= 0 {
            return Err(SurfaceError::NonNegativeEuler { genus, boundary });
        }
        Ok(spec)
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    /// Number of edges of an ideal triangulation, `6g - 6 + 3r`.
    pub fn edge_count(&self) -> usize {
        (6 * self.genus as i64 - 6 + 3 * self.boundary as i64).max(0) as usize
    }

    /// Number of triangles, `4g - 4 + 2r`.
    pub fn triangle_count(&self) -> usize {
        (4 * self.genus as i64 - 4 + 2 * self.boundary as i64).max(0) as usize
    }

    /// Real dimension of the measured-lamination cone, `6g + 2r - 6`.
    pub fn lamination_dimension(&self) -> usize {
        (6 * self.genus as i64 + 2 * self.boundary as i64 - 6).max(0) as usize
    }
}

/// A side of a triangle: `side` is the slot index 0..3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub triangle: usize,
    pub side: usize,
}

/// Input description of a gluing. Edge ids must be `0..N` and each must
/// appear in exactly two slots. Edges listed in `twisted` are glued
/// orientation-preservingly relative to the listed slot orders; such a
/// gluing is accepted only if flipping some triangles makes it orientable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingData {
    pub triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twisted: Vec<usize>,
}

/// JSON document form: `{"genus": g, "boundary": r, "triangles": [[e,e,e], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub genus: u32,
    pub boundary: u32,
    pub triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub twisted: Vec<usize>,
}

/// A validated ideal triangulation. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    spec: SurfaceSpec,
    triangles: Vec<[usize; 3]>,
    edge_slots: Vec<[Slot; 2]>,
    corner_boundary: Vec<usize>,
    boundaries: Vec<Vec<usize>>,
}

impl IdealTriangulation {
    pub fn spec(&self) -> SurfaceSpec {
        self.spec
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_slots.len()
    }

    pub fn corner_count(&self) -> usize {
        3 * self.triangles.len()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundaries.len()
    }

    /// Edge ids of a triangle, by slot.
    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edge_at(&self, slot: Slot) -> usize {
        self.triangles[slot.triangle][slot.side]
    }

    /// The two slots carrying an edge. The first one is the edge's
    /// reference ("plus") side: positions along the edge are measured
    /// counter-clockwise in that triangle.
    pub fn edge_slots(&self, edge: usize) -> [Slot; 2] {
        self.edge_slots[edge]
    }

    pub fn is_plus_slot(&self, slot: Slot) -> bool {
        self.edge_slots[self.edge_at(slot)][0] == slot
    }

    /// The slot glued to `slot`.
    pub fn across(&self, slot: Slot) -> Slot {
        let [a, b] = self.edge_slots[self.edge_at(slot)];
        if a == slot {
            b
        } else {
            a
        }
    }

    /// Boundary component carrying corner `corner` (flat index).
    pub fn corner_boundary(&self, corner: usize) -> usize {
        self.corner_boundary[corner]
    }

    /// Corners of each boundary component, in the cyclic order met when
    /// walking along that boundary.
    pub fn boundaries(&self) -> &[Vec<usize>] {
        &self.boundaries
    }

    /// The two corners flanking slot `side` of triangle `t`: the B-sides
    /// adjacent to that A-side.
    pub fn flanking_corners(&self, slot: Slot) -> [usize; 2] {
        let base = 3 * slot.triangle;
        [base + (slot.side + 1) % 3, base + (slot.side + 2) % 3]
    }

    /// Document form (always untwisted after construction).
    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            genus: self.spec.genus,
            boundary: self.spec.boundary,
            triangles: self.triangles.clone(),
            twisted: Vec::new(),
        }
    }
}

/// Next corner met when walking along the boundary from `corner`.
fn next_corner(triangles: &[[usize; 3]], edge_slots: &[[Slot; 2]], corner: usize) -> usize {
    let (t, k) = (corner / 3, corner % 3);
    let out = Slot { triangle: t, side: (k + 2) % 3 };
    let [a, b] = edge_slots[triangles[t][out.side]];
    let other = if a == out { b } else { a };
    3 * other.triangle + (other.side + 2) % 3
}

/// Validates gluing data and builds the triangulation.
pub fn build_triangulation(
    spec: SurfaceSpec,
    gluing: &GluingData,
) -> Result<IdealTriangulation, SurfaceError> {
    let spec = SurfaceSpec::new(spec.genus, spec.boundary)?;
    let t_count = gluing.triangles.len();
    if t_count != spec.triangle_count() {
        return Err(SurfaceError::TriangleCount { expected: spec.triangle_count(), found: t_count });
    }
    let n_expected = spec.edge_count();
    let mut occurrences: Vec<Vec<Slot>> = vec![Vec::new(); n_expected];
    for (t, tri) in gluing.triangles.iter().enumerate() {
        for (side, &e) in tri.iter().enumerate() {
            if e >= n_expected {
                // distinguish "too many edges" from a stray id
                let distinct = {
                    let mut ids: Vec<usize> = gluing.triangles.iter().flatten().copied().collect();
                    ids.sort_unstable();
                    ids.dedup();
                    ids.len()
                };
                if distinct != n_expected {
                    return Err(SurfaceError::EdgeCount { expected: n_expected, found: distinct });
                }
                return Err(SurfaceError::EdgeIdOutOfRange { edge: e, count: n_expected });
            }
            occurrences[e].push(Slot { triangle: t, side });
        }
    }
    for (e, occ) in occurrences.iter().enumerate() {
        if occ.len() != 2 {
            return Err(SurfaceError::UnmatchedEdge { edge: e, occurrences: occ.len() });
        }
    }

    // Propagate orientations across the matching.
    let mut twisted = vec![false; n_expected];
    for &e in &gluing.twisted {
        if e >= n_expected {
            return Err(SurfaceError::EdgeIdOutOfRange { edge: e, count: n_expected });
        }
        twisted[e] = true;
    }
    // sign[t1] = sign[t0] xor twisted[e] for every edge
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); t_count];
    for (e, occ) in occurrences.iter().enumerate() {
        let (t0, t1) = (occ[0].triangle, occ[1].triangle);
        if t0 == t1 {
            if twisted[e] {
                return Err(SurfaceError::NonOrientable { edge: e });
            }
            continue;
        }
        adjacency[t0].push((t1, e));
        adjacency[t1].push((t0, e));
    }
    let mut sign: Vec<Option<bool>> = vec![None; t_count];
    let mut queue = VecDeque::new();
    if t_count > 0 {
        sign[0] = Some(true);
        queue.push_back(0);
    }
    while let Some(t) = queue.pop_front() {
        let s = sign[t].expect("queued triangles are signed");
        for &(u, e) in &adjacency[t] {
            let want = s ^ twisted[e];
            match sign[u] {
                None => {
                    sign[u] = Some(want);
                    queue.push_back(u);
                }
                Some(v) if v != want => return Err(SurfaceError::NonOrientable { edge: e }),
                Some(_) => {}
            }
        }
    }
    if sign.iter().any(Option::is_none) {
        return Err(SurfaceError::Disconnected);
    }

    // Reverse the slot order of negatively oriented triangles.
    let triangles: Vec<[usize; 3]> = gluing
        .triangles
        .iter()
        .zip(&sign)
        .map(|(tri, s)| if s == &Some(true) { *tri } else { [tri[0], tri[2], tri[1]] })
        .collect();

    let mut edge_slots = vec![[Slot { triangle: 0, side: 0 }; 2]; n_expected];
    let mut filled = vec![0usize; n_expected];
    for (t, tri) in triangles.iter().enumerate() {
        for (side, &e) in tri.iter().enumerate() {
            edge_slots[e][filled[e]] = Slot { triangle: t, side };
            filled[e] += 1;
        }
    }

    let m = 3 * t_count;
    let mut corner_boundary = vec![usize::MAX; m];
    let mut boundaries = Vec::new();
    for start in 0..m {
        if corner_boundary[start] != usize::MAX {
            continue;
        }
        let id = boundaries.len();
        let mut cycle = Vec::new();
        let mut c = start;
        while corner_boundary[c] == usize::MAX {
            corner_boundary[c] = id;
            cycle.push(c);
            c = next_corner(&triangles, &edge_slots, c);
        }
        debug_assert_eq!(c, start, "boundary walk is a permutation");
        boundaries.push(cycle);
    }
    if boundaries.len() != spec.boundary as usize {
        return Err(SurfaceError::BoundaryCount {
            expected: spec.boundary as usize,
            found: boundaries.len(),
        });
    }

    Ok(IdealTriangulation { spec, triangles, edge_slots, corner_boundary, boundaries })
}

pub fn from_doc(doc: &TriangulationDoc) -> Result<IdealTriangulation, SurfaceError> {
    build_triangulation(
        SurfaceSpec { genus: doc.genus, boundary: doc.boundary },
        &GluingData { triangles: doc.triangles.clone(), twisted: doc.twisted.clone() },
    )
}

/// Canonical triangulation: fan triangulation of the polygon with side word
/// `[a1,b1]...[ag,bg] d1 d1^-1 ... d(r-1) d(r-1)^-1`, a `(4g + 2r - 2)`-gon
/// whose vertices fall into exactly `r` classes.
pub fn builtin_triangulation(spec: SurfaceSpec) -> Result<IdealTriangulation, SurfaceError> {
    let spec = SurfaceSpec::new(spec.genus, spec.boundary)?;
    let g = spec.genus as usize;
    let r = spec.boundary as usize;
    let n = 4 * g + 2 * r - 2;

    // Label polygon sides by their pair id.
    let mut side_pair = vec![0usize; n];
    let mut pair = 0;
    for i in 0..g {
        let base = 4 * i;
        side_pair[base] = pair;
        side_pair[base + 2] = pair;
        side_pair[base + 1] = pair + 1;
        side_pair[base + 3] = pair + 1;
        pair += 2;
    }
    for j in 0..r - 1 {
        let base = 4 * g + 2 * j;
        side_pair[base] = pair;
        side_pair[base + 1] = pair;
        pair += 1;
    }

    // Raw labels: polygon pairs first, then diagonal p0-p_i as pair + i - 2.
    enum Raw {
        Side(usize),
        Diagonal(usize),
    }
    let raw_id = |raw: Raw| match raw {
        Raw::Side(s) => side_pair[s],
        Raw::Diagonal(i) => pair + i - 2,
    };
    let mut raw_triangles = Vec::with_capacity(n - 2);
    for i in 1..=n - 2 {
        // corners p0, p_i, p_{i+1}; slot k is opposite corner k
        let slot0 = raw_id(Raw::Side(i));
        let slot1 = if i + 1 == n - 1 { raw_id(Raw::Side(n - 1)) } else { raw_id(Raw::Diagonal(i + 1)) };
        let slot2 = if i == 1 { raw_id(Raw::Side(0)) } else { raw_id(Raw::Diagonal(i)) };
        raw_triangles.push([slot0, slot1, slot2]);
    }

    // Renumber edges by first appearance.
    let mut renumber = vec![usize::MAX; pair + n];
    let mut next = 0;
    let triangles = raw_triangles
        .into_iter()
        .map(|tri| {
            tri.map(|e| {
                if renumber[e] == usize::MAX {
                    renumber[e] = next;
                    next += 1;
                }
                renumber[e]
            })
        })
        .collect();
    build_triangulation(spec, &GluingData { triangles, twisted: Vec::new() })
}

/// Partition of the `3T` corners by boundary component.
pub fn boundary_partition(tri: &IdealTriangulation) -> Vec<Vec<usize>> {
    tri.boundaries
        .iter()
        .map(|cycle| {
            let mut sorted = cycle.clone();
            sorted.sort_unstable();
            sorted
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> GluingData {
        GluingData { triangles: vec![[0, 1, 2], [0, 1, 2]], twisted: vec![] }
    }

    fn pants() -> GluingData {
        GluingData { triangles: vec![[0, 1, 2], [0, 2, 1]], twisted: vec![] }
    }

    #[test]
    fn once_punctured_torus() {
        let tri = build_triangulation(SurfaceSpec::new(1, 1).unwrap(), &torus()).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(tri.triangle_count(), 2);
        assert_eq!(tri.corner_count(), 6);
        assert_eq!(tri.boundaries().len(), 1);
        assert_eq!(tri.boundaries()[0].len(), 6);
    }

    #[test]
    fn pair_of_pants_has_three_two_corner_boundaries() {
        let tri = build_triangulation(SurfaceSpec::new(0, 3).unwrap(), &pants()).unwrap();
        let parts = boundary_partition(&tri);
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn disk_is_rejected() {
        assert_eq!(
            SurfaceSpec::new(0, 1),
            Err(SurfaceError::NonNegativeEuler { genus: 0, boundary: 1 })
        );
        assert_eq!(SurfaceSpec::new(0, 2).unwrap_err(), SurfaceError::NonNegativeEuler { genus: 0, boundary: 2 });
        assert_eq!(SurfaceSpec::new(2, 0), Err(SurfaceError::NoBoundary));
    }

    #[test]
    fn wrong_boundary_count_is_rejected() {
        // the torus gluing read as a pair of pants
        let err = build_triangulation(SurfaceSpec::new(0, 3).unwrap(), &torus()).unwrap_err();
        assert_eq!(err, SurfaceError::BoundaryCount { expected: 3, found: 1 });
    }

    #[test]
    fn count_and_matching_errors() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let one = GluingData { triangles: vec![[0, 1, 2]], twisted: vec![] };
        assert_eq!(
            build_triangulation(spec, &one).unwrap_err(),
            SurfaceError::TriangleCount { expected: 2, found: 1 }
        );
        let unmatched = GluingData { triangles: vec![[0, 0, 0], [1, 2, 2]], twisted: vec![] };
        assert_eq!(
            build_triangulation(spec, &unmatched).unwrap_err(),
            SurfaceError::UnmatchedEdge { edge: 0, occurrences: 3 }
        );
        let four_edges = GluingData { triangles: vec![[0, 1, 2], [3, 1, 2]], twisted: vec![] };
        assert_eq!(
            build_triangulation(spec, &four_edges).unwrap_err(),
            SurfaceError::EdgeCount { expected: 3, found: 4 }
        );
    }

    #[test]
    fn disconnected_gluing_is_rejected() {
        // two self-glued pairs on Sigma_{0,4}: triangles 0,1 and 2,3 never meet
        let spec = SurfaceSpec::new(0, 4).unwrap();
        let g = GluingData {
            triangles: vec![[0, 1, 2], [0, 2, 1], [3, 4, 5], [3, 5, 4]],
            twisted: vec![],
        };
        assert_eq!(build_triangulation(spec, &g).unwrap_err(), SurfaceError::Disconnected);
    }

    #[test]
    fn twisted_gluings() {
        let spec = SurfaceSpec::new(1, 1).unwrap();
        // twisting every edge is fixed by flipping the second triangle
        let all = GluingData { triangles: vec![[0, 1, 2], [0, 1, 2]], twisted: vec![0, 1, 2] };
        let pants = SurfaceSpec::new(0, 3).unwrap();
        let tri = build_triangulation(pants, &all).unwrap();
        assert_eq!(tri.triangle(1), [0, 2, 1]);
        // twisting one edge is not
        let one = GluingData { triangles: vec![[0, 1, 2], [0, 1, 2]], twisted: vec![1] };
        assert!(matches!(
            build_triangulation(spec, &one).unwrap_err(),
            SurfaceError::NonOrientable { .. }
        ));
        // a self-glued twisted edge is a Moebius band
        let spec = SurfaceSpec::new(0, 3).unwrap();
        let mob = GluingData { triangles: vec![[0, 1, 2], [0, 2, 1]], twisted: vec![0] };
        assert!(matches!(
            build_triangulation(spec, &mob).unwrap_err(),
            SurfaceError::NonOrientable { .. }
        ));
    }

    #[test]
    fn builtin_counts() {
        for (g, r) in [(1, 1), (0, 3), (0, 4), (1, 2), (2, 1), (2, 2), (3, 4), (0, 7)] {
            let spec = SurfaceSpec::new(g, r).unwrap();
            let tri = builtin_triangulation(spec).unwrap();
            assert_eq!(tri.edge_count(), spec.edge_count());
            assert_eq!(tri.triangle_count(), spec.triangle_count());
            assert_eq!(
                tri.triangle_count() as i64 - tri.edge_count() as i64,
                spec.euler_characteristic()
            );
            let parts = boundary_partition(&tri);
            assert_eq!(parts.len(), r as usize);
            assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), tri.corner_count());
        }
        let t = builtin_triangulation(SurfaceSpec::new(0, 4).unwrap()).unwrap();
        assert_eq!((t.edge_count(), t.triangle_count()), (6, 4));
        let t = builtin_triangulation(SurfaceSpec::new(2, 1).unwrap()).unwrap();
        assert_eq!((t.edge_count(), t.triangle_count()), (9, 6));
    }

    #[test]
    fn builtin_torus_is_the_standard_gluing() {
        let tri = builtin_triangulation(SurfaceSpec::new(1, 1).unwrap()).unwrap();
        // both triangles carry all three edges in the same cyclic order
        let rot = |t: [usize; 3]| {
            let i = t.iter().position(|&e| e == 0).unwrap();
            [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
        };
        assert_eq!(rot(tri.triangle(0)), rot(tri.triangle(1)));
    }

    #[test]
    fn construction_is_deterministic() {
        let spec = SurfaceSpec::new(2, 2).unwrap();
        let a = builtin_triangulation(spec).unwrap();
        let b = builtin_triangulation(spec).unwrap();
        assert_eq!(a, b);
        let c = from_doc(&a.to_doc()).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn doc_json_shape() {
        let doc: TriangulationDoc =
            serde_json::from_str(r#"{"genus":1,"boundary":1,"triangles":[[0,1,2],[0,1,2]]}"#).unwrap();
        let tri = from_doc(&doc).unwrap();
        assert_eq!(tri.spec(), SurfaceSpec { genus: 1, boundary: 1 });
    }
}
