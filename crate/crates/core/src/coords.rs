//! Surface t-coordinates: one endpoint count and one parallel-copy count per
//! edge of the triangulation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hexagon::{in_triangle_set, HexCoord};
use crate::surface::{IdealTriangulation, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoordError {
    #[error("coordinate has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("x and xp have different lengths ({0} and {1})")]
    Ragged(usize, usize),
    #[error("invalid coordinate: {}", list(.0))]
    Invalid(Vec<Violation>),
    #[error("coordinate is not even")]
    NotEven,
    #[error("distance {0} is odd")]
    OddDistance(u64),
    #[error("coordinate overflow")]
    Overflow,
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

/// A single violated admissibility constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Both `x` and `xp` are non-zero on an edge.
    Complementary { edge: usize, x: u64, xp: u64 },
    /// A triangle whose endpoint counts satisfy the triangle inequalities
    /// but have an odd sum.
    OddTriangle { triangle: usize, x: [u64; 3] },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Complementary { edge, x, xp } => {
                write!(f, "edge {edge}: x = {x} and x' = {xp} are both non-zero")
            }
            Violation::OddTriangle { triangle, x } => write!(
                f,
                "triangle {triangle}: ({}, {}, {}) satisfies the triangle inequalities with odd sum",
                x[0], x[1], x[2]
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TCoord {
    pub x: Vec<u64>,
    pub xp: Vec<u64>,
}

impl fmt::Display for TCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({} | {})", join(&self.x), join(&self.xp))
    }
}

impl TCoord {
    pub fn new(x: Vec<u64>, xp: Vec<u64>) -> Result<Self, CoordError> {
        if x.len() != xp.len() {
            return Err(CoordError::Ragged(x.len(), xp.len()));
        }
        Ok(TCoord { x, xp })
    }

    /// A closed-type coordinate with no parallel copies.
    pub fn from_x(x: Vec<u64>) -> Self {
        let n = x.len();
        TCoord { x, xp: vec![0; n] }
    }

    pub fn zero(n: usize) -> Self {
        TCoord { x: vec![0; n], xp: vec![0; n] }
    }

    /// The class of edge `i` itself: one parallel copy.
    pub fn edge_class(n: usize, i: usize) -> Self {
        let mut c = TCoord::zero(n);
        c.xp[i] = 1;
        c
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.xp).all(|&v| v == 0)
    }

    pub fn is_even(&self) -> bool {
        self.x.iter().chain(&self.xp).all(|v| v % 2 == 0)
    }

    pub fn scaled(&self, k: u64) -> Result<Self, CoordError> {
        let mul = |v: &[u64]| -> Result<Vec<u64>, CoordError> {
            v.iter().map(|a| a.checked_mul(k).ok_or(CoordError::Overflow)).collect()
        };
        Ok(TCoord { x: mul(&self.x)?, xp: mul(&self.xp)? })
    }

    /// Hexagon coordinate of triangle `t`, with x' left at zero. Parallel
    /// copies of edges are kept out of the hexagons and handled separately.
    pub fn hex_x(&self, tri: &IdealTriangulation, t: usize) -> HexCoord {
        let edges = tri.triangle(t);
        HexCoord::new([self.x[edges[0]], self.x[edges[1]], self.x[edges[2]]], [0; 3])
    }

    /// Endpoint count on one slot.
    pub fn at(&self, tri: &IdealTriangulation, slot: Slot) -> u64 {
        self.x[tri.edge_at(slot)]
    }
}

fn check_len(tri: &IdealTriangulation, c: &TCoord) -> Result<(), CoordError> {
    let n = tri.edge_count();
    if c.x.len() != c.xp.len() {
        return Err(CoordError::Ragged(c.x.len(), c.xp.len()));
    }
    if c.x.len() != n {
        return Err(CoordError::Length { expected: n, found: c.x.len() });
    }
    Ok(())
}

/// Every violated constraint; empty when `c` is admissible.
pub fn violations(tri: &IdealTriangulation, c: &TCoord) -> Result<Vec<Violation>, CoordError> {
    check_len(tri, c)?;
    let mut out = Vec::new();
    for (edge, (&x, &xp)) in c.x.iter().zip(&c.xp).enumerate() {
        if x > 0 && xp > 0 {
            out.push(Violation::Complementary { edge, x, xp });
        }
    }
    for triangle in 0..tri.triangle_count() {
        let x = c.hex_x(tri, triangle).x;
        if in_triangle_set(x) && x.iter().sum::<u64>() % 2 == 1 {
            out.push(Violation::OddTriangle { triangle, x });
        }
    }
    Ok(out)
}

pub fn validate(tri: &IdealTriangulation, c: &TCoord) -> Result<(), CoordError> {
    let v = violations(tri, c)?;
    if v.is_empty() {
        Ok(())
    } else {
        Err(CoordError::Invalid(v))
    }
}

/// `|c| = sum of x_i + x'_i`.
pub fn norm(c: &TCoord) -> u64 {
    c.x.iter().chain(&c.xp).sum()
}

pub fn l1_distance(u: &TCoord, v: &TCoord) -> Result<u64, CoordError> {
    if u.len() != v.len() || u.xp.len() != v.xp.len() {
        return Err(CoordError::Length { expected: u.len(), found: v.len() });
    }
    let d = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(p, q)| p.abs_diff(*q)).sum::<u64>();
    Ok(d(&u.x, &v.x) + d(&u.xp, &v.xp))
}

/// A path of even coordinates from `u` to `v` in steps of L1 length 2.
///
/// Coordinates that must shrink are lowered first (x before x' on each
/// edge), then the ones that must grow are raised, so `x_i * x'_i = 0`
/// holds at every step.
pub fn even_path(tri: &IdealTriangulation, u: &TCoord, v: &TCoord) -> Result<Vec<TCoord>, CoordError> {
    validate(tri, u)?;
    validate(tri, v)?;
    if !u.is_even() || !v.is_even() {
        return Err(CoordError::NotEven);
    }
    let n = u.len();
    let mut path = vec![u.clone()];
    let mut w = u.clone();
    let step = |w: &mut TCoord, path: &mut Vec<TCoord>, xp: bool, i: usize, up: bool| {
        let slot = if xp { &mut w.xp[i] } else { &mut w.x[i] };
        if up {
            *slot += 2;
        } else {
            *slot -= 2;
        }
        path.push(w.clone());
    };
    for i in 0..n {
        while w.x[i] > v.x[i] {
            step(&mut w, &mut path, false, i, false);
        }
        while w.xp[i] > v.xp[i] {
            step(&mut w, &mut path, true, i, false);
        }
    }
    for i in 0..n {
        while w.x[i] < v.x[i] {
            step(&mut w, &mut path, false, i, true);
        }
        while w.xp[i] < v.xp[i] {
            step(&mut w, &mut path, true, i, true);
        }
    }
    debug_assert_eq!(&w, v);
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{builtin_triangulation, SurfaceSpec};

    fn torus() -> IdealTriangulation {
        builtin_triangulation(SurfaceSpec::new(1, 1).unwrap()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let tri = torus();
        assert_eq!(validate(&tri, &TCoord::from_x(vec![1, 1, 2])), Ok(()));
        let v = violations(&tri, &TCoord::from_x(vec![1, 1, 1])).unwrap();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|e| matches!(e, Violation::OddTriangle { .. })));
        let c = TCoord::new(vec![2, 0, 0], vec![1, 0, 0]).unwrap();
        assert_eq!(
            violations(&tri, &c).unwrap(),
            vec![Violation::Complementary { edge: 0, x: 2, xp: 1 }]
        );
        assert_eq!(
            validate(&tri, &TCoord::from_x(vec![0; 4])),
            Err(CoordError::Length { expected: 3, found: 4 })
        );
    }

    #[test]
    fn norm_and_distance() {
        assert_eq!(norm(&TCoord::zero(3)), 0);
        let c = TCoord::from_x(vec![1, 1, 2]);
        assert_eq!(norm(&c), 4);
        assert_eq!(norm(&c.scaled(2).unwrap()), 8);
        let u = TCoord::from_x(vec![2, 0, 0]);
        let v = TCoord::from_x(vec![0, 2, 0]);
        assert_eq!(l1_distance(&u, &u).unwrap(), 0);
        assert_eq!(l1_distance(&u, &v).unwrap(), 4);
    }

    #[test]
    fn even_path_through_the_origin_of_an_edge() {
        let tri = torus();
        let u = TCoord::from_x(vec![2, 0, 0]);
        let v = TCoord::new(vec![0, 0, 0], vec![2, 0, 0]).unwrap();
        // (2,0,0) is outside the triangle set, parity free
        let p = even_path(&tri, &u, &v).unwrap();
        assert_eq!(p, vec![u.clone(), TCoord::zero(3), v.clone()]);
        assert_eq!(even_path(&tri, &u, &u).unwrap(), vec![u]);
    }

    #[test]
    fn even_path_rejects_odd_input() {
        let tri = torus();
        let u = TCoord::from_x(vec![1, 1, 2]);
        assert_eq!(even_path(&tri, &u, &TCoord::zero(3)), Err(CoordError::NotEven));
    }

    #[test]
    fn json_shape() {
        let c = TCoord::new(vec![1, 1, 2], vec![0, 0, 0]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"x":[1,1,2],"xp":[0,0,0]}"#);
        assert_eq!(serde_json::from_str::<TCoord>(&s).unwrap(), c);
    }
}
