//! Real (exact rational) coordinates for measured laminations.
//!
//! A point is either an edge vector `x` (one weight per edge) or a corner
//! vector `y` (one weight per hexagon corner, flat index `3t + k`). The
//! corner weight opposite slot `l` of a triangle with slots `j, k, l` is
//! `(x_j + x_k - x_l) / 2`; an edge weight is the sum of the two corners
//! flanking it inside either triangle, and the switching condition says both
//! triangles agree.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::surface::{IdealTriangulation, Slot};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LamError {
    #[error("vector has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("corner {corner} would be negative ({value})")]
    NegativeCorner { corner: usize, value: Q },
    #[error("switching condition fails at edge {edge} (residual {residual})")]
    Switching { edge: usize, residual: Q },
    #[error("no rational point of S within {eps} found")]
    Infeasible { eps: Q },
    #[error("expected {expected} for {what}, computed {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Serde helpers writing rationals as `"p/q"` strings.
pub mod rational_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|q| q.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn parse_rational(s: &str) -> Result<Q, LamError> {
    s.trim().parse::<Q>().map_err(|_| LamError::Parse(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XPoint {
    #[serde(with = "rational_strings")]
    pub x: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerVector {
    #[serde(with = "rational_strings")]
    pub y: Vec<Q>,
}

impl XPoint {
    pub fn from_ints(v: &[i64]) -> Self {
        XPoint { x: v.iter().map(|&a| Q::from_integer(a.into())).collect() }
    }
}

impl CornerVector {
    pub fn from_ints(v: &[i64]) -> Self {
        CornerVector { y: v.iter().map(|&a| Q::from_integer(a.into())).collect() }
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn check_len(expected: usize, found: usize) -> Result<(), LamError> {
    if expected != found {
        return Err(LamError::Length { expected, found });
    }
    Ok(())
}

/// Corner values without the sign check.
pub fn corner_values(tri: &IdealTriangulation, x: &[Q]) -> Result<Vec<Q>, LamError> {
    check_len(tri.edge_count(), x.len())?;
    let two = q(2);
    let mut y = Vec::with_capacity(3 * tri.triangle_count());
    for t in tri.triangles() {
        for k in 0..3 {
            let (i, j) = (t[(k + 1) % 3], t[(k + 2) % 3]);
            y.push((&x[i] + &x[j] - &x[t[k]]) / &two);
        }
    }
    Ok(y)
}

pub fn x_to_y(tri: &IdealTriangulation, p: &XPoint) -> Result<CornerVector, LamError> {
    let y = corner_values(tri, &p.x)?;
    if let Some((corner, v)) = y.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(LamError::NegativeCorner { corner, value: v.clone() });
    }
    Ok(CornerVector { y })
}

fn flank_sum(tri: &IdealTriangulation, y: &[Q], slot: Slot) -> Q {
    let [a, b] = tri.flanking_corners(slot);
    &y[a] + &y[b]
}

/// Per edge, the flanking sum in the edge's first triangle minus the one in
/// its second.
pub fn switching_residual(tri: &IdealTriangulation, y: &CornerVector) -> Result<Vec<Q>, LamError> {
    check_len(3 * tri.triangle_count(), y.y.len())?;
    Ok((0..tri.edge_count())
        .map(|e| {
            let [p, m] = tri.edge_slots(e);
            flank_sum(tri, &y.y, p) - flank_sum(tri, &y.y, m)
        })
        .collect())
}

fn require_switching(tri: &IdealTriangulation, y: &CornerVector) -> Result<(), LamError> {
    let r = switching_residual(tri, y)?;
    match r.into_iter().enumerate().find(|(_, v)| !v.is_zero()) {
        Some((edge, residual)) => Err(LamError::Switching { edge, residual }),
        None => Ok(()),
    }
}

pub fn y_to_x(tri: &IdealTriangulation, y: &CornerVector) -> Result<XPoint, LamError> {
    require_switching(tri, y)?;
    Ok(XPoint { x: (0..tri.edge_count()).map(|e| flank_sum(tri, &y.y, tri.edge_slots(e)[0])).collect() })
}

/// Shift each boundary's corners by minus their minimum, so every boundary
/// has a zero corner.
#[allow(non_snake_case)]
pub fn project_to_S(tri: &IdealTriangulation, y: &CornerVector) -> Result<CornerVector, LamError> {
    require_switching(tri, y)?;
    let mut out = y.y.clone();
    for b in tri.boundaries() {
        let min = b.iter().map(|&c| &y.y[c]).min().cloned().unwrap_or_else(Q::zero);
        for &c in b {
            out[c] -= &min;
        }
    }
    Ok(CornerVector { y: out })
}

/// Whether `y` lies in S: non-negative, switching, and zero somewhere around
/// every boundary.
pub fn in_s(tri: &IdealTriangulation, y: &CornerVector) -> bool {
    y.y.len() == 3 * tri.triangle_count()
        && y.y.iter().all(|v| !v.is_negative())
        && switching_residual(tri, y).map(|r| r.iter().all(Zero::is_zero)).unwrap_or(false)
        && tri.boundaries().iter().all(|b| b.iter().any(|&c| y.y[c].is_zero()))
}

/// Whether `y - z` is constant on the corners of each boundary.
pub fn differ_by_v(tri: &IdealTriangulation, y: &CornerVector, z: &CornerVector) -> bool {
    tri.boundaries().iter().all(|b| {
        let d: Vec<Q> = b.iter().map(|&c| &y.y[c] - &z.y[c]).collect();
        d.windows(2).all(|w| w[0] == w[1])
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MlViolation {
    /// A triangle inequality fails: this corner value is negative.
    Triangle { triangle: usize, corner: usize, value: String },
    /// The minimum corner value around this boundary is not zero.
    BoundaryMinimum { boundary: usize, min: String },
}

impl fmt::Display for MlViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MlViolation::Triangle { triangle, corner, value } => {
                write!(f, "triangle {triangle}: corner {corner} has value {value} < 0")
            }
            MlViolation::BoundaryMinimum { boundary, min } => {
                write!(f, "not in S: boundary {boundary} minimum = {min} > 0")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub violations: Vec<MlViolation>,
}

/// Triangle inequalities in every triangle and a zero corner around every
/// boundary.
pub fn ml_membership(tri: &IdealTriangulation, p: &XPoint) -> Result<Membership, LamError> {
    let y = corner_values(tri, &p.x)?;
    let mut violations = Vec::new();
    for (c, v) in y.iter().enumerate() {
        if v.is_negative() {
            violations.push(MlViolation::Triangle { triangle: c / 3, corner: c, value: v.to_string() });
        }
    }
    for (j, b) in tri.boundaries().iter().enumerate() {
        let min = b.iter().map(|&c| &y[c]).min().cloned().unwrap_or_else(Q::zero);
        if min.is_positive() {
            violations.push(MlViolation::BoundaryMinimum { boundary: j, min: min.to_string() });
        }
    }
    // a negative corner makes the boundary minimum negative, already reported
    Ok(Membership { member: violations.is_empty(), violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureFlags {
    pub es: bool,
    pub cs: bool,
}

/// Corner-arc weight of a possibly non-triangular triple, i.e. the weight of
/// arcs cutting off the corner opposite `x_l`.
fn corner_arc_weight(xj: &Q, xk: &Q, xl: &Q) -> Q {
    let half = (xj + xk - xl) / q(2);
    let m = half.min(xj.clone()).min(xk.clone());
    if m.is_negative() {
        Q::zero()
    } else {
        m
    }
}

/// Membership of `(x, x')` in the closures of the rays through essential
/// 1-submanifolds and through curve systems.
///
/// The curve-system condition asks for a corner without corner arcs around
/// every boundary. Inside the triangle inequalities the corner-arc weight is
/// `(x_j + x_k - x_l) / 2`; outside them it is taken from the arc-system
/// cases, so boundaries reached by arcs count as satisfied.
pub fn closure_membership(tri: &IdealTriangulation, point: &[Q]) -> Result<ClosureFlags, LamError> {
    let n = tri.edge_count();
    check_len(2 * n, point.len())?;
    let (x, xp) = point.split_at(n);
    let es = x.iter().chain(xp).all(|v| !v.is_negative()) && x.iter().zip(xp).all(|(a, b)| (a * b).is_zero());
    if !es {
        return Ok(ClosureFlags { es: false, cs: false });
    }
    let mut w = Vec::with_capacity(3 * tri.triangle_count());
    for t in tri.triangles() {
        for k in 0..3 {
            w.push(corner_arc_weight(&x[t[(k + 1) % 3]], &x[t[(k + 2) % 3]], &x[t[k]]));
        }
    }
    let cs = tri.boundaries().iter().all(|b| b.iter().any(|&c| w[c].is_zero()));
    Ok(ClosureFlags { es, cs })
}

/// Rank of a matrix of rationals by Gaussian elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow: Vec<Q> = m[r].iter().map(|v| v / &pivot).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= &f * b;
                }
            }
        }
        m[r] = prow;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of the null space `{v : A v = 0}`.
pub fn nullspace(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow: Vec<Q> = m[r].iter().map(|v| v / &pivot).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= &f * b;
                }
            }
        }
        m[r] = prow;
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Rows of the switching equations, one per edge.
pub fn switching_matrix(tri: &IdealTriangulation) -> Vec<Vec<Q>> {
    let m = 3 * tri.triangle_count();
    (0..tri.edge_count())
        .map(|e| {
            let mut row = vec![Q::zero(); m];
            let [p, n] = tri.edge_slots(e);
            for c in tri.flanking_corners(p) {
                row[c] += Q::one();
            }
            for c in tri.flanking_corners(n) {
                row[c] -= Q::one();
            }
            row
        })
        .collect()
}

/// Spanning vectors of V: the indicator of the corners of each boundary.
pub fn boundary_vectors(tri: &IdealTriangulation) -> Vec<Vec<Q>> {
    let m = 3 * tri.triangle_count();
    tri.boundaries()
        .iter()
        .map(|b| {
            let mut v = vec![Q::zero(); m];
            for &c in b {
                v[c] = Q::one();
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubspaceDims {
    /// Number of corners.
    pub m: usize,
    /// Rank of the switching equations.
    pub switching_rank: usize,
    pub dim_w: usize,
    pub dim_v: usize,
    pub dim_v_cap_w: usize,
    /// Dimension of V meeting the span of the switching functionals.
    pub dim_v_cap_w_perp: usize,
}

impl SubspaceDims {
    pub fn v_inside_w(&self) -> bool {
        self.dim_v_cap_w == self.dim_v
    }
}

/// Exact dimensions of W, V and their intersections.
pub fn subspace_dims(tri: &IdealTriangulation) -> SubspaceDims {
    let m = 3 * tri.triangle_count();
    let c = switching_matrix(tri);
    let v = boundary_vectors(tri);
    let switching_rank = rank(&c);
    let dim_w = m - switching_rank;
    let dim_v = rank(&v);
    let w = nullspace(&c, m);
    let sum_vw = rank(&[w, v.clone()].concat());
    let sum_v_perp = rank(&[c, v].concat());
    SubspaceDims {
        m,
        switching_rank,
        dim_w,
        dim_v,
        dim_v_cap_w: dim_v + dim_w - sum_vw,
        dim_v_cap_w_perp: dim_v + switching_rank - sum_v_perp,
    }
}

/// Dimension of the image of W in the quotient by V, checked against
/// `6g + 2r - 6`.
pub fn ml_dimension(tri: &IdealTriangulation) -> Result<usize, LamError> {
    let d = subspace_dims(tri);
    let spec = tri.spec();
    let expected_w = spec.edge_count();
    if d.dim_w != expected_w {
        return Err(LamError::Dimension { what: "dim W", expected: expected_w, found: d.dim_w });
    }
    let found = d.dim_w - d.dim_v_cap_w;
    let expected = spec.lamination_dimension();
    if found != expected {
        return Err(LamError::Dimension { what: "dim P(W)", expected, found });
    }
    Ok(found)
}

fn linf(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).max().unwrap_or_else(Q::zero)
}

fn round_to(v: &Q, d: &BigInt) -> Q {
    let scaled = v * Q::from_integer(d.clone());
    Q::new(scaled.round().to_integer(), d.clone())
}

/// A point of S with small denominators within `eps` of `p` in the sup
/// norm. The edge weights read off `p` are rounded to a grid of step
/// `1/D`, turned back into corner weights and projected; `D` doubles until
/// the result is close enough.
pub fn rational_approx(tri: &IdealTriangulation, p: &CornerVector, eps: &Q) -> Result<CornerVector, LamError> {
    check_len(3 * tri.triangle_count(), p.y.len())?;
    if in_s(tri, p) {
        return Ok(p.clone());
    }
    let half = q(1) / q(2);
    let xhat: Vec<Q> = (0..tri.edge_count())
        .map(|e| {
            let [a, b] = tri.edge_slots(e);
            (flank_sum(tri, &p.y, a) + flank_sum(tri, &p.y, b)) * &half
        })
        .collect();
    let mut d = BigInt::from(1);
    for _ in 0..64 {
        let x: Vec<Q> = xhat.iter().map(|v| round_to(v, &d)).collect();
        let y = CornerVector { y: corner_values(tri, &x)? };
        let s = project_to_S(tri, &y)?;
        if &linf(&s.y, &p.y) <= eps {
            return Ok(s);
        }
        d *= 2;
    }
    Err(LamError::Infeasible { eps: eps.clone() })
}

/// Lossy conversion for reports.
pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
