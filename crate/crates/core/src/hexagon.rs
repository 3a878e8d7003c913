//! Arc systems in the hexagon.
//!
//! The sides are labelled cyclically `A1, B3, A2, B1, A3, B2` (0-based here:
//! A-side `k` sits at cyclic position `2k`, B-side `k` at `2k + 3 mod 6`, so
//! B-side `k` is opposite A-side `k`). The nine non-trivial arc types are
//!
//! * `a_k`, parallel to A-side `k`: joins the two B-sides next to it;
//! * `b_k`, parallel to B-side `k`: joins A-sides `k + 1` and `k + 2`;
//! * `c_k`, joining A-side `k` to B-side `k`.
//!
//! An arc system is a multiset of pairwise compatible types, and is
//! determined up to isotopy by its coordinate: the number of endpoints on
//! each A-side together with the number of `a`-arcs parallel to each A-side.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexError {
    #[error("inadmissible hexagon coordinate {coord}: {reason}")]
    Inadmissible { coord: HexCoord, reason: &'static str },
    #[error("arc types {0} and {1} cross")]
    Incompatible(HexArcType, HexArcType),
    #[error("chord endpoints coincide")]
    CoincidentEndpoints,
    #[error("surgery precondition violated: {0}")]
    Precondition(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcKind {
    A,
    B,
    C,
}

/// One of the nine arc types; `index` is 0, 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexArcType {
    pub kind: ArcKind,
    pub index: usize,
}

impl fmt::Display for HexArcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            ArcKind::A => 'a',
            ArcKind::B => 'b',
            ArcKind::C => 'c',
        };
        write!(f, "{}{}", k, self.index + 1)
    }
}

/// A side of the hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A(usize),
    B(usize),
}

impl Side {
    /// Position in the cyclic order `A1, B3, A2, B1, A3, B2`.
    pub fn cyclic_position(self) -> usize {
        match self {
            Side::A(k) => 2 * k,
            Side::B(k) => (2 * k + 3) % 6,
        }
    }
}

impl HexArcType {
    pub const ALL: [HexArcType; 9] = [
        HexArcType { kind: ArcKind::A, index: 0 },
        HexArcType { kind: ArcKind::A, index: 1 },
        HexArcType { kind: ArcKind::A, index: 2 },
        HexArcType { kind: ArcKind::B, index: 0 },
        HexArcType { kind: ArcKind::B, index: 1 },
        HexArcType { kind: ArcKind::B, index: 2 },
        HexArcType { kind: ArcKind::C, index: 0 },
        HexArcType { kind: ArcKind::C, index: 1 },
        HexArcType { kind: ArcKind::C, index: 2 },
    ];

    pub fn a(index: usize) -> Self {
        HexArcType { kind: ArcKind::A, index }
    }
    pub fn b(index: usize) -> Self {
        HexArcType { kind: ArcKind::B, index }
    }
    pub fn c(index: usize) -> Self {
        HexArcType { kind: ArcKind::C, index }
    }

    /// The two sides this arc type joins.
    pub fn sides(self) -> [Side; 2] {
        let k = self.index;
        match self.kind {
            ArcKind::A => [Side::B((k + 1) % 3), Side::B((k + 2) % 3)],
            ArcKind::B => [Side::A((k + 1) % 3), Side::A((k + 2) % 3)],
            ArcKind::C => [Side::A(k), Side::B(k)],
        }
    }

    /// Two types can coexist in one arc system unless their endpoint sides
    /// strictly interleave. Arcs ending on a common side can be nested.
    pub fn compatible_with(self, other: HexArcType) -> bool {
        let [p, q] = self.sides();
        let [r, s] = other.sides();
        if p == r || p == s || q == r || q == s {
            return true;
        }
        !interleaved(
            (p.cyclic_position(), q.cyclic_position()),
            (r.cyclic_position(), s.cyclic_position()),
        )
    }
}

fn interleaved(u: (usize, usize), v: (usize, usize)) -> bool {
    let (lo, hi) = if u.0 < u.1 { u } else { (u.1, u.0) };
    let inside = |p: usize| lo < p && p < hi;
    inside(v.0) != inside(v.1)
}

/// Whether two chords of a disk cross, given the positions of their
/// endpoints along the boundary circle (any linear parametrization of the
/// circle cut at one point). Chords cross iff their endpoints strictly
/// interleave.
pub fn chords_cross(u: (u64, u64), v: (u64, u64)) -> Result<bool, HexError> {
    let ends = [u.0, u.1, v.0, v.1];
    for i in 0..4 {
        for j in i + 1..4 {
            if ends[i] == ends[j] {
                return Err(HexError::CoincidentEndpoints);
            }
        }
    }
    let (lo, hi) = if u.0 < u.1 { u } else { (u.1, u.0) };
    let inside = |p: u64| lo < p && p < hi;
    Ok(inside(v.0) != inside(v.1))
}

/// The coordinate of an arc system: `x[k]` endpoints on A-side `k` and
/// `xp[k]` arcs parallel to A-side `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HexCoord {
    pub x: [u64; 3],
    pub xp: [u64; 3],
}

impl fmt::Display for HexCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{} | {},{},{})",
            self.x[0], self.x[1], self.x[2], self.xp[0], self.xp[1], self.xp[2]
        )
    }
}

/// Whether `(a, b, c)` satisfies all three triangle inequalities.
pub fn in_triangle_set(x: [u64; 3]) -> bool {
    x[0] + x[1] >= x[2] && x[1] + x[2] >= x[0] && x[0] + x[2] >= x[1]
}

impl HexCoord {
    pub fn new(x: [u64; 3], xp: [u64; 3]) -> Self {
        HexCoord { x, xp }
    }

    pub fn check(&self) -> Result<(), HexError> {
        if (0..3).any(|i| self.x[i] > 0 && self.xp[i] > 0) {
            return Err(HexError::Inadmissible { coord: *self, reason: "x_i * x'_i != 0" });
        }
        if in_triangle_set(self.x) && self.x.iter().sum::<u64>() % 2 == 1 {
            return Err(HexError::Inadmissible {
                coord: *self,
                reason: "odd endpoint total inside the triangle set",
            });
        }
        Ok(())
    }

    pub fn is_even(&self) -> bool {
        self.x.iter().chain(&self.xp).all(|v| v % 2 == 0)
    }
}

/// A multiset of arc types in the hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HexArcSystem {
    pub a: [u64; 3],
    pub b: [u64; 3],
    pub c: [u64; 3],
}

impl HexArcSystem {
    pub fn count(&self, t: HexArcType) -> u64 {
        match t.kind {
            ArcKind::A => self.a[t.index],
            ArcKind::B => self.b[t.index],
            ArcKind::C => self.c[t.index],
        }
    }

    pub fn count_mut(&mut self, t: HexArcType) -> &mut u64 {
        match t.kind {
            ArcKind::A => &mut self.a[t.index],
            ArcKind::B => &mut self.b[t.index],
            ArcKind::C => &mut self.c[t.index],
        }
    }

    pub fn total(&self) -> u64 {
        self.a.iter().chain(&self.b).chain(&self.c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn present(&self) -> impl Iterator<Item = HexArcType> + '_ {
        HexArcType::ALL.into_iter().filter(|t| self.count(*t) > 0)
    }

    /// First incompatible pair of present types, if any.
    pub fn check_compatible(&self) -> Result<(), HexError> {
        let present: Vec<HexArcType> = self.present().collect();
        for (i, &s) in present.iter().enumerate() {
            for &t in &present[i + 1..] {
                if !s.compatible_with(t) {
                    return Err(HexError::Incompatible(s, t));
                }
            }
        }
        Ok(())
    }

    /// Number of arc components; each arc of the system is one component.
    pub fn component_count(&self) -> u64 {
        self.total()
    }
}

/// Endpoints on A-side `k` and arcs parallel to A-side `k`.
pub fn hex_to_coord(s: &HexArcSystem) -> Result<HexCoord, HexError> {
    s.check_compatible()?;
    let x = [0, 1, 2].map(|k| s.b[(k + 1) % 3] + s.b[(k + 2) % 3] + s.c[k]);
    Ok(HexCoord { x, xp: s.a })
}

/// The standard arc system with the given coordinate.
pub fn hex_from_coord(h: &HexCoord) -> Result<HexArcSystem, HexError> {
    h.check()?;
    let x = h.x;
    let xp = h.xp;
    let mut s = HexArcSystem { a: xp, ..Default::default() };
    let zero_primes = xp.iter().filter(|&&v| v == 0).count();
    match zero_primes {
        3 => {
            if in_triangle_set(x) {
                for k in 0..3 {
                    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                    s.b[k] = (x[i] + x[j] - x[k]) / 2;
                }
            } else {
                let k = (0..3).max_by_key(|&k| x[k]).expect("three sides");
                let (i, j) = ((k + 1) % 3, (k + 2) % 3);
                // b_i touches A_j and A_k; b_j touches A_i and A_k
                s.b[i] = x[j];
                s.b[j] = x[i];
                s.c[k] = x[k] - x[i] - x[j];
            }
        }
        2 => {
            let k = (0..3).find(|&k| xp[k] > 0).expect("one non-zero prime");
            // x_k = 0 here
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let (hi, lo) = if x[i] >= x[j] { (i, j) } else { (j, i) };
            s.b[k] = x[lo];
            s.c[hi] = x[hi] - x[lo];
        }
        1 => {
            let i = (0..3).find(|&k| xp[k] == 0).expect("one zero prime");
            s.c[i] = x[i];
        }
        _ => {}
    }
    debug_assert_eq!(hex_to_coord(&s).as_ref(), Ok(h));
    Ok(s)
}

/// Corner-arc counts `#b_k` of the standard system, i.e. how many arcs cut
/// off each B-side.
pub fn corner_arcs(h: &HexCoord) -> Result<[u64; 3], HexError> {
    Ok(hex_from_coord(h)?.b)
}

/// First candidate that is a valid arc system. Each candidate is a list of
/// `(type, change)` pairs; candidates that would drive a count negative are
/// skipped.
fn first_compatible(s: &HexArcSystem, candidates: &[&[(HexArcType, i64)]]) -> Option<HexArcSystem> {
    candidates.iter().find_map(|moves| {
        let mut out = *s;
        for &(t, d) in moves.iter() {
            let v = out.count(t) as i64 + d;
            if v < 0 {
                return None;
            }
            *out.count_mut(t) = v as u64;
        }
        out.check_compatible().ok().map(|_| out)
    })
}

/// Surgery lowering the endpoint count on A-side `k` by two.
///
/// Options, tried in order: merge a `b_{k+1}` and a `b_{k+2}` into a `b_k`;
/// drop two `c_k`; turn two `b_{k+2}` into two `c_{k+1}`; turn two `b_{k+1}`
/// into two `c_{k+2}`. The first one giving an arc system is used.
pub fn surgery_down(s: &HexArcSystem, k: usize) -> Result<HexArcSystem, HexError> {
    let h = hex_to_coord(s)?;
    if h.x[k] < 2 {
        return Err(HexError::Precondition("need at least two endpoints on the target side"));
    }
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let (b, c) = (HexArcType::b, HexArcType::c);
    first_compatible(
        s,
        &[
            &[(b(i), -1), (b(j), -1), (b(k), 1)],
            &[(c(k), -2)],
            &[(b(j), -2), (c(i), 2)],
            &[(b(i), -2), (c(j), 2)],
        ],
    )
    .ok_or(HexError::Precondition("no surgery option applies"))
}

/// Surgery raising the endpoint count on A-side `k` by two.
///
/// Options, tried in order: split a `b_k` into `b_{k+1}` and `b_{k+2}`; add
/// two `c_k`; turn two `c_{k+1}` into two `b_{k+2}`; turn two `c_{k+2}` into
/// two `b_{k+1}`.
pub fn surgery_up(s: &HexArcSystem, k: usize) -> Result<HexArcSystem, HexError> {
    let h = hex_to_coord(s)?;
    if h.xp[k] != 0 {
        return Err(HexError::Precondition("target side carries parallel arcs"));
    }
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let (b, c) = (HexArcType::b, HexArcType::c);
    first_compatible(
        s,
        &[
            &[(b(k), -1), (b(i), 1), (b(j), 1)],
            &[(c(k), 2)],
            &[(c(i), -2), (b(j), 2)],
            &[(c(j), -2), (b(i), 2)],
        ],
    )
    .ok_or(HexError::Precondition("no surgery option applies"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(pairs: &[(HexArcType, u64)]) -> HexArcSystem {
        let mut s = HexArcSystem::default();
        for &(t, n) in pairs {
            *s.count_mut(t) += n;
        }
        s
    }

    /// Every compatible multiset with at most `max_total` arcs.
    fn all_systems(max_total: u64) -> Vec<HexArcSystem> {
        fn rec(idx: usize, left: u64, cur: &mut HexArcSystem, out: &mut Vec<HexArcSystem>) {
            if idx == 9 {
                if cur.check_compatible().is_ok() {
                    out.push(*cur);
                }
                return;
            }
            let t = HexArcType::ALL[idx];
            for n in 0..=left {
                *cur.count_mut(t) = n;
                rec(idx + 1, left - n, cur, out);
            }
            *cur.count_mut(t) = 0;
        }
        let mut out = Vec::new();
        rec(0, max_total, &mut HexArcSystem::default(), &mut out);
        out
    }

    #[test]
    fn incompatible_pairs_match_the_table() {
        let mut expected = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                expected.push((HexArcType::c(i), HexArcType::c(j)));
            }
            expected.push((HexArcType::b(i), HexArcType::c(i)));
            expected.push((HexArcType::a(i), HexArcType::c(i)));
            expected.push((HexArcType::a(i), HexArcType::b((i + 1) % 3)));
            expected.push((HexArcType::a(i), HexArcType::b((i + 2) % 3)));
        }
        let norm = |(s, t): (HexArcType, HexArcType)| if s < t { (s, t) } else { (t, s) };
        let mut expected: Vec<_> = expected.into_iter().map(norm).collect();
        expected.sort();
        let mut found = Vec::new();
        for (n, &s) in HexArcType::ALL.iter().enumerate() {
            for &t in &HexArcType::ALL[n + 1..] {
                if !s.compatible_with(t) {
                    found.push(norm((s, t)));
                }
            }
        }
        found.sort();
        assert_eq!(found, expected);
    }

    #[test]
    fn every_type_is_nontrivial() {
        for t in HexArcType::ALL {
            let [p, q] = t.sides();
            let d = (p.cyclic_position() + 6 - q.cyclic_position()) % 6;
            assert!((2..=4).contains(&d), "{t} joins adjacent sides");
        }
    }

    #[test]
    fn from_coord_examples() {
        let h = HexCoord::new([2, 2, 2], [0, 0, 0]);
        assert_eq!(hex_from_coord(&h).unwrap(), sys(&[(HexArcType::b(0), 1), (HexArcType::b(1), 1), (HexArcType::b(2), 1)]));
        assert!(hex_from_coord(&HexCoord::default()).unwrap().is_empty());
        let h = HexCoord::new([0, 0, 4], [0, 0, 0]);
        assert_eq!(hex_from_coord(&h).unwrap(), sys(&[(HexArcType::c(2), 4)]));
        let h = HexCoord::new([1, 0, 0], [0, 2, 3]);
        assert_eq!(
            hex_from_coord(&h).unwrap(),
            sys(&[(HexArcType::a(1), 2), (HexArcType::a(2), 3), (HexArcType::c(0), 1)])
        );
    }

    #[test]
    fn brute_force_agrees_on_small_coordinates() {
        // unique compatible system per coordinate
        let systems = all_systems(8);
        let mut by_coord = std::collections::HashMap::<HexCoord, Vec<HexArcSystem>>::new();
        for s in &systems {
            by_coord.entry(hex_to_coord(s).unwrap()).or_default().push(*s);
        }
        for (h, found) in &by_coord {
            assert_eq!(found.len(), 1, "coordinate {h} has {} systems", found.len());
            assert_eq!(hex_from_coord(h).unwrap(), found[0]);
        }
        assert_eq!(by_coord[&HexCoord::new([0, 0, 4], [0; 3])], vec![sys(&[(HexArcType::c(2), 4)])]);
    }

    #[test]
    fn to_coord_examples() {
        let s = sys(&[(HexArcType::b(0), 1), (HexArcType::b(1), 1), (HexArcType::b(2), 1)]);
        assert_eq!(hex_to_coord(&s).unwrap(), HexCoord::new([2, 2, 2], [0; 3]));
        assert_eq!(hex_to_coord(&HexArcSystem::default()).unwrap(), HexCoord::default());
        assert_eq!(hex_to_coord(&sys(&[(HexArcType::a(0), 5)])).unwrap(), HexCoord::new([0; 3], [5, 0, 0]));
        let bad = sys(&[(HexArcType::c(0), 1), (HexArcType::c(1), 1)]);
        assert!(matches!(hex_to_coord(&bad), Err(HexError::Incompatible(..))));
    }

    #[test]
    fn inadmissible_coordinates() {
        assert!(hex_from_coord(&HexCoord::new([1, 1, 1], [0; 3])).is_err());
        assert!(hex_from_coord(&HexCoord::new([2, 0, 0], [1, 0, 0])).is_err());
        // outside the triangle set parity is free
        assert!(hex_from_coord(&HexCoord::new([3, 0, 0], [0; 3])).is_ok());
    }

    #[test]
    fn chord_crossing() {
        // c1 and c2 as diameters
        assert!(chords_cross((1, 4), (3, 6)).unwrap());
        // nested chords sharing a side
        assert!(!chords_cross((1, 6), (2, 5)).unwrap());
        assert_eq!(chords_cross((1, 4), (4, 6)), Err(HexError::CoincidentEndpoints));
        // b1 against c1 using side positions
        let b1 = HexArcType::b(0).sides().map(Side::cyclic_position);
        let c1 = HexArcType::c(0).sides().map(Side::cyclic_position);
        assert!(chords_cross((b1[0] as u64, b1[1] as u64), (c1[0] as u64, c1[1] as u64)).unwrap());
    }

    #[test]
    fn surgery_examples() {
        let s = sys(&[(HexArcType::b(1), 1), (HexArcType::b(2), 1), (HexArcType::b(0), 1)]);
        let d = surgery_down(&s, 0).unwrap();
        assert_eq!(d, sys(&[(HexArcType::b(0), 2)]));
        assert!(surgery_down(&sys(&[(HexArcType::c(0), 2)]), 0).unwrap().is_empty());
        // b3 and c3 cross, so this is not an arc system at all
        let bad = sys(&[(HexArcType::b(2), 2), (HexArcType::c(2), 2)]);
        assert!(surgery_down(&bad, 0).is_err());
        // the third branch
        let s = sys(&[(HexArcType::b(2), 2)]);
        assert_eq!(surgery_down(&s, 0).unwrap(), sys(&[(HexArcType::c(1), 2)]));

        assert_eq!(surgery_up(&sys(&[(HexArcType::b(0), 1)]), 0).unwrap(), sys(&[(HexArcType::b(1), 1), (HexArcType::b(2), 1)]));
        assert_eq!(surgery_up(&HexArcSystem::default(), 0).unwrap(), sys(&[(HexArcType::c(0), 2)]));
        assert_eq!(surgery_up(&sys(&[(HexArcType::c(1), 2)]), 0).unwrap(), sys(&[(HexArcType::b(2), 2)]));
    }

    #[test]
    fn surgeries_on_all_small_even_systems() {
        for s in all_systems(10) {
            let h = hex_to_coord(&s).unwrap();
            if !h.is_even() {
                continue;
            }
            for k in 0..3 {
                if h.x[k] >= 2 {
                    let d = surgery_down(&s, k).unwrap();
                    let hd = hex_to_coord(&d).unwrap();
                    let mut want = h;
                    want.x[k] -= 2;
                    assert_eq!(hd, want);
                    assert_eq!(d, hex_from_coord(&want).unwrap());
                    let back = surgery_up(&d, k).unwrap();
                    assert_eq!(hex_to_coord(&back).unwrap(), h);
                }
                if h.xp[k] == 0 {
                    let u = surgery_up(&s, k).unwrap();
                    let mut want = h;
                    want.x[k] += 2;
                    assert_eq!(hex_to_coord(&u).unwrap(), want);
                    let back = surgery_down(&u, k).unwrap();
                    assert_eq!(hex_to_coord(&back).unwrap(), h);
                }
            }
        }
    }

    #[test]
    fn component_count_formula_inside_triangle_set_only() {
        for s in all_systems(8) {
            let h = hex_to_coord(&s).unwrap();
            if in_triangle_set(h.x) {
                assert_eq!(s.component_count(), h.x.iter().sum::<u64>() / 2 + h.xp.iter().sum::<u64>());
            }
        }
        let s = hex_from_coord(&HexCoord::new([0, 0, 4], [0; 3])).unwrap();
        assert_eq!(s.component_count(), 4);
    }
}
