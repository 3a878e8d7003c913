//! Geometric intersection numbers of classes given by coordinates.
//!
//! Both classes are realized as standard representatives. On each edge the
//! two strand families are merged in the order suggested by where the
//! strands go next, crossings are counted per triangle by chord
//! interleaving, and then bigons are removed one at a time until none is
//! left. Parallel copies of edges are never drawn: a copy of edge `i` meets
//! the other class in exactly `x_i` points.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::coords::{l1_distance, norm, CoordError, TCoord};
use crate::curves::{classify_class, continue_across, standard_representative, CurveError, CurveSystem, Endpoint};
use crate::hexagon::{chords_cross, HexError};
use crate::surface::{IdealTriangulation, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersectionError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error("edge {edge} out of range for {edges} edges")]
    Edge { edge: usize, edges: usize },
    #[error("the stepped coordinate is invalid: {0}")]
    Step(CoordError),
}

impl From<HexError> for IntersectionError {
    fn from(e: HexError) -> Self {
        IntersectionError::Curve(CurveError::Hex(e))
    }
}

/// Two adjacent strands crossing `edge`: strand `a` of the first system and
/// strand `b` of the second, as positions in the edge's first slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Rung {
    edge: usize,
    a: usize,
    b: usize,
}

/// A bigon between the two systems found by [`Arrangement::find_bigon`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bigon {
    rungs: Vec<Rung>,
    /// `(triangle, arc of the first system, arc of the second)` along the way.
    pairs: Vec<(usize, usize, usize)>,
    /// One corner of the bigon is a boundary segment.
    pub half: bool,
}

impl Bigon {
    pub fn length(&self) -> usize {
        self.rungs.len()
    }
}

/// Two realized systems in a common picture: a merged strand order on every
/// edge and the resulting set of crossings.
#[derive(Debug, Clone)]
pub struct Arrangement<'t> {
    tri: &'t IdealTriangulation,
    sys: [CurveSystem; 2],
    /// Per edge, the merged strands as `(system, global position)`.
    order: Vec<Vec<(usize, usize)>>,
    /// `rank[s][e][g]`: index in `order[e]` of strand `g` of system `s`.
    rank: [Vec<Vec<usize>>; 2],
    crossings: BTreeSet<(usize, usize, usize)>,
}

impl<'t> Arrangement<'t> {
    /// Realize two coordinates (their x-parts only) and merge the strands.
    pub fn new(tri: &'t IdealTriangulation, a: &TCoord, b: &TCoord) -> Result<Self, IntersectionError> {
        let strip = |c: &TCoord| TCoord::from_x(c.x.clone());
        let sa = standard_representative(tri, &strip(a))?;
        let sb = standard_representative(tri, &strip(b))?;
        let limit = (norm(a) + norm(b)) as usize + 2;
        let n = tri.edge_count();
        let mut arr = Arrangement {
            tri,
            sys: [sa, sb],
            order: Vec::with_capacity(n),
            rank: [vec![Vec::new(); n], vec![Vec::new(); n]],
            crossings: BTreeSet::new(),
        };
        for e in 0..n {
            let merged = arr.merge_edge(e, limit);
            arr.order.push(merged);
            arr.reindex(e);
        }
        for t in 0..tri.triangle_count() {
            for u in arr.sys[0].arcs_in(t) {
                for v in arr.sys[1].arcs_in(t) {
                    if arr.pair_crosses(u, v) {
                        arr.crossings.insert((t, u, v));
                    }
                }
            }
        }
        Ok(arr)
    }

    pub fn crossing_count(&self) -> u64 {
        self.crossings.len() as u64
    }

    /// Crossings as `(triangle, arc of the first system, arc of the second)`.
    pub fn crossings(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.crossings.iter().copied()
    }

    fn reindex(&mut self, e: usize) {
        let x = [self.sys[0].strands(self.tri.edge_slots(e)[0]), self.sys[1].strands(self.tri.edge_slots(e)[0])];
        for (rank, &n) in self.rank.iter_mut().zip(&x) {
            rank[e] = vec![0; n];
        }
        for (m, &(s, g)) in self.order[e].iter().enumerate() {
            self.rank[s][e][g] = m;
        }
    }

    fn merge_edge(&self, e: usize, limit: usize) -> Vec<(usize, usize)> {
        let plus = self.tri.edge_slots(e)[0];
        let (na, nb) = (self.sys[0].strands(plus), self.sys[1].strands(plus));
        let mut out = Vec::with_capacity(na + nb);
        let (mut i, mut j) = (0, 0);
        while i < na && j < nb {
            if self.a_first(e, i, j, limit) {
                out.push((0, i));
                i += 1;
            } else {
                out.push((1, j));
                j += 1;
            }
        }
        out.extend((i..na).map(|g| (0, g)));
        out.extend((j..nb).map(|g| (1, g)));
        out
    }

    /// Whether strand `i` of the first system goes before strand `j` of the
    /// second on edge `e`.
    fn a_first(&self, e: usize, i: usize, j: usize, limit: usize) -> bool {
        let [plus, minus] = self.tri.edge_slots(e);
        match self.path_cmp((plus, i), (plus, j), limit) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
        let (na, nb) = (self.sys[0].strands(minus), self.sys[1].strands(minus));
        // local order on the second slot is reversed
        self.path_cmp((minus, na - 1 - i), (minus, nb - 1 - j), limit) != Ordering::Less
    }

    /// Compare two strands entering through the same slot by following them
    /// until they part. `Less` means the first strand sits earlier in the
    /// slot's counter-clockwise order.
    fn path_cmp(&self, mut pa: (Slot, usize), mut pb: (Slot, usize), limit: usize) -> Ordering {
        for _ in 0..limit {
            let k = pa.0.side;
            let (ua, ea) = self.sys[0].at(pa.0, pa.1);
            let (ub, eb) = self.sys[1].at(pb.0, pb.1);
            let ra = exit_rank(k, self.sys[0].arcs()[ua].ends[1 - ea]);
            let rb = exit_rank(k, self.sys[1].arcs()[ub].ends[1 - eb]);
            match ra.0.cmp(&rb.0) {
                Ordering::Equal => {}
                other => return other,
            }
            let (Some(xa), Some(xb)) = (ra.1, rb.1) else {
                return Ordering::Equal;
            };
            pa = continue_across(self.tri, &self.sys[0], xa.0, xa.1);
            pb = continue_across(self.tri, &self.sys[1], xb.0, xb.1);
        }
        Ordering::Equal
    }

    /// Position of a strand of system `s` at `(slot, local pos)` in the
    /// merged counter-clockwise order of that slot.
    fn merged_local(&self, s: usize, slot: Slot, pos: usize) -> usize {
        let e = self.tri.edge_at(slot);
        let plus = self.tri.is_plus_slot(slot);
        let x = self.sys[s].strands(slot);
        let g = if plus { pos } else { x - 1 - pos };
        let m = self.rank[s][e][g];
        if plus {
            m
        } else {
            self.order[e].len() - 1 - m
        }
    }

    fn rung_at(&self, s: usize, slot: Slot, pos: usize) -> (usize, usize) {
        let e = self.tri.edge_at(slot);
        let g = if self.tri.is_plus_slot(slot) { pos } else { self.sys[s].strands(slot) - 1 - pos };
        (e, g)
    }

    /// Point on the hexagon boundary as `side * 2^32 + offset`, where sides
    /// are numbered in the cyclic order used by `hexagon::Side`.
    fn end_key(&self, s: usize, arc: usize) -> [u64; 2] {
        let a = &self.sys[s].arcs()[arc];
        let mut key = [0u64; 2];
        for (e, end) in a.ends.iter().enumerate() {
            key[e] = match *end {
                Endpoint::Edge { slot, pos } => ((2 * slot.side as u64) << 32) | self.merged_local(s, slot, pos) as u64,
                Endpoint::Boundary { corner, .. } => {
                    let k = corner % 3;
                    let (slot, pos) = a.slot_end(1 - e).expect("c-arc has one slot end");
                    let total = self.order[self.tri.edge_at(slot)].len();
                    // mirror of the order along the opposite slot
                    let sub = total - 1 - self.merged_local(s, slot, pos);
                    ((((2 * k + 3) % 6) as u64) << 32) | sub as u64
                }
            };
        }
        key
    }

    fn pair_crosses(&self, u: usize, v: usize) -> bool {
        let p = self.end_key(0, u);
        let q = self.end_key(1, v);
        chords_cross((p[0], p[1]), (q[0], q[1])).expect("distinct strand positions")
    }

    /// First bigon or half-bigon found, if any.
    pub fn find_bigon(&self) -> Option<Bigon> {
        for &(t, u, v) in &self.crossings {
            for eu in 0..2 {
                for ev in 0..2 {
                    if let Some(b) = self.walk((t, u, v), eu, ev) {
                        return Some(b);
                    }
                }
            }
        }
        None
    }

    /// Follow the halves of a crossing pair leaving through ends `eu`, `ev`
    /// side by side until they cross again, reach the boundary together, or
    /// part.
    fn walk(&self, start: (usize, usize, usize), mut eu: usize, mut ev: usize) -> Option<Bigon> {
        let (_, mut u, mut v) = start;
        let mut rungs = Vec::new();
        let mut seen = HashSet::new();
        let mut pairs = vec![start];
        loop {
            let au = &self.sys[0].arcs()[u];
            let av = &self.sys[1].arcs()[v];
            match (au.ends[eu], av.ends[ev]) {
                (Endpoint::Boundary { corner: c1, .. }, Endpoint::Boundary { corner: c2, .. }) => {
                    return (c1 == c2 && !rungs.is_empty()).then_some(Bigon { rungs, pairs, half: true });
                }
                (Endpoint::Edge { slot: s1, pos: p1 }, Endpoint::Edge { slot: s2, pos: p2 }) if s1 == s2 => {
                    let m1 = self.merged_local(0, s1, p1);
                    let m2 = self.merged_local(1, s2, p2);
                    if m1.abs_diff(m2) != 1 {
                        return None;
                    }
                    let (e, a) = self.rung_at(0, s1, p1);
                    let (_, b) = self.rung_at(1, s2, p2);
                    let rung = Rung { edge: e, a, b };
                    if !seen.insert(rung) {
                        return None;
                    }
                    rungs.push(rung);
                    let (n1, q1) = continue_across(self.tri, &self.sys[0], s1, p1);
                    let (n2, q2) = continue_across(self.tri, &self.sys[1], s2, p2);
                    let (nu, iu) = self.sys[0].at(n1, q1);
                    let (nv, iv) = self.sys[1].at(n2, q2);
                    let here = (n1.triangle, nu, nv);
                    pairs.push(here);
                    if self.crossings.contains(&here) {
                        return (here != start).then_some(Bigon { rungs, pairs, half: false });
                    }
                    u = nu;
                    v = nv;
                    eu = 1 - iu;
                    ev = 1 - iv;
                }
                _ => return None,
            }
        }
    }

    /// Swap the two strands of the bigon on every edge it crosses.
    pub fn remove_bigon(&mut self, b: &Bigon) {
        for r in &b.rungs {
            let i = self.rank[0][r.edge][r.a];
            let j = self.rank[1][r.edge][r.b];
            self.order[r.edge].swap(i, j);
            self.rank[0][r.edge][r.a] = j;
            self.rank[1][r.edge][r.b] = i;
        }
        for &(t, u, v) in &b.pairs {
            if self.pair_crosses(u, v) {
                self.crossings.insert((t, u, v));
            } else {
                self.crossings.remove(&(t, u, v));
            }
        }
    }

    /// Remove bigons until none is left.
    pub fn reduce(&mut self) -> ReductionLog {
        let mut log = ReductionLog { initial: self.crossing_count(), ..Default::default() };
        while let Some(b) = self.find_bigon() {
            let before = self.crossing_count();
            self.remove_bigon(&b);
            let drop = before - self.crossing_count();
            if b.half {
                log.half_bigons += 1;
            } else {
                log.bigons += 1;
            }
            log.drops.push(drop);
        }
        log.last = self.crossing_count();
        log
    }
}

/// Where a strand entering through side `k` leaves: `(0, slot)` towards side
/// `k + 2`, `(1, none)` to the boundary, `(2, slot)` towards side `k + 1`.
/// Lower ranks sit earlier in the counter-clockwise order along side `k`.
fn exit_rank(k: usize, end: Endpoint) -> (u8, Option<(Slot, usize)>) {
    match end {
        Endpoint::Boundary { .. } => (1, None),
        Endpoint::Edge { slot, pos } => {
            let r = if slot.side == (k + 2) % 3 { 0 } else { 2 };
            (r, Some((slot, pos)))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReductionLog {
    pub initial: u64,
    pub bigons: u64,
    pub half_bigons: u64,
    /// Decrease of the crossing count at each move.
    pub drops: Vec<u64>,
    pub last: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub reduction: ReductionLog,
    /// Crossings between the drawn parts after reduction.
    pub normal: u64,
    /// Contribution of the parallel edge copies.
    pub copies: u64,
    pub total: u64,
}

/// Intersections contributed by parallel copies of edges.
pub fn copy_contribution(a: &TCoord, b: &TCoord) -> u64 {
    let one = |p: &TCoord, q: &TCoord| p.xp.iter().zip(&q.x).map(|(m, x)| m * x).sum::<u64>();
    one(a, b) + one(b, a)
}

pub fn intersection_report(tri: &IdealTriangulation, a: &TCoord, b: &TCoord) -> Result<IntersectionReport, IntersectionError> {
    crate::coords::validate(tri, a)?;
    crate::coords::validate(tri, b)?;
    let mut arr = Arrangement::new(tri, a, b)?;
    let reduction = arr.reduce();
    let normal = reduction.last;
    let copies = copy_contribution(a, b);
    Ok(IntersectionReport { reduction, normal, copies, total: normal + copies })
}

/// `I(a, b)`.
pub fn geometric_intersection(tri: &IdealTriangulation, a: &TCoord, b: &TCoord) -> Result<u64, IntersectionError> {
    Ok(intersection_report(tri, a, b)?.total)
}

/// Intersection of the drawn parts only (x-parts of both coordinates).
pub fn normal_intersection(tri: &IdealTriangulation, a: &TCoord, b: &TCoord) -> Result<u64, IntersectionError> {
    let mut arr = Arrangement::new(tri, a, b)?;
    Ok(arr.reduce().last)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CauchyReport {
    pub i_beta: u64,
    pub i_gamma: u64,
    pub lhs: u64,
    pub alpha_norm: u64,
    pub distance: u64,
    /// `2 |a| |b - c|`.
    pub rhs_general: u64,
    /// `|a| |b - c|`, asserted only for closed curve systems.
    pub rhs_closed: u64,
    pub alpha_closed: bool,
    pub ok: bool,
}

impl CauchyReport {
    pub fn from_values(i_beta: u64, i_gamma: u64, alpha_norm: u64, distance: u64, alpha_closed: bool) -> Self {
        let lhs = i_beta.abs_diff(i_gamma);
        let rhs_closed = alpha_norm * distance;
        let rhs_general = 2 * rhs_closed;
        let ok = lhs <= rhs_general && (!alpha_closed || lhs <= rhs_closed);
        CauchyReport { i_beta, i_gamma, lhs, alpha_norm, distance, rhs_general, rhs_closed, alpha_closed, ok }
    }
}

/// `|I(a, b) - I(a, c)| <= 2 |a| |b - c|`, and `<= |a| |b - c|` when `a` is
/// a closed curve system.
pub fn cauchy_check(tri: &IdealTriangulation, a: &TCoord, b: &TCoord, c: &TCoord) -> Result<CauchyReport, IntersectionError> {
    let closed = classify_class(tri, a)?.cs0;
    let ib = geometric_intersection(tri, a, b)?;
    let ic = geometric_intersection(tri, a, c)?;
    Ok(CauchyReport::from_values(ib, ic, norm(a), l1_distance(b, c)?, closed))
}

/// Which entry of edge `i` a surgery step raises by two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepSlot {
    X,
    Xp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryReport {
    pub i_beta: u64,
    pub i_gamma: u64,
    pub alpha_norm: u64,
    pub alpha_closed: bool,
    /// `I(a, b) <= I(a, c) + 4 |a|`.
    pub drop_within_4: bool,
    /// `I(a, c) <= I(a, b) + 2 |a|`.
    pub rise_within_2: bool,
    /// `I(a, b) <= I(a, c) + 2 |a|`, checked for closed `a` only.
    pub drop_within_2: Option<bool>,
    /// For a step in x': `I(a, b) = I(a, c) - 2 x_i(a)`.
    pub copy_step: Option<bool>,
    pub ok: bool,
}

impl SurgeryReport {
    pub fn from_values(i_beta: u64, i_gamma: u64, alpha: &TCoord, alpha_closed: bool, edge: usize, slot: StepSlot) -> Self {
        let n = norm(alpha);
        let drop_within_4 = i_beta <= i_gamma + 4 * n;
        let rise_within_2 = i_gamma <= i_beta + 2 * n;
        let drop_within_2 = alpha_closed.then_some(i_beta <= i_gamma + 2 * n);
        let copy_step = (slot == StepSlot::Xp).then_some(i_gamma == i_beta + 2 * alpha.x[edge]);
        let ok = drop_within_4 && rise_within_2 && drop_within_2 != Some(false) && copy_step != Some(false);
        SurgeryReport { i_beta, i_gamma, alpha_norm: n, alpha_closed, drop_within_4, rise_within_2, drop_within_2, copy_step, ok }
    }
}

/// `c = b + 2 e_i` in the chosen slot.
pub fn surgery_step(tri: &IdealTriangulation, b: &TCoord, edge: usize, slot: StepSlot) -> Result<TCoord, IntersectionError> {
    if edge >= tri.edge_count() {
        return Err(IntersectionError::Edge { edge, edges: tri.edge_count() });
    }
    let mut c = b.clone();
    match slot {
        StepSlot::X => c.x[edge] += 2,
        StepSlot::Xp => c.xp[edge] += 2,
    }
    crate::coords::validate(tri, &c).map_err(IntersectionError::Step)?;
    Ok(c)
}

/// Compare `I(a, b)` with `I(a, b + 2 e_i)` against the surgery bounds.
pub fn surgery_crossing_bounds(
    tri: &IdealTriangulation,
    a: &TCoord,
    b: &TCoord,
    edge: usize,
    slot: StepSlot,
) -> Result<SurgeryReport, IntersectionError> {
    crate::coords::validate(tri, b)?;
    if !b.is_even() {
        return Err(IntersectionError::Coord(CoordError::NotEven));
    }
    let c = surgery_step(tri, b, edge, slot)?;
    let closed = classify_class(tri, a)?.cs0;
    let ib = geometric_intersection(tri, a, b)?;
    let ic = geometric_intersection(tri, a, &c)?;
    Ok(SurgeryReport::from_values(ib, ic, a, closed, edge, slot))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_entry: u64,
    pub trials: u64,
    pub seed: u64,
}

/// A triple with `|I(a, b) - I(a, c)| = k |a| |b - c| > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub alpha: TCoord,
    pub beta: TCoord,
    pub gamma: TCoord,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub budget: Budget,
    pub examined: u64,
    /// Witnesses for the constant 1 with `a` a closed curve system.
    pub closed: Vec<Witness>,
    /// Witnesses for the constant 2 with `a` any essential class.
    pub general: Vec<Witness>,
    /// Largest `lhs / (|a| |b - c|)` seen with closed `a`, as `(lhs, |a| |b - c|)`.
    pub best_closed: (u64, u64),
    /// Largest `lhs / (2 |a| |b - c|)` seen, as `(lhs, 2 |a| |b - c|)`.
    pub best_general: (u64, u64),
}

impl TightnessReport {
    pub fn summary(&self) -> String {
        let part = |name: &str, w: &[Witness], best: (u64, u64)| {
            if w.is_empty() {
                format!("{name}: none found at budget (best ratio {}/{})", best.0, best.1)
            } else {
                format!("{name}: {} witnesses", w.len())
            }
        };
        format!(
            "{}; {}",
            part("constant 1, closed alpha", &self.closed, self.best_closed),
            part("constant 2, essential alpha", &self.general, self.best_general)
        )
    }
}

fn better(a: (u64, u64), b: (u64, u64)) -> bool {
    // a.0 / a.1 > b.0 / b.1 with zero denominators losing
    a.1 > 0 && (b.1 == 0 || (a.0 as u128) * (b.1 as u128) > (b.0 as u128) * (a.1 as u128))
}

/// A random valid neighbour of `b`: one or two unit changes, or a fresh
/// sample.
fn perturb<R: rand::Rng>(tri: &IdealTriangulation, b: &TCoord, max_entry: u64, rng: &mut R) -> TCoord {
    if rng.gen_ratio(1, 4) {
        return crate::sample::sample_es(tri, max_entry, rng);
    }
    let n = b.len();
    loop {
        let mut c = b.clone();
        for _ in 0..rng.gen_range(1..=2) {
            let i = rng.gen_range(0..n);
            let v = if rng.gen_bool(0.5) { &mut c.x[i] } else { &mut c.xp[i] };
            let d = rng.gen_range(1..=2);
            if rng.gen_bool(0.5) {
                *v += d;
            } else {
                *v = v.saturating_sub(d);
            }
        }
        if c != *b && crate::coords::validate(tri, &c).is_ok() {
            return c;
        }
    }
}

/// Search for triples attaining the Cauchy bounds with equality.
///
/// Each trial draws `a` (a closed system for even trials, an essential
/// class for odd ones), `b` essential, and `c` a perturbation of `b`.
/// Witnesses are recomputed from scratch before they are reported.
pub fn tightness_search(tri: &IdealTriangulation, budget: Budget) -> Result<TightnessReport, IntersectionError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(budget.seed);
    let mut report = TightnessReport {
        budget,
        examined: 0,
        closed: Vec::new(),
        general: Vec::new(),
        best_closed: (0, 0),
        best_general: (0, 0),
    };
    if budget.max_entry == 0 {
        return Ok(report);
    }
    for trial in 0..budget.trials {
        let closed = trial % 2 == 0;
        let a = if closed {
            crate::sample::sample_cs0(tri, budget.max_entry, &mut rng)
        } else {
            crate::sample::sample_es(tri, budget.max_entry, &mut rng)
        };
        let b = crate::sample::sample_es(tri, budget.max_entry, &mut rng);
        let c = perturb(tri, &b, budget.max_entry, &mut rng);
        report.examined += 1;
        let r = cauchy_check(tri, &a, &b, &c)?;
        if r.lhs == 0 {
            continue;
        }
        let g = (r.lhs, r.rhs_general);
        if better(g, report.best_general) {
            report.best_general = g;
        }
        if r.lhs == r.rhs_general && verify(tri, &a, &b, &c, 2)? {
            report.general.push(Witness { alpha: a.clone(), beta: b.clone(), gamma: c.clone(), lhs: r.lhs, rhs: r.rhs_general });
        }
        if r.alpha_closed {
            let k = (r.lhs, r.rhs_closed);
            if better(k, report.best_closed) {
                report.best_closed = k;
            }
            if r.lhs == r.rhs_closed && verify(tri, &a, &b, &c, 1)? {
                report.closed.push(Witness { alpha: a, beta: b, gamma: c, lhs: r.lhs, rhs: r.rhs_closed });
            }
        }
    }
    Ok(report)
}

/// Recompute a candidate witness from scratch.
pub fn verify(tri: &IdealTriangulation, a: &TCoord, b: &TCoord, c: &TCoord, constant: u64) -> Result<bool, IntersectionError> {
    if constant == 1 && !classify_class(tri, a)?.cs0 {
        return Ok(false);
    }
    let lhs = geometric_intersection(tri, a, b)?.abs_diff(geometric_intersection(tri, a, c)?);
    Ok(lhs > 0 && lhs == constant * norm(a) * l1_distance(b, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{builtin_triangulation, SurfaceSpec};

    fn torus() -> IdealTriangulation {
        builtin_triangulation(SurfaceSpec::new(1, 1).unwrap()).unwrap()
    }

    fn slope(p: i64, q: i64) -> TCoord {
        TCoord::from_x(vec![p.unsigned_abs(), q.unsigned_abs(), (p + q).unsigned_abs()])
    }

    #[test]
    fn meridian_and_longitude_meet_once() {
        let tri = torus();
        assert_eq!(geometric_intersection(&tri, &slope(1, 0), &slope(0, 1)).unwrap(), 1);
        assert_eq!(geometric_intersection(&tri, &slope(1, 0), &slope(1, 0)).unwrap(), 0);
    }

    #[test]
    fn small_slopes_match_the_determinant() {
        let tri = torus();
        let mut slopes = Vec::new();
        for p in -4i64..=4 {
            for q in -4i64..=4 {
                if num_integer::gcd(p, q) == 1 && (p > 0 || (p == 0 && q > 0)) {
                    slopes.push((p, q));
                }
            }
        }
        for &(p, q) in &slopes {
            for &(r, s) in &slopes {
                let want = (p * s - q * r).unsigned_abs();
                let got = geometric_intersection(&tri, &slope(p, q), &slope(r, s)).unwrap();
                assert_eq!(got, want, "({p},{q}) vs ({r},{s})");
            }
        }
    }

    #[test]
    fn edge_class_meets_in_x() {
        let tri = torus();
        let a = slope(2, 3);
        for i in 0..3 {
            let t = TCoord::edge_class(3, i);
            assert_eq!(geometric_intersection(&tri, &a, &t).unwrap(), a.x[i]);
            assert_eq!(geometric_intersection(&tri, &t, &a).unwrap(), a.x[i]);
        }
    }

    #[test]
    fn cauchy_trivial_cases() {
        let tri = torus();
        let a = slope(1, 2);
        let r = cauchy_check(&tri, &a, &a, &a).unwrap();
        assert_eq!((r.lhs, r.rhs_closed, r.ok), (0, 0, true));
        let b = slope(3, 1);
        let r = cauchy_check(&tri, &a, &b, &b).unwrap();
        assert_eq!(r.lhs, 0);
        assert!(r.ok);
    }

    #[test]
    fn surgery_bounds_for_empty_alpha() {
        let tri = torus();
        let r = surgery_crossing_bounds(&tri, &TCoord::zero(3), &TCoord::from_x(vec![2, 2, 0]), 2, StepSlot::X).unwrap();
        assert_eq!((r.i_beta, r.i_gamma), (0, 0));
        assert!(r.ok);
    }

    #[test]
    fn tightness_search_is_deterministic_and_verified() {
        let tri = torus();
        let budget = Budget { max_entry: 6, trials: 200, seed: 3 };
        let r = tightness_search(&tri, budget).unwrap();
        assert_eq!(r, tightness_search(&tri, budget).unwrap());
        assert_eq!(r.examined, 200);
        for w in &r.closed {
            assert!(w.beta != w.gamma);
            assert!(verify(&tri, &w.alpha, &w.beta, &w.gamma, 1).unwrap());
        }
        let empty = tightness_search(&tri, Budget { max_entry: 0, trials: 10, seed: 0 }).unwrap();
        assert_eq!(empty.examined, 0);
    }

    #[test]
    fn copy_step_changes_by_twice_x() {
        let tri = torus();
        let a = slope(2, 1);
        let b = TCoord::zero(3);
        for i in 0..3 {
            let r = surgery_crossing_bounds(&tri, &a, &b, i, StepSlot::Xp).unwrap();
            assert_eq!(r.copy_step, Some(true));
            assert_eq!(r.i_gamma, 2 * a.x[i]);
        }
    }
}
