//! Seeded random coordinates for test harnesses.

use rand::Rng;

use crate::coords::{validate, TCoord};
use crate::curves::corner_arc_counts;
use crate::hexagon::in_triangle_set;
use crate::surface::IdealTriangulation;

fn triangles_ok(tri: &IdealTriangulation, x: &[u64], inside: bool) -> bool {
    tri.triangles().iter().all(|t| {
        let h = [x[t[0]], x[t[1]], x[t[2]]];
        let d = in_triangle_set(h);
        (!inside || d) && (!d || h.iter().sum::<u64>() % 2 == 0)
    })
}

/// A random closed curve system with entries at most `max_entry`.
///
/// A vector satisfying every triangle inequality with even triangle sums is
/// drawn by rejection; its corner values are then lowered around each
/// boundary until some corner is zero, which removes the peripheral loops.
pub fn sample_cs0<R: Rng>(tri: &IdealTriangulation, max_entry: u64, rng: &mut R) -> TCoord {
    let n = tri.edge_count();
    loop {
        let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_entry)).collect();
        if !triangles_ok(tri, &x, true) {
            continue;
        }
        let mut corners = corner_arc_counts(tri, &TCoord::from_x(x)).expect("admissible by construction");
        for b in tri.boundaries() {
            let m = b.iter().map(|&c| corners[c]).min().unwrap_or(0);
            for &c in b {
                corners[c] -= m;
            }
        }
        let x = (0..n)
            .map(|e| {
                let [a, b] = tri.flanking_corners(tri.edge_slots(e)[0]);
                corners[a] + corners[b]
            })
            .collect();
        return TCoord::from_x(x);
    }
}

/// A random essential 1-submanifold with entries at most `max_entry`: about
/// a third of the edges get x = 0, and half of those get a random number of
/// parallel copies.
pub fn sample_es<R: Rng>(tri: &IdealTriangulation, max_entry: u64, rng: &mut R) -> TCoord {
    let n = tri.edge_count();
    loop {
        let x: Vec<u64> = (0..n)
            .map(|_| if rng.gen_ratio(1, 3) { 0 } else { rng.gen_range(0..=max_entry) })
            .collect();
        if !triangles_ok(tri, &x, false) {
            continue;
        }
        let xp = x
            .iter()
            .map(|&v| if v == 0 && max_entry > 0 && rng.gen_bool(0.5) { rng.gen_range(1..=max_entry) } else { 0 })
            .collect();
        let c = TCoord { x, xp };
        debug_assert!(validate(tri, &c).is_ok());
        return c;
    }
}

/// Any valid coordinate with entries at most `max_entry`, drawn uniformly by
/// rejection from the vectors with `x_i * x'_i = 0`.
pub fn sample_valid<R: Rng>(tri: &IdealTriangulation, max_entry: u64, rng: &mut R) -> TCoord {
    let n = tri.edge_count();
    loop {
        let mut c = TCoord::zero(n);
        for i in 0..n {
            let v = rng.gen_range(0..=2 * max_entry);
            if v <= max_entry {
                c.x[i] = v;
            } else {
                c.xp[i] = v - max_entry;
            }
        }
        if validate(tri, &c).is_ok() {
            return c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::classify_class;
    use crate::surface::{builtin_triangulation, SurfaceSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_have_the_requested_class() {
        for (g, r) in [(1, 1), (0, 4), (1, 2), (2, 1)] {
            let tri = builtin_triangulation(SurfaceSpec::new(g, r).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..200 {
                let a = sample_cs0(&tri, 20, &mut rng);
                assert!(classify_class(&tri, &a).unwrap().cs0, "{a}");
                assert!(a.x.iter().all(|&v| v <= 20));
                let b = sample_es(&tri, 20, &mut rng);
                assert!(classify_class(&tri, &b).unwrap().es);
                let c = sample_valid(&tri, 5, &mut rng);
                assert!(validate(&tri, &c).is_ok());
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let tri = builtin_triangulation(SurfaceSpec::new(1, 2).unwrap()).unwrap();
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (0..20).map(|_| sample_es(&tri, 9, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }
}
