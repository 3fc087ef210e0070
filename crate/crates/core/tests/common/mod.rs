//! Helpers shared by the integration tests: random blow-up towers and an
//! independent Newton-polyhedron membership test.
#![allow(dead_code)]

use bdiv::rat::{int, Rat};
use bdiv::{CenterSpec, ModelId, Tower};
use num_integer::Integer;

/// A chain of blow-ups over the plane carrying two lines `A`, `B` and a
/// conic `Q`. Each op picks a point on the latest model: a general point,
/// a point of one curve, or the meeting point of two curves when they meet.
pub fn random_tower(ops: &[(u8, u8, u8)]) -> Tower {
    let mut t = Tower::projective_plane();
    let h = t.hyperplane(t.base_model()).unwrap();
    t.register_curve("A", &h).unwrap();
    t.register_curve("B", &h).unwrap();
    t.register_curve("Q", &h.scale(&int(2))).unwrap();
    for &(kind, i, j) in ops {
        let m = t.latest();
        let names = t.curve_names(m);
        let a = names[i as usize % names.len()].clone();
        let b = names[j as usize % names.len()].clone();
        let meet = a != b && t.intersect_curves(&a, &b, m).unwrap() >= int(1);
        let incident: Vec<&str> = match kind % 3 {
            0 => vec![],
            1 => vec![a.as_str()],
            _ if meet => vec![a.as_str(), b.as_str()],
            _ => vec![a.as_str()],
        };
        t.blow_up(&CenterSpec::new(m, &incident)).unwrap();
    }
    t
}

/// Models on the path from the base to the latest model.
pub fn chain(t: &Tower) -> Vec<ModelId> {
    t.path(t.latest()).unwrap()
}

/// Facets `(v, beta)` of `conv(gens) + R^2_{>=0}` as `<u, v> >= beta`,
/// found by brute force over pairs of generators.
pub fn newton_facets(gens: &[[u64; 2]]) -> Vec<([i64; 2], i64)> {
    let g: Vec<[i64; 2]> = gens.iter().map(|p| [p[0] as i64, p[1] as i64]).collect();
    let min_on = |v: [i64; 2]| g.iter().map(|p| p[0] * v[0] + p[1] * v[1]).min().unwrap();
    let mut out = vec![([1, 0], min_on([1, 0])), ([0, 1], min_on([0, 1]))];
    for p in &g {
        for q in &g {
            if p == q {
                continue;
            }
            let mut v = [p[1] - q[1], q[0] - p[0]];
            if v[0] < 0 || v[1] < 0 {
                v = [-v[0], -v[1]];
            }
            if v[0] <= 0 || v[1] <= 0 {
                continue;
            }
            let gcd = v[0].gcd(&v[1]);
            v = [v[0] / gcd, v[1] / gcd];
            let beta = min_on(v);
            let on = |x: &[i64; 2]| x[0] * v[0] + x[1] * v[1] == beta;
            if on(p) && on(q) && !out.contains(&(v, beta)) {
                out.push((v, beta));
            }
        }
    }
    out
}

/// `(a + 1, b + 1)` lies in the interior of `t * Newton(gens)`.
pub fn howald_contains(gens: &[[u64; 2]], t: &Rat, m: [u64; 2]) -> bool {
    newton_facets(gens).iter().all(|(v, beta)| {
        let lhs = int((m[0] as i64 + 1) * v[0] + (m[1] as i64 + 1) * v[1]);
        lhs > t * int(*beta)
    })
}
