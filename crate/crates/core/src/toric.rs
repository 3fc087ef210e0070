//! Smooth complete 2-dimensional fans, monomial ideals in `k[x, y]`, and the
//! multiplier ideals of `c log |I|` computed on a toric log resolution.
//!
//! Conventions: the base is the projective plane with fan rays
//! `(1,0), (0,1), (-1,-1)` and `H` is the divisor of the ray `(-1,-1)` (the
//! line at infinity). The singularity sits at the origin of the affine
//! chart, so all refinement happens inside the first quadrant.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bdivisor::bdiv_from_algebraic_data;
use crate::error::{invalid, Error, Result};
use crate::h0::{second_difference_volume, Budget};
use crate::rat::{floor_to_i64, int, Rat};
use crate::tower::{CenterSpec, DivisorClass, ModelId, Tower};

pub type Ray = [i64; 2];

fn det(u: Ray, v: Ray) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(m: [i64; 2], v: Ray) -> i64 {
    m[0] * v[0] + m[1] * v[1]
}

fn in_closed_quadrant(v: Ray) -> bool {
    v[0] >= 0 && v[1] >= 0
}

/// Half-plane index then cross product: a total order on directions by angle in `[0, 2pi)`.
fn angle_cmp(u: Ray, v: Ray) -> std::cmp::Ordering {
    let half = |w: Ray| if w[1] > 0 || (w[1] == 0 && w[0] > 0) { 0 } else { 1 };
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&det(u, v)))
}

pub fn ray_label(v: Ray) -> String {
    format!("D({},{})", v[0], v[1])
}

/// A smooth complete fan, rays in counter-clockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan2D {
    rays: Vec<Ray>,
}

impl Fan2D {
    pub fn new(rays: Vec<Ray>) -> Result<Fan2D> {
        if rays.len() < 3 {
            return invalid("a complete fan needs at least 3 rays");
        }
        for v in &rays {
            if v[0].gcd(&v[1]) != 1 {
                return invalid(format!("ray ({}, {}) is not primitive", v[0], v[1]));
            }
        }
        let mut sorted = rays.clone();
        sorted.sort_by(|a, b| angle_cmp(*a, *b));
        let start = sorted.iter().position(|r| *r == rays[0]).unwrap();
        sorted.rotate_left(start);
        if sorted != rays {
            return invalid("rays must be listed in counter-clockwise order");
        }
        let n = rays.len();
        for i in 0..n {
            let (u, w) = (rays[i], rays[(i + 1) % n]);
            match det(u, w) {
                1 => {}
                d if d <= 0 => return invalid("rays do not span the plane positively"),
                d => return invalid(format!("cone ({},{}),({},{}) has determinant {d}", u[0], u[1], w[0], w[1])),
            }
        }
        Ok(Fan2D { rays })
    }

    pub fn projective_plane() -> Fan2D {
        Fan2D { rays: vec![[1, 0], [0, 1], [-1, -1]] }
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn index_of(&self, v: Ray) -> Option<usize> {
        self.rays.iter().position(|r| *r == v)
    }

    /// Index `i` of the cone `(v_i, v_{i+1})` containing `v` in its relative interior.
    fn cone_containing(&self, v: Ray) -> Option<usize> {
        let n = self.rays.len();
        (0..n).find(|&i| det(self.rays[i], v) > 0 && det(v, self.rays[(i + 1) % n]) > 0)
    }

    /// Star subdivision at `v`, which must be the sum of the generators of
    /// the cone it lies in.
    pub fn refine(&self, v: Ray) -> Result<Fan2D> {
        if self.index_of(v).is_some() {
            return invalid(format!("({}, {}) is already a ray", v[0], v[1]));
        }
        if v == [0, 0] || v[0].gcd(&v[1]) != 1 {
            return invalid(format!("({}, {}) is not a primitive vector", v[0], v[1]));
        }
        let i = self
            .cone_containing(v)
            .ok_or_else(|| Error::Validation(format!("({}, {}) lies on an existing ray", v[0], v[1])))?;
        let n = self.rays.len();
        let (u, w) = (self.rays[i], self.rays[(i + 1) % n]);
        if det(u, v) != 1 || det(v, w) != 1 {
            return invalid(format!(
                "refining at ({}, {}) makes a singular cone; smooth refinement uses ({}, {})",
                v[0],
                v[1],
                u[0] + w[0],
                u[1] + w[1]
            ));
        }
        let mut rays = self.rays.clone();
        rays.insert(i + 1, v);
        Ok(Fan2D { rays })
    }

    /// `a_i` with `v_{i-1} + v_{i+1} = a_i v_i`; the self-intersection of `D_i` is `-a_i`.
    pub fn a(&self, i: usize) -> i64 {
        let n = self.rays.len();
        let (p, v, q) = (self.rays[(i + n - 1) % n], self.rays[i], self.rays[(i + 1) % n]);
        let s = [p[0] + q[0], p[1] + q[1]];
        // v is primitive and s is a multiple of it
        if v[0] != 0 {
            s[0] / v[0]
        } else {
            s[1] / v[1]
        }
    }

    pub fn self_intersection(&self, i: usize) -> i64 {
        -self.a(i)
    }

    /// Intersection matrix of the ray divisors.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rays.len();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = self.self_intersection(i);
            m[i][(i + 1) % n] = 1;
            m[(i + 1) % n][i] = 1;
        }
        m
    }

    pub fn intersect(&self, a: &[Rat], b: &[Rat]) -> Result<Rat> {
        let n = self.rays.len();
        if a.len() != n || b.len() != n {
            return invalid("toric divisor has the wrong number of coefficients");
        }
        let m = self.intersection_matrix();
        let mut s = Rat::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if m[i][j] != 0 && !b[j].is_zero() {
                    s += &a[i] * &b[j] * int(m[i][j]);
                }
            }
        }
        Ok(s)
    }
}

impl fmt::Display for Fan2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rays.iter().map(|v| format!("({},{})", v[0], v[1])).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A monomial ideal of `k[x, y]` by its minimal generators, sorted by
/// increasing `x`-exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialIdeal2D {
    generators: Vec<[u64; 2]>,
}

impl MonomialIdeal2D {
    pub fn new(generators: &[[u64; 2]]) -> Result<MonomialIdeal2D> {
        if generators.is_empty() {
            return invalid("the ideal must be nonzero");
        }
        let mut g = generators.to_vec();
        g.sort();
        g.dedup();
        let mut out: Vec<[u64; 2]> = vec![];
        for m in g {
            // sorted by a; keep m only if its b is below every kept b
            if out.last().is_none_or(|last| m[1] < last[1]) {
                out.push(m);
            }
        }
        Ok(MonomialIdeal2D { generators: out })
    }

    pub fn unit() -> MonomialIdeal2D {
        MonomialIdeal2D { generators: vec![[0, 0]] }
    }

    /// `(x, y)^n`.
    pub fn maximal_power(n: u64) -> MonomialIdeal2D {
        MonomialIdeal2D { generators: (0..=n).map(|i| [i, n - i]).collect() }
    }

    pub fn generators(&self) -> &[[u64; 2]] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators == [[0, 0]]
    }

    pub fn contains(&self, m: [u64; 2]) -> bool {
        self.generators.iter().any(|g| g[0] <= m[0] && g[1] <= m[1])
    }

    /// Smallest `a` with `x^a y^b` in the ideal, if any.
    pub fn min_x_exponent(&self, b: u64) -> Option<u64> {
        self.generators.iter().filter(|g| g[1] <= b).map(|g| g[0]).min()
    }

    pub fn product(&self, other: &MonomialIdeal2D) -> MonomialIdeal2D {
        let mut g = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                g.push([a[0] + b[0], a[1] + b[1]]);
            }
        }
        MonomialIdeal2D::new(&g).expect("product of nonzero ideals")
    }

    pub fn is_subset_of(&self, other: &MonomialIdeal2D) -> bool {
        self.generators.iter().all(|g| other.contains(*g))
    }

    /// Primitive inner normals of the compact edges of the Newton polygon.
    pub fn newton_normals(&self) -> Vec<Ray> {
        let hull = lower_hull(&self.generators);
        hull.windows(2)
            .map(|w| {
                let (da, db) = (w[1][0] as i64 - w[0][0] as i64, w[1][1] as i64 - w[0][1] as i64);
                let (p, q) = (-db, da);
                let g = p.gcd(&q);
                [p / g, q / g]
            })
            .collect()
    }

    /// Support function `min_m <m, v>` of the Newton polyhedron.
    pub fn support(&self, v: Ray) -> i64 {
        self.generators.iter().map(|g| dot([g[0] as i64, g[1] as i64], v)).min().unwrap()
    }
}

impl fmt::Display for MonomialIdeal2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |g: &[u64; 2]| match (g[0], g[1]) {
            (0, 0) => "1".to_string(),
            (a, 0) => if a == 1 { "x".into() } else { format!("x^{a}") },
            (0, b) => if b == 1 { "y".into() } else { format!("y^{b}") },
            (a, b) => {
                let x = if a == 1 { "x".to_string() } else { format!("x^{a}") };
                let y = if b == 1 { "y".to_string() } else { format!("y^{b}") };
                format!("{x}{y}")
            }
        };
        let parts: Vec<String> = self.generators.iter().rev().map(mono).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Vertices of the lower-left convex hull of points sorted by `x`.
fn lower_hull(points: &[[u64; 2]]) -> Vec<[u64; 2]> {
    let mut hull: Vec<[u64; 2]> = vec![];
    for p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b[0] as i64 - a[0] as i64) * (p[1] as i64 - a[1] as i64)
                - (b[1] as i64 - a[1] as i64) * (p[0] as i64 - a[0] as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(*p);
    }
    hull
}

impl fmt::Display for PLMetricData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d={}, c={}, I={})", self.d, self.c, self.ideal)
    }
}

/// The weight `c log |I|` twisting `O(dH)` on the projective plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PLMetricData {
    pub d: u64,
    pub ideal: MonomialIdeal2D,
    #[serde(with = "crate::rat::serde_rat")]
    pub c: Rat,
}

impl PLMetricData {
    pub fn new(d: u64, ideal: MonomialIdeal2D, c: Rat) -> Result<PLMetricData> {
        if d == 0 {
            return invalid("line bundle degree must be positive");
        }
        if c.is_negative() {
            return invalid("weight c must be non-negative");
        }
        Ok(PLMetricData { d, ideal, c })
    }

    /// `alpha(v)` for rays over the origin chart, zero elsewhere.
    pub fn alpha(&self, v: Ray) -> i64 {
        if in_closed_quadrant(v) {
            self.ideal.support(v)
        } else {
            0
        }
    }

    pub fn lelong(&self, v: Ray) -> Rat {
        &self.c * int(self.alpha(v))
    }
}

/// Relative canonical coefficient of a ray over the origin chart.
pub fn discrepancy(v: Ray) -> i64 {
    v[0] + v[1] - 1
}

/// `max(0, -x, -y)`: coefficient of the pullback of `H` on the ray `(x, y)`.
pub fn hyperplane_coefficient(v: Ray) -> i64 {
    0.max(-v[0]).max(-v[1])
}

/// A chain of fans `F_0 = P^2, F_1, ...`, each a star subdivision of the previous.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub fans: Vec<Fan2D>,
    /// `(u, w, u + w)` for each subdivision, in order.
    pub steps: Vec<(Ray, Ray, Ray)>,
}

impl Resolution {
    pub fn fan(&self) -> &Fan2D {
        self.fans.last().unwrap()
    }
}

/// Smallest chain of smooth star subdivisions of the projective plane fan
/// making every Newton-polygon normal of `ideal` a ray.
pub fn log_resolution(ideal: &MonomialIdeal2D) -> Resolution {
    let mut fan = Fan2D::projective_plane();
    let mut fans = vec![fan.clone()];
    let mut steps = vec![];
    for target in ideal.newton_normals() {
        while fan.index_of(target).is_none() {
            let i = fan.cone_containing(target).expect("normals lie in the open quadrant");
            let n = fan.len();
            let (u, w) = (fan.rays[i], fan.rays[(i + 1) % n]);
            let v = [u[0] + w[0], u[1] + w[1]];
            fan = fan.refine(v).expect("sum of a smooth cone refines smoothly");
            fans.push(fan.clone());
            steps.push((u, w, v));
        }
    }
    Resolution { fans, steps }
}

/// A torus-invariant divisor on a fan, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDivisor {
    pub fan: Fan2D,
    pub coeffs: Vec<Rat>,
}

impl ToricDivisor {
    pub fn self_intersection(&self) -> Result<Rat> {
        self.fan.intersect(&self.coeffs, &self.coeffs)
    }

    pub fn coefficient(&self, v: Ray) -> Option<&Rat> {
        self.fan.index_of(v).map(|i| &self.coeffs[i])
    }

    /// Pairings with every invariant curve.
    pub fn pairings(&self) -> Vec<(Ray, Rat)> {
        let n = self.fan.len();
        (0..n)
            .map(|i| {
                let mut e = vec![Rat::zero(); n];
                e[i] = int(1);
                (self.fan.rays[i], self.fan.intersect(&self.coeffs, &e).unwrap())
            })
            .collect()
    }

    /// Invariant curves generate the cone of curves of a complete toric surface.
    pub fn is_nef(&self) -> bool {
        self.pairings().iter().all(|(_, p)| !p.is_negative())
    }
}

/// Lelong values by ray on one fan of the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LelongData {
    pub fan: Fan2D,
    pub values: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct LelongBDivisor {
    pub resolution: Resolution,
    /// `d H - c D_I` on the resolution fan.
    pub determination: ToricDivisor,
    /// `D_I`, coefficients `alpha(v)`.
    pub ideal_divisor: ToricDivisor,
    pub lelong: Vec<LelongData>,
}

pub fn lelong_bdivisor(metric: &PLMetricData) -> LelongBDivisor {
    let resolution = log_resolution(&metric.ideal);
    let fan = resolution.fan().clone();
    let ideal_coeffs: Vec<Rat> = fan.rays().iter().map(|v| int(metric.alpha(*v))).collect();
    let d = int(metric.d as i64);
    let det_coeffs: Vec<Rat> = fan
        .rays()
        .iter()
        .zip(&ideal_coeffs)
        .map(|(v, a)| &d * int(hyperplane_coefficient(*v)) - &metric.c * a)
        .collect();
    let lelong = resolution
        .fans
        .iter()
        .map(|f| LelongData { fan: f.clone(), values: f.rays().iter().map(|v| metric.lelong(*v)).collect() })
        .collect();
    LelongBDivisor {
        determination: ToricDivisor { fan: fan.clone(), coeffs: det_coeffs },
        ideal_divisor: ToricDivisor { fan, coeffs: ideal_coeffs },
        resolution,
        lelong,
    }
}

/// The resolution as a tower of point blow-ups: each subdivision blows up
/// the point where the two invariant curves of its cone meet. Curves are
/// named by [`ray_label`].
pub fn resolution_tower(res: &Resolution) -> Result<(Tower, ModelId)> {
    let mut t = Tower::projective_plane();
    let base = t.base_model();
    let h = t.hyperplane(base)?;
    for v in Fan2D::projective_plane().rays() {
        t.register_curve(&ray_label(*v), &h)?;
    }
    let mut m = base;
    for (u, w, v) in &res.steps {
        m = t.blow_up_named(&CenterSpec::new(m, &[&ray_label(*u), &ray_label(*w)]), &ray_label(*v))?;
    }
    Ok((t, m))
}

/// The class of a toric divisor on the resolution tower.
pub fn class_on_tower(t: &Tower, m: ModelId, d: &ToricDivisor) -> Result<DivisorClass> {
    let mut c = t.zero(m)?;
    for (v, a) in d.fan.rays().iter().zip(&d.coeffs) {
        if !a.is_zero() {
            c = &c + &t.curve_class(&ray_label(*v), m)?.scale(a);
        }
    }
    Ok(c)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

/// Multiplier ideal `J(k phi)` by the pushforward formula: `x^m` is in it
/// iff `<m, v> >= floor(k c alpha(v)) - disc(v)` for every ray `v` of the
/// resolution over the origin chart.
pub struct MultiplierIdeals<'a> {
    metric: &'a PLMetricData,
    rays: Vec<Ray>,
}

impl<'a> MultiplierIdeals<'a> {
    pub fn new(metric: &'a PLMetricData) -> MultiplierIdeals<'a> {
        let fan = log_resolution(&metric.ideal).fan().clone();
        let rays = fan.rays().iter().copied().filter(|v| in_closed_quadrant(*v)).collect();
        MultiplierIdeals { metric, rays }
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// `floor(k c alpha(v)) - disc(v)` for each ray.
    pub fn thresholds(&self, k: u64) -> Vec<(Ray, i64)> {
        let kc = &self.metric.c * int(k as i64);
        self.rays
            .iter()
            .map(|v| (*v, floor_to_i64(&(&kc * int(self.metric.alpha(*v)))) - discrepancy(*v)))
            .collect()
    }

    pub fn contains(&self, k: u64, m: [u64; 2]) -> bool {
        let m = [m[0] as i64, m[1] as i64];
        self.thresholds(k).iter().all(|(v, t)| dot(m, *v) >= *t)
    }

    pub fn ideal(&self, k: u64) -> MonomialIdeal2D {
        let th = self.thresholds(k);
        // y-exponents beyond b_max satisfy every condition with a = 0
        let b_max = th
            .iter()
            .filter(|(v, _)| v[1] > 0)
            .map(|(v, t)| ceil_div((*t).max(0), v[1]))
            .max()
            .unwrap_or(0)
            .max(0);
        let mut gens = vec![];
        for b in 0..=b_max {
            let mut a = 0i64;
            let mut ok = true;
            for (v, t) in &th {
                let need = t - b * v[1];
                if v[0] == 0 {
                    ok &= need <= 0;
                } else {
                    a = a.max(ceil_div(need, v[0]));
                }
            }
            if ok {
                gens.push([a as u64, b as u64]);
            }
        }
        MonomialIdeal2D::new(&gens).expect("high powers of y always lie in J")
    }

    /// Exponents in the degree-`kd` simplex on which the floor convention and
    /// the `ceil - 1` convention disagree: `k c alpha(v)` is an integer and
    /// `<m + (1,1), v> = k c alpha(v)` for some ray. The floor formula excludes them.
    pub fn threshold_boundary(&self, k: u64) -> Vec<([u64; 2], Ray)> {
        let kc = &self.metric.c * int(k as i64);
        let top = (k * self.metric.d) as i64;
        let mut out = vec![];
        for v in &self.rays {
            let x = &kc * int(self.metric.alpha(*v));
            if !x.is_integer() || x.is_zero() {
                continue;
            }
            let target = floor_to_i64(&x);
            for a in 0..=top {
                for b in 0..=top - a {
                    if dot([a + 1, b + 1], *v) == target {
                        out.push(([a as u64, b as u64], *v));
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Monomials `x^a y^b` with `a + b <= k d` lying in `j`.
pub fn h0_with_ideal(d: u64, j: &MonomialIdeal2D, k: u64, budget: &Budget) -> Result<u64> {
    let top = k.checked_mul(d).ok_or(Error::Budget { needed: u128::MAX, budget: budget.max_ops })?;
    budget.charge((top as u128 + 1) * j.generators().len() as u128)?;
    let mut count = 0u64;
    for b in 0..=top {
        if let Some(a) = j.min_x_exponent(b) {
            if a + b <= top {
                count += top - b - a + 1;
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, Serialize)]
pub struct HsRow {
    pub k: u64,
    pub h0: u64,
    #[serde(with = "crate::rat::serde_rat")]
    pub s: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueEstimate {
    pub residue: u64,
    /// Largest-`k` window used: `k, k + q, k + 2q`.
    pub k: u64,
    #[serde(with = "crate::rat::serde_rat")]
    pub estimate: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct HsReport {
    pub metric: PLMetricData,
    pub resolution_fan: String,
    /// `(d H - c D_I)^2` on the resolution fan.
    #[serde(with = "crate::rat::serde_rat")]
    pub target: Rat,
    pub rows: Vec<HsRow>,
    /// `max |s_k - T|` over `4 <= k <= k_max`.
    #[serde(with = "crate::rat::serde_rat")]
    pub max_deviation: Rat,
    /// `C = max k |s_k - T|` over the fit range.
    #[serde(with = "crate::rat::serde_rat")]
    pub fitted_c: Rat,
    pub fit_range: (u64, u64),
    /// `|s_k - T| <= C / k` on all of `4..=k_max`.
    pub decay_holds: bool,
    pub sign_changes: usize,
    /// Second differences of `h0` along each class of `k` mod the denominator of `c`.
    pub residue_estimates: Vec<ResidueEstimate>,
    /// The class `k c in Z` gives the same estimate as every other class.
    pub integral_subsequence_consistent: bool,
}

impl HsReport {
    pub fn s(&self, k: u64) -> Option<&Rat> {
        self.rows.iter().find(|r| r.k == k).map(|r| &r.s)
    }

    /// Estimate from the subsequence `k c in Z`.
    pub fn integral_estimate(&self) -> &Rat {
        &self.residue_estimates[0].estimate
    }
}

pub fn hs_check(metric: &PLMetricData, k_max: u64, budget: &Budget) -> Result<HsReport> {
    if k_max < 4 {
        return invalid("k_max must be at least 4");
    }
    let lb = lelong_bdivisor(metric);
    let target = lb.determination.self_intersection()?;
    let mi = MultiplierIdeals::new(metric);
    let q: u64 = metric.c.denom().try_into().map_err(|_| Error::Validation("denominator of c too large".into()))?;
    let k_top = k_max + 2 * q;
    let mut h = BTreeMap::new();
    for k in 1..=k_top {
        h.insert(k, h0_with_ideal(metric.d, &mi.ideal(k), k, budget)?);
    }
    let rows: Vec<HsRow> = (1..=k_max)
        .map(|k| HsRow { k, h0: h[&k], s: int(2 * h[&k] as i64) / int((k * k) as i64) })
        .collect();
    let dev = |r: &HsRow| (&r.s - &target).abs();
    let tail: Vec<&HsRow> = rows.iter().filter(|r| r.k >= 4).collect();
    let max_deviation = tail.iter().map(|r| dev(r)).max().unwrap();
    let fit_hi = (k_max / 2).max(4);
    let fitted_c = tail.iter().filter(|r| r.k <= fit_hi).map(|r| dev(r) * int(r.k as i64)).max().unwrap();
    let decay_holds = tail.iter().all(|r| dev(r) * int(r.k as i64) <= fitted_c);
    let signs: Vec<i32> = tail
        .iter()
        .map(|r| {
            let x = &r.s - &target;
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|s| *s != 0)
        .collect();
    let sign_changes = signs.windows(2).filter(|w| w[0] != w[1]).count();

    let mut residue_estimates = vec![];
    for r in 0..q {
        // largest k <= k_max with k = r mod q, k >= 1
        let mut k = k_max - ((k_max + q - r) % q);
        if k == 0 {
            k = q;
        }
        let est = second_difference_volume(h[&k], h[&(k + q)], h[&(k + 2 * q)], q);
        residue_estimates.push(ResidueEstimate { residue: r, k, estimate: est });
    }
    let integral_subsequence_consistent = residue_estimates.iter().all(|e| e.estimate == residue_estimates[0].estimate);
    Ok(HsReport {
        metric: metric.clone(),
        resolution_fan: lb.resolution.fan().to_string(),
        target,
        rows,
        max_deviation,
        fitted_c,
        fit_range: (4, fit_hi),
        decay_holds,
        sign_changes,
        residue_estimates,
        integral_subsequence_consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CwReport {
    /// Degree of the b-divisor `pi^*(dH) - c F` built on the resolution tower.
    #[serde(with = "crate::rat::serde_rat")]
    pub bdeg: Rat,
    /// `(d H - c D_I)^2` from toric intersection numbers.
    #[serde(with = "crate::rat::serde_rat")]
    pub eqalg: Rat,
    /// Second-difference estimate along `k c in Z`.
    #[serde(with = "crate::rat::serde_rat")]
    pub hs_est: Rat,
    /// `s_{k_max}`.
    #[serde(with = "crate::rat::serde_rat")]
    pub hs_last: Rat,
    pub k_max: u64,
    pub lelong_zero: bool,
}

/// Degree of the Lelong b-divisor two ways plus the lattice-count limit.
/// Refuses when `d H - c D_I` is not nef on the resolution.
pub fn chern_weil_check(metric: &PLMetricData, k_max: u64, budget: &Budget) -> Result<CwReport> {
    let lb = lelong_bdivisor(metric);
    if let Some((v, p)) = lb.determination.pairings().into_iter().find(|(_, p)| p.is_negative()) {
        return invalid(format!(
            "d H - c D_I is not nef on the resolution: pairing {p} with {}; the degree formula needs a nef class",
            ray_label(v)
        ));
    }
    let eqalg = lb.determination.self_intersection()?;
    let (t, m) = resolution_tower(&lb.resolution)?;
    let div_s = t.hyperplane(t.base_model())?.scale(&int(metric.d as i64));
    let f = class_on_tower(&t, m, &lb.ideal_divisor)?;
    let b = bdiv_from_algebraic_data(&t, &div_s, &f, &metric.c)?;
    let bdeg = b.degree(&t)?;
    if bdeg != eqalg {
        return Err(Error::Inconsistent(format!("b-divisor degree {bdeg} differs from toric degree {eqalg}")));
    }
    let hs = hs_check(metric, k_max, budget)?;
    let lelong_zero = lb.lelong.last().unwrap().values.iter().all(Zero::is_zero);
    Ok(CwReport {
        bdeg,
        eqalg,
        hs_est: hs.integral_estimate().clone(),
        hs_last: hs.rows.last().unwrap().s.clone(),
        k_max,
        lelong_zero,
    })
}

/// The three metrics used throughout the tests and the CLI defaults.
pub fn standard_suite() -> Vec<PLMetricData> {
    let m = MonomialIdeal2D::maximal_power(1);
    let x2y = MonomialIdeal2D::new(&[[2, 0], [0, 1]]).unwrap();
    vec![
        PLMetricData::new(2, m.clone(), int(1)).unwrap(),
        PLMetricData::new(3, m, Rat::new(3.into(), 2.into())).unwrap(),
        PLMetricData::new(2, x2y, int(1)).unwrap(),
    ]
}
