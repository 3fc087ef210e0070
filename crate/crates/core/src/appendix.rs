//! The two-step blow-up construction whose limit b-divisor has degree 3
//! but volume 1 (in the `l^2/2` normalization).
//!
//! Step 1 blows up `b` times along a chain of infinitely near points
//! starting at `A ∩ B`, each new center being the point where the strict
//! transform of `B` meets the newest exceptional curve, and forms
//! `D_b = pi^*D - sum_{i=1..b} (i/b) strict(E_i)`.
//!
//! Step 2 starts from a line `L` on the projective plane with `D = 2H` and
//! applies Step 1 at a fresh point `p_j = L ∩ B_j` in round `j = 1..k` with
//! `b = 2^j`.

use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::rat::{int, Rat};
use crate::tower::{components_among, CenterSpec, DivisorClass, ModelId, Tower};

/// Output of one application of Step 1.
#[derive(Clone, Debug)]
pub struct Step1 {
    pub model: ModelId,
    pub divisor: DivisorClass,
    /// Names of `E_1, ..., E_b` in blow-up order.
    pub exceptionals: Vec<String>,
}

/// Runs Step 1 on `tower`: `a` and `b_curve` must meet transversally at the
/// center on `center_model`, and `d` must not have a registered component
/// through it. Exceptional curves are named `<prefix><i>`.
pub fn build_step1(
    tower: &mut Tower,
    a: &str,
    b_curve: &str,
    center_model: ModelId,
    d: &DivisorClass,
    b: usize,
    prefix: &str,
) -> Result<Step1> {
    if b < 1 {
        return invalid("step 1 needs b >= 1");
    }
    if a == b_curve {
        return invalid("A and B must be distinct curves");
    }
    let d = tower.pullback(d, center_model)?;
    let decomp = tower.strict_decomposition(&d)?;
    if let Some(c) = components_among(&decomp, &[a.to_string(), b_curve.to_string()]) {
        return invalid(format!("divisor has component '{c}' through the center {a} ∩ {b_curve}"));
    }
    let ab = tower.intersect_curves(a, b_curve, center_model)?;
    if ab < Rat::one() {
        return invalid(format!("{a} and {b_curve} do not meet on {center_model}"));
    }

    let mut names = Vec::with_capacity(b);
    let first = format!("{prefix}1");
    let mut model = tower.blow_up_named(&CenterSpec::new(center_model, &[a, b_curve]), &first)?;
    names.push(first);
    for i in 2..=b {
        let name = format!("{prefix}{i}");
        let prev = names.last().unwrap().clone();
        model = tower.blow_up_named(&CenterSpec::new(model, &[b_curve, &prev]), &name)?;
        names.push(name);
    }

    let mut divisor = tower.pullback(&d, model)?;
    let bq = int(b as i64);
    for (i, name) in names.iter().enumerate() {
        let strict = tower.curve_sparse(name, model)?;
        divisor.add_sparse(&strict, &-(int(i as i64 + 1) / &bq));
    }
    Ok(Step1 { model, divisor, exceptionals: names })
}

/// One level `k` of the Step-2 tower.
#[derive(Clone, Debug)]
pub struct AppendixLevel {
    pub k: usize,
    pub model: ModelId,
    /// `D'_k`.
    pub divisor: DivisorClass,
}

/// The Step-2 tower over the projective plane.
#[derive(Clone, Debug)]
pub struct AppendixTower {
    pub tower: Tower,
    /// Name of the line carrying every blown-up base point.
    pub line: String,
    /// `B_1, ..., B_k`.
    pub lines: Vec<String>,
    pub levels: Vec<AppendixLevel>,
}

impl AppendixTower {
    pub fn level(&self, k: usize) -> Result<&AppendixLevel> {
        self.levels.get(k).ok_or(Error::OutOfRange { requested: k, available: self.levels.len() - 1 })
    }

    pub fn k_max(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Number of blow-ups performed by [`build_step2`] for `k` rounds.
pub fn step2_blowups(k: usize) -> u128 {
    (1u128 << (k + 1)) - 2
}

/// Builds `X'_0, ..., X'_k` and `D'_0 = 2H, ..., D'_k`. Round `j` uses
/// `b = 2^j` at the point `L ∩ B_j`; exceptionals are named `E<j>_<i>`.
pub fn build_step2(k: usize) -> Result<AppendixTower> {
    if k > 24 {
        return invalid("step 2 supports at most 24 rounds");
    }
    let mut tower = Tower::projective_plane();
    let base = tower.base_model();
    let h = tower.hyperplane(base)?;
    tower.register_curve("L", &h)?;
    let d0 = h.scale(&int(2));
    let mut levels = vec![AppendixLevel { k: 0, model: base, divisor: d0 }];
    let mut lines = Vec::with_capacity(k);
    for j in 1..=k {
        let prev = levels.last().unwrap();
        let bj = format!("B{j}");
        let hj = tower.hyperplane(prev.model)?;
        tower.register_curve(&bj, &hj)?;
        let step = build_step1(&mut tower, "L", &bj, prev.model, &prev.divisor.clone(), 1 << j, &format!("E{j}_"))?;
        lines.push(bj);
        levels.push(AppendixLevel { k: j, model: step.model, divisor: step.divisor });
    }
    Ok(AppendixTower { tower, line: "L".into(), lines, levels })
}

/// `3 + 2^{-k}`: the exact self-intersection of `D'_k`.
pub fn step2_degree_closed_form(k: usize) -> Rat {
    int(3) + Rat::new(One::one(), num_traits::pow(num_bigint::BigInt::from(2), k))
}

pub fn step2_degree_limit() -> Rat {
    int(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn step1_plane(b: usize) -> (Tower, Step1) {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        t.register_curve("L", &h).unwrap();
        t.register_curve("B0", &h).unwrap();
        let d = h.scale(&int(2));
        let s = build_step1(&mut t, "L", "B0", ModelId(0), &d, b, "E").unwrap();
        (t, s)
    }

    #[test]
    fn step1_b1() {
        let (t, s) = step1_plane(1);
        assert_eq!(t.curve_class("L", s.model).unwrap().coeffs(), &[int(1), int(-1)]);
        assert_eq!(t.curve_class("B0", s.model).unwrap().coeffs(), &[int(1), int(-1)]);
        assert_eq!(t.curve_class("E1", s.model).unwrap().coeffs(), &[int(0), int(1)]);
        assert_eq!(t.self_intersection("L", s.model).unwrap(), int(0));
    }

    #[test]
    fn step1_b2_intersections() {
        let (t, s) = step1_plane(2);
        assert_eq!(t.self_intersection("B0", s.model).unwrap(), int(-1));
        assert_eq!(t.self_intersection("E1", s.model).unwrap(), int(-2));
        assert_eq!(t.intersect_curves("E1", "E2", s.model).unwrap(), int(1));
        let e2 = t.curve_class("E2", s.model).unwrap();
        let b = t.curve_class("B0", s.model).unwrap();
        assert_eq!(t.intersect(&s.divisor, &e2).unwrap(), rat(1, 2));
        assert_eq!(t.intersect(&s.divisor, &b).unwrap(), int(1));
    }

    #[test]
    fn step1_other_items() {
        let (t, s) = step1_plane(3);
        for e in ["E1", "E2"] {
            let c = t.curve_class(e, s.model).unwrap();
            assert_eq!(t.intersect(&s.divisor, &c).unwrap(), int(0));
        }
        let (t, s) = step1_plane(4);
        assert_eq!(t.intersect(&s.divisor, &s.divisor).unwrap(), rat(15, 4));
        let (t, s) = step1_plane(5);
        let l = t.curve_class("L", s.model).unwrap();
        assert_eq!(t.intersect(&s.divisor, &l).unwrap(), rat(9, 5));
    }

    #[test]
    fn step1_rejects_bad_input() {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        t.register_curve("L", &h).unwrap();
        t.register_curve("B0", &h).unwrap();
        assert!(build_step1(&mut t, "L", "B0", ModelId(0), &h, 0, "E").is_err());
        // D containing the exceptional through the next center
        let s = build_step1(&mut t, "L", "B0", ModelId(0), &h, 1, "E").unwrap();
        let e1 = t.curve_class("E1", s.model).unwrap();
        let bad = &t.pullback(&h, s.model).unwrap() + &e1;
        assert!(build_step1(&mut t, "B0", "E1", s.model, &bad, 1, "F").is_err());
    }

    #[test]
    fn step2_small() {
        let a = build_step2(3).unwrap();
        assert_eq!(a.levels.len(), 4);
        for lvl in &a.levels {
            let d2 = a.tower.intersect(&lvl.divisor, &lvl.divisor).unwrap();
            assert_eq!(d2, step2_degree_closed_form(lvl.k), "k = {}", lvl.k);
        }
        assert_eq!(a.tower.basis_size(a.levels[3].model).unwrap(), 1 + step2_blowups(3) as usize);
    }
}
