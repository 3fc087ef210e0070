//! Positivity on a single model: nef certificates, Zariski decomposition
//! relative to a curve catalogue, and volumes.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::rat::{int, Rat};
use crate::tower::{Catalogue, DivisorClass, SparseClass, Tower};

/// Volume conventions: `lim h0(lD) / (l^2/2)` (library default) or
/// `lim h0(lD) / l^2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Normalization {
    WithFactorial,
    WithoutFactorial,
}

impl Normalization {
    pub fn apply(&self, vol_with_factorial: &Rat) -> Rat {
        match self {
            Normalization::WithFactorial => vol_with_factorial.clone(),
            Normalization::WithoutFactorial => vol_with_factorial / int(2),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Normalization::WithFactorial => "eq:vol-b (with d!)",
            Normalization::WithoutFactorial => "appendix (without d!)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub curve: String,
    pub value: Rat,
}

/// The over-a-line argument: `D = pi^*(dH) - sum c_E strict(E)` with every
/// `c_E` in `[0, 1]`, every `E` over a point of the line, and `(d - 1)H`
/// nef, so `D . C >= (d - 1) H . pi_* C >= 0` for every other curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericBound {
    pub base_degree: Rat,
    pub line: String,
    pub max_coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefCertificate {
    pub divisor: DivisorClass,
    pub pairings: Vec<Pairing>,
    pub generic_bound: Option<GenericBound>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NefOutcome {
    /// Nef against every curve.
    Certified(NefCertificate),
    /// Nef against the catalogue; nothing can be said about other curves.
    Inconclusive { pairings: Vec<Pairing>, reason: String },
    /// A catalogue curve pairs negatively.
    Refuted { curve: String, value: Rat },
}

impl NefOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, NefOutcome::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, NefOutcome::Refuted { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            NefOutcome::Certified(_) => "certified",
            NefOutcome::Inconclusive { .. } => "inconclusive beyond catalogue",
            NefOutcome::Refuted { .. } => "refuted",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LineRule {
    pub line: String,
}

impl LineRule {
    pub fn new(line: &str) -> LineRule {
        LineRule { line: line.to_string() }
    }
}

fn align(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue) -> Result<DivisorClass> {
    if d.model() == catalogue.model {
        Ok(d.clone())
    } else {
        tower.pullback(d, catalogue.model)
    }
}

pub fn pairings(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue) -> Result<Vec<Pairing>> {
    let d = align(tower, d, catalogue)?;
    Ok(catalogue
        .curves
        .iter()
        .map(|c| Pairing { curve: c.name.clone(), value: tower.pair_with_sparse(&d, &c.class) })
        .collect())
}

fn line_rule_bound(tower: &Tower, d: &DivisorClass, rule: &LineRule) -> std::result::Result<GenericBound, String> {
    if !tower.base_is_projective_plane() {
        return Err("line rule needs the projective plane as base".into());
    }
    let base = tower.base_model();
    let line = tower.curve_class(&rule.line, base).map_err(|e| e.to_string())?;
    if line.coeffs() != [Rat::one()] {
        return Err(format!("'{}' is not a line on the base", rule.line));
    }
    let decomp = tower.strict_decomposition(d).map_err(|e| e.to_string())?;
    let deg = decomp.base[0].clone();
    if deg < Rat::one() {
        return Err(format!("base degree {deg} < 1, so D_base - L is not nef"));
    }
    let mult = tower.total_transform_multiplicities(&rule.line, d.model()).map_err(|e| e.to_string())?;
    let mut max_c = Rat::zero();
    for ((name, c), (_, m)) in decomp.exceptional.iter().zip(&mult) {
        if c.is_zero() {
            continue;
        }
        let neg = -c;
        if neg.is_negative() || neg > Rat::one() {
            return Err(format!("coefficient {neg} of strict {name} lies outside [0, 1]"));
        }
        if *m == 0 {
            return Err(format!("{name} does not lie over a point of {}", rule.line));
        }
        if neg > max_c {
            max_c = neg;
        }
    }
    Ok(GenericBound { base_degree: deg, line: rule.line.clone(), max_coefficient: max_c })
}

/// Checks `D . C >= 0` over the catalogue and, with a line rule, certifies
/// nefness against all curves.
pub fn nef_check(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue, line_rule: Option<&LineRule>) -> Result<NefOutcome> {
    let d = align(tower, d, catalogue)?;
    let pairs = pairings(tower, &d, catalogue)?;
    if let Some(bad) = pairs.iter().find(|p| p.value.is_negative()) {
        return Ok(NefOutcome::Refuted { curve: bad.curve.clone(), value: bad.value.clone() });
    }
    let Some(rule) = line_rule else {
        return Ok(NefOutcome::Inconclusive { pairings: pairs, reason: "no line rule supplied".into() });
    };
    match line_rule_bound(tower, &d, rule) {
        Ok(bound) => Ok(NefOutcome::Certified(NefCertificate { divisor: d, pairings: pairs, generic_bound: Some(bound) })),
        Err(reason) => Ok(NefOutcome::Inconclusive { pairings: pairs, reason: format!("line rule inapplicable: {reason}") }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeComponent {
    pub curve: String,
    pub class: SparseClass,
    pub coefficient: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: DivisorClass,
    pub negative: Vec<NegativeComponent>,
}

impl ZariskiDecomposition {
    pub fn negative_class(&self, tower: &Tower) -> Result<DivisorClass> {
        let mut n = tower.zero(self.positive.model())?;
        for c in &self.negative {
            n.add_sparse(&c.class, &c.coefficient);
        }
        Ok(n)
    }
}

/// Zariski decomposition relative to `catalogue`: grows the negative
/// support by every curve with `P . C < 0` and re-solves `P . C_i = 0` on
/// the support until `P` pairs non-negatively with the whole catalogue.
pub fn zariski(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue) -> Result<ZariskiDecomposition> {
    let d = align(tower, d, catalogue)?;
    let mut support: Vec<usize> = vec![];
    let mut coeffs: Vec<Rat> = vec![];
    let mut positive = d.clone();
    loop {
        let new: Vec<usize> = catalogue
            .curves
            .iter()
            .enumerate()
            .filter(|(i, c)| !support.contains(i) && tower.pair_with_sparse(&positive, &c.class).is_negative())
            .map(|(i, _)| i)
            .collect();
        if new.is_empty() {
            break;
        }
        support.extend(new);
        let gram: Vec<Vec<Rat>> = support
            .iter()
            .map(|&i| {
                support
                    .iter()
                    .map(|&j| tower.intersect_sparse(catalogue.model, &catalogue.curves[i].class, &catalogue.curves[j].class))
                    .collect()
            })
            .collect();
        if !linalg::is_negative_definite(&gram) {
            let names: Vec<&str> = support.iter().map(|&i| catalogue.curves[i].name.as_str()).collect();
            return Err(Error::NotPseudoeffective(format!("Gram matrix of {{{}}} is not negative definite", names.join(", "))));
        }
        let rhs: Vec<Rat> = support.iter().map(|&i| tower.pair_with_sparse(&d, &catalogue.curves[i].class)).collect();
        coeffs = linalg::solve(&gram, &rhs).expect("negative definite matrices are invertible");
        positive = d.clone();
        for (&i, x) in support.iter().zip(&coeffs) {
            positive.add_sparse(&catalogue.curves[i].class, &-x);
        }
    }
    if let Some((i, x)) = support.iter().zip(&coeffs).find(|(_, x)| x.is_negative()) {
        return Err(Error::NotPseudoeffective(format!(
            "negative part has coefficient {x} on {}",
            catalogue.curves[*i].name
        )));
    }
    let negative = support
        .iter()
        .zip(coeffs)
        .map(|(&i, x)| NegativeComponent {
            curve: catalogue.curves[i].name.clone(),
            class: catalogue.curves[i].class.clone(),
            coefficient: x,
        })
        .collect();
    Ok(ZariskiDecomposition { positive, negative })
}

/// `P^2` for the Zariski decomposition `D = P + N`, normalized by `l^2/2`.
pub fn volume(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue) -> Result<Rat> {
    let z = zariski(tower, d, catalogue)?;
    tower.intersect(&z.positive, &z.positive)
}

/// Validates the Zariski identities of `z` against `d` and the catalogue.
pub fn verify_zariski(tower: &Tower, d: &DivisorClass, catalogue: &Catalogue, z: &ZariskiDecomposition) -> Result<()> {
    let d = align(tower, d, catalogue)?;
    let n = z.negative_class(tower)?;
    if &z.positive + &n != d {
        return invalid("P + N differs from D");
    }
    for c in &z.negative {
        if !tower.pair_with_sparse(&z.positive, &c.class).is_zero() {
            return invalid(format!("P . {} is nonzero", c.curve));
        }
        if !c.coefficient.is_positive() {
            return invalid(format!("N has non-positive coefficient on {}", c.curve));
        }
    }
    for c in &catalogue.curves {
        if tower.pair_with_sparse(&z.positive, &c.class).is_negative() {
            return invalid(format!("P . {} < 0", c.name));
        }
    }
    let gram: Vec<Vec<Rat>> = z
        .negative
        .iter()
        .map(|a| z.negative.iter().map(|b| tower.intersect_sparse(catalogue.model, &a.class, &b.class)).collect())
        .collect();
    if !linalg::is_negative_definite(&gram) {
        return invalid("N-support Gram is not negative definite");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appendix::build_step2;
    use crate::h0::{h0_oracle_p2, second_difference_volume, Budget, Constraint, PointSpec};
    use crate::rat::rat;
    use crate::tower::{CenterSpec, ModelId};

    fn blown_up_plane() -> Tower {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        t.register_curve("A", &h).unwrap();
        t.register_curve("B", &h).unwrap();
        t.blow_up_named(&CenterSpec::new(ModelId(0), &["A", "B"]), "E1").unwrap();
        t
    }

    #[test]
    fn minus_h_is_refuted() {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        t.register_curve("L", &h).unwrap();
        let cat = t.catalogue(ModelId(0)).unwrap();
        let out = nef_check(&t, &(-&h), &cat, Some(&LineRule::new("L"))).unwrap();
        assert_eq!(out, NefOutcome::Refuted { curve: "L".into(), value: int(-1) });
    }

    #[test]
    fn appendix_levels_certified() {
        let a = build_step2(3).unwrap();
        for lvl in &a.levels[1..] {
            let cat = a.tower.catalogue(lvl.model).unwrap();
            let out = nef_check(&a.tower, &lvl.divisor, &cat, Some(&LineRule::new("L"))).unwrap();
            match out {
                NefOutcome::Certified(c) => {
                    let b = c.generic_bound.unwrap();
                    assert_eq!(b.base_degree, int(2));
                    assert_eq!(b.max_coefficient, int(1));
                }
                other => panic!("level {} not certified: {other:?}", lvl.k),
            }
        }
    }

    #[test]
    fn line_rule_boundary() {
        let t = blown_up_plane();
        let x1 = ModelId(1);
        // 2H - (3/2) E1
        let d = t.class(x1, vec![int(2), rat(-3, 2)]).unwrap();
        let cat = t.catalogue(x1).unwrap();
        let out = nef_check(&t, &d, &cat, Some(&LineRule::new("A"))).unwrap();
        assert_eq!(out.status(), "inconclusive beyond catalogue");
        if let NefOutcome::Inconclusive { reason, .. } = out {
            assert!(reason.contains("outside [0, 1]"), "{reason}");
        }
    }

    #[test]
    fn nef_input_has_trivial_negative_part() {
        let t = blown_up_plane();
        let x1 = ModelId(1);
        let d = t.class_i64(x1, &[2, -1]).unwrap();
        let cat = t.catalogue(x1).unwrap();
        let z = zariski(&t, &d, &cat).unwrap();
        assert!(z.negative.is_empty());
        assert_eq!(z.positive, d);
        assert_eq!(volume(&t, &d, &cat).unwrap(), int(3));
    }

    #[test]
    fn fixed_exceptional_component() {
        // H + e on Bl_p P^2: N = E, P = H
        let t = blown_up_plane();
        let x1 = ModelId(1);
        let d = t.class_i64(x1, &[1, 1]).unwrap();
        let cat = t.catalogue(x1).unwrap();
        let z = zariski(&t, &d, &cat).unwrap();
        assert_eq!(z.positive, t.hyperplane(x1).unwrap());
        assert_eq!(z.negative.len(), 1);
        assert_eq!(z.negative[0].curve, "E1");
        assert_eq!(z.negative[0].coefficient, int(1));
        verify_zariski(&t, &d, &cat, &z).unwrap();
        // oracle: h0(k(H + e)) = h0(kH)
        let b = Budget::default();
        let h = |k: u32| h0_oracle_p2(k, &[], &b).unwrap();
        assert_eq!(second_difference_volume(h(12), h(11), h(10), 1), volume(&t, &d, &cat).unwrap());
    }

    #[test]
    fn two_h_minus_two_e_is_nef_of_volume_zero() {
        let t = blown_up_plane();
        let x1 = ModelId(1);
        let d = t.class_i64(x1, &[2, -2]).unwrap();
        let cat = t.catalogue(x1).unwrap();
        let z = zariski(&t, &d, &cat).unwrap();
        assert!(z.negative.is_empty());
        assert_eq!(volume(&t, &d, &cat).unwrap(), int(0));
        // oracle: degree 2k forms with a point of multiplicity 2k: 2k + 1 of them
        let b = Budget::default();
        for k in 1..=6u32 {
            let c = [Constraint::Point { at: PointSpec::General(0), order: 2 * k }];
            assert_eq!(h0_oracle_p2(2 * k, &c, &b).unwrap(), 2 * k as u64 + 1);
        }
    }

    #[test]
    fn not_pseudoeffective_is_an_error() {
        let t = blown_up_plane();
        let x1 = ModelId(1);
        let cat = t.catalogue(x1).unwrap();
        let d = t.class_i64(x1, &[2, -3]).unwrap();
        assert!(matches!(zariski(&t, &d, &cat), Err(Error::NotPseudoeffective(_))));
        let d = t.class_i64(x1, &[-1, 0]).unwrap();
        assert!(zariski(&t, &d, &cat).is_err());
    }

    #[test]
    fn two_points_on_a_line() {
        // 3H - 2e1 - 2e2 with both points on L: N = L, P = 2H - e1 - e2
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        for n in ["L", "M1", "M2"] {
            t.register_curve(n, &h).unwrap();
        }
        let x1 = t.blow_up_named(&CenterSpec::new(ModelId(0), &["L", "M1"]), "E1").unwrap();
        let x2 = t.blow_up_named(&CenterSpec::new(x1, &["L", "M2"]), "E2").unwrap();
        let d = t.class_i64(x2, &[3, -2, -2]).unwrap();
        let cat = t.catalogue(x2).unwrap();
        let z = zariski(&t, &d, &cat).unwrap();
        verify_zariski(&t, &d, &cat, &z).unwrap();
        assert_eq!(z.positive.coeffs(), &[int(2), int(-1), int(-1)]);
        assert_eq!(volume(&t, &d, &cat).unwrap(), int(2));
        let b = Budget::default();
        let h = |k: u32| {
            let c = [
                Constraint::Point { at: PointSpec::At([0, 0, 1]), order: 2 * k },
                Constraint::Point { at: PointSpec::At([1, 0, 1]), order: 2 * k },
            ];
            h0_oracle_p2(3 * k, &c, &b).unwrap()
        };
        let est = second_difference_volume(h(8), h(7), h(6), 1);
        assert_eq!(est, int(2));
    }

    #[test]
    fn normalizations() {
        assert_eq!(Normalization::WithFactorial.apply(&int(1)), int(1));
        assert_eq!(Normalization::WithoutFactorial.apply(&int(1)), rat(1, 2));
    }
}
