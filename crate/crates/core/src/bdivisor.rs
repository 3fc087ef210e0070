//! Weil and Cartier b-divisors over a tower of blow-ups.
//!
//! A Cartier b-divisor is one class on one model (its determination); its
//! incarnation elsewhere is "pull back to a common model, push down". A
//! Weil b-divisor is given by a generator `k -> D_k` on a cofinal chain of
//! models `m_0 <= m_1 <= ...` whose classes are pushforward compatible.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{Signed, Zero};

use crate::analysis::{self, LineRule, NefOutcome, Normalization};
use crate::appendix::{build_step2, AppendixTower, step2_degree_closed_form, step2_degree_limit};
use crate::error::{invalid, Error, Result};
use crate::rat::Rat;
use crate::tower::{DivisorClass, ModelId, Tower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierBDiv {
    determination: DivisorClass,
}

impl CartierBDiv {
    pub fn new(determination: DivisorClass) -> CartierBDiv {
        CartierBDiv { determination }
    }

    pub fn determination(&self) -> &DivisorClass {
        &self.determination
    }

    pub fn model(&self) -> ModelId {
        self.determination.model()
    }

    pub fn incarnation(&self, tower: &Tower, model: ModelId) -> Result<DivisorClass> {
        let common = tower.common_model(self.model(), model)?;
        let up = tower.pullback(&self.determination, common)?;
        tower.pushforward(&up, model)
    }

    /// Self-intersection of the determination.
    pub fn degree(&self, tower: &Tower) -> Result<Rat> {
        tower.intersect(&self.determination, &self.determination)
    }
}

/// A closed form `k -> deg(D_k)` with its limit, used to certify a degree limit.
#[derive(Clone)]
pub struct ClosedForm {
    pub degree: Arc<dyn Fn(usize) -> Rat + Send + Sync>,
    pub limit: Rat,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForm").field("limit", &self.limit).finish_non_exhaustive()
    }
}

type Generator = Arc<dyn Fn(&Tower, usize) -> Result<DivisorClass> + Send + Sync>;

/// Weil b-divisor given by a generator on a cofinal chain.
pub struct TowerBDiv {
    tower: Arc<Tower>,
    generator: Generator,
    levels: usize,
    pub each_nef: bool,
    pub monotone: bool,
    pub closed_form: Option<ClosedForm>,
    /// Line rule used when certifying nefness of the levels.
    pub line_rule: Option<LineRule>,
    cache: Mutex<BTreeMap<usize, DivisorClass>>,
}

impl fmt::Debug for TowerBDiv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerBDiv")
            .field("levels", &self.levels)
            .field("each_nef", &self.each_nef)
            .field("monotone", &self.monotone)
            .field("closed_form", &self.closed_form)
            .finish_non_exhaustive()
    }
}

impl TowerBDiv {
    /// Generator-backed tower producing levels `0..=levels`.
    pub fn from_generator(
        tower: Arc<Tower>,
        levels: usize,
        generator: impl Fn(&Tower, usize) -> Result<DivisorClass> + Send + Sync + 'static,
    ) -> TowerBDiv {
        TowerBDiv {
            tower,
            generator: Arc::new(generator),
            levels,
            each_nef: false,
            monotone: false,
            closed_form: None,
            line_rule: None,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn from_levels(tower: Arc<Tower>, classes: Vec<DivisorClass>) -> Result<TowerBDiv> {
        if classes.is_empty() {
            return invalid("a tower b-divisor needs at least one level");
        }
        for w in classes.windows(2) {
            if !tower.dominated_by(w[0].model(), w[1].model()) {
                return invalid(format!("models {} and {} are not ordered", w[0].model(), w[1].model()));
            }
        }
        let n = classes.len() - 1;
        let classes = Arc::new(classes);
        Ok(TowerBDiv::from_generator(tower, n, move |_, k| Ok(classes[k].clone())))
    }

    /// A Cartier b-divisor seen as the constant tower on its determination model.
    pub fn constant(tower: Arc<Tower>, cartier: &CartierBDiv, levels: usize) -> TowerBDiv {
        let d = cartier.determination.clone();
        let mut t = TowerBDiv::from_generator(tower, levels, move |_, _| Ok(d.clone()));
        t.monotone = true;
        t
    }

    /// The Step-2 tower `D'_0, ..., D'_k` with its closed-form degrees.
    pub fn appendix(k_max: usize) -> Result<TowerBDiv> {
        TowerBDiv::from_appendix(build_step2(k_max)?)
    }

    pub fn from_appendix(a: AppendixTower) -> Result<TowerBDiv> {
        let line = a.line.clone();
        let classes: Vec<DivisorClass> = a.levels.into_iter().map(|l| l.divisor).collect();
        let mut t = TowerBDiv::from_levels(Arc::new(a.tower), classes)?;
        t.each_nef = true;
        t.monotone = true;
        t.line_rule = Some(LineRule::new(&line));
        t.closed_form = Some(ClosedForm { degree: Arc::new(step2_degree_closed_form), limit: step2_degree_limit() });
        Ok(t)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn tower_arc(&self) -> Arc<Tower> {
        self.tower.clone()
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn level(&self, k: usize) -> Result<DivisorClass> {
        if k > self.levels {
            return Err(Error::OutOfRange { requested: k, available: self.levels });
        }
        if let Some(d) = self.cache.lock().unwrap().get(&k) {
            return Ok(d.clone());
        }
        let d = (self.generator)(&self.tower, k)?;
        self.cache.lock().unwrap().insert(k, d.clone());
        Ok(d)
    }

    pub fn model_at(&self, k: usize) -> Result<ModelId> {
        Ok(self.level(k)?.model())
    }

    fn check_range(&self, k_max: usize) -> Result<()> {
        if k_max > self.levels {
            return Err(Error::OutOfRange { requested: k_max, available: self.levels });
        }
        Ok(())
    }

    /// Pushforward of the first level whose model dominates `model`.
    pub fn incarnation(&self, model: ModelId) -> Result<DivisorClass> {
        for k in 0..=self.levels {
            let d = self.level(k)?;
            if self.tower.dominated_by(model, d.model()) {
                return self.tower.pushforward(&d, model);
            }
        }
        invalid(format!("model {model} is not dominated by any generated level"))
    }

    /// First `k < k_max` with `push(D_{k+1}) != D_k`, if any.
    pub fn compatibility_violation(&self, k_max: usize) -> Result<Option<usize>> {
        self.check_range(k_max)?;
        for k in 0..k_max {
            let a = self.level(k)?;
            let b = self.level(k + 1)?;
            if self.tower.pushforward(&b, a.model())? != a {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub monotone: bool,
    /// `(k, curve)`: `D_k - D_{k+1}` has a negative coefficient on `curve`.
    pub first_violation: Option<(usize, String)>,
}

/// Compares `pi^* D_k` with `D_{k+1}` in strict-transform coordinates.
pub fn check_monotone(b: &TowerBDiv, k_max: usize) -> Result<MonotoneReport> {
    b.check_range(k_max)?;
    let t = b.tower();
    for k in 0..k_max {
        let next = b.level(k + 1)?;
        let prev = t.pullback(&b.level(k)?, next.model())?;
        let diff = &prev - &next;
        let s = t.strict_decomposition(&diff)?;
        if let Some(i) = s.base.iter().position(|c| c.is_negative()) {
            return Ok(MonotoneReport { monotone: false, first_violation: Some((k, format!("base[{i}]"))) });
        }
        if let Some((name, _)) = s.exceptional.iter().find(|(_, c)| c.is_negative()) {
            return Ok(MonotoneReport { monotone: false, first_violation: Some((k, name.clone())) });
        }
    }
    Ok(MonotoneReport { monotone: true, first_violation: None })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLimit {
    /// `(D_k)^2` for `k = 0..=k_max`.
    pub sequence: Vec<Rat>,
    pub nef_status: Vec<&'static str>,
    pub upper_bound: Rat,
    pub exact_limit: Option<Rat>,
    pub closed_form_verified: bool,
}

/// Degree sequence of a monotone nef tower, with the exact limit when a
/// closed form is supplied and matches every computed term.
pub fn degree_limit(b: &TowerBDiv, k_max: usize) -> Result<DegreeLimit> {
    b.check_range(k_max)?;
    let t = b.tower();
    let mono = check_monotone(b, k_max)?;
    if !mono.monotone {
        let (k, c) = mono.first_violation.unwrap();
        return invalid(format!("tower is not monotone at k = {k} (curve {c})"));
    }
    let mut sequence = Vec::with_capacity(k_max + 1);
    let mut nef_status = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let d = b.level(k)?;
        let cat = t.catalogue(d.model())?;
        let out = analysis::nef_check(t, &d, &cat, b.line_rule.as_ref())?;
        if let NefOutcome::Refuted { curve, value } = &out {
            return invalid(format!("level {k} is not nef: D . {curve} = {value}"));
        }
        nef_status.push(out.status());
        sequence.push(t.intersect(&d, &d)?);
    }
    if b.each_nef && b.monotone {
        if let Some(k) = (0..k_max).find(|&k| sequence[k + 1] > sequence[k]) {
            return Err(Error::Inconsistent(format!(
                "degree increases from k = {k} to k = {} for a monotone nef tower",
                k + 1
            )));
        }
    }
    let upper_bound = sequence.iter().min().cloned().unwrap();
    let (exact_limit, closed_form_verified) = match &b.closed_form {
        Some(cf) => {
            let ok = sequence.iter().enumerate().all(|(k, d)| *d == (cf.degree)(k));
            (ok.then(|| cf.limit.clone()), ok)
        }
        None => (None, false),
    };
    Ok(DegreeLimit { sequence, nef_status, upper_bound, exact_limit, closed_form_verified })
}

/// `E_pi . D_pi` on a model dominating the determination of `E`, computed on
/// two such models and required to agree.
pub fn mixed_intersect(e: &CartierBDiv, d: &TowerBDiv) -> Result<Rat> {
    let t = d.tower();
    let mut values: Vec<(ModelId, Rat)> = vec![];
    for k in 0..=d.levels() {
        let dk = d.level(k)?;
        if !t.dominated_by(e.model(), dk.model()) {
            continue;
        }
        if values.iter().any(|(m, _)| *m == dk.model()) {
            continue;
        }
        let ek = e.incarnation(t, dk.model())?;
        values.push((dk.model(), t.intersect(&ek, &dk)?));
        if values.len() == 2 {
            break;
        }
    }
    match values.as_slice() {
        [] => invalid(format!("no generated level dominates the determination model {}", e.model())),
        [(_, v)] => Ok(v.clone()),
        [(m1, v1), (m2, v2)] => {
            if v1 != v2 {
                Err(Error::Inconsistent(format!("E . D differs between {m1} ({v1}) and {m2} ({v2})")))
            } else {
                Ok(v1.clone())
            }
        }
        _ => unreachable!(),
    }
}

/// `min_k vol(D_k)`: every section of `l * 𝔻` is a section of `l * D_k`.
pub fn volume_upper(b: &TowerBDiv, k_max: usize) -> Result<Rat> {
    b.check_range(k_max)?;
    let t = b.tower();
    let mut best: Option<Rat> = None;
    for k in 0..=k_max {
        let d = b.level(k)?;
        let cat = t.catalogue(d.model())?;
        let v = analysis::volume(t, &d, &cat)?;
        best = Some(match best {
            Some(b) if b <= v => b,
            _ => v,
        });
    }
    Ok(best.unwrap())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ReductionMode {
    /// Require every level to add exceptionals over fresh points of the line.
    Strict,
    /// The caller asserts the pattern continues beyond the generated levels
    /// (used to evaluate a single model as if it were such a tower).
    AssumeGrowth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReduction {
    /// `vol(D_base - m L)` normalized by `l^2/2`.
    pub volume: Rat,
    pub base_divisor: DivisorClass,
    pub line: String,
    pub multiplier: Rat,
    pub facts: Vec<String>,
}

impl LineReduction {
    pub fn volume_in(&self, n: Normalization) -> Rat {
        n.apply(&self.volume)
    }
}

fn refuse<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ReductionRefused(msg.into()))
}

/// Reduces `vol(𝔻)` to `vol(D_base - m L)` on the base, after checking that
/// every negative coefficient of every incarnation sits on an exceptional
/// curve over a point of `line` with multiplicity exactly one, with
/// `m = sup |coefficient|`.
pub fn volume_via_line_reduction(b: &TowerBDiv, line: &str, k_max: usize, mode: ReductionMode) -> Result<LineReduction> {
    b.check_range(k_max)?;
    let t = b.tower();
    let base = t.base_model();
    t.curve_class(line, base)?;
    let base_divisor = t.pushforward(&b.level(0)?, base)?;
    let mut facts = vec![];
    let mut m = Rat::zero();
    let mut per_level: Vec<(Vec<usize>, Vec<Rat>)> = Vec::with_capacity(k_max + 1);
    let mut negative_total = 0usize;
    for k in 0..=k_max {
        let d = b.level(k)?;
        if t.pushforward(&d, base)? != base_divisor {
            return refuse(format!("level {k} has a different base part"));
        }
        let s = t.strict_decomposition(&d)?;
        let mult = t.total_transform_multiplicities(line, d.model())?;
        let roots = t.exceptional_roots(d.model())?;
        let mut coeffs = Vec::with_capacity(s.exceptional.len());
        for ((name, c), (_, mu)) in s.exceptional.iter().zip(&mult) {
            if c.is_negative() {
                negative_total += 1;
                if *mu == 0 {
                    return refuse(format!("level {k}: negative coefficient {c} on {name}, which is not over {line}"));
                }
                if *mu != 1 {
                    return refuse(format!("level {k}: {line} pulls back with multiplicity {mu} on {name}"));
                }
                if -c > m {
                    m = -c;
                }
            }
            coeffs.push(c.clone());
        }
        per_level.push((roots, coeffs));
    }
    facts.push(format!("(i) all {negative_total} negative exceptional coefficients lie over points of {line}"));
    facts.push(format!("(ii) {line} pulls back with multiplicity 1 on each of them"));
    facts.push(format!("(iii) sup of |coefficient| over levels 0..={k_max} is {m}"));

    match mode {
        ReductionMode::Strict => {
            if k_max == 0 {
                return refuse("need at least one level beyond the base to see fresh points");
            }
            if m.is_zero() {
                return refuse(format!("no level has a negative coefficient over {line}; nothing to reduce"));
            }
            for k in 1..=k_max {
                let before = per_level[k - 1].0.len();
                let (roots, coeffs) = &per_level[k];
                let fresh = roots.iter().zip(coeffs).any(|(r, c)| *r >= before && -c == m);
                if !fresh {
                    return refuse(format!(
                        "level {k} adds no exceptional over a fresh point of {line} with coefficient -{m}; the tower does not keep growing"
                    ));
                }
            }
            facts.push(format!("(iv) every level 1..={k_max} reaches coefficient {m} over a fresh point of {line}"));
        }
        ReductionMode::AssumeGrowth => facts.push("(iv) growth over fresh points asserted by caller".into()),
    }

    let line_class = t.curve_class(line, base)?;
    let reduced = &base_divisor - &line_class.scale(&m);
    let cat = t.catalogue(base)?;
    let volume = analysis::volume(t, &reduced, &cat)?;
    Ok(LineReduction { volume, base_divisor: reduced, line: line.to_string(), multiplier: m, facts })
}

/// `pi^* div(s) - c F` on the resolution model of `F`.
pub fn bdiv_from_algebraic_data(tower: &Tower, div_s: &DivisorClass, f: &DivisorClass, c: &Rat) -> Result<CartierBDiv> {
    if c.is_negative() {
        return invalid("c must be non-negative");
    }
    let s = tower.strict_decomposition(f)?;
    if s.base.iter().any(Signed::is_negative) || s.exceptional.iter().any(|(_, x)| x.is_negative()) {
        return invalid("F must be effective");
    }
    let d = tower.pullback(div_s, f.model())?;
    Ok(CartierBDiv::new(&d - &f.scale(c)))
}

/// Degree limit divided by the line-reduction volume, in one normalization.
pub fn discontinuity_ratio(limit: &Rat, reduction: &LineReduction, n: Normalization) -> Result<Rat> {
    let v = reduction.volume_in(n);
    if v.is_zero() {
        return invalid("volume is zero");
    }
    Ok(n.apply(limit) / v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::tower::CenterSpec;

    fn blown_up() -> Arc<Tower> {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        t.register_curve("L", &h).unwrap();
        t.register_curve("B", &h).unwrap();
        t.blow_up_named(&CenterSpec::new(ModelId(0), &["L", "B"]), "E1").unwrap();
        Arc::new(t)
    }

    #[test]
    fn cartier_incarnations() {
        let t = blown_up();
        let d = CartierBDiv::new(t.class_i64(ModelId(1), &[2, -1]).unwrap());
        assert_eq!(d.incarnation(&t, ModelId(0)).unwrap().coeffs(), &[int(2)]);
        assert_eq!(d.incarnation(&t, ModelId(1)).unwrap(), *d.determination());
        assert_eq!(d.degree(&t).unwrap(), int(3));
    }

    #[test]
    fn appendix_incarnations_truncate() {
        let b = TowerBDiv::appendix(3).unwrap();
        for k in 0..3 {
            let mk = b.model_at(k).unwrap();
            assert_eq!(b.incarnation(mk).unwrap(), b.level(k).unwrap());
        }
        assert_eq!(b.compatibility_violation(3).unwrap(), None);
        assert!(b.level(4).is_err());
    }

    #[test]
    fn monotone_cases() {
        let b = TowerBDiv::appendix(4).unwrap();
        assert!(check_monotone(&b, 4).unwrap().monotone);
        let t = blown_up();
        let two_h = t.class_i64(ModelId(1), &[2, 0]).unwrap();
        let c = TowerBDiv::from_levels(t.clone(), vec![two_h.clone(), two_h.clone()]).unwrap();
        assert!(check_monotone(&c, 1).unwrap().monotone);
        let up = t.class_i64(ModelId(1), &[2, 1]).unwrap();
        let inc = TowerBDiv::from_levels(t.clone(), vec![two_h, up]).unwrap();
        let r = check_monotone(&inc, 1).unwrap();
        assert!(!r.monotone);
        assert_eq!(r.first_violation, Some((0, "E1".to_string())));
    }

    #[test]
    fn degree_limits() {
        let b = TowerBDiv::appendix(5).unwrap();
        let dl = degree_limit(&b, 5).unwrap();
        assert_eq!(dl.sequence[5], rat(97, 32));
        assert_eq!(dl.exact_limit, Some(int(3)));
        assert!(dl.closed_form_verified);
        assert!(dl.nef_status[1..].iter().all(|s| *s == "certified"));

        let t = blown_up();
        let two_h = t.class_i64(ModelId(0), &[2]).unwrap();
        let c = TowerBDiv::constant(t.clone(), &CartierBDiv::new(two_h), 3);
        let dl = degree_limit(&c, 3).unwrap();
        assert_eq!(dl.upper_bound, int(4));
        assert_eq!(dl.exact_limit, None);
    }

    #[test]
    fn false_monotone_claim_is_inconsistent() {
        // D_0 = 2H - E1 (degree 3), D_1 = 2H - E1 - E2 (degree 2) is fine, but a
        // constant tower claiming a wrong closed form is reported unverified
        let t = blown_up();
        let d = t.class_i64(ModelId(1), &[2, -1]).unwrap();
        let mut c = TowerBDiv::constant(t, &CartierBDiv::new(d), 2);
        c.closed_form = Some(ClosedForm { degree: Arc::new(|_| int(4)), limit: int(4) });
        let dl = degree_limit(&c, 2).unwrap();
        assert!(!dl.closed_form_verified);
        assert_eq!(dl.exact_limit, None);
    }

    #[test]
    fn mixed_products() {
        let b = TowerBDiv::appendix(3).unwrap();
        let t = b.tower();
        let h = CartierBDiv::new(t.hyperplane(ModelId(0)).unwrap());
        assert_eq!(mixed_intersect(&h, &b).unwrap(), int(2));
        let zero = CartierBDiv::new(t.zero(ModelId(0)).unwrap());
        assert_eq!(mixed_intersect(&zero, &b).unwrap(), int(0));
        // E = D'_1 against the tower: D'_1 . D'_2 on X'_2
        let e = CartierBDiv::new(b.level(1).unwrap());
        let d1 = t.pullback(&b.level(1).unwrap(), b.model_at(2).unwrap()).unwrap();
        let expect = t.intersect(&d1, &b.level(2).unwrap()).unwrap();
        assert_eq!(mixed_intersect(&e, &b).unwrap(), expect);
        assert_eq!(expect, rat(7, 2));
    }

    #[test]
    fn upper_bounds() {
        let b = TowerBDiv::appendix(3).unwrap();
        assert_eq!(volume_upper(&b, 3).unwrap(), rat(25, 8));
        let t = blown_up();
        let two_h = t.class_i64(ModelId(0), &[2]).unwrap();
        let h = t.class_i64(ModelId(1), &[1, 0]).unwrap();
        let c = TowerBDiv::from_levels(t.clone(), vec![two_h.clone()]).unwrap();
        assert_eq!(volume_upper(&c, 0).unwrap(), int(4));
        let drop = TowerBDiv::from_levels(t, vec![two_h, h]).unwrap();
        assert_eq!(volume_upper(&drop, 1).unwrap(), int(1));
    }

    #[test]
    fn line_reduction_appendix() {
        let b = TowerBDiv::appendix(4).unwrap();
        let r = volume_via_line_reduction(&b, "L", 4, ReductionMode::Strict).unwrap();
        assert_eq!(r.multiplier, int(1));
        assert_eq!(r.volume, int(1));
        assert_eq!(r.volume_in(Normalization::WithoutFactorial), rat(1, 2));
        assert_eq!(r.facts.len(), 4);
    }

    #[test]
    fn line_reduction_single_model() {
        let t = blown_up();
        let d = CartierBDiv::new(t.class_i64(ModelId(1), &[2, -1]).unwrap());
        let c = TowerBDiv::constant(t.clone(), &d, 2);
        let err = volume_via_line_reduction(&c, "L", 2, ReductionMode::Strict).unwrap_err();
        assert!(matches!(err, Error::ReductionRefused(_)));
        let forced = volume_via_line_reduction(&c, "L", 2, ReductionMode::AssumeGrowth).unwrap();
        assert_eq!(forced.volume, int(1));
        // the honest volume of the determination differs
        let cat = t.catalogue(ModelId(1)).unwrap();
        assert_eq!(analysis::volume(&t, d.determination(), &cat).unwrap(), int(3));
    }

    #[test]
    fn line_reduction_refuses_off_line_points() {
        let mut t = Tower::projective_plane();
        let h = t.hyperplane(ModelId(0)).unwrap();
        for n in ["L", "M", "N"] {
            t.register_curve(n, &h).unwrap();
        }
        // blow up M ∩ N, which is off L
        let x1 = t.blow_up_named(&CenterSpec::new(ModelId(0), &["M", "N"]), "F1").unwrap();
        let t = Arc::new(t);
        let d0 = t.class_i64(ModelId(0), &[2]).unwrap();
        let d1 = t.class_i64(x1, &[2, -1]).unwrap();
        let b = TowerBDiv::from_levels(t, vec![d0, d1]).unwrap();
        let err = volume_via_line_reduction(&b, "L", 1, ReductionMode::Strict).unwrap_err();
        assert!(matches!(err, Error::ReductionRefused(m) if m.contains("not over L")));
    }

    #[test]
    fn algebraic_data() {
        let t = blown_up();
        let div_s = t.class_i64(ModelId(0), &[2]).unwrap();
        let e = t.total_exceptional("E1", ModelId(1)).unwrap();
        let b = bdiv_from_algebraic_data(&t, &div_s, &e, &int(1)).unwrap();
        assert_eq!(b.degree(&t).unwrap(), int(3));
        let b0 = bdiv_from_algebraic_data(&t, &div_s, &e, &int(0)).unwrap();
        assert_eq!(b0.degree(&t).unwrap(), int(4));
        assert_eq!(b0.incarnation(&t, ModelId(0)).unwrap(), div_s);
        assert!(bdiv_from_algebraic_data(&t, &div_s, &e, &int(-1)).is_err());
        assert!(bdiv_from_algebraic_data(&t, &div_s, &(-&e), &int(1)).is_err());
    }
}
