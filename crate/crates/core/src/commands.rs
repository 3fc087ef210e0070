//! One function per CLI subcommand, each wrapping one library operation
//! and returning a [`Report`].

use crate::analysis::{self, LineRule, NefOutcome, Normalization};
use crate::appendix::{build_step2, step2_blowups};
use crate::bdivisor::{self, CartierBDiv, ReductionMode, TowerBDiv};
use crate::error::{invalid, Error, Result};
use crate::h0::Budget;
use crate::rat::{to_exact_string, Rat};
use crate::report::{Report, Section};
use crate::scenario::Scenario;
use crate::toric::{self, PLMetricData};
use crate::tower::{DivisorClass, ModelId};

fn class_text(d: &DivisorClass) -> String {
    let parts: Vec<String> = d.coeffs().iter().map(to_exact_string).collect();
    format!("{}:[{}]", d.model(), parts.join(", "))
}

fn both_volumes(r: &mut Report, key: &str, v: &Rat) {
    for n in [Normalization::WithFactorial, Normalization::WithoutFactorial] {
        r.set(&format!("{key} [{}]", n.label()), n.apply(v));
    }
}

/// The Step-2 table for `k = 0..=k_max` with the degree limit, the
/// line-reduction volume and their ratio.
pub fn repro_appendix(k_max: usize, budget: &Budget) -> Result<Report> {
    if !(1..=12).contains(&k_max) {
        return invalid(format!("--kmax must be between 1 and 12, got {k_max}"));
    }
    let n = step2_blowups(k_max) + 1;
    budget.charge(n * n * (k_max as u128 + 1))?;
    let a = build_step2(k_max)?;
    let b = TowerBDiv::from_appendix(a)?;
    let t = b.tower();
    let dl = bdivisor::degree_limit(&b, k_max)?;
    let mut sec = Section::new("levels", &["k", "degree", "nef", "volume_upper_bound"]);
    let mut best: Option<Rat> = None;
    for k in 0..=k_max {
        let d = b.level(k)?;
        let vol = analysis::volume(t, &d, &t.catalogue(d.model())?)?;
        let ub = match best {
            Some(x) if x <= vol => x,
            _ => vol,
        };
        best = Some(ub.clone());
        sec.push(vec![k.into(), dl.sequence[k].clone().into(), dl.nef_status[k].into(), ub.into()]);
    }
    let red = bdivisor::volume_via_line_reduction(&b, "L", k_max, ReductionMode::Strict)?;
    let limit = dl.exact_limit.clone().ok_or_else(|| Error::Inconsistent("closed form did not verify".into()))?;
    let mut r = Report::new("repro-appendix");
    r.sections.push(sec);
    r.set("degree_limit", limit.clone());
    r.set("closed_form_verified", dl.closed_form_verified);
    both_volumes(&mut r, "volume", &red.volume);
    for n in [Normalization::WithFactorial, Normalization::WithoutFactorial] {
        r.set(&format!("ratio [{}]", n.label()), bdivisor::discontinuity_ratio(&limit, &red, n)?);
    }
    r.set("reduced_divisor", class_text(&red.base_divisor));
    r.set("reduction_multiplier", red.multiplier.clone());
    r.set("appendix_stated_limit_volume", Rat::new(3.into(), 2.into()));
    r.set("appendix_stated_volume", Rat::new(1.into(), 2.into()));
    Ok(r)
}

pub fn tower(s: &Scenario) -> Result<Report> {
    let t = &s.tower;
    let mut models = Section::new("models", &["model", "parent", "center", "exceptional", "basis_size"]);
    for i in 0..t.model_count() {
        let m = ModelId(i);
        let (center, exc) = match t.center_of(m)? {
            Some((c, e)) => (c.join(" & "), e),
            None => (String::new(), String::new()),
        };
        let parent = t.parent(m)?.map(|p| p.to_string()).unwrap_or_default();
        models.push(vec![m.to_string().into(), parent.into(), center.into(), exc.into(), t.basis_size(m)?.into()]);
    }
    let latest = t.latest();
    let mut curves = Section::new("curves", &["curve", "class", "self_intersection"]);
    for name in t.curve_names(latest) {
        let c = t.curve_class(&name, latest)?;
        curves.push(vec![name.clone().into(), class_text(&c).into(), t.self_intersection(&name, latest)?.into()]);
    }
    let mut divs = Section::new("divisors", &["divisor", "class", "self_intersection"]);
    for name in &s.order {
        let d = &s.divisors[name];
        divs.push(vec![name.clone().into(), class_text(d).into(), t.intersect(d, d)?.into()]);
    }
    let mut r = Report::new("tower");
    r.sections.extend([models, curves, divs]);
    r.set("models", t.model_count());
    r.set("latest", latest.to_string());
    Ok(r)
}

/// A divisor name, a curve name (strict transform on `model`), or `<n>H`.
fn lookup(s: &Scenario, name: &str, model: ModelId) -> Result<DivisorClass> {
    if s.divisors.contains_key(name) {
        return s.divisor(name);
    }
    if s.tower.curve_id(name).is_ok() {
        return s.tower.curve_class(name, model);
    }
    s.divisor(name)
}

pub fn intersect(s: &Scenario, a: &str, b: &str, model: Option<usize>) -> Result<Report> {
    let m = model.map(ModelId).unwrap_or_else(|| s.tower.latest());
    if m.0 >= s.tower.model_count() {
        return invalid(format!("--model: no model {m}"));
    }
    let x = lookup(s, a, m)?;
    let y = lookup(s, b, m)?;
    let v = s.tower.intersect(&x, &y)?;
    let mut r = Report::new("intersect");
    r.set("a", a);
    r.set("b", b);
    r.set("model", m.to_string());
    r.set("value", v);
    Ok(r)
}

fn pick_divisor<'a>(s: &'a Scenario, name: Option<&'a str>) -> Result<(String, DivisorClass)> {
    let n = match name {
        Some(n) => n.to_string(),
        None => match s.order.as_slice() {
            [only] => only.clone(),
            _ => return invalid("--divisor is required when the scenario has several divisors"),
        },
    };
    Ok((n.clone(), s.divisor(&n)?))
}

pub fn nef(s: &Scenario, divisor: Option<&str>, line: Option<&str>) -> Result<Report> {
    let (name, d) = pick_divisor(s, divisor)?;
    let t = &s.tower;
    let cat = t.catalogue(d.model())?;
    let rule = line.or(s.line.as_deref()).map(LineRule::new);
    let out = analysis::nef_check(t, &d, &cat, rule.as_ref())?;
    let mut r = Report::new("nef");
    let mut sec = Section::new("pairings", &["curve", "pairing"]);
    let pairs = match &out {
        NefOutcome::Certified(c) => c.pairings.clone(),
        NefOutcome::Inconclusive { pairings, .. } => pairings.clone(),
        NefOutcome::Refuted { .. } => analysis::pairings(t, &d, &cat)?,
    };
    for p in pairs {
        sec.push(vec![p.curve.into(), p.value.into()]);
    }
    r.sections.push(sec);
    r.set("divisor", name);
    r.set("status", out.status());
    match &out {
        NefOutcome::Certified(c) => {
            if let Some(g) = &c.generic_bound {
                r.set("line_rule_line", g.line.clone());
                r.set("line_rule_base_degree", g.base_degree.clone());
                r.set("line_rule_max_coefficient", g.max_coefficient.clone());
            }
        }
        NefOutcome::Inconclusive { reason, .. } => r.set("reason", reason.clone()),
        NefOutcome::Refuted { curve, value } => {
            r.set("violating_curve", curve.clone());
            r.set("violating_pairing", value.clone());
        }
    }
    Ok(r)
}

pub fn zariski(s: &Scenario, divisor: Option<&str>) -> Result<Report> {
    let (name, d) = pick_divisor(s, divisor)?;
    let t = &s.tower;
    let cat = t.catalogue(d.model())?;
    let z = analysis::zariski(t, &d, &cat)?;
    analysis::verify_zariski(t, &d, &cat, &z)?;
    let mut sec = Section::new("negative_part", &["curve", "coefficient"]);
    for c in &z.negative {
        sec.push(vec![c.curve.clone().into(), c.coefficient.clone().into()]);
    }
    let mut r = Report::new("zariski");
    r.sections.push(sec);
    r.set("divisor", name);
    r.set("positive_part", class_text(&z.positive));
    r.set("positive_square", t.intersect(&z.positive, &z.positive)?);
    r.set("verified", true);
    Ok(r)
}

pub fn volume(s: &Scenario, divisor: Option<&str>) -> Result<Report> {
    let (name, d) = pick_divisor(s, divisor)?;
    let t = &s.tower;
    let v = analysis::volume(t, &d, &t.catalogue(d.model())?)?;
    let mut r = Report::new("volume");
    r.set("divisor", name);
    r.set("volume", v.clone());
    both_volumes(&mut r, "volume", &v);
    Ok(r)
}

/// With `line`, also reduces the volume to the base (refusing when the
/// tower does not have the required shape).
pub fn bdeg(s: &Scenario, bdiv: Option<&str>, k_max: Option<usize>, line: Option<&str>) -> Result<Report> {
    let b = s.bdivisor(bdiv)?;
    let k = k_max.unwrap_or(b.levels());
    let dl = bdivisor::degree_limit(&b, k)?;
    let mono = bdivisor::check_monotone(&b, k)?;
    let mut sec = Section::new("levels", &["k", "degree", "nef"]);
    for (i, (d, st)) in dl.sequence.iter().zip(&dl.nef_status).enumerate() {
        sec.push(vec![i.into(), d.clone().into(), (*st).into()]);
    }
    let mut r = Report::new("bdeg");
    r.sections.push(sec);
    r.set("monotone", mono.monotone);
    r.set("compatible", b.compatibility_violation(k)?.is_none());
    r.set("upper_bound", dl.upper_bound.clone());
    r.set("closed_form_verified", dl.closed_form_verified);
    match &dl.exact_limit {
        Some(l) => r.set("exact_limit", l.clone()),
        None => r.set("exact_limit", "unknown"),
    }
    let h = CartierBDiv::new(b.tower().hyperplane(b.tower().base_model())?);
    r.set("H_dot_D", bdivisor::mixed_intersect(&h, &b)?);
    let vu = bdivisor::volume_upper(&b, k)?;
    both_volumes(&mut r, "volume_upper", &vu);
    if let Some(l) = line {
        let red = bdivisor::volume_via_line_reduction(&b, l, k, ReductionMode::Strict)?;
        both_volumes(&mut r, "volume", &red.volume);
        for (i, f) in red.facts.iter().enumerate() {
            r.set(&format!("reduction_fact_{}", i + 1), f.clone());
        }
    }
    Ok(r)
}

pub fn toric_hs(metric: &PLMetricData, k_max: u64, budget: &Budget) -> Result<Report> {
    let h = toric::hs_check(metric, k_max, budget)?;
    let mut sec = Section::new("sequence", &["k", "h0", "s_k", "deviation"]);
    for row in &h.rows {
        let dev = &row.s - &h.target;
        sec.push(vec![row.k.into(), row.h0.into(), row.s.clone().into(), dev.into()]);
    }
    let mut est = Section::new("residue_estimates", &["residue", "k", "estimate"]);
    for e in &h.residue_estimates {
        est.push(vec![e.residue.into(), e.k.into(), e.estimate.clone().into()]);
    }
    let mut r = Report::new("toric-hs");
    r.sections.extend([sec, est]);
    metric_summary(&mut r, metric);
    r.set("resolution_fan", h.resolution_fan.clone());
    r.set("target", h.target.clone());
    r.set("max_deviation", h.max_deviation.clone());
    r.set("fitted_C", h.fitted_c.clone());
    r.set("fit_range", format!("{}..={}", h.fit_range.0, h.fit_range.1));
    r.set("decay_holds", h.decay_holds);
    r.set("sign_changes", h.sign_changes);
    r.set("integral_subsequence_consistent", h.integral_subsequence_consistent);
    Ok(r)
}

fn metric_summary(r: &mut Report, m: &PLMetricData) {
    r.set("d", m.d);
    r.set("c", m.c.clone());
    r.set("ideal", m.ideal.to_string());
}

pub fn toric_cw(metric: &PLMetricData, k_max: u64, budget: &Budget) -> Result<Report> {
    let c = toric::chern_weil_check(metric, k_max, budget)?;
    let mut r = Report::new("toric-cw");
    metric_summary(&mut r, metric);
    r.set("bdeg", c.bdeg);
    r.set("eqalg", c.eqalg);
    r.set("hs_est", c.hs_est);
    r.set("hs_last", c.hs_last);
    r.set("k_max", c.k_max);
    r.set("lelong_zero", c.lelong_zero);
    Ok(r)
}

/// Exit status for an error: 2 validation, 3 budget, 4 refused reduction, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) | Error::OutOfRange { .. } => 2,
        Error::Budget { .. } => 3,
        Error::ReductionRefused(_) => 4,
        Error::NotPseudoeffective(_) | Error::Inconsistent(_) => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use crate::report::Value;

    #[test]
    fn appendix_report() {
        let r = repro_appendix(4, &Budget::default()).unwrap();
        let rows = &r.section("levels").unwrap().rows;
        assert_eq!(rows[4][1], Value::Rat(rat(49, 16)));
        assert_eq!(rows[4][3], Value::Rat(rat(49, 16)));
        assert_eq!(r.get("degree_limit"), Some(&Value::Rat(int(3))));
        assert_eq!(r.get("ratio [appendix (without d!)]"), Some(&Value::Rat(int(3))));
        assert_eq!(r.get("volume [appendix (without d!)]"), Some(&Value::Rat(rat(1, 2))));
        assert!(repro_appendix(13, &Budget::default()).is_err());
        assert!(matches!(repro_appendix(4, &Budget::new(10)), Err(Error::Budget { .. })));
    }

    #[test]
    fn intersect_on_step1() {
        let s = Scenario::from_str(
            r#"{"curves": [{"name": "A", "class": ["1"]}, {"name": "B", "class": ["1"]}],
                "divisors": [{"name": "D", "step1": {"a": "A", "b": "B", "model": 0, "divisor": "2H", "b_value": 2}}]}"#,
        )
        .unwrap();
        let r = intersect(&s, "E1", "E2", None).unwrap();
        assert_eq!(r.get("value"), Some(&Value::Rat(int(1))));
        let v = volume(&s, Some("1H")).unwrap();
        assert_eq!(v.get("volume"), Some(&Value::Rat(int(1))));
    }

    #[test]
    fn toric_cw_report() {
        let m = toric::standard_suite().remove(0);
        let r = toric_cw(&m, 12, &Budget::default()).unwrap();
        assert_eq!(r.get("bdeg"), Some(&Value::Rat(int(3))));
        assert_eq!(r.get("eqalg"), Some(&Value::Rat(int(3))));
    }
}
