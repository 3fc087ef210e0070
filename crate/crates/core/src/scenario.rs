//! JSON scenario files: a tower given by curves and centers, named divisors,
//! b-divisors over the tower and an optional toric section.
//!
//! ```json
//! {
//!   "base": "p2",
//!   "curves": [{"name": "L", "class": ["1"]}, {"name": "B", "class": ["1"]}],
//!   "centers": [{"model": 0, "incident": ["L", "B"], "name": "E1"}],
//!   "divisors": [
//!     {"name": "D", "model": 1, "class": ["2", "-1"]},
//!     {"name": "S", "step1": {"a": "L", "b": "B", "model": 0, "divisor": "2H", "b_value": 2}}
//!   ],
//!   "toric": {"d": 2, "c": "1", "ideal": [[1, 0], [0, 1]], "k_max": 40}
//! }
//! ```
//!
//! Rationals are `"num/den"` strings (integers may be bare numbers). A
//! divisor reference is either a defined name or `"<n>H"` on the base.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::appendix::{build_step1, build_step2, AppendixTower};
use crate::bdivisor::TowerBDiv;
use crate::error::{Error, Result};
use crate::rat::{parse_rat, Rat};
use crate::toric::{MonomialIdeal2D, PLMetricData};
use crate::tower::{CenterSpec, DivisorClass, ModelId, Tower};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_base")]
    pub base: String,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    #[serde(default)]
    pub centers: Vec<CenterEntry>,
    #[serde(default)]
    pub divisors: Vec<DivisorSpec>,
    #[serde(default)]
    pub bdivisors: Vec<BDivSpec>,
    pub toric: Option<ToricSpec>,
}

fn default_base() -> String {
    "p2".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    #[serde(with = "crate::rat::serde_rat::vec")]
    pub class: Vec<Rat>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CenterEntry {
    pub model: usize,
    pub incident: Vec<String>,
    pub name: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    pub name: String,
    pub model: Option<usize>,
    #[serde(default, with = "opt_rat_vec")]
    pub class: Option<Vec<Rat>>,
    pub step1: Option<Step1Spec>,
    pub step2: Option<Step2Spec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step1Spec {
    pub a: String,
    pub b: String,
    pub model: usize,
    pub divisor: String,
    pub b_value: usize,
    #[serde(default = "default_prefix")]
    pub prefix: String,
}

fn default_prefix() -> String {
    "E".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step2Spec {
    pub k: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BDivSpec {
    pub name: String,
    pub levels: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricSpec {
    pub d: u64,
    #[serde(with = "crate::rat::serde_rat")]
    pub c: Rat,
    pub ideal: Vec<[u64; 2]>,
    #[serde(default = "default_toric_kmax")]
    pub k_max: u64,
}

fn default_toric_kmax() -> u64 {
    40
}

mod opt_rat_vec {
    use super::*;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rat>>, D::Error> {
        #[derive(Deserialize)]
        struct W(#[serde(with = "crate::rat::serde_rat::vec")] Vec<Rat>);
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// A validated scenario: the tower is built and every divisor resolved.
pub struct Scenario {
    pub tower: Arc<Tower>,
    pub divisors: BTreeMap<String, DivisorClass>,
    /// Definition order of `divisors`.
    pub order: Vec<String>,
    pub bdivisors: BTreeMap<String, Arc<TowerBDiv>>,
    pub line: Option<String>,
    pub toric: Option<(PLMetricData, u64)>,
}

fn at(field: String) -> impl FnOnce(Error) -> Error {
    move |e| match e {
        Error::Validation(m) => Error::Validation(format!("{field}: {m}")),
        other => other,
    }
}

fn resolve_ref(tower: &Tower, known: &BTreeMap<String, DivisorClass>, name: &str) -> Result<DivisorClass> {
    if let Some(d) = known.get(name) {
        return Ok(d.clone());
    }
    if let Some(n) = name.strip_suffix('H') {
        let n = if n.is_empty() { "1" } else { n };
        if let Ok(r) = parse_rat(n) {
            return Ok(tower.hyperplane(tower.base_model())?.scale(&r));
        }
    }
    Err(Error::Validation(format!("unknown divisor '{name}'")))
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Scenario> {
        let file: ScenarioFile = serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("line {} column {}: {e}", e.line(), e.column())))?;
        Scenario::build(file)
    }

    pub fn build(file: ScenarioFile) -> Result<Scenario> {
        if file.base != "p2" {
            return Err(Error::Validation(format!("base: only \"p2\" is supported, got \"{}\"", file.base)));
        }
        let step2: Vec<&DivisorSpec> = file.divisors.iter().filter(|d| d.step2.is_some()).collect();
        if !step2.is_empty() {
            return Scenario::build_appendix(&file, step2);
        }

        let mut tower = Tower::projective_plane();
        for (i, c) in file.curves.iter().enumerate() {
            let f = format!("curves[{i}]");
            let class = tower.class(tower.base_model(), c.class.clone()).map_err(at(format!("{f}.class")))?;
            tower.register_curve(&c.name, &class).map_err(at(f))?;
        }
        for (i, c) in file.centers.iter().enumerate() {
            let f = format!("centers[{i}]");
            let names: Vec<&str> = c.incident.iter().map(String::as_str).collect();
            let spec = CenterSpec::new(ModelId(c.model), &names);
            match &c.name {
                Some(n) => tower.blow_up_named(&spec, n),
                None => tower.blow_up(&spec),
            }
            .map_err(at(f))?;
        }
        let mut divisors = BTreeMap::new();
        let mut order = vec![];
        for (i, d) in file.divisors.iter().enumerate() {
            let f = format!("divisors[{i}]");
            if divisors.contains_key(&d.name) {
                return Err(Error::Validation(format!("{f}.name: '{}' defined twice", d.name)));
            }
            let class = match (&d.class, &d.step1) {
                (Some(c), None) => {
                    let m = ModelId(d.model.unwrap_or(0));
                    tower.class(m, c.clone()).map_err(at(format!("{f}.class")))?
                }
                (None, Some(s)) => {
                    let base = resolve_ref(&tower, &divisors, &s.divisor).map_err(at(format!("{f}.step1.divisor")))?;
                    build_step1(&mut tower, &s.a, &s.b, ModelId(s.model), &base, s.b_value, &s.prefix)
                        .map_err(at(format!("{f}.step1")))?
                        .divisor
                }
                _ => return Err(Error::Validation(format!("{f}: give exactly one of class, step1, step2"))),
            };
            divisors.insert(d.name.clone(), class);
            order.push(d.name.clone());
        }
        let tower = Arc::new(tower);
        let mut bdivisors = BTreeMap::new();
        for (i, b) in file.bdivisors.iter().enumerate() {
            let f = format!("bdivisors[{i}]");
            let levels = b
                .levels
                .iter()
                .map(|n| resolve_ref(&tower, &divisors, n))
                .collect::<Result<Vec<_>>>()
                .map_err(at(format!("{f}.levels")))?;
            let t = TowerBDiv::from_levels(tower.clone(), levels).map_err(at(f))?;
            bdivisors.insert(b.name.clone(), Arc::new(t));
        }
        Ok(Scenario {
            tower,
            divisors,
            order,
            bdivisors,
            line: None,
            toric: Scenario::toric(&file)?,
        })
    }

    fn toric(file: &ScenarioFile) -> Result<Option<(PLMetricData, u64)>> {
        file.toric
            .as_ref()
            .map(|t| {
                let ideal = MonomialIdeal2D::new(&t.ideal).map_err(at("toric.ideal".into()))?;
                let m = PLMetricData::new(t.d, ideal, t.c.clone()).map_err(at("toric".into()))?;
                Ok((m, t.k_max))
            })
            .transpose()
    }

    /// A Step-2 directive fixes the whole tower, so it cannot be combined
    /// with explicit curves, centers or other divisors.
    fn build_appendix(file: &ScenarioFile, step2: Vec<&DivisorSpec>) -> Result<Scenario> {
        if step2.len() != 1 || file.divisors.len() != 1 || !file.curves.is_empty() || !file.centers.is_empty() {
            return Err(Error::Validation(
                "divisors: a step2 directive builds its own tower and must be the only construction".into(),
            ));
        }
        let spec = step2[0];
        let k = spec.step2.as_ref().unwrap().k;
        let a = build_step2(k).map_err(at("divisors[0].step2".into()))?;
        Scenario::from_appendix(a, &spec.name, Scenario::toric(file)?)
    }

    /// Registers `D'_j` as `<name>_<j>` and the whole tower as b-divisor `<name>`.
    pub fn from_appendix(a: AppendixTower, name: &str, toric: Option<(PLMetricData, u64)>) -> Result<Scenario> {
        let line = a.line.clone();
        let b = TowerBDiv::from_appendix(a)?;
        let mut divisors = BTreeMap::new();
        let mut order = vec![];
        for k in 0..=b.levels() {
            let n = format!("{name}_{k}");
            divisors.insert(n.clone(), b.level(k)?);
            order.push(n);
        }
        let tower = b.tower_arc();
        let mut bdivisors = BTreeMap::new();
        bdivisors.insert(name.to_string(), Arc::new(b));
        Ok(Scenario { tower, divisors, order, bdivisors, line: Some(line), toric })
    }

    pub fn divisor(&self, name: &str) -> Result<DivisorClass> {
        resolve_ref(&self.tower, &self.divisors, name)
    }

    pub fn bdivisor(&self, name: Option<&str>) -> Result<Arc<TowerBDiv>> {
        match name {
            Some(n) => self.bdivisors.get(n).cloned().ok_or_else(|| Error::Validation(format!("unknown b-divisor '{n}'"))),
            None if self.bdivisors.len() == 1 => Ok(self.bdivisors.values().next().unwrap().clone()),
            None => Err(Error::Validation("scenario defines several b-divisors; pick one".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn builds_tower_and_divisors() {
        let s = Scenario::from_str(
            r#"{"curves": [{"name": "L", "class": ["1"]}, {"name": "B", "class": [1]}],
                "centers": [{"model": 0, "incident": ["L", "B"], "name": "E1"}],
                "divisors": [{"name": "D", "model": 1, "class": ["2", "-1"]},
                             {"name": "S", "step1": {"a": "L", "b": "B", "model": 0, "divisor": "2H", "b_value": 2, "prefix": "F"}}],
                "bdivisors": [{"name": "T", "levels": ["2H", "D"]}]}"#,
        )
        .unwrap();
        assert_eq!(s.tower.model_count(), 4);
        let d = s.divisor("D").unwrap();
        assert_eq!(s.tower.intersect(&d, &d).unwrap(), int(3));
        assert_eq!(s.divisor("S").unwrap().model(), ModelId(3));
        assert!(s.bdivisor(Some("T")).is_ok());
    }

    #[test]
    fn reports_field_paths() {
        let err = Scenario::from_str(r#"{"curves": [{"name": "L", "class": ["1", "2"]}]}"#).err().unwrap();
        assert!(err.to_string().contains("curves[0].class"), "{err}");
        let err = Scenario::from_str(r#"{"centers": [{"model": 0, "incident": ["Q"]}]}"#).err().unwrap();
        assert!(err.to_string().contains("centers[0]"), "{err}");
        let err = Scenario::from_str("{\n \"bogus\": 1}").err().unwrap();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = Scenario::from_str(r#"{"base": "p1"}"#).err().unwrap();
        assert!(err.to_string().contains("base"), "{err}");
    }

    #[test]
    fn appendix_directive() {
        let s = Scenario::from_str(r#"{"divisors": [{"name": "Dp", "step2": {"k": 3}}]}"#).unwrap();
        assert_eq!(s.order.len(), 4);
        let b = s.bdivisor(None).unwrap();
        assert_eq!(b.level(2).unwrap(), s.divisor("Dp_2").unwrap());
        assert_eq!(s.line.as_deref(), Some("L"));
        assert!(Scenario::from_str(r#"{"curves": [{"name": "M", "class": ["1"]}], "divisors": [{"name": "Dp", "step2": {"k": 1}}]}"#).is_err());
    }

    #[test]
    fn toric_section() {
        let s = Scenario::from_str(r#"{"toric": {"d": 3, "c": "3/2", "ideal": [[1, 0], [0, 1]]}}"#).unwrap();
        let (m, k) = s.toric.unwrap();
        assert_eq!(k, 40);
        assert_eq!(m.c, Rat::new(3.into(), 2.into()));
    }
}
