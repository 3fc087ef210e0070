//! Towers of point blow-ups over a base surface.
//!
//! Every model carries the orthogonal basis `{base classes, e_1, ..., e_m}`
//! where `e_i` is the *total* transform of the i-th exceptional curve on
//! the path from the base. The intersection form is the base Gram matrix
//! followed by `-1` on every exceptional slot, so pullback appends zero
//! coordinates and pushforward truncates them.
//!
//! Strict transforms are derived data: each curve keeps a short version
//! history (one entry per model where its class changed) and the class on a
//! descendant model is the latest ancestor version, padded with zeros.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rat::{int, Rat};

static NEXT_TOWER: AtomicU64 = AtomicU64::new(1);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerId(u64);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelId(pub usize);

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId(pub(crate) usize);

/// A rational class over the orthogonal basis of one model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    tower: TowerId,
    model: ModelId,
    coeffs: Vec<Rat>,
}

impl DivisorClass {
    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rat) -> DivisorClass {
        DivisorClass {
            tower: self.tower,
            model: self.model,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(&Rat, &Rat) -> Rat) -> DivisorClass {
        assert!(
            self.tower == other.tower && self.model == other.model,
            "divisor classes live on different models ({} vs {}); pull back first",
            self.model,
            other.model
        );
        DivisorClass {
            tower: self.tower,
            model: self.model,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Adds `s * curve` in place.
    pub fn add_sparse(&mut self, curve: &SparseClass, s: &Rat) {
        for (slot, c) in &curve.terms {
            self.coeffs[*slot] += c * s;
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rat::one())
    }
}

impl Mul<&DivisorClass> for &Rat {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

/// Sparse class used for curve records; slots are positions in a model's
/// coefficient vector and stay valid on every descendant model.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseClass {
    pub(crate) terms: Vec<(usize, Rat)>,
}

impl SparseClass {
    pub fn terms(&self) -> &[(usize, Rat)] {
        &self.terms
    }

    fn from_dense(c: &[Rat]) -> SparseClass {
        SparseClass {
            terms: c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect(),
        }
    }

    fn add_term(&mut self, slot: usize, v: Rat) {
        match self.terms.binary_search_by_key(&slot, |(s, _)| *s) {
            Ok(i) => {
                self.terms[i].1 += v;
                if self.terms[i].1.is_zero() {
                    self.terms.remove(i);
                }
            }
            Err(i) => {
                if !v.is_zero() {
                    self.terms.insert(i, (slot, v))
                }
            }
        }
    }
}

/// A point to blow up: the model it lives on and every registered curve
/// through it. Curves through a center are assumed smooth and pairwise
/// transverse there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterSpec {
    pub model: ModelId,
    pub incident_curves: Vec<String>,
}

impl CenterSpec {
    pub fn new(model: ModelId, curves: &[&str]) -> CenterSpec {
        CenterSpec { model, incident_curves: curves.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// Registered by the user (a strict transform of a curve on some model).
    Registered,
    /// Exceptional curve of the blow-up producing `model`.
    Exceptional { model: ModelId, slot: usize },
}

#[derive(Clone, Debug)]
struct Curve {
    name: String,
    kind: CurveKind,
    born: usize,
    versions: Vec<(usize, SparseClass)>,
}

#[derive(Clone, Debug)]
struct CenterRecord {
    incident: Vec<CurveId>,
    exceptional: CurveId,
}

#[derive(Clone, Debug)]
struct ModelNode {
    parent: Option<usize>,
    depth: usize,
    // jumps[i] = ancestor 2^i levels up
    jumps: Vec<usize>,
    center: Option<CenterRecord>,
}

/// Public view of a curve on a given model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    pub model: ModelId,
    pub kind: CurveKind,
    pub class: DivisorClass,
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    pub name: String,
    pub id: CurveId,
    pub class: SparseClass,
}

/// All curves registered on one model: strict transforms and exceptionals.
#[derive(Clone, Debug)]
pub struct Catalogue {
    pub model: ModelId,
    pub curves: Vec<CatalogueEntry>,
}

impl Catalogue {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&CatalogueEntry> {
        self.curves.iter().find(|c| c.name == name)
    }

    /// Restricts the catalogue to the named curves.
    pub fn subset(&self, names: &[&str]) -> Catalogue {
        Catalogue {
            model: self.model,
            curves: self.curves.iter().filter(|c| names.contains(&c.name.as_str())).cloned().collect(),
        }
    }
}

/// Coordinates of a class in "base + strict exceptional" form:
/// `D = pi^*(base) + sum c_E * strict(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictDecomposition {
    pub model: ModelId,
    pub base: Vec<Rat>,
    pub exceptional: Vec<(String, Rat)>,
}

#[derive(Clone, Debug)]
struct Base {
    name: String,
    gram: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug)]
pub struct Tower {
    id: TowerId,
    base: Base,
    models: Vec<ModelNode>,
    curves: Vec<Curve>,
    by_name: HashMap<String, CurveId>,
}

impl Tower {
    /// The projective plane: basis `{H}` with `H^2 = 1`, no curves.
    pub fn projective_plane() -> Tower {
        Tower::with_base("p2", vec![vec![int(1)]]).expect("valid base")
    }

    /// A generic base surface given by its Gram matrix on a chosen basis of
    /// the rational Picard group.
    pub fn with_base(name: &str, gram: Vec<Vec<Rat>>) -> Result<Tower> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|r| r.len() != n) {
            return invalid("base Gram matrix must be square and non-empty");
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return invalid("base Gram matrix must be symmetric");
                }
            }
        }
        Ok(Tower {
            id: TowerId(NEXT_TOWER.fetch_add(1, Ordering::Relaxed)),
            base: Base { name: name.to_string(), gram },
            models: vec![ModelNode { parent: None, depth: 0, jumps: vec![], center: None }],
            curves: vec![],
            by_name: HashMap::new(),
        })
    }

    pub fn base_name(&self) -> &str {
        &self.base.name
    }

    /// True for the built-in projective plane.
    pub fn base_is_projective_plane(&self) -> bool {
        self.base.gram.len() == 1 && self.base.gram[0][0] == int(1)
    }

    pub fn base_rank(&self) -> usize {
        self.base.gram.len()
    }

    pub fn model_count(&self) -> usize {
        self.models.len()
    }

    pub fn latest(&self) -> ModelId {
        ModelId(self.models.len() - 1)
    }

    pub fn base_model(&self) -> ModelId {
        ModelId(0)
    }

    fn node(&self, m: ModelId) -> Result<&ModelNode> {
        self.models.get(m.0).ok_or_else(|| Error::Validation(format!("unknown model {m}")))
    }

    pub fn basis_size(&self, m: ModelId) -> Result<usize> {
        Ok(self.base_rank() + self.node(m)?.depth)
    }

    pub fn parent(&self, m: ModelId) -> Result<Option<ModelId>> {
        Ok(self.node(m)?.parent.map(ModelId))
    }

    pub fn depth(&self, m: ModelId) -> Result<usize> {
        Ok(self.node(m)?.depth)
    }

    /// Gram matrix of the model: base Gram then `-1` on exceptional slots.
    pub fn gram(&self, m: ModelId) -> Result<Vec<Vec<Rat>>> {
        let n = self.basis_size(m)?;
        let r = self.base_rank();
        let mut g = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i < r && j < r {
                    g[i][j] = self.base.gram[i][j].clone();
                } else if i == j {
                    g[i][j] = int(-1);
                }
            }
        }
        Ok(g)
    }

    fn ancestor_at_depth(&self, m: usize, depth: usize) -> usize {
        let mut cur = m;
        let mut up = self.models[m].depth - depth;
        let mut i = 0;
        while up > 0 {
            if up & 1 == 1 {
                cur = self.models[cur].jumps[i];
            }
            up >>= 1;
            i += 1;
        }
        cur
    }

    /// `a` lies on the path from the base to `m` (inclusive).
    pub fn dominated_by(&self, a: ModelId, m: ModelId) -> bool {
        if a.0 >= self.models.len() || m.0 >= self.models.len() {
            return false;
        }
        let da = self.models[a.0].depth;
        let dm = self.models[m.0].depth;
        da <= dm && self.ancestor_at_depth(m.0, da) == a.0
    }

    fn check_class(&self, d: &DivisorClass) -> Result<()> {
        if d.tower != self.id {
            return invalid("divisor class belongs to a different tower");
        }
        if d.coeffs.len() != self.basis_size(d.model)? {
            return invalid("divisor class length does not match its model");
        }
        Ok(())
    }

    pub fn class(&self, m: ModelId, coeffs: Vec<Rat>) -> Result<DivisorClass> {
        let n = self.basis_size(m)?;
        if coeffs.len() != n {
            return invalid(format!("model {m} has basis size {n}, got {} coefficients", coeffs.len()));
        }
        Ok(DivisorClass { tower: self.id, model: m, coeffs })
    }

    pub fn class_i64(&self, m: ModelId, coeffs: &[i64]) -> Result<DivisorClass> {
        self.class(m, coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(&self, m: ModelId) -> Result<DivisorClass> {
        self.class(m, vec![Rat::zero(); self.basis_size(m)?])
    }

    /// Base basis vector `i` (for the projective plane, `i = 0` is `H`) pulled back to `m`.
    pub fn base_vector(&self, m: ModelId, i: usize) -> Result<DivisorClass> {
        if i >= self.base_rank() {
            return invalid(format!("base basis index {i} out of range"));
        }
        let mut z = self.zero(m)?;
        z.coeffs[i] = Rat::one();
        Ok(z)
    }

    /// `H` on any model of a tower over the projective plane.
    pub fn hyperplane(&self, m: ModelId) -> Result<DivisorClass> {
        self.base_vector(m, 0)
    }

    /// Total transform `e` of the named exceptional curve, on model `m`.
    pub fn total_exceptional(&self, name: &str, m: ModelId) -> Result<DivisorClass> {
        let id = self.curve_id(name)?;
        match self.curves[id.0].kind {
            CurveKind::Exceptional { model, slot } => {
                if !self.dominated_by(model, m) {
                    return invalid(format!("exceptional {name} does not exist on {m}"));
                }
                let mut z = self.zero(m)?;
                z.coeffs[slot] = Rat::one();
                Ok(z)
            }
            CurveKind::Registered => invalid(format!("{name} is not an exceptional curve")),
        }
    }

    /// Slot of the exceptional created by the blow-up producing model `m`.
    fn slot_of_model(&self, m: usize) -> usize {
        self.base_rank() + self.models[m].depth - 1
    }

    /// Models on the path from the base to `m`, base first.
    pub fn path(&self, m: ModelId) -> Result<Vec<ModelId>> {
        let mut out = Vec::with_capacity(self.node(m)?.depth + 1);
        let mut cur = Some(m.0);
        while let Some(c) = cur {
            out.push(ModelId(c));
            cur = self.models[c].parent;
        }
        out.reverse();
        Ok(out)
    }

    // ---- curves ------------------------------------------------------------

    pub fn curve_id(&self, name: &str) -> Result<CurveId> {
        self.by_name.get(name).copied().ok_or_else(|| Error::Validation(format!("unknown curve '{name}'")))
    }

    pub fn curve_name(&self, id: CurveId) -> &str {
        &self.curves[id.0].name
    }

    pub fn curve_kind(&self, name: &str) -> Result<CurveKind> {
        Ok(self.curves[self.curve_id(name)?.0].kind.clone())
    }

    /// Registers a curve whose strict transform on `model` has the given class.
    pub fn register_curve(&mut self, name: &str, class: &DivisorClass) -> Result<CurveId> {
        self.check_class(class)?;
        if name.is_empty() {
            return invalid("curve name must be non-empty");
        }
        if self.by_name.contains_key(name) {
            return invalid(format!("curve '{name}' already registered"));
        }
        let id = CurveId(self.curves.len());
        self.curves.push(Curve {
            name: name.to_string(),
            kind: CurveKind::Registered,
            born: class.model.0,
            versions: vec![(class.model.0, SparseClass::from_dense(&class.coeffs))],
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    fn sparse_on(&self, id: CurveId, m: usize) -> Option<&SparseClass> {
        let c = &self.curves[id.0];
        if !self.dominated_by(ModelId(c.born), ModelId(m)) {
            return None;
        }
        c.versions.iter().rev().find(|(vm, _)| self.dominated_by(ModelId(*vm), ModelId(m))).map(|(_, s)| s)
    }

    pub fn curve_exists_on(&self, name: &str, m: ModelId) -> bool {
        self.by_name.get(name).is_some_and(|id| self.sparse_on(*id, m.0).is_some())
    }

    /// Sparse class of the strict transform of `name` on `m`.
    pub fn curve_sparse(&self, name: &str, m: ModelId) -> Result<SparseClass> {
        self.node(m)?;
        let id = self.curve_id(name)?;
        self.sparse_on(id, m.0)
            .cloned()
            .ok_or_else(|| Error::Validation(format!("curve '{name}' does not exist on model {m}")))
    }

    pub fn curve_class(&self, name: &str, m: ModelId) -> Result<DivisorClass> {
        let s = self.curve_sparse(name, m)?;
        let mut z = self.zero(m)?;
        z.add_sparse(&s, &Rat::one());
        Ok(z)
    }

    pub fn curve_record(&self, name: &str, m: ModelId) -> Result<CurveRecord> {
        Ok(CurveRecord {
            name: name.to_string(),
            model: m,
            kind: self.curve_kind(name)?,
            class: self.curve_class(name, m)?,
        })
    }

    /// Names of all curves present on `m`, in registration order.
    pub fn curve_names(&self, m: ModelId) -> Vec<String> {
        self.curves
            .iter()
            .enumerate()
            .filter(|(i, _)| self.sparse_on(CurveId(*i), m.0).is_some())
            .map(|(_, c)| c.name.clone())
            .collect()
    }

    pub fn catalogue(&self, m: ModelId) -> Result<Catalogue> {
        self.node(m)?;
        let curves = (0..self.curves.len())
            .filter_map(|i| {
                self.sparse_on(CurveId(i), m.0).map(|s| CatalogueEntry {
                    name: self.curves[i].name.clone(),
                    id: CurveId(i),
                    class: s.clone(),
                })
            })
            .collect();
        Ok(Catalogue { model: m, curves })
    }

    // ---- blow-ups ----------------------------------------------------------

    /// Blows up a point; the exceptional curve is named `E<n>` where `n` is
    /// the new model's index.
    pub fn blow_up(&mut self, center: &CenterSpec) -> Result<ModelId> {
        let name = format!("E{}", self.models.len());
        self.blow_up_named(center, &name)
    }

    pub fn blow_up_named(&mut self, center: &CenterSpec, exceptional_name: &str) -> Result<ModelId> {
        let m = center.model;
        self.node(m)?;
        if self.by_name.contains_key(exceptional_name) {
            return invalid(format!("curve '{exceptional_name}' already registered"));
        }
        let mut incident = Vec::with_capacity(center.incident_curves.len());
        for name in &center.incident_curves {
            let id = self.curve_id(name)?;
            if incident.contains(&id) {
                return invalid(format!("curve '{name}' listed twice at center"));
            }
            if self.sparse_on(id, m.0).is_none() {
                return invalid(format!("curve '{name}' does not exist on model {m}"));
            }
            incident.push(id);
        }
        for (i, a) in incident.iter().enumerate() {
            for b in &incident[i + 1..] {
                let x = self.intersect_sparse(m, self.sparse_on(*a, m.0).unwrap(), self.sparse_on(*b, m.0).unwrap());
                if x < Rat::one() {
                    return invalid(format!(
                        "curves '{}' and '{}' have intersection {} on {m}; they cannot share a center",
                        self.curves[a.0].name, self.curves[b.0].name, x
                    ));
                }
            }
        }

        let parent = &self.models[m.0];
        let depth = parent.depth + 1;
        let mut jumps = vec![m.0];
        loop {
            let k = jumps.len() - 1;
            let prev = jumps[k];
            match self.models[prev].jumps.get(k) {
                Some(&j) => jumps.push(j),
                None => break,
            }
        }
        let new_index = self.models.len();
        let slot = self.base_rank() + depth - 1;
        let exc_id = CurveId(self.curves.len());
        self.models.push(ModelNode {
            parent: Some(m.0),
            depth,
            jumps,
            center: Some(CenterRecord { incident: incident.clone(), exceptional: exc_id }),
        });
        for id in &incident {
            let mut s = self.sparse_on(*id, m.0).unwrap().clone();
            s.add_term(slot, int(-1));
            self.curves[id.0].versions.push((new_index, s));
        }
        self.curves.push(Curve {
            name: exceptional_name.to_string(),
            kind: CurveKind::Exceptional { model: ModelId(new_index), slot },
            born: new_index,
            versions: vec![(new_index, SparseClass { terms: vec![(slot, Rat::one())] })],
        });
        self.by_name.insert(exceptional_name.to_string(), exc_id);
        Ok(ModelId(new_index))
    }

    /// Curves through the center blown up to produce `m` (None for the base).
    pub fn center_of(&self, m: ModelId) -> Result<Option<(Vec<String>, String)>> {
        Ok(self.node(m)?.center.as_ref().map(|c| {
            (
                c.incident.iter().map(|i| self.curves[i.0].name.clone()).collect(),
                self.curves[c.exceptional.0].name.clone(),
            )
        }))
    }

    // ---- pullback / pushforward / intersection ----------------------------

    pub fn pullback(&self, d: &DivisorClass, target: ModelId) -> Result<DivisorClass> {
        self.check_class(d)?;
        self.node(target)?;
        if !self.dominated_by(d.model, target) {
            return invalid(format!("cannot pull back from {} to {target}: target does not dominate", d.model));
        }
        let mut coeffs = d.coeffs.clone();
        coeffs.resize(self.basis_size(target)?, Rat::zero());
        Ok(DivisorClass { tower: self.id, model: target, coeffs })
    }

    pub fn pushforward(&self, d: &DivisorClass, target: ModelId) -> Result<DivisorClass> {
        self.check_class(d)?;
        self.node(target)?;
        if !self.dominated_by(target, d.model) {
            return invalid(format!("cannot push forward from {} to {target}: target is not below", d.model));
        }
        let mut coeffs = d.coeffs.clone();
        coeffs.truncate(self.basis_size(target)?);
        Ok(DivisorClass { tower: self.id, model: target, coeffs })
    }

    /// The model dominating both, when they lie on one path.
    pub fn common_model(&self, a: ModelId, b: ModelId) -> Result<ModelId> {
        self.node(a)?;
        self.node(b)?;
        if self.dominated_by(a, b) {
            Ok(b)
        } else if self.dominated_by(b, a) {
            Ok(a)
        } else {
            invalid(format!("models {a} and {b} lie on different branches; no common dominating model"))
        }
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rat> {
        self.check_class(a)?;
        self.check_class(b)?;
        let m = self.common_model(a.model, b.model)?;
        let r = self.base_rank();
        let n = self.basis_size(m)?;
        let mut acc = Rat::zero();
        for i in 0..r {
            for j in 0..r {
                let g = &self.base.gram[i][j];
                if g.is_zero() {
                    continue;
                }
                acc += g * &a.coeffs[i] * &b.coeffs[j];
            }
        }
        for i in r..n {
            if let (Some(x), Some(y)) = (a.coeffs.get(i), b.coeffs.get(i)) {
                if !x.is_zero() && !y.is_zero() {
                    acc -= x * y;
                }
            }
        }
        Ok(acc)
    }

    /// `d . curve` where the curve class is sparse and valid on `d`'s model.
    pub fn pair_with_sparse(&self, d: &DivisorClass, c: &SparseClass) -> Rat {
        let r = self.base_rank();
        let mut acc = Rat::zero();
        for (slot, v) in &c.terms {
            if *slot < r {
                for i in 0..r {
                    let g = &self.base.gram[i][*slot];
                    if !g.is_zero() {
                        acc += g * &d.coeffs[i] * v;
                    }
                }
            } else if let Some(x) = d.coeffs.get(*slot) {
                acc -= x * v;
            }
        }
        acc
    }

    pub fn intersect_sparse(&self, _m: ModelId, a: &SparseClass, b: &SparseClass) -> Rat {
        let r = self.base_rank();
        let mut acc = Rat::zero();
        for (i, x) in a.terms.iter().filter(|(i, _)| *i < r) {
            for (j, y) in b.terms.iter().filter(|(j, _)| *j < r) {
                acc += &self.base.gram[*i][*j] * x * y;
            }
        }
        let (mut p, mut q) = (0, 0);
        while p < a.terms.len() && q < b.terms.len() {
            let (si, x) = &a.terms[p];
            let (sj, y) = &b.terms[q];
            if si < sj {
                p += 1;
            } else if sj < si {
                q += 1;
            } else {
                if *si >= r {
                    acc -= x * y;
                }
                p += 1;
                q += 1;
            }
        }
        acc
    }

    /// Intersection number of two named curves on model `m`.
    pub fn intersect_curves(&self, a: &str, b: &str, m: ModelId) -> Result<Rat> {
        let x = self.curve_sparse(a, m)?;
        let y = self.curve_sparse(b, m)?;
        Ok(self.intersect_sparse(m, &x, &y))
    }

    // ---- strict-transform bookkeeping --------------------------------------

    /// Exceptional slots on the path to `m`, each with its curve and the
    /// exceptional curves incident to its center.
    fn exceptional_path(&self, m: ModelId) -> Result<Vec<(usize, CurveId, Vec<CurveId>)>> {
        let path = self.path(m)?;
        Ok(path
            .iter()
            .skip(1)
            .map(|mi| {
                let c = self.models[mi.0].center.as_ref().expect("non-base model has a center");
                (self.slot_of_model(mi.0), c.exceptional, c.incident.clone())
            })
            .collect())
    }

    /// Rewrites `d` as `pi^*(base part) + sum c_E * strict(E)` over the
    /// exceptional curves of its model, by forward substitution along the path.
    pub fn strict_decomposition(&self, d: &DivisorClass) -> Result<StrictDecomposition> {
        self.check_class(d)?;
        let chain = self.exceptional_path(d.model)?;
        let mut coef: HashMap<CurveId, Rat> = HashMap::new();
        let mut out = Vec::with_capacity(chain.len());
        for (slot, exc, incident) in &chain {
            let mut c = d.coeffs[*slot].clone();
            for i in incident {
                if let Some(v) = coef.get(i) {
                    c += v;
                }
            }
            coef.insert(*exc, c.clone());
            out.push((self.curves[exc.0].name.clone(), c));
        }
        Ok(StrictDecomposition {
            model: d.model,
            base: d.coeffs[..self.base_rank()].to_vec(),
            exceptional: out,
        })
    }

    /// Multiplicity of the total transform of a base curve along each
    /// exceptional curve of `m` (same order as [`Tower::strict_decomposition`]).
    pub fn total_transform_multiplicities(&self, base_curve: &str, m: ModelId) -> Result<Vec<(String, u64)>> {
        let id = self.curve_id(base_curve)?;
        if self.curves[id.0].born != 0 || self.curves[id.0].kind != CurveKind::Registered {
            return invalid(format!("'{base_curve}' is not a curve on the base"));
        }
        let chain = self.exceptional_path(m)?;
        let mut mult: HashMap<CurveId, u64> = HashMap::new();
        mult.insert(id, 1);
        let mut out = Vec::with_capacity(chain.len());
        for (_, exc, incident) in &chain {
            let v: u64 = incident.iter().map(|i| mult.get(i).copied().unwrap_or(0)).sum();
            mult.insert(*exc, v);
            out.push((self.curves[exc.0].name.clone(), v));
        }
        Ok(out)
    }

    /// For each exceptional of `m`, the index (into the same ordering) of the
    /// first exceptional over the same base point.
    pub fn exceptional_roots(&self, m: ModelId) -> Result<Vec<usize>> {
        let chain = self.exceptional_path(m)?;
        let mut pos: HashMap<CurveId, usize> = HashMap::new();
        let mut roots = Vec::with_capacity(chain.len());
        for (k, (_, exc, incident)) in chain.iter().enumerate() {
            let root = incident.iter().find_map(|i| pos.get(i).map(|&p| roots[p])).unwrap_or(k);
            pos.insert(*exc, k);
            roots.push(root);
        }
        Ok(roots)
    }

    pub fn self_intersection(&self, name: &str, m: ModelId) -> Result<Rat> {
        self.intersect_curves(name, name, m)
    }
}

/// Checks that no exceptional component of `d` in strict coordinates is
/// among `curves` (used to test that a divisor avoids a center).
pub(crate) fn components_among(decomp: &StrictDecomposition, curves: &[String]) -> Option<String> {
    decomp
        .exceptional
        .iter()
        .find(|(n, c)| !c.is_zero() && curves.contains(n))
        .map(|(n, _)| n.clone())
}
