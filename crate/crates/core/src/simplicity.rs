//! Simplicity and modality verdicts for augmentations, and the table of
//! simple augmentations (C^4,0) -> (C^4,0).
//!
//! The verdict rules, tried in order:
//!
//! 1. `g` not simple: the augmentation is not simple (`Theorem51`).
//! 2. `f` of codimension one: simple exactly when `g` is (`Theorem53`).
//! 3. `g` Morse: simple exactly when `f` is (`Theorem55`).
//! 4. Otherwise unknown, unless the catalog records the result.

use std::fmt;

use crate::ade::{classify, is_morse, modality_of_function, normal_form, FunctionType, Modality};
use crate::ae::ae_codim;
use crate::augmentation::{augmentation_codim, AugCodim};
use crate::catalog::{Catalog, CatalogEntry};
use crate::error::{Error, Result};
use crate::germ::{augment, MapGerm, Opsu, SubstantialFlag};
use crate::local_algebra::milnor;
use crate::poly::{Polynomial, Role, VarContext};
use crate::Budget;

/// Shown next to the table wherever it is reported.
pub const TABLE44_CONJECTURE: &str =
    "Conjecture (unproved): every simple augmentation (C^4,0) -> (C^4,0) is A-equivalent to a germ in this table.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Status {
    Simple,
    NonSimple,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Justification {
    Theorem51,
    Theorem53,
    Theorem55,
    /// Name of the catalog entry.
    Catalog(String),
    None,
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Catalog(name) => write!(f, "Catalog({name})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SimplicityVerdict {
    pub status: Status,
    pub justification: Justification,
}

impl SimplicityVerdict {
    fn new(status: Status, justification: Justification) -> Self {
        SimplicityVerdict { status, justification }
    }

    pub fn unknown() -> Self {
        SimplicityVerdict::new(Status::Unknown, Justification::None)
    }

    fn from_bool(simple: bool, justification: Justification) -> Self {
        let status = if simple { Status::Simple } else { Status::NonSimple };
        SimplicityVerdict::new(status, justification)
    }
}

impl fmt::Display for SimplicityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.justification {
            Justification::None => write!(f, "{:?}", self.status),
            ref j => write!(f, "{:?} ({j})", self.status),
        }
    }
}

/// Verdict from the theorems alone. `f_simple` is `None` when the simplicity
/// of `f` is not known.
pub fn decide_simplicity(f_codim: usize, f_simple: Option<bool>, g: &Polynomial, k_max: usize) -> Result<SimplicityVerdict> {
    let tag = classify(g, k_max)?.tag;
    if tag == FunctionType::NotIsolated {
        return Err(Error::NotCertifiedByOrder(k_max));
    }
    if !tag.is_simple() {
        return Ok(SimplicityVerdict::new(Status::NonSimple, Justification::Theorem51));
    }
    if f_codim == 1 {
        return Ok(SimplicityVerdict::new(Status::Simple, Justification::Theorem53));
    }
    if is_morse(g)? {
        return Ok(match f_simple {
            Some(s) => SimplicityVerdict::from_bool(s, Justification::Theorem55),
            None => SimplicityVerdict::unknown(),
        });
    }
    Ok(SimplicityVerdict::unknown())
}

/// Theorem verdict, the catalog's opinion of the augmented germ, and the
/// combined verdict.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SimplicityReport {
    pub verdict: SimplicityVerdict,
    pub theorem: SimplicityVerdict,
    pub catalog_entry: Option<String>,
    pub catalog_simple: Option<bool>,
    /// `false` when a theorem and the catalog disagree.
    pub consistent: bool,
}

/// Falls back on the catalog when the theorems are silent and records any
/// disagreement between the two.
pub fn resolve_with_catalog(theorem: SimplicityVerdict, result: &MapGerm, catalog: &Catalog) -> SimplicityReport {
    let entry = catalog.lookup(result);
    let catalog_simple = entry.map(|e| e.simple);
    let consistent = match (theorem.status, catalog_simple) {
        (Status::Simple, Some(false)) | (Status::NonSimple, Some(true)) => false,
        _ => true,
    };
    let verdict = match (theorem.status, entry) {
        (Status::Unknown, Some(e)) => SimplicityVerdict::from_bool(e.simple, Justification::Catalog(e.name.clone())),
        _ => theorem.clone(),
    };
    SimplicityReport {
        verdict,
        theorem,
        catalog_entry: entry.map(|e| e.name.clone()),
        catalog_simple,
        consistent,
    }
}

/// Simplicity of `f` as far as it is known: stable germs are simple, and
/// catalog entries carry their own verdict.
pub fn known_simplicity(f: &MapGerm, f_codim: usize, catalog: &Catalog) -> Option<bool> {
    if f_codim == 0 {
        return Some(true);
    }
    catalog.lookup(f).map(|e| e.simple)
}

/// End-to-end verdict for `A_{F,g}(f)`.
pub fn simplicity_of_augmentation(f: &MapGerm, opsu: &Opsu, g: &Polynomial, catalog: &Catalog, budget: Budget) -> Result<SimplicityReport> {
    let result = augment(f, opsu, g)?;
    let f_codim = ae_codim(f, budget.map)?.codim;
    let theorem = decide_simplicity(f_codim, known_simplicity(f, f_codim, catalog), g, budget.function)?;
    Ok(resolve_with_catalog(theorem, &result, catalog))
}

/// Modality of an augmentation of a codimension-one germ, which equals the
/// modality of `g` when every deformation of `g` along its μ-constant
/// stratum is quasihomogeneous. Without an explicit answer that hypothesis
/// is taken to hold for simple `g` and for members of the unimodal witness
/// families with matching Milnor number, and to be unknown otherwise.
pub fn modality_of_augmentation(f_codim: usize, g: &Polynomial, mu_constant_qh: Option<bool>, k_max: usize) -> Result<Modality> {
    if f_codim != 1 {
        return Ok(Modality::Unknown);
    }
    let function_modality = modality_of_function(g, k_max)?;
    let hypothesis = mu_constant_qh.unwrap_or(matches!(function_modality, Modality::Known(_)));
    Ok(if hypothesis { function_modality } else { Modality::Unknown })
}

/// One concrete member of a table family.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TableInstance {
    /// Instance name, e.g. `3_A2` or `5_3`.
    pub tag: String,
    /// The value substituted into the family, e.g. `P = A_2` or `k = 3`.
    pub parameter: String,
    pub normal_form: String,
    pub f: String,
    pub g: Option<String>,
    pub f_codim: usize,
    /// `None` for the stable member `5_1`, whose augmenting function is linear.
    pub predicted: Option<AugCodim>,
    /// A_e-codimension of the normal form in jets.
    pub jet_codim: usize,
    pub jet_certified_order: usize,
    /// The family's codimension formula evaluated at this instance.
    pub formula_value: usize,
    pub simplicity: SimplicityReport,
}

impl TableInstance {
    /// Codimension reported for the instance.
    pub fn codim(&self) -> usize {
        self.predicted.map(|p| p.value).unwrap_or(self.jet_codim)
    }

    /// Prediction, jet computation and formula all agree.
    pub fn matches_formula(&self) -> bool {
        self.codim() == self.formula_value && self.jet_codim == self.formula_value
    }
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct TableEntry {
    pub family: String,
    pub normal_form: String,
    pub codim_formula: String,
    pub constraints: String,
    pub instances: Vec<TableInstance>,
}

/// Which members of each family to instantiate.
#[derive(Clone, Debug)]
pub struct TableInstances {
    pub functions: Vec<FunctionType>,
    pub four_squared: Vec<usize>,
    pub five: Vec<usize>,
}

impl TableInstances {
    /// `P, Q` over `A_1, A_2, A_3, D_4`; `4²_k` for `k = 2, 3`; `5_k` for `k = 1..4`.
    pub fn standard() -> Self {
        TableInstances {
            functions: vec![FunctionType::A(1), FunctionType::A(2), FunctionType::A(3), FunctionType::D(4)],
            four_squared: vec![2, 3],
            five: vec![1, 2, 3, 4],
        }
    }

    /// Every simple `P, Q` with μ ≤ 8 and `k` up to 6.
    pub fn extended() -> Self {
        let mut functions: Vec<FunctionType> = (1..=8).map(FunctionType::A).collect();
        functions.extend((4..=8).map(FunctionType::D));
        functions.extend([FunctionType::E6, FunctionType::E7, FunctionType::E8]);
        TableInstances { functions, four_squared: (2..=6).collect(), five: (1..=6).collect() }
    }
}

struct Base<'a> {
    entry: &'a CatalogEntry,
    opsu: Opsu,
    codim: usize,
}

fn base<'a>(catalog: &'a Catalog, name: &str, budget: Budget) -> Result<Base<'a>> {
    let entry = catalog
        .get(name)
        .ok_or_else(|| Error::Precondition(format!("the catalog has no entry `{name}`")))?;
    let opsu = entry
        .opsu()
        .ok_or_else(|| Error::Precondition(format!("the catalog entry `{name}` has no OPSU")))?;
    let codim = ae_codim(&entry.germ, budget.map)?.codim;
    Ok(Base { entry, opsu, codim })
}

fn function(text: &str, vars: &[&str]) -> Result<Polynomial> {
    Polynomial::parse(text, &VarContext::uniform(vars, Role::Augmenting)?)
}

fn instance(
    tag: String,
    parameter: String,
    b: &Base,
    g: &Polynomial,
    formula_value: usize,
    catalog: &Catalog,
    budget: Budget,
) -> Result<TableInstance> {
    let result = augment(&b.entry.germ, &b.opsu, g)?;
    let predicted = augmentation_codim(b.codim, g, SubstantialFlag::default(), budget.function)?;
    let jet = ae_codim(&result, budget.map)?;
    let theorem = decide_simplicity(b.codim, Some(b.entry.simple), g, budget.function)?;
    Ok(TableInstance {
        tag,
        parameter,
        normal_form: result.to_string(),
        f: b.entry.name.clone(),
        g: Some(g.to_string()),
        f_codim: b.codim,
        predicted: Some(predicted),
        jet_codim: jet.codim,
        jet_certified_order: jet.certified_order,
        formula_value,
        simplicity: resolve_with_catalog(theorem, &result, catalog),
    })
}

/// The stable member `5_1`: the augmenting function `z` is linear, so the
/// germ is the OPSU of `5_1` itself with its parameter renamed.
fn stable_five_one(b: &Base, catalog: &Catalog, budget: Budget) -> Result<TableInstance> {
    let u = b.opsu.unfolding();
    let f = &b.entry.germ;
    let zctx = VarContext::uniform(&["z"], Role::Augmenting)?;
    let ctx = f.ctx().join(&zctx)?;
    let z = Polynomial::var(&ctx, f.n());
    let mut comps = Vec::new();
    for c in u.deformation() {
        comps.push(c.substitute_into(&[(b.opsu.param_name(), &z)], &ctx)?);
    }
    comps.push(z);
    let result = MapGerm::new(&ctx, comps)?;
    let jet = ae_codim(&result, budget.map)?;
    let theorem = if jet.codim == 0 {
        SimplicityVerdict::unknown()
    } else {
        return Err(Error::NotStable(jet.codim));
    };
    let mut simplicity = resolve_with_catalog(theorem, &result, catalog);
    if simplicity.catalog_entry.is_none() {
        // Stable germs are simple.
        simplicity.verdict = SimplicityVerdict::new(Status::Simple, Justification::None);
    }
    Ok(TableInstance {
        tag: "5_1".into(),
        parameter: "k = 1".into(),
        normal_form: result.to_string(),
        f: b.entry.name.clone(),
        g: None,
        f_codim: b.codim,
        predicted: None,
        jet_codim: jet.codim,
        jet_certified_order: jet.certified_order,
        formula_value: 0,
        simplicity,
    })
}

/// Rebuilds the six families of simple augmentations (C^4,0) -> (C^4,0)
/// from the catalog's augmentable germs, computing every codimension.
pub fn generate_table44(catalog: &Catalog, budget: Budget, which: &TableInstances) -> Result<Vec<TableEntry>> {
    let mut rows = Vec::new();

    let t3 = base(catalog, "t^3", budget)?;
    let mut instances = Vec::new();
    for &p in &which.functions {
        let g = normal_form(p, &["x", "y", "z"])?;
        let mu = milnor(&g, budget.function)?.dimension;
        instances.push(instance(format!("3_{}", short(p)), format!("P = {p}"), &t3, &g, mu, catalog, budget)?);
    }
    rows.push(TableEntry {
        family: "3_P".into(),
        normal_form: "(x, y, z, t^3 + P(x,y,z) t)".into(),
        codim_formula: "mu(P)".into(),
        constraints: "P of type A_k, D_k, E_6, E_7, E_8".into(),
        instances,
    });

    let s = base(catalog, "S", budget)?;
    let mut instances = Vec::new();
    for &q in &which.functions {
        let g = normal_form(q, &["y", "z"])?;
        let mu = milnor(&g, budget.function)?.dimension;
        instances.push(instance(format!("4_{}", short(q)), format!("Q = {q}"), &s, &g, mu, catalog, budget)?);
    }
    rows.push(TableEntry {
        family: "4_Q".into(),
        normal_form: "(x, y, z, t^4 + x t + Q(y,z) t^2)".into(),
        codim_formula: "mu(Q)".into(),
        constraints: "Q of type A_k, D_k, E_6, E_7, E_8".into(),
        instances,
    });

    let morse = function("y^2 + z^2", &["y", "z"])?;
    let mut instances = Vec::new();
    for &k in &which.four_squared {
        let b = base(catalog, &format!("11_{}", 2 * k + 1), budget)?;
        instances.push(instance(format!("4²_{k}"), format!("k = {k}"), &b, &morse, k, catalog, budget)?);
    }
    rows.push(TableEntry {
        family: "4²_k".into(),
        normal_form: "(x, y, z, t^4 + (x^k + y^2 + z^2) t + x t^2)".into(),
        codim_formula: "k".into(),
        constraints: "k >= 2".into(),
        instances,
    });

    let mt1 = base(catalog, "mt5_1", budget)?;
    let mut instances = Vec::new();
    for &k in &which.five {
        if k == 1 {
            instances.push(stable_five_one(&mt1, catalog, budget)?);
        } else {
            let g = function(&format!("z^{k}"), &["z"])?;
            instances.push(instance(format!("5_{k}"), format!("k = {k}"), &mt1, &g, k - 1, catalog, budget)?);
        }
    }
    rows.push(TableEntry {
        family: "5_k".into(),
        normal_form: "(x, y, z, t^5 + x t + y t^2 + z^k t^3)".into(),
        codim_formula: "k - 1".into(),
        constraints: "k >= 1".into(),
        instances,
    });

    let z2 = function("z^2", &["z"])?;
    for (family, f, nf, value) in [
        ("5²", "mt5_2", "(x, y, z, t^5 + x t + (y^2 + z^2) t^2 + y t^3)", 2),
        ("5³", "mt5_3", "(x, y, z, t^5 + x t + z^2 t^2 + y t^3)", 3),
    ] {
        let b = base(catalog, f, budget)?;
        rows.push(TableEntry {
            family: family.into(),
            normal_form: nf.into(),
            codim_formula: value.to_string(),
            constraints: String::new(),
            instances: vec![instance(family.into(), "g = z^2".into(), &b, &z2, value, catalog, budget)?],
        });
    }
    Ok(rows)
}

/// `A_2` as `A2`, for instance names.
fn short(t: FunctionType) -> String {
    t.to_string().replace('_', "")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str, vars: &[&str]) -> Polynomial {
        function(s, vars).unwrap()
    }

    #[test]
    fn theorem_rules() {
        let v = decide_simplicity(1, None, &g("z^4", &["z"]), 24).unwrap();
        assert_eq!(v, SimplicityVerdict::new(Status::Simple, Justification::Theorem53));
        let p8 = g("x^3+y^3+z^3+x*y*z", &["x", "y", "z"]);
        for codim in [1, 2, 5] {
            let v = decide_simplicity(codim, Some(true), &p8, 24).unwrap();
            assert_eq!(v, SimplicityVerdict::new(Status::NonSimple, Justification::Theorem51));
        }
        let morse = g("z^2", &["z"]);
        assert_eq!(decide_simplicity(3, Some(true), &morse, 24).unwrap().justification, Justification::Theorem55);
        assert_eq!(decide_simplicity(3, Some(false), &morse, 24).unwrap().status, Status::NonSimple);
        assert_eq!(decide_simplicity(3, None, &morse, 24).unwrap(), SimplicityVerdict::unknown());
        assert_eq!(decide_simplicity(2, Some(true), &g("z^3", &["z"]), 24).unwrap(), SimplicityVerdict::unknown());
        assert!(matches!(
            decide_simplicity(1, None, &g("x^2*y^2", &["x", "y"]), 12),
            Err(Error::NotCertifiedByOrder(12))
        ));
    }

    #[test]
    fn catalog_settles_the_quintic_cusp() {
        let catalog = Catalog::builtin();
        let e = catalog.get("cusp_4").unwrap();
        let opsu = e.opsu().unwrap();
        let z3 = simplicity_of_augmentation(&e.germ, &opsu, &g("z^3", &["z"]), catalog, Budget::default()).unwrap();
        assert_eq!(z3.theorem, SimplicityVerdict::unknown());
        assert_eq!(z3.verdict, SimplicityVerdict::new(Status::Simple, Justification::Catalog("F_4".into())));
        let z4 = simplicity_of_augmentation(&e.germ, &opsu, &g("z^4", &["z"]), catalog, Budget::default()).unwrap();
        assert_eq!(z4.verdict.status, Status::NonSimple);
        assert!(z3.consistent && z4.consistent);
    }

    #[test]
    fn contradictions_are_flagged() {
        let mut text = String::from("germ c(y) = (y^2, y^3)\nunfolding u(y; l) of c = (y^2, y^3 + l*y)\n");
        text.push_str("germ bad(y, z) = (y^2, y^3 + z^2*y, z)\n@ bad simple=false codim=1\n");
        let catalog = Catalog::parse(&text).unwrap();
        let f = MapGerm::parse(&["y"], &["y^2", "y^3"]).unwrap();
        let theorem = decide_simplicity(1, None, &g("z^2", &["z"]), 24).unwrap();
        let result = MapGerm::parse(&["y", "z"], &["y^2", "y^3+z^2*y", "z"]).unwrap();
        let r = resolve_with_catalog(theorem.clone(), &result, &catalog);
        assert!(!r.consistent);
        assert_eq!(r.verdict, theorem);
        assert!(known_simplicity(&f, 1, &catalog).is_none());
    }

    #[test]
    fn modality() {
        let j10 = g("x^3+y^6+x^2*y^2", &["x", "y"]);
        assert_eq!(modality_of_augmentation(1, &j10, None, 24).unwrap(), Modality::Known(1));
        assert_eq!(modality_of_augmentation(1, &j10, Some(false), 24).unwrap(), Modality::Unknown);
        assert_eq!(modality_of_augmentation(1, &g("x^2+y^3", &["x", "y"]), None, 24).unwrap(), Modality::Known(0));
        assert_eq!(modality_of_augmentation(2, &g("z^2", &["z"]), Some(true), 24).unwrap(), Modality::Unknown);
        // X_9 adjacent but with larger Milnor number: no modality claim.
        let x10 = g("x^4+y^5", &["x", "y"]);
        assert_eq!(modality_of_augmentation(1, &x10, None, 24).unwrap(), Modality::Unknown);
    }

    #[test]
    fn justification_display() {
        assert_eq!(Justification::Theorem51.to_string(), "Theorem51");
        assert_eq!(Justification::Catalog("F_4".into()).to_string(), "Catalog(F_4)");
        let v = SimplicityVerdict::new(Status::Simple, Justification::Theorem53);
        assert_eq!(v.to_string(), "Simple (Theorem53)");
    }
}
