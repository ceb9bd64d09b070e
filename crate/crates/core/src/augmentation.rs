//! Codimension and versal unfoldings of augmentations.
//!
//! For `f` of A_e-codimension `k` with an OPSU `F`, and an augmenting
//! function `g` with Tjurina number `r`, the augmentation has codimension at
//! least `k r`, with equality when `g` is R-equivalent to a quasihomogeneous
//! function or `F` is substantial. In the equality case the unfolding
//!
//! ```text
//! ( f_{g(z) + Σ_s l_{s,1} τ_s(z)}(x) + Σ_s Σ_{m>=2} l_{s,m} τ_s(z) γ_m(x), z, l )
//! ```
//!
//! is versal, where `τ_s` is a monomial basis of `O_d/(g + Jg)`, `γ_1` is the
//! initial speed of `F` and `γ_2, .., γ_k` complete a basis of `N A_e f`.

use crate::ae::{ae_codim, is_versal};
use crate::error::{Error, Result};
use crate::germ::{augment, MapGerm, Opsu, SubstantialFlag, Unfolding, VectorField};
use crate::local_algebra::{quotient_monomial_basis, tjurina};
use crate::poly::{Monomial, Polynomial};
use crate::quasihomog::is_r_equiv_quasihomogeneous;
use crate::rat::Rat;
use crate::Budget;

/// Codimension of an augmentation predicted from `f` and `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AugCodim {
    pub value: usize,
    /// `false` when neither hypothesis holds and `value` is only a lower bound.
    pub exact: bool,
    pub tau: usize,
    pub tau_certificate_order: usize,
}

pub fn augmentation_codim(f_codim: usize, g: &Polynomial, substantial: SubstantialFlag, k_max: usize) -> Result<AugCodim> {
    let t = tjurina(g, k_max)?;
    let exact = substantial.asserted || is_r_equiv_quasihomogeneous(g, k_max)?;
    Ok(AugCodim { value: f_codim * t.dimension, exact, tau: t.dimension, tau_certificate_order: t.certificate_order })
}

/// An augmentation together with every ingredient of its versal unfolding.
#[derive(Clone, Debug)]
pub struct AugmentedGerm {
    pub result: MapGerm,
    pub f: MapGerm,
    pub opsu: Opsu,
    pub g: Polynomial,
    pub substantial: SubstantialFlag,
    /// `τ_1, .., τ_r` in the variables of `g`, with `τ_r = 1`.
    pub tau_basis: Vec<Monomial>,
    /// `γ_1, .., γ_k`; `γ_1` is the initial speed of the OPSU. Empty when
    /// `f` is stable.
    pub gamma_basis: Vec<VectorField>,
    pub f_codim: usize,
    pub f_certified_order: usize,
    pub codim: AugCodim,
}

impl AugmentedGerm {
    pub fn new(f: &MapGerm, opsu: &Opsu, g: &Polynomial, substantial: SubstantialFlag, budget: Budget) -> Result<Self> {
        let result = augment(f, opsu, g)?;
        let tau_basis = quotient_monomial_basis(g, budget.function)?;
        let fc = ae_codim(f, budget.map)?;
        let mut gamma_basis = Vec::new();
        if fc.codim > 0 {
            let gamma1 = opsu.initial_speed();
            if fc.model.contains(&gamma1)? {
                return Err(Error::HypothesesUnmet(
                    "the initial speed of the OPSU vanishes in the normal space, so the unfolding is not stable".into(),
                ));
            }
            gamma_basis.push(gamma1);
            for v in &fc.basis {
                if gamma_basis.len() == fc.codim {
                    break;
                }
                let mut trial = gamma_basis.clone();
                trial.push(v.clone());
                if fc.model.rank_of(&trial)? == trial.len() {
                    gamma_basis = trial;
                }
            }
        }
        let codim = augmentation_codim(fc.codim, g, substantial, budget.function)?;
        Ok(AugmentedGerm {
            result,
            f: f.clone(),
            opsu: opsu.clone(),
            g: g.clone(),
            substantial,
            tau_basis,
            gamma_basis,
            f_codim: fc.codim,
            f_certified_order: fc.certified_order,
            codim,
        })
    }

    /// A_e-codimension of the augmented germ `f`.
    pub fn k(&self) -> usize {
        self.f_codim
    }

    /// Tjurina number of the augmenting function.
    pub fn r(&self) -> usize {
        self.tau_basis.len()
    }

    fn tau_in_result(&self, s: usize) -> Polynomial {
        Polynomial::term(self.g.ctx(), self.tau_basis[s].clone(), Rat::from_int(1))
            .to_context(self.result.ctx())
            .expect("augmenting variables belong to the result")
    }

    /// `τ_s(z) γ_m(x)` followed by zeros in the `z` directions, for every
    /// pair `(s, m)`, with `s` varying slowest.
    pub fn lifted_fields(&self) -> Vec<VectorField> {
        let ctx = self.result.ctx();
        let d = self.result.p() - self.f.p();
        let mut out = Vec::new();
        for s in 0..self.r() {
            let tau = self.tau_in_result(s);
            for gamma in &self.gamma_basis {
                let mut components: Vec<Polynomial> = gamma
                    .components
                    .iter()
                    .map(|c| c.to_context(ctx).expect("source variables belong to the result").mul(&tau))
                    .collect();
                components.extend((0..d).map(|_| Polynomial::zero(ctx)));
                out.push(VectorField { components });
            }
        }
        out
    }
}

/// Parameter names `l{s}_{m}`, lengthening the prefix until nothing clashes
/// with the germ's own variables.
fn parameter_names(taken: &[String], r: usize, k: usize) -> Vec<String> {
    let mut prefix = String::from("l");
    loop {
        let names: Vec<String> =
            (1..=r).flat_map(|s| (1..=k).map(move |m| (s, m))).map(|(s, m)| format!("{prefix}{s}_{m}")).collect();
        if names.iter().all(|n| !taken.contains(n)) {
            return names;
        }
        prefix.push('l');
    }
}

pub fn build_versal(a: &AugmentedGerm) -> Result<Unfolding> {
    if !a.codim.exact {
        return Err(Error::HypothesesUnmet(
            "g is not R-equivalent to a quasihomogeneous function and the OPSU is not asserted substantial".into(),
        ));
    }
    let (k, r) = (a.k(), a.r());
    if k == 0 {
        return Err(Error::HypothesesUnmet("the augmented germ is stable; there is no normal space to unfold".into()));
    }
    let names = parameter_names(a.result.ctx().names(), r, k);
    let pctx = crate::poly::VarContext::uniform(&names, crate::poly::Role::Parameter)?;
    let ctx = a.result.ctx().join(&pctx)?;
    let param = |s: usize, m: usize| Polynomial::var(&ctx, a.result.n() + s * k + m);
    let lift = |p: &Polynomial| p.to_context(&ctx).expect("variables belong to the unfolding");

    // g(z) + Σ_s l_{s,1} τ_s(z)
    let mut shifted = lift(&a.g);
    for s in 0..r {
        shifted = shifted.add(&param(s, 0).mul(&lift(&a.tau_in_result(s))));
    }
    let lambda = a.opsu.param_name().to_string();
    let mut comps = Vec::with_capacity(a.result.p());
    for (c, def) in a.opsu.unfolding().deformation().iter().enumerate() {
        let mut comp = def.substitute_into(&[(lambda.as_str(), &shifted)], &ctx)?;
        for s in 0..r {
            let tau = lift(&a.tau_in_result(s));
            for (m, gamma) in a.gamma_basis.iter().enumerate().skip(1) {
                comp = comp.add(&param(s, m).mul(&tau).mul(&lift(&gamma.components[c])));
            }
        }
        comps.push(comp);
    }
    for c in &a.result.components()[a.f.p()..] {
        comps.push(lift(c));
    }
    Unfolding::new(&a.result, &names, comps)
}

/// Versality of `v` in jets, plus the parameter count `k r` matching the
/// predicted codimension.
pub fn verify_versal(a: &AugmentedGerm, v: &Unfolding, k_budget: usize) -> Result<bool> {
    if v.base() != &a.result {
        return Err(Error::NotAnUnfoldingOf("the unfolding is not built over this augmentation".into()));
    }
    let expected = a.k() * a.r();
    if v.m() != expected || a.codim.value != expected {
        return Ok(false);
    }
    is_versal(v, k_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Role, VarContext};

    fn zfun(s: &str, vars: &[&str]) -> Polynomial {
        Polynomial::parse(s, &VarContext::uniform(vars, Role::Augmenting).unwrap()).unwrap()
    }

    fn odd_cusp(p: u32) -> (MapGerm, Opsu) {
        let top = format!("y^{}", 2 * p + 1);
        let f = MapGerm::parse(&["y"], &["y^2", top.as_str()]).unwrap();
        let def = format!("{top}+l*y");
        let opsu = Opsu::asserted(Unfolding::parse(&f, &["l"], &["y^2", def.as_str()]).unwrap()).unwrap();
        (f, opsu)
    }

    #[test]
    fn predicted_codims() {
        let j10 = zfun("x^3+y^6+x^2*y^2", &["x", "y"]);
        let c = augmentation_codim(1, &j10, SubstantialFlag::default(), 24).unwrap();
        assert_eq!((c.value, c.exact), (10, true));
        for p in 1..4 {
            assert_eq!(augmentation_codim(p, &zfun("z^2", &["z"]), SubstantialFlag::default(), 24).unwrap().value, p);
        }
        assert_eq!(augmentation_codim(2, &zfun("z^3", &["z"]), SubstantialFlag::default(), 24).unwrap().value, 4);
    }

    #[test]
    fn lower_bound_without_hypotheses() {
        let g = zfun("x^4+y^5+x^2*y^3", &["x", "y"]);
        let c = augmentation_codim(1, &g, SubstantialFlag::default(), 24).unwrap();
        assert!(!c.exact);
        assert!(augmentation_codim(1, &g, SubstantialFlag { asserted: true }, 24).unwrap().exact);
    }

    #[test]
    fn s_q_versal_matches_closed_form() {
        let (f, opsu) = odd_cusp(1);
        let a = AugmentedGerm::new(&f, &opsu, &zfun("z^3", &["z"]), SubstantialFlag::default(), Budget::default()).unwrap();
        let v = build_versal(&a).unwrap();
        assert_eq!(v.m(), 2);
        // y^3 + y z^3 + l1_1 z y + l2_1 y, up to the basis order z, 1
        let expect = Polynomial::parse("y^3+y*z^3+l1_1*z*y+l2_1*y", v.ctx()).unwrap();
        assert_eq!(v.deformation()[1], expect);
        assert!(verify_versal(&a, &v, 16).unwrap());
    }

    #[test]
    fn gamma_one_is_the_opsu_speed() {
        let (f, opsu) = odd_cusp(2);
        let a = AugmentedGerm::new(&f, &opsu, &zfun("z^2", &["z"]), SubstantialFlag::default(), Budget::default()).unwrap();
        assert_eq!(a.gamma_basis.len(), 2);
        assert_eq!(a.gamma_basis[0], opsu.initial_speed());
        assert_eq!(a.gamma_basis[1].to_string(), "(0, y^3)");
    }

    #[test]
    fn stable_germs_are_refused() {
        let f = MapGerm::parse(&["y"], &["y^2"]).unwrap();
        let opsu = Opsu::asserted(Unfolding::parse(&f, &["l"], &["y^2+l*y"]).unwrap()).unwrap();
        let a = AugmentedGerm::new(&f, &opsu, &zfun("z^2", &["z"]), SubstantialFlag::default(), Budget::default()).unwrap();
        assert!(matches!(build_versal(&a), Err(Error::HypothesesUnmet(_))));
    }

    #[test]
    fn parameter_names_avoid_clashes() {
        let taken = vec!["l1_1".to_string()];
        assert_eq!(parameter_names(&taken, 1, 2), vec!["ll1_1", "ll1_2"]);
    }
}
