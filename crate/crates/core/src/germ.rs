//! Map-germs, unfoldings, one-parameter stable unfoldings and augmentation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Role, VarContext};

/// A polynomial map-germ `(K^n, 0) -> (K^p, 0)`.
#[derive(Clone, Debug)]
pub struct MapGerm {
    name: Option<String>,
    ctx: Arc<VarContext>,
    components: Vec<Polynomial>,
}

// names and variable roles are annotations, not part of the germ
impl PartialEq for MapGerm {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.names() == other.ctx.names()
            && self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(a, b)| a.terms().eq(b.terms()))
    }
}

impl Eq for MapGerm {}

impl MapGerm {
    pub fn new(ctx: &Arc<VarContext>, components: Vec<Polynomial>) -> Result<MapGerm> {
        if components.is_empty() {
            return Err(Error::Precondition("a map-germ needs at least one component".into()));
        }
        for c in &components {
            if c.ctx() != ctx {
                return Err(Error::ContextMismatch("component lives in a different context".into()));
            }
            if !c.vanishes_at_origin() {
                return Err(Error::Precondition(format!("component `{c}` does not vanish at the origin")));
            }
        }
        Ok(MapGerm { name: None, ctx: ctx.clone(), components })
    }

    /// Parses `components` as expressions in the source variables `vars`.
    pub fn parse<S: AsRef<str>>(vars: &[S], components: &[S]) -> Result<MapGerm> {
        let ctx = VarContext::uniform(vars, Role::Source)?;
        let comps = components.iter().map(|c| Polynomial::parse(c.as_ref(), &ctx)).collect::<Result<_>>()?;
        MapGerm::new(&ctx, comps)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Source dimension.
    pub fn n(&self) -> usize {
        self.ctx.len()
    }

    /// Target dimension.
    pub fn p(&self) -> usize {
        self.components.len()
    }

    /// Largest total degree among the components.
    pub fn max_degree(&self) -> u32 {
        self.components.iter().filter_map(Polynomial::degree).max().unwrap_or(0)
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A vector field along a map-germ: one polynomial per target direction,
/// expressed in the source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub components: Vec<Polynomial>,
}

impl VectorField {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Smallest total degree among the nonzero components.
    pub fn order(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::order).min()
    }

    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::degree).max()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `F(x, l) = (f_l(x), l)`. The context lists the base source variables
/// first, in base order, followed by the `m` parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unfolding {
    base: MapGerm,
    ctx: Arc<VarContext>,
    deformation: Vec<Polynomial>,
}

impl Unfolding {
    /// `deformation` holds the first `p` components `f_l(x)` in the joined
    /// context; the parameter components are appended implicitly.
    pub fn new<S: AsRef<str>>(base: &MapGerm, params: &[S], deformation: Vec<Polynomial>) -> Result<Unfolding> {
        let pctx = VarContext::uniform(params, Role::Parameter)?;
        let ctx = base.ctx.join(&pctx)?;
        if deformation.len() != base.p() {
            return Err(Error::NotAnUnfoldingOf(format!(
                "expected {} deformed components, found {}",
                base.p(),
                deformation.len()
            )));
        }
        let deformation = deformation.iter().map(|c| c.to_context(&ctx)).collect::<Result<Vec<_>>>()?;
        let u = Unfolding { base: base.clone(), ctx, deformation };
        u.check_base()?;
        Ok(u)
    }

    pub fn parse<S: AsRef<str>>(base: &MapGerm, params: &[S], deformation: &[S]) -> Result<Unfolding> {
        let pctx = VarContext::uniform(params, Role::Parameter)?;
        let ctx = base.ctx.join(&pctx)?;
        let comps = deformation.iter().map(|c| Polynomial::parse(c.as_ref(), &ctx)).collect::<Result<_>>()?;
        Unfolding::new(base, params, comps)
    }

    fn check_base(&self) -> Result<()> {
        let params: Vec<usize> = (self.base.n()..self.ctx.len()).collect();
        for (i, (d, b)) in self.deformation.iter().zip(&self.base.components).enumerate() {
            let at_zero = d.set_zero(&params).to_context(&self.base.ctx)?;
            if &at_zero != b {
                return Err(Error::NotAnUnfoldingOf(format!(
                    "component {} at zero parameters is `{at_zero}`, expected `{b}`",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &MapGerm {
        &self.base
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn deformation(&self) -> &[Polynomial] {
        &self.deformation
    }

    /// Number of parameters.
    pub fn m(&self) -> usize {
        self.ctx.len() - self.base.n()
    }

    pub fn param_names(&self) -> &[String] {
        &self.ctx.names()[self.base.n()..]
    }

    /// The unfolding as a germ `(K^{n+m}, 0) -> (K^{p+m}, 0)`.
    pub fn as_map_germ(&self) -> MapGerm {
        let mut comps = self.deformation.clone();
        for i in self.base.n()..self.ctx.len() {
            comps.push(Polynomial::var(&self.ctx, i));
        }
        MapGerm { name: None, ctx: self.ctx.clone(), components: comps }
    }

    /// `d f_l / d l_i` at `l = 0`, one field per parameter.
    pub fn initial_speeds(&self) -> Vec<VectorField> {
        let params: Vec<usize> = (self.base.n()..self.ctx.len()).collect();
        params
            .iter()
            .map(|&i| VectorField {
                components: self
                    .deformation
                    .iter()
                    .map(|c| c.derivative(i).set_zero(&params).to_context(&self.base.ctx).expect("base variables"))
                    .collect(),
            })
            .collect()
    }

    /// The unfolding with parameter `i` (counting from 0) set to zero.
    pub fn drop_parameter(&self, i: usize) -> Result<Unfolding> {
        let m = self.m();
        if i >= m {
            return Err(Error::Precondition(format!("unfolding has only {m} parameters")));
        }
        let idx = self.base.n() + i;
        let keep: Vec<&String> = self.param_names().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s).collect();
        let comps: Vec<Polynomial> = self.deformation.iter().map(|c| c.set_zero(&[idx])).collect();
        let pctx = VarContext::uniform(&keep, Role::Parameter)?;
        let ctx = self.base.ctx.join(&pctx)?;
        let comps = comps.iter().map(|c| c.to_context(&ctx)).collect::<Result<_>>()?;
        Unfolding::new(&self.base, &keep, comps)
    }
}

impl fmt::Display for Unfolding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_map_germ().fmt(f)
    }
}

/// How stability of an OPSU was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum StabilityCertificate {
    JetOrder(usize),
    UserAsserted,
}

/// A one-parameter stable unfolding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opsu {
    unfolding: Unfolding,
    certificate: StabilityCertificate,
}

impl Opsu {
    /// Wraps an unfolding whose stability the caller vouches for.
    pub fn asserted(unfolding: Unfolding) -> Result<Opsu> {
        if unfolding.m() != 1 {
            return Err(Error::Precondition(format!("an OPSU has one parameter, found {}", unfolding.m())));
        }
        Ok(Opsu { unfolding, certificate: StabilityCertificate::UserAsserted })
    }

    pub fn unfolding(&self) -> &Unfolding {
        &self.unfolding
    }

    pub fn certificate(&self) -> StabilityCertificate {
        self.certificate
    }

    pub fn base(&self) -> &MapGerm {
        self.unfolding.base()
    }

    pub fn param_name(&self) -> &str {
        &self.unfolding.param_names()[0]
    }

    /// `d f_l / d l` at `l = 0`.
    pub fn initial_speed(&self) -> VectorField {
        self.unfolding.initial_speeds().remove(0)
    }
}

/// Whether the OPSU admits a liftable field pulling back to its parameter.
/// Only ever asserted by the caller.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SubstantialFlag {
    pub asserted: bool,
}

/// Certifies that `unfolding` is stable and wraps it as an OPSU.
pub fn check_opsu(unfolding: &Unfolding, k_budget: usize) -> Result<Opsu> {
    if unfolding.m() != 1 {
        return Err(Error::Precondition(format!("an OPSU has one parameter, found {}", unfolding.m())));
    }
    let germ = unfolding.as_map_germ();
    match crate::ae::ae_codim(&germ, k_budget) {
        Ok(c) if c.codim == 0 => {
            Ok(Opsu { unfolding: unfolding.clone(), certificate: StabilityCertificate::JetOrder(c.certified_order) })
        }
        Ok(c) => Err(Error::NotStable(c.codim)),
        // Infinite codimension never settles, but every jet quotient bounds it from below.
        Err(Error::NotCertifiedByOrder(k)) => {
            for order in 1..=(k_budget as u32 / 2).max(1) {
                let lower = crate::ae::JetModel::tangent_image(&germ, order)?.codim();
                if lower > 0 {
                    return Err(Error::NotStable(lower));
                }
            }
            Err(Error::NotCertifiedByOrder(k))
        }
        Err(e) => Err(e),
    }
}

/// `(f_{g(z)}(x), z)`: substitutes the augmenting function for the OPSU
/// parameter and appends the augmenting variables as extra components.
pub fn augment(f: &MapGerm, opsu: &Opsu, g: &Polynomial) -> Result<MapGerm> {
    if opsu.base() != f {
        return Err(Error::NotAnUnfoldingOf(format!("OPSU unfolds {}, not {f}", opsu.base())));
    }
    if !g.vanishes_at_origin() {
        return Err(Error::InvalidAugmentingFunction(format!("`{g}` does not vanish at the origin")));
    }
    if !g.has_zero_linear_part() {
        return Err(Error::InvalidAugmentingFunction(format!("`{g}` has a nonzero linear part")));
    }
    let zctx = g.ctx();
    let aug: Vec<(&str, Role)> = zctx.names().iter().map(|n| (n.as_str(), Role::Augmenting)).collect();
    let ctx = f.ctx.join(&*VarContext::new(&aug)?)?;
    let g_in = g.to_context(&ctx)?;
    let lambda = opsu.param_name().to_string();
    let mut comps = Vec::with_capacity(f.p() + zctx.len());
    for c in opsu.unfolding.deformation() {
        comps.push(c.substitute_into(&[(lambda.as_str(), &g_in)], &ctx)?);
    }
    for i in f.n()..ctx.len() {
        comps.push(Polynomial::var(&ctx, i));
    }
    MapGerm::new(&ctx, comps)
}
