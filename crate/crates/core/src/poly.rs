//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rat::Rat;

/// What a variable stands for in a germ computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Source,
    Target,
    Parameter,
    Augmenting,
}

/// Ordered list of distinct variable names, each tagged with a role.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
    roles: Vec<Role>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(vars: &[(S, Role)]) -> Result<Arc<VarContext>> {
        let mut names = Vec::with_capacity(vars.len());
        let mut roles = Vec::with_capacity(vars.len());
        for (n, r) in vars {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::ContextMismatch(format!("`{n}` is not a valid variable name")));
            }
            if names.iter().any(|m: &String| m == n) {
                return Err(Error::ContextMismatch(format!("duplicate variable `{n}`")));
            }
            names.push(n.to_string());
            roles.push(*r);
        }
        Ok(Arc::new(VarContext { names, roles }))
    }

    /// All variables share one role.
    pub fn uniform<S: AsRef<str>>(names: &[S], role: Role) -> Result<Arc<VarContext>> {
        let v: Vec<(&str, Role)> = names.iter().map(|n| (n.as_ref(), role)).collect();
        VarContext::new(&v)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn role(&self, i: usize) -> Role {
        self.roles[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.roles[i] == role).collect()
    }

    /// Concatenation; fails on a name clash.
    pub fn join(&self, other: &VarContext) -> Result<Arc<VarContext>> {
        let v: Vec<(&str, Role)> = self
            .names
            .iter()
            .zip(&self.roles)
            .chain(other.names.iter().zip(&other.roles))
            .map(|(n, r)| (n.as_str(), *r))
            .collect();
        VarContext::new(&v)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Exponent vector, one slot per context variable.
///
/// Ordered graded-lexicographically: total degree first, then exponents
/// compared left to right (the first variable is the most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All monomials in `nvars` variables of total degree exactly `d`,
    /// in descending graded-lex order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left);
                out.push(Monomial(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(nvars, i + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(nvars, 0, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// All monomials of total degree `<= k`, descending graded-lex.
    pub fn up_to_degree(nvars: usize, k: u32) -> Vec<Monomial> {
        (0..=k).rev().flat_map(|d| Monomial::of_degree(nvars, d)).collect()
    }

    pub fn display_in(&self, ctx: &VarContext) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { ctx.name(i).to_string() } else { format!("{}^{}", ctx.name(i), e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial over a shared variable context. No zero coefficient is ever
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        Polynomial { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Rat) -> Self {
        Polynomial::term(ctx, Monomial::one(ctx.len()), c)
    }

    pub fn term(ctx: &Arc<VarContext>, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.nvars(), ctx.len(), "monomial arity does not match context");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ctx: ctx.clone(), terms }
    }

    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        Polynomial::term(ctx, Monomial::var(ctx.len(), i), Rat::one())
    }

    pub fn var_named(ctx: &Arc<VarContext>, name: &str) -> Result<Self> {
        let i = ctx.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Polynomial::var(ctx, i))
    }

    pub fn from_terms(ctx: &Arc<VarContext>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Polynomial::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn parse(text: &str, ctx: &Arc<VarContext>) -> Result<Self> {
        crate::parse::parse_poly(text, ctx)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Highest total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a nonzero term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one(self.ctx.len()))
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        self.filter(|m| m.degree() == d)
    }

    pub fn has_zero_linear_part(&self) -> bool {
        self.terms.keys().all(|m| m.degree() != 1)
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ctx.len()).filter(|&i| self.terms.keys().any(|m| m.0[i] > 0)).collect()
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_same(&self, other: &Polynomial) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx,
            "polynomials live in different variable contexts"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_same(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_truncated(other, u32::MAX)
    }

    /// Product with every term of total degree `> k` discarded.
    pub fn mul_truncated(&self, other: &Polynomial, k: u32) -> Polynomial {
        self.check_same(other);
        let mut out = Polynomial::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > k {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da.saturating_add(mb.degree()) > k {
                    continue;
                }
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        self.pow_truncated(e, u32::MAX)
    }

    pub fn pow_truncated(&self, e: u32, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(&self.ctx, Rat::one()).jet_truncate(k);
        for _ in 0..e {
            acc = acc.mul_truncated(self, k);
        }
        acc
    }

    /// Drops every term of total degree `> k`.
    pub fn jet_truncate(&self, k: u32) -> Polynomial {
        self.filter(|m| m.degree() <= k)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[i] -= 1;
            out.add_term(dm, &(c * &Rat::from_int(e as i64)));
        }
        out
    }

    /// One partial derivative per listed variable, in context order.
    pub fn jacobian(&self, vars: &[usize]) -> Vec<Polynomial> {
        let mut v = vars.to_vec();
        v.sort_unstable();
        v.dedup();
        v.into_iter().map(|i| self.derivative(i)).collect()
    }

    /// Partial derivatives in every variable of the context.
    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.ctx.len()).map(|i| self.derivative(i)).collect()
    }

    /// Exact composition. Bound variables are replaced by their images;
    /// unbound ones are carried over by name into the target context, which
    /// is the common context of the bindings (or `self`'s when empty).
    pub fn substitute(&self, bindings: &[(&str, &Polynomial)]) -> Result<Polynomial> {
        let target = match bindings.first() {
            Some((_, p)) => p.ctx.clone(),
            None => return Ok(self.clone()),
        };
        self.substitute_into(bindings, &target)
    }

    pub fn substitute_into(&self, bindings: &[(&str, &Polynomial)], target: &Arc<VarContext>) -> Result<Polynomial> {
        let mut images: Vec<Option<Polynomial>> = vec![None; self.ctx.len()];
        for (name, p) in bindings {
            let i = self
                .ctx
                .index_of(name)
                .ok_or_else(|| Error::ContextMismatch(format!("bound variable `{name}` is not in the context")))?;
            if p.ctx != *target {
                return Err(Error::ContextMismatch("bindings live in different contexts".into()));
            }
            images[i] = Some((*p).clone());
        }
        for (i, img) in images.iter_mut().enumerate() {
            if img.is_none() {
                let name = self.ctx.name(i);
                let j = target.index_of(name).ok_or_else(|| {
                    Error::ContextMismatch(format!("unbound variable `{name}` is missing from the target context"))
                })?;
                *img = Some(Polynomial::var(target, j));
            }
        }
        let images: Vec<Polynomial> = images.into_iter().map(Option::unwrap).collect();
        // powers of each image are reused across terms
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::constant(target, Rat::one()), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in another context by matching names.
    pub fn to_context(&self, target: &Arc<VarContext>) -> Result<Polynomial> {
        if self.ctx == *target {
            return Ok(Polynomial { ctx: target.clone(), terms: self.terms.clone() });
        }
        let map: Vec<usize> = (0..self.ctx.len())
            .map(|i| {
                let used = self.terms.keys().any(|m| m.0[i] > 0);
                match target.index_of(self.ctx.name(i)) {
                    Some(j) => Ok(j),
                    None if !used => Ok(usize::MAX),
                    None => Err(Error::UnknownVariable(self.ctx.name(i).to_string())),
                }
            })
            .collect::<Result<_>>()?;
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[map[i]] = x;
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Polynomial {
        self.filter(|m| vars.iter().all(|&i| m.0[i] == 0))
    }

    /// Coefficient of `var^1` viewed as a polynomial in the other variables.
    pub fn linear_coefficient_in(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            if m.0[var] == 1 {
                let mut mm = m.clone();
                mm.0[var] = 0;
                out.add_term(mm, c);
            }
        }
        out
    }

    /// Value with every variable replaced by a rational.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ctx.len());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                t = &t * &x.pow(e);
            }
            acc += &t;
        }
        acc
    }

    /// Matrix of second partial derivatives at the origin.
    pub fn hessian_at_origin(&self) -> Vec<Vec<Rat>> {
        let d = self.ctx.len();
        let mut h = vec![vec![Rat::zero(); d]; d];
        for (m, c) in &self.terms {
            if m.degree() != 2 {
                continue;
            }
            let vars: Vec<usize> = (0..d).filter(|&i| m.0[i] > 0).collect();
            match vars.as_slice() {
                [i] => h[*i][*i] = c * &Rat::from_int(2),
                [i, j] => {
                    h[*i][*j] = c.clone();
                    h[*j][*i] = c.clone();
                }
                _ => unreachable!(),
            }
        }
        h
    }

    /// `d - rank(Hess g(0))` for a germ with vanishing linear part.
    pub fn hessian_corank_at_origin(&self) -> Result<usize> {
        if !self.vanishes_at_origin() {
            return Err(Error::Precondition("function does not vanish at the origin".into()));
        }
        if !self.has_zero_linear_part() {
            return Err(Error::NonSingularGerm);
        }
        Ok(self.ctx.len() - linalg::rank(&self.hessian_at_origin()))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", m.display_in(&self.ctx))?;
            } else {
                write!(f, "{a}*{}", m.display_in(&self.ctx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
