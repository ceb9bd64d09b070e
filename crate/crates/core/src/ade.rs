//! R-classification of function germs up to the simple/unimodal boundary.
//!
//! The decision tree uses only coordinate-free data: the Milnor number, the
//! corank of the Hessian and, in corank two, the root structure of the cubic
//! part restricted to the Hessian kernel. Completing the square to split off
//! the nondegenerate directions only changes terms of degree four and
//! higher, so that restricted cubic is already the 3-jet of the residual
//! two-variable germ.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::local_algebra::{milnor, tjurina};
use crate::poly::{Polynomial, Role, VarContext};
use crate::rat::Rat;

/// Non-simple family a germ is adjacent to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Witness {
    P8,
    X9,
    J10plus,
}

impl Witness {
    /// Milnor number of the family's members.
    pub fn mu(self) -> usize {
        match self {
            Witness::P8 => 8,
            Witness::X9 => 9,
            Witness::J10plus => 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum FunctionType {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    NonSimple(Witness),
    NotIsolated,
}

impl FunctionType {
    pub fn is_simple(self) -> bool {
        matches!(self, FunctionType::A(_) | FunctionType::D(_) | FunctionType::E6 | FunctionType::E7 | FunctionType::E8)
    }

    /// Milnor number implied by a simple type.
    pub fn simple_mu(self) -> Option<usize> {
        match self {
            FunctionType::A(k) | FunctionType::D(k) => Some(k),
            FunctionType::E6 => Some(6),
            FunctionType::E7 => Some(7),
            FunctionType::E8 => Some(8),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionType::A(k) => write!(f, "A_{k}"),
            FunctionType::D(k) => write!(f, "D_{k}"),
            FunctionType::E6 => write!(f, "E_6"),
            FunctionType::E7 => write!(f, "E_7"),
            FunctionType::E8 => write!(f, "E_8"),
            FunctionType::NonSimple(Witness::P8) => write!(f, "non-simple (adjacent to P_8)"),
            FunctionType::NonSimple(Witness::X9) => write!(f, "non-simple (adjacent to X_9)"),
            FunctionType::NonSimple(Witness::J10plus) => write!(f, "non-simple (adjacent to J_10)"),
            FunctionType::NotIsolated => write!(f, "not isolated"),
        }
    }
}

/// Full classification record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tag: FunctionType,
    pub mu: Option<usize>,
    pub tau: Option<usize>,
    pub corank: usize,
    /// Jet order at which the Milnor number was certified.
    pub certificate_order: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Modality {
    Known(usize),
    Unknown,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modality::Known(m) => write!(f, "{m}"),
            Modality::Unknown => write!(f, "unknown"),
        }
    }
}

pub fn classify(g: &Polynomial, k_max: usize) -> Result<Classification> {
    let corank = g.hessian_corank_at_origin()?;
    let mu_report = match milnor(g, k_max) {
        Ok(r) => r,
        Err(Error::NotCertifiedByOrder(_)) => {
            return Ok(Classification { tag: FunctionType::NotIsolated, mu: None, tau: None, corank, certificate_order: None })
        }
        Err(e) => return Err(e),
    };
    let mu = mu_report.dimension;
    let tau = tjurina(g, k_max)?.dimension;
    let tag = match corank {
        0 => FunctionType::A(1),
        1 => FunctionType::A(mu),
        2 => match kernel_cubic_roots(g) {
            CubicRoots::Zero => FunctionType::NonSimple(Witness::X9),
            CubicRoots::Distinct | CubicRoots::Double => FunctionType::D(mu),
            CubicRoots::Triple => match mu {
                6 => FunctionType::E6,
                7 => FunctionType::E7,
                8 => FunctionType::E8,
                _ => FunctionType::NonSimple(Witness::J10plus),
            },
        },
        _ => FunctionType::NonSimple(Witness::P8),
    };
    Ok(Classification { tag, mu: Some(mu), tau: Some(tau), corank, certificate_order: Some(mu_report.certificate_order) })
}

pub fn classify_function(g: &Polynomial, k_max: usize) -> Result<FunctionType> {
    Ok(classify(g, k_max)?.tag)
}

pub fn is_morse(g: &Polynomial) -> Result<bool> {
    Ok(g.hessian_corank_at_origin()? == 0)
}

/// 0 for simple germs; 1 for members of the unimodal witness families whose
/// Milnor number matches the family; unknown otherwise.
pub fn modality_of_function(g: &Polynomial, k_max: usize) -> Result<Modality> {
    let c = classify(g, k_max)?;
    Ok(match c.tag {
        t if t.is_simple() => Modality::Known(0),
        FunctionType::NonSimple(w) if c.mu == Some(w.mu()) => Modality::Known(1),
        _ => Modality::Unknown,
    })
}

/// Standard normal form of a simple type in `vars`, with the variables past
/// the essential ones entering as squares.
pub fn normal_form<S: AsRef<str>>(t: FunctionType, vars: &[S]) -> Result<Polynomial> {
    let essential = match t {
        FunctionType::A(k) if k >= 1 => 1,
        FunctionType::D(k) if k >= 4 => 2,
        FunctionType::E6 | FunctionType::E7 | FunctionType::E8 => 2,
        other => return Err(Error::Precondition(format!("{other} has no simple normal form"))),
    };
    if vars.len() < essential {
        return Err(Error::Precondition(format!("{t} needs at least {essential} variables")));
    }
    let ctx = VarContext::uniform(vars, Role::Augmenting)?;
    let v = |i: usize| Polynomial::var(&ctx, i);
    let core = match t {
        FunctionType::A(k) => v(0).pow(k as u32 + 1),
        FunctionType::D(k) => v(0).pow(2).mul(&v(1)).add(&v(1).pow(k as u32 - 1)),
        FunctionType::E6 => v(0).pow(3).add(&v(1).pow(4)),
        FunctionType::E7 => v(0).pow(3).add(&v(0).mul(&v(1).pow(3))),
        _ => v(0).pow(3).add(&v(1).pow(5)),
    };
    Ok((essential..vars.len()).fold(core, |acc, i| acc.add(&v(i).pow(2))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CubicRoots {
    Zero,
    Distinct,
    Double,
    Triple,
}

/// Root pattern of the cubic part of `g` on the kernel of its Hessian.
/// Requires the kernel to be two-dimensional.
pub(crate) fn kernel_cubic_roots(g: &Polynomial) -> CubicRoots {
    let d = g.ctx().len();
    let kernel = linalg::nullspace(&g.hessian_at_origin(), d);
    assert_eq!(kernel.len(), 2, "kernel_cubic_roots needs corank 2");
    let st = VarContext::uniform(&["s", "t"], Role::Source).unwrap();
    let (s, t) = (Polynomial::var(&st, 0), Polynomial::var(&st, 1));
    let images: Vec<Polynomial> =
        (0..d).map(|i| s.scale(&kernel[0][i]).add(&t.scale(&kernel[1][i]))).collect();
    let names: Vec<String> = g.ctx().names().to_vec();
    let bindings: Vec<(&str, &Polynomial)> = names.iter().map(String::as_str).zip(images.iter()).collect();
    let cubic = g.homogeneous_part(3).substitute_into(&bindings, &st).unwrap();
    binary_cubic_roots(&cubic)
}

/// Coefficients `[c0, c1, c2, c3]` of `c(x, 1)` after the shear `t -> t + a s`.
fn binary_cubic_roots(c: &Polynomial) -> CubicRoots {
    if c.is_zero() {
        return CubicRoots::Zero;
    }
    // c(1, a) is the s^3 coefficient after the shear; a nonzero cubic has at
    // most three projective roots, so one of four shears works
    let a = (0..4)
        .map(Rat::from_int)
        .find(|a| !c.eval(&[Rat::one(), a.clone()]).is_zero())
        .expect("nonzero binary cubic");
    let ctx = c.ctx().clone();
    let (s, t) = (Polynomial::var(&ctx, 0), Polynomial::var(&ctx, 1));
    let sheared = c.substitute(&[("s", &s), ("t", &t.add(&s.scale(&a)))]).unwrap();
    let mut coeffs = vec![Rat::zero(); 4];
    for (m, v) in sheared.terms() {
        coeffs[m.exponents()[0] as usize] = v.clone();
    }
    let deriv: Vec<Rat> = (1..4).map(|i| &coeffs[i] * &Rat::from_int(i as i64)).collect();
    match univariate_gcd(coeffs, deriv).len() - 1 {
        0 => CubicRoots::Distinct,
        1 => CubicRoots::Double,
        _ => CubicRoots::Triple,
    }
}

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

/// Monic gcd of two univariate polynomials given by ascending coefficients.
fn univariate_gcd(a: Vec<Rat>, b: Vec<Rat>) -> Vec<Rat> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().unwrap().clone();
    a.iter().map(|x| x / &lead).collect()
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            let d = &f * bi;
            r[shift + i] -= &d;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rat::zero());
        }
    }
    trim(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::uniform(names, Role::Augmenting).unwrap()
    }

    fn p(s: &str, c: &Arc<VarContext>) -> Polynomial {
        Polynomial::parse(s, c).unwrap()
    }

    #[test]
    fn normal_forms_classify_back() {
        let types = [
            FunctionType::A(1),
            FunctionType::A(4),
            FunctionType::D(4),
            FunctionType::D(6),
            FunctionType::E6,
            FunctionType::E7,
            FunctionType::E8,
        ];
        for t in types {
            for vars in [&["y", "z"][..], &["x", "y", "z"][..]] {
                let g = normal_form(t, vars).unwrap();
                assert_eq!(classify_function(&g, 24).unwrap(), t, "{g}");
            }
        }
        assert!(normal_form(FunctionType::D(4), &["z"]).is_err());
        assert!(normal_form(FunctionType::NotIsolated, &["z"]).is_err());
    }

    #[test]
    fn a_series_in_one_variable() {
        let c = ctx(&["z"]);
        for k in 1..=5 {
            let g = p(&format!("z^{}", k + 1), &c);
            assert_eq!(classify_function(&g, 24).unwrap(), FunctionType::A(k));
        }
    }

    #[test]
    fn witness_families() {
        let c3 = ctx(&["x", "y", "z"]);
        assert_eq!(classify_function(&p("x^3+y^3+z^3+x*y*z", &c3), 24).unwrap(), FunctionType::NonSimple(Witness::P8));
        let c2 = ctx(&["x", "y"]);
        assert_eq!(classify_function(&p("x^4+y^4+x^2*y^2", &c2), 24).unwrap(), FunctionType::NonSimple(Witness::X9));
        assert_eq!(
            classify_function(&p("x^3+y^6+x^2*y^2", &c2), 24).unwrap(),
            FunctionType::NonSimple(Witness::J10plus)
        );
    }

    #[test]
    fn morse_checks() {
        assert!(is_morse(&p("z^2", &ctx(&["z"]))).unwrap());
        assert!(is_morse(&p("x^2+y^2+z^2", &ctx(&["x", "y", "z"]))).unwrap());
        assert!(!is_morse(&p("z^3", &ctx(&["z"]))).unwrap());
    }

    #[test]
    fn modality_examples() {
        let c2 = ctx(&["x", "y"]);
        assert_eq!(modality_of_function(&p("x^3+y^4", &c2), 24).unwrap(), Modality::Known(0));
        assert_eq!(modality_of_function(&p("x^3+y^6+x^2*y^2", &c2), 24).unwrap(), Modality::Known(1));
        let c3 = ctx(&["x", "y", "z"]);
        let g = p("x^4+y^4+z^4", &c3);
        assert_eq!(milnor(&g, 24).unwrap().dimension, 27);
        assert_eq!(modality_of_function(&g, 24).unwrap(), Modality::Unknown);
    }

    #[test]
    fn cubic_root_patterns() {
        let st = ctx(&["s", "t"]);
        assert_eq!(binary_cubic_roots(&p("s^3+t^3", &st)), CubicRoots::Distinct);
        assert_eq!(binary_cubic_roots(&p("s^2*t", &st)), CubicRoots::Double);
        assert_eq!(binary_cubic_roots(&p("t^3", &st)), CubicRoots::Triple);
        assert_eq!(binary_cubic_roots(&p("(s-2*t)^3", &st)), CubicRoots::Triple);
        assert_eq!(binary_cubic_roots(&p("s*t*(s+t)", &st)), CubicRoots::Distinct);
        assert_eq!(binary_cubic_roots(&p("s*(s+t)^2", &st)), CubicRoots::Double);
    }

    #[test]
    fn non_isolated_is_reported() {
        let c = ctx(&["x", "y"]);
        assert_eq!(classify_function(&p("x^2*y", &c), 10).unwrap(), FunctionType::NotIsolated);
    }
}
