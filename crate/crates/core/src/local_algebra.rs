//! Dimensions and monomial bases of local-algebra quotients `O_d / I`.
//!
//! For a jet order `k` the quotient `O_d / (I + m^{k+1})` is a finite
//! dimensional space spanned by the monomials of degree `<= k`; the ideal
//! contributes the truncations of `m * gen` for every monomial `m`. Its
//! dimension `d_k` is non-decreasing in `k`. When `d_k = d_{k-1}` we have
//! `m^k ⊆ I + m^{k+1}`, hence `m^k ⊆ I` by Nakayama's lemma, and `d_k` is the
//! exact dimension of `O_d / I`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial, VarContext};

pub const DEFAULT_JET_BUDGET: usize = 24;

/// Dimension and monomial basis of a certified finite quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub dimension: usize,
    /// Ascending graded-lex order.
    pub monomial_basis: Vec<Monomial>,
    /// Jet order at which `m^k ⊆ I` was established.
    pub certificate_order: usize,
}

/// The ideal image inside the jet space of order `k`.
#[derive(Clone, Debug)]
pub struct IdealJet {
    ctx: Arc<VarContext>,
    order: u32,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: Echelon,
}

impl IdealJet {
    pub fn build(generators: &[Polynomial], ctx: &Arc<VarContext>, k: u32) -> Result<IdealJet> {
        for g in generators {
            if g.ctx() != ctx {
                return Err(Error::ContextMismatch("generator lives in a different context".into()));
            }
        }
        // descending, so heavy monomials are eliminated first and the
        // surviving basis consists of the smallest monomials
        let columns = Monomial::up_to_degree(ctx.len(), k);
        let index: HashMap<Monomial, usize> = columns.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for g in generators {
            let Some(o) = g.order() else { continue };
            if o > k {
                continue;
            }
            for m in Monomial::up_to_degree(ctx.len(), k - o) {
                let row = g.mul_monomial(&m).jet_truncate(k);
                rows.push(to_sparse(&row, &index));
            }
        }
        let mut echelon = Echelon::new(columns.len());
        echelon.insert_all(rows);
        Ok(IdealJet { ctx: ctx.clone(), order: k, columns, index, echelon })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `dim O_d / (I + m^{k+1})`.
    pub fn dimension(&self) -> usize {
        self.columns.len() - self.echelon.rank()
    }

    /// Standard monomials spanning the quotient, ascending graded-lex.
    pub fn basis(&self) -> Vec<Monomial> {
        let mut b: Vec<Monomial> = self.echelon.non_pivot_columns().into_iter().map(|c| self.columns[c].clone()).collect();
        b.sort();
        b
    }

    fn vector(&self, p: &Polynomial) -> Result<SparseVec> {
        if p.ctx() != &self.ctx {
            return Err(Error::ContextMismatch("polynomial lives in a different context".into()));
        }
        Ok(to_sparse(&p.jet_truncate(self.order), &self.index))
    }

    /// Whether `p` vanishes in `O_d / (I + m^{k+1})`.
    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.echelon.contains(&self.vector(p)?))
    }

    /// Rank of the images of `polys` in the jet quotient.
    pub fn rank_of(&self, polys: &[Polynomial]) -> Result<usize> {
        let mut e = self.echelon.clone();
        let before = e.rank();
        for p in polys {
            e.insert(self.vector(p)?);
        }
        Ok(e.rank() - before)
    }
}

fn to_sparse(p: &Polynomial, index: &HashMap<Monomial, usize>) -> SparseVec {
    SparseVec::from_pairs(p.terms().map(|(m, c)| (index[m], c.clone())).collect())
}

/// Certified dimension of `O_d / (generators)`.
pub fn quotient_dim(generators: &[Polynomial], ctx: &Arc<VarContext>, k_max: usize) -> Result<QuotientReport> {
    if let Some(g) = generators.iter().find(|g| !g.vanishes_at_origin()) {
        return Err(Error::Precondition(format!("generator `{g}` does not vanish at the origin")));
    }
    if k_max < 2 {
        return Err(Error::Precondition("jet budget must be at least 2".into()));
    }
    let mut previous = IdealJet::build(generators, ctx, 0)?;
    for k in 1..=k_max as u32 {
        let current = IdealJet::build(generators, ctx, k)?;
        if current.dimension() == previous.dimension() {
            return Ok(QuotientReport {
                dimension: current.dimension(),
                monomial_basis: current.basis(),
                certificate_order: k as usize,
            });
        }
        previous = current;
    }
    Err(Error::NotCertifiedByOrder(k_max))
}

fn check_singular(g: &Polynomial) -> Result<()> {
    if !g.vanishes_at_origin() {
        return Err(Error::Precondition(format!("`{g}` does not vanish at the origin")));
    }
    if !g.has_zero_linear_part() {
        return Err(Error::NonSingularGerm);
    }
    Ok(())
}

/// Generators of the Jacobian ideal `Jg`.
pub fn jacobian_ideal(g: &Polynomial) -> Vec<Polynomial> {
    g.gradient()
}

/// Generators of `(g) + Jg`.
pub fn tjurina_ideal(g: &Polynomial) -> Vec<Polynomial> {
    let mut gens = g.gradient();
    gens.push(g.clone());
    gens
}

/// Milnor number `dim O_d / Jg`.
pub fn milnor(g: &Polynomial, k_max: usize) -> Result<QuotientReport> {
    check_singular(g)?;
    quotient_dim(&jacobian_ideal(g), g.ctx(), k_max)
}

/// Tjurina number `dim O_d / (g + Jg)`.
pub fn tjurina(g: &Polynomial, k_max: usize) -> Result<QuotientReport> {
    check_singular(g)?;
    quotient_dim(&tjurina_ideal(g), g.ctx(), k_max)
}

/// Monomial basis of `O_d / (g + Jg)`, descending, so the constant monomial
/// comes last.
pub fn quotient_monomial_basis(g: &Polynomial, k_max: usize) -> Result<Vec<Monomial>> {
    let mut b = tjurina(g, k_max)?.monomial_basis;
    b.reverse();
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Role;

    fn ctx(names: &[&str]) -> Arc<VarContext> {
        VarContext::uniform(names, Role::Augmenting).unwrap()
    }

    fn p(s: &str, c: &Arc<VarContext>) -> Polynomial {
        Polynomial::parse(s, c).unwrap()
    }

    /// Monomials of degree <= bound not divisible by any of `gens`.
    fn standard_monomials(nvars: usize, gens: &[Monomial], bound: u32) -> Vec<Monomial> {
        let mut v: Vec<Monomial> =
            Monomial::up_to_degree(nvars, bound).into_iter().filter(|m| !gens.iter().any(|g| g.divides(m))).collect();
        v.sort();
        v
    }

    #[test]
    fn power_of_one_variable() {
        let c = ctx(&["z"]);
        for q in 2..8u32 {
            let gens = vec![p(&format!("z^{}", q - 1), &c)];
            let r = quotient_dim(&gens, &c, DEFAULT_JET_BUDGET).unwrap();
            let oracle = standard_monomials(1, &[Monomial::new(vec![q - 1])], 30);
            assert_eq!(r.dimension, (q - 1) as usize);
            assert_eq!(r.monomial_basis, oracle);
        }
    }

    #[test]
    fn e6_jacobian() {
        let c = ctx(&["x", "y"]);
        let r = quotient_dim(&[p("3*x^2", &c), p("4*y^3", &c)], &c, DEFAULT_JET_BUDGET).unwrap();
        let oracle = standard_monomials(2, &[Monomial::new(vec![2, 0]), Monomial::new(vec![0, 3])], 10);
        assert_eq!(r.dimension, 6);
        assert_eq!(r.monomial_basis, oracle);
    }

    #[test]
    fn unit_generator_is_rejected() {
        let c = ctx(&["x"]);
        assert!(matches!(quotient_dim(&[p("1", &c)], &c, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_isolated_is_not_certified() {
        let c = ctx(&["x", "y"]);
        // x^2*y has a line of critical points
        assert_eq!(milnor(&p("x^2*y", &c), 8), Err(Error::NotCertifiedByOrder(8)));
    }

    #[test]
    fn milnor_examples() {
        let c = ctx(&["z"]);
        for k in 1..7 {
            assert_eq!(milnor(&p(&format!("z^{}", k + 1), &c), 24).unwrap().dimension, k);
        }
        let c2 = ctx(&["x", "y"]);
        assert_eq!(milnor(&p("x^3+y^6+x^2*y^2", &c2), 24).unwrap().dimension, 10);
        assert_eq!(milnor(&p("x^2+y^2", &c2), 24).unwrap().dimension, 1);
        assert_eq!(milnor(&p("x+y^2", &c2), 24), Err(Error::NonSingularGerm));
    }

    #[test]
    fn tjurina_examples() {
        let c = ctx(&["z"]);
        for q in 2..7 {
            assert_eq!(tjurina(&p(&format!("z^{q}"), &c), 24).unwrap().dimension, q - 1);
        }
        let c3 = ctx(&["x", "y", "z"]);
        assert_eq!(tjurina(&p("x^2+y^2+z^2", &c3), 24).unwrap().dimension, 1);
        // not quasihomogeneous: tau < mu
        let c2 = ctx(&["x", "y"]);
        let g = p("x^4+y^5+x^2*y^3", &c2);
        let mu = milnor(&g, 24).unwrap().dimension;
        let tau = tjurina(&g, 24).unwrap().dimension;
        // semi-quasihomogeneous: mu equals that of the principal part x^4+y^5
        assert_eq!(mu, 12);
        assert!(tau < mu);
    }

    #[test]
    fn basis_ends_with_one() {
        let c = ctx(&["z"]);
        let b = quotient_monomial_basis(&p("z^5", &c), 24).unwrap();
        let expect: Vec<Monomial> = (0..4).rev().map(|e| Monomial::new(vec![e])).collect();
        assert_eq!(b, expect);
        assert_eq!(quotient_monomial_basis(&p("z^2", &c), 24).unwrap(), vec![Monomial::new(vec![0])]);
        let c2 = ctx(&["x", "y"]);
        let b = quotient_monomial_basis(&p("x^3+y^4", &c2), 24).unwrap();
        assert_eq!(b.len(), 6);
        assert!(b.last().unwrap().is_one());
    }

    #[test]
    fn basis_is_independent_at_certificate_order() {
        let c = ctx(&["x", "y"]);
        let g = p("x^2*y+y^4", &c);
        let r = tjurina(&g, 24).unwrap();
        let jet = IdealJet::build(&tjurina_ideal(&g), &c, r.certificate_order as u32).unwrap();
        let polys: Vec<Polynomial> =
            r.monomial_basis.iter().map(|m| Polynomial::term(&c, m.clone(), crate::Rat::from_int(1))).collect();
        assert_eq!(jet.rank_of(&polys).unwrap(), r.dimension);
    }
}
