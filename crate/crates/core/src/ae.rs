//! Extended tangent spaces of map-germs in jet spaces.
//!
//! `θ(f)` truncated at order `k` is spanned by the monomial fields
//! `x^a e_j` with `|a| <= k`. The extended tangent space
//! `T = tf(θ_n) + ωf(θ_p)` contributes `x^a ∂f/∂x_i` and `f^b e_j`, both
//! truncated. The quotient dimension `codim_k = dim θ/(T + m^{k+1}θ)` is
//! non-decreasing in `k`.
//!
//! Certification. `T` is an `O_p`-module through `f`, and for a finite germ
//! `N = m^K θ(f)` is finitely generated over `O_p`. If
//! `N ⊆ T + f^*(m_p) N`, Nakayama's lemma gives `N ⊆ T`, and then
//! `codim_{K-1}` is the exact A_e-codimension. When `m^s ⊆ (f_1, .., f_p)`
//! we have `m^{K+s} θ ⊆ f^*(m_p) N`, so the inclusion is decided exactly in
//! the jet space of order `K + s - 1`: it holds iff adding `f^*(m_p) N` to
//! `T` there leaves `codim_{K-1}` unchanged.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::germ::{MapGerm, Unfolding, VectorField};
use crate::linalg::{Echelon, SparseVec};
use crate::local_algebra::quotient_dim;
use crate::poly::{Monomial, Polynomial};

/// Default jet budget for map-germ computations. Jet spaces of maps grow
/// much faster than those of functions, so this is lower than the budget
/// used for local algebras.
pub const DEFAULT_AE_JET_BUDGET: usize = 16;

/// Image of `tf(θ_n) + ωf(θ_p)` in the order-`k` jet space of `θ(f)`.
#[derive(Clone, Debug)]
pub struct JetModel {
    germ: MapGerm,
    order: u32,
    columns: Vec<(usize, Monomial)>,
    index: HashMap<(usize, Monomial), usize>,
    echelon: Echelon,
}

impl JetModel {
    pub fn tangent_image(f: &MapGerm, k: u32) -> Result<JetModel> {
        JetModel::assemble(f, k, None)
    }

    /// With `ideal_from = Some(K)` the span also contains `f^*(m_p) m^K θ(f)`.
    fn assemble(f: &MapGerm, k: u32, ideal_from: Option<u32>) -> Result<JetModel> {
        if k < 1 {
            return Err(Error::Precondition("jet order must be at least 1".into()));
        }
        let n = f.n();
        let p = f.p();
        // heavy columns first: high degree, then low component index
        let mut columns = Vec::new();
        for d in (0..=k).rev() {
            for c in 0..p {
                for m in Monomial::of_degree(n, d) {
                    columns.push((c, m));
                }
            }
        }
        let index: HashMap<(usize, Monomial), usize> =
            columns.iter().cloned().enumerate().map(|(i, cm)| (cm, i)).collect();
        let comps: Vec<Polynomial> = f.components().iter().map(|c| c.jet_truncate(k)).collect();
        let mut rows = Vec::new();

        // the k-jet of a derivative needs the (k+1)-jet of the germ
        let source_monomials = Monomial::up_to_degree(n, k);
        for i in 0..n {
            let df: Vec<Polynomial> = f.components().iter().map(|c| c.jet_truncate(k + 1).derivative(i)).collect();
            for m in &source_monomials {
                let field: Vec<Polynomial> = df.iter().map(|d| d.mul_monomial(m).jet_truncate(k)).collect();
                let v = field_vector(&field, &index);
                if !v.is_zero() {
                    rows.push(v);
                }
            }
        }

        for fb in target_powers(&comps, k) {
            for c in 0..p {
                let v = SparseVec::from_pairs(fb.terms().map(|(m, x)| (index[&(c, m.clone())], x.clone())).collect());
                rows.push(v);
            }
        }

        if let Some(big_k) = ideal_from {
            for fj in &comps {
                let Some(o) = fj.order() else { continue };
                for d in big_k..=k.saturating_sub(o) {
                    for m in Monomial::of_degree(n, d) {
                        let prod = fj.mul_monomial(&m).jet_truncate(k);
                        for c in 0..p {
                            rows.push(SparseVec::from_pairs(
                                prod.terms().map(|(mm, x)| (index[&(c, mm.clone())], x.clone())).collect(),
                            ));
                        }
                    }
                }
            }
        }

        let mut echelon = Echelon::new(columns.len());
        echelon.insert_all(rows);
        Ok(JetModel { germ: f.clone(), order: k, columns, index, echelon })
    }

    pub fn germ(&self) -> &MapGerm {
        &self.germ
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Dimension of the jet quotient.
    pub fn codim(&self) -> usize {
        self.columns.len() - self.echelon.rank()
    }

    /// Monomial fields spanning the jet quotient, sorted by total degree,
    /// then component, then graded-lex monomial order.
    pub fn normal_basis(&self) -> Vec<VectorField> {
        let mut cols: Vec<&(usize, Monomial)> =
            self.echelon.non_pivot_columns().into_iter().map(|c| &self.columns[c]).collect();
        cols.sort_by(|a, b| (a.1.degree(), a.0, &a.1).cmp(&(b.1.degree(), b.0, &b.1)));
        cols.into_iter().map(|(c, m)| self.monomial_field(*c, m)).collect()
    }

    fn monomial_field(&self, c: usize, m: &Monomial) -> VectorField {
        let ctx = self.germ.ctx();
        let components = (0..self.germ.p())
            .map(|j| if j == c { Polynomial::term(ctx, m.clone(), crate::Rat::from_int(1)) } else { Polynomial::zero(ctx) })
            .collect();
        VectorField { components }
    }

    fn vector(&self, field: &VectorField) -> Result<SparseVec> {
        if field.components.len() != self.germ.p() {
            return Err(Error::Precondition(format!(
                "field has {} components, germ has {}",
                field.components.len(),
                self.germ.p()
            )));
        }
        let comps = field
            .components
            .iter()
            .map(|c| Ok(c.to_context(self.germ.ctx())?.jet_truncate(self.order)))
            .collect::<Result<Vec<_>>>()?;
        Ok(field_vector(&comps, &self.index))
    }

    /// Whether `field` lies in the tangent image modulo order `k + 1`.
    pub fn contains(&self, field: &VectorField) -> Result<bool> {
        Ok(self.echelon.contains(&self.vector(field)?))
    }

    /// Rank of the images of `fields` in the jet quotient.
    pub fn rank_of(&self, fields: &[VectorField]) -> Result<usize> {
        let mut e = self.echelon.clone();
        let before = e.rank();
        for f in fields {
            e.insert(self.vector(f)?);
        }
        Ok(e.rank() - before)
    }
}

fn field_vector(components: &[Polynomial], index: &HashMap<(usize, Monomial), usize>) -> SparseVec {
    let mut pairs = Vec::new();
    for (c, poly) in components.iter().enumerate() {
        for (m, x) in poly.terms() {
            pairs.push((index[&(c, m.clone())], x.clone()));
        }
    }
    SparseVec::from_pairs(pairs)
}

/// Nonzero truncations `trunc_k(f^b)` over all target monomials `b`.
fn target_powers(comps: &[Polynomial], k: u32) -> Vec<Polynomial> {
    let p = comps.len();
    let ctx = comps[0].ctx().clone();
    let mut memo: HashMap<Monomial, Polynomial> = HashMap::new();
    let one = Monomial::one(p);
    memo.insert(one.clone(), Polynomial::constant(&ctx, crate::Rat::from_int(1)));
    let mut out = vec![memo[&one].clone()];
    for d in 1..=k {
        let mut any = false;
        for b in Monomial::of_degree(p, d) {
            let j = b.exponents().iter().position(|&e| e > 0).unwrap();
            let mut prev = b.exponents().to_vec();
            prev[j] -= 1;
            let Some(base) = memo.get(&Monomial::new(prev)) else { continue };
            let v = base.mul_truncated(&comps[j], k);
            if v.is_zero() {
                continue;
            }
            any = true;
            out.push(v.clone());
            memo.insert(b, v);
        }
        if !any {
            break;
        }
    }
    out
}

/// Certified A_e-codimension with a normal-space basis.
#[derive(Clone, Debug)]
pub struct AeCodim {
    pub codim: usize,
    pub basis: Vec<VectorField>,
    /// Largest jet order examined by the certificate.
    pub certified_order: usize,
    /// Jet model whose quotient is exactly the normal space.
    pub model: JetModel,
}

pub fn ae_codim(f: &MapGerm, k_budget: usize) -> Result<AeCodim> {
    // m^s inside the ideal generated by the components; fails for non-finite germs
    let s = match quotient_dim(f.components(), f.ctx(), k_budget.max(2)) {
        Ok(r) => r.certificate_order as u32,
        Err(Error::NotCertifiedByOrder(_)) => return Err(Error::NotCertifiedByOrder(k_budget)),
        Err(e) => return Err(e),
    };
    let budget = k_budget as u32;
    let mut previous: Option<JetModel> = None;
    let mut k = 1;
    while k + s <= budget {
        let current = JetModel::tangent_image(f, k)?;
        // only worth a certificate attempt once the dimension has settled
        if previous.as_ref().is_some_and(|p| p.codim() == current.codim()) {
            let check = JetModel::assemble(f, k + s, Some(k + 1))?;
            if check.codim() == current.codim() {
                return Ok(AeCodim {
                    codim: current.codim(),
                    basis: current.normal_basis(),
                    certified_order: (k + s) as usize,
                    model: current,
                });
            }
        }
        previous = Some(current);
        k += 1;
    }
    Err(Error::NotCertifiedByOrder(k_budget))
}

/// The initial speeds of `unfolding` span the normal space of its base.
pub fn is_versal(unfolding: &Unfolding, k_budget: usize) -> Result<bool> {
    let c = ae_codim(unfolding.base(), k_budget)?;
    Ok(c.model.rank_of(&unfolding.initial_speeds())? == c.codim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn germ(vars: &[&str], comps: &[&str]) -> MapGerm {
        MapGerm::parse(vars, comps).unwrap()
    }

    #[test]
    fn fold_is_stable() {
        let m = JetModel::tangent_image(&germ(&["y"], &["y^2"]), 4).unwrap();
        assert_eq!(m.codim(), 0);
        assert_eq!(ae_codim(&germ(&["y"], &["y^2"]), 12).unwrap().codim, 0);
    }

    #[test]
    fn identity_is_stable() {
        assert_eq!(JetModel::tangent_image(&germ(&["y"], &["y"]), 3).unwrap().codim(), 0);
    }

    #[test]
    fn cusp_curve() {
        let f = germ(&["y"], &["y^2", "y^3"]);
        let m = JetModel::tangent_image(&f, 5).unwrap();
        assert_eq!(m.codim(), 1);
        assert_eq!(m.normal_basis()[0].to_string(), "(0, y)");
        let c = ae_codim(&f, 12).unwrap();
        assert_eq!(c.codim, 1);
        assert_eq!(c.basis.len(), 1);
    }

    #[test]
    fn odd_cusps() {
        for p in 1..=4u32 {
            let f = germ(&["y"], &["y^2", &format!("y^{}", 2 * p + 1)]);
            let c = ae_codim(&f, 14).unwrap();
            assert_eq!(c.codim, p as usize);
            let expect: Vec<String> = (0..p).map(|i| format!("(0, {})", mono_y(2 * i + 1))).collect();
            let got: Vec<String> = c.basis.iter().map(ToString::to_string).collect();
            assert_eq!(got, expect);
        }
    }

    fn mono_y(e: u32) -> String {
        if e == 1 {
            "y".into()
        } else {
            format!("y^{e}")
        }
    }

    #[test]
    fn opsu_versality() {
        let f = germ(&["y"], &["y^2", "y^3"]);
        assert!(is_versal(&Unfolding::parse(&f, &["l"], &["y^2", "y^3+l*y"]).unwrap(), 12).unwrap());
        assert!(!is_versal(&Unfolding::parse(&f, &["l"], &["y^2", "y^3"]).unwrap(), 12).unwrap());
    }

    #[test]
    fn codim_is_non_decreasing_in_order() {
        let f = germ(&["y", "z"], &["y^2", "y^5+z^3*y", "z"]);
        let dims: Vec<usize> = (1..8).map(|k| JetModel::tangent_image(&f, k).unwrap().codim()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{dims:?}");
    }

    /// Dense oracle: rank of the full (untruncated-then-truncated) generator
    /// matrix, built without memoized powers or sparse elimination.
    fn dense_codim(f: &MapGerm, k: u32) -> usize {
        use crate::{linalg, Rat};
        let (n, p) = (f.n(), f.p());
        let mons = Monomial::up_to_degree(n, k);
        let cols: Vec<(usize, Monomial)> = (0..p).flat_map(|c| mons.iter().map(move |m| (c, m.clone()))).collect();
        let to_row = |field: &[Polynomial]| -> Vec<Rat> {
            cols.iter().map(|(c, m)| field[*c].jet_truncate(k).coeff(m)).collect()
        };
        let mut rows = Vec::new();
        for i in 0..n {
            for m in &mons {
                let field: Vec<Polynomial> = f.components().iter().map(|c| c.derivative(i).mul_monomial(m)).collect();
                rows.push(to_row(&field));
            }
        }
        for b in Monomial::up_to_degree(p, k) {
            let mut prod = Polynomial::constant(f.ctx(), Rat::from_int(1));
            for (j, &e) in b.exponents().iter().enumerate() {
                prod = prod.mul(&f.components()[j].pow(e));
            }
            for c in 0..p {
                let field: Vec<Polynomial> =
                    (0..p).map(|j| if j == c { prod.clone() } else { Polynomial::zero(f.ctx()) }).collect();
                rows.push(to_row(&field));
            }
        }
        cols.len() - linalg::rank(&rows)
    }

    #[test]
    fn sparse_model_matches_dense_oracle() {
        let corpus = [
            germ(&["y", "z"], &["y^2", "y^3+z^4*y", "z"]),
            germ(&["y", "z"], &["y^2", "y^5+z^3*y", "z"]),
            germ(&["x", "t"], &["x", "t^4+x^3*t+x*t^2"]),
            germ(&["t"], &["t^3"]),
        ];
        for f in &corpus {
            for k in 1..=6 {
                assert_eq!(JetModel::tangent_image(f, k).unwrap().codim(), dense_codim(f, k), "{f} at {k}");
            }
        }
    }

    #[test]
    fn late_normal_vectors_are_not_missed() {
        // the jet quotient sits at 2 for two orders before reaching 3
        let f = germ(&["x", "t"], &["x", "t^4+x^3*t+x*t^2"]);
        let dims: Vec<usize> = (3..=5).map(|k| JetModel::tangent_image(&f, k).unwrap().codim()).collect();
        assert_eq!(dims, vec![2, 2, 3]);
        assert_eq!(ae_codim(&f, 16).unwrap().codim, 3);
        let g = germ(&["x", "y", "t"], &["x", "y", "t^5+x*t+y*t^3"]);
        assert_eq!(ae_codim(&g, 16).unwrap().codim, 3);
    }

    #[test]
    fn stable_unfoldings() {
        for (v, c) in [
            (vec!["y", "l"], vec!["y^2", "y^3+l*y", "l"]),
            (vec!["t", "l"], vec!["t^3+l*t", "l"]),
            (vec!["x", "t", "l"], vec!["x", "t^4+x*t+l*t^2", "l"]),
        ] {
            assert_eq!(ae_codim(&germ(&v, &c), 16).unwrap().codim, 0);
        }
    }

    #[test]
    fn non_finite_germ_is_not_certified() {
        // (y^2, 0) has infinite codimension
        let f = MapGerm::parse(&["y"], &["y^2", "0*y"]).unwrap();
        assert_eq!(ae_codim(&f, 8).unwrap_err(), Error::NotCertifiedByOrder(8));
    }
}
