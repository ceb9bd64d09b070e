//! Normal forms with known codimension and simplicity.
//!
//! Matching is syntactic: a germ is recognised only when it equals a stored
//! normal form after renaming variables and permuting components.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::germ::{MapGerm, Opsu, Unfolding};
use crate::germfile::GermFile;
use crate::poly::{Monomial, Polynomial};

const BUILTIN: &str = include_str!("../data/catalog.germ");

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub family: String,
    /// Source and target dimension.
    pub dims: (usize, usize),
    pub germ: MapGerm,
    pub codim: usize,
    pub codim_formula: String,
    pub simple: bool,
    pub opsu: Option<Unfolding>,
    pub source: String,
    canonical: Vec<String>,
}

impl CatalogEntry {
    /// The stored unfolding as an OPSU, trusted on the catalog's authority.
    pub fn opsu(&self) -> Option<Opsu> {
        self.opsu.clone().map(|u| Opsu::asserted(u).expect("catalog OPSUs have one parameter"))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The catalog shipped with the crate.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::parse(BUILTIN).expect("the bundled catalog parses"))
    }

    pub fn parse(text: &str) -> Result<Catalog> {
        Catalog::from_germ_file(&GermFile::parse(text)?)
    }

    /// Every germ annotated with `simple=` becomes an entry.
    pub fn from_germ_file(file: &GermFile) -> Result<Catalog> {
        let mut entries = Vec::new();
        for (name, germ) in file.germs() {
            let Some(simple) = file.meta_value(name, "simple") else { continue };
            let bad = |msg: String| Error::Precondition(format!("catalog entry `{name}`: {msg}"));
            let simple = simple.parse::<bool>().map_err(|_| bad(format!("simple={simple} is not a boolean")))?;
            let codim = file
                .meta_value(name, "codim")
                .ok_or_else(|| bad("missing codim".into()))?
                .parse::<usize>()
                .map_err(|_| bad("codim is not a non-negative integer".into()))?;
            let opsu = match file.meta_value(name, "opsu") {
                Some(u) => {
                    let u = file.unfolding(u).ok_or_else(|| bad(format!("unknown OPSU `{u}`")))?;
                    if u.m() != 1 || u.base() != germ {
                        return Err(bad("the OPSU must be a one-parameter unfolding of the entry".into()));
                    }
                    Some(u.clone())
                }
                None => None,
            };
            let get = |k: &str| file.meta_value(name, k).unwrap_or("").to_string();
            entries.push(CatalogEntry {
                name: name.to_string(),
                family: file.meta_value(name, "family").unwrap_or(name).to_string(),
                dims: (germ.n(), germ.p()),
                germ: germ.clone(),
                codim,
                codim_formula: file.meta_value(name, "formula").map(str::to_string).unwrap_or_else(|| codim.to_string()),
                simple,
                opsu,
                source: get("source"),
                canonical: canonical_components(germ, &identity(germ.n())),
            });
        }
        Ok(Catalog { entries })
    }

    /// Appends the entries of `other`; earlier entries win on lookup.
    pub fn extend(&mut self, other: &Catalog) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// First entry equal to `germ` up to a renaming of the source variables
    /// and a permutation of the components.
    pub fn lookup(&self, germ: &MapGerm) -> Option<&CatalogEntry> {
        let candidates: Vec<&CatalogEntry> =
            self.entries.iter().filter(|e| e.dims == (germ.n(), germ.p())).collect();
        if candidates.is_empty() {
            return None;
        }
        for perm in permutations(germ.n()) {
            let key = canonical_components(germ, &perm);
            if let Some(e) = candidates.iter().find(|e| e.canonical == key) {
                return Some(e);
            }
        }
        None
    }
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Components written with variable `perm[j]` of `germ` renamed to the
/// `j`-th generic variable, sorted so that component order is forgotten.
fn canonical_components(germ: &MapGerm, perm: &[usize]) -> Vec<String> {
    let mut out: Vec<String> = germ.components().iter().map(|c| rename(c, perm)).collect();
    out.sort();
    out
}

fn rename(p: &Polynomial, perm: &[usize]) -> String {
    let mut terms: Vec<String> = p
        .terms()
        .map(|(m, c): (&Monomial, _)| {
            let e: Vec<String> = perm.iter().map(|&i| m.exponents()[i].to_string()).collect();
            format!("{c}*[{}]", e.join(","))
        })
        .collect();
    terms.sort();
    terms.join("+")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..n {
                if !p.contains(&i) {
                    let mut q = p.clone();
                    q.push(i);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads() {
        let c = Catalog::builtin();
        assert!(c.entries().len() > 50);
        let f4 = c.get("F_4").unwrap();
        assert_eq!((f4.dims, f4.codim, f4.simple), ((2, 3), 4, true));
        assert!(c.get("cusp_4").unwrap().opsu().is_some());
        assert_eq!(c.get("4²_3").unwrap().codim, 3);
        assert_eq!(c.get("5_1").unwrap().codim, 0);
    }

    #[test]
    fn lookup_up_to_renaming_and_permutation() {
        let c = Catalog::builtin();
        let g = MapGerm::parse(&["a", "b"], &["a^2", "a^5+b^3*a", "b"]).unwrap();
        assert_eq!(c.lookup(&g).unwrap().name, "F_4");
        let g = MapGerm::parse(&["b", "a"], &["a", "b^5+a^4*b", "b^2"]).unwrap();
        assert_eq!(c.lookup(&g).unwrap().name, "NonSimpleWitness");
        let g = MapGerm::parse(&["x", "y", "z", "t"], &["x", "y", "z", "t^5+x*t+y*t^2+z^2*t^3"]).unwrap();
        let e = c.lookup(&g).unwrap();
        assert_eq!((e.name.as_str(), e.codim), ("5_2", 1));
        let g = MapGerm::parse(&["y", "z"], &["y^2", "y^5+2*z^3*y", "z"]).unwrap();
        assert!(c.lookup(&g).is_none());
    }

    #[test]
    fn malformed_entries_are_rejected() {
        assert!(Catalog::parse("germ a(y) = (y^2, y^3)\n@ a simple=maybe codim=1").is_err());
        assert!(Catalog::parse("germ a(y) = (y^2, y^3)\n@ a simple=true").is_err());
        let text = "germ a(y) = (y^2, y^3)\ngerm b(y) = (y^2, y^5)\nunfolding u(y; l) of b = (y^2, y^5 + l*y)\n@ a simple=true codim=1 opsu=u";
        assert!(Catalog::parse(text).is_err());
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }
}
