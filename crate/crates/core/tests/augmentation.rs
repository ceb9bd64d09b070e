use germforge_core::ae::ae_codim;
use germforge_core::augmentation::augmentation_codim;
use germforge_core::germ::{augment, check_opsu, MapGerm, SubstantialFlag, Unfolding};
use germforge_core::{Error, Polynomial, Role, VarContext};

fn func(s: &str, vars: &[&str]) -> Polynomial {
    Polynomial::parse(s, &VarContext::uniform(vars, Role::Augmenting).unwrap()).unwrap()
}

#[test]
fn codimension_does_not_depend_on_the_opsu() {
    let f = MapGerm::parse(&["x", "t"], &["x", "t^4+x*t"]).unwrap();
    let first = check_opsu(&Unfolding::parse(&f, &["l"], &["x", "t^4+x*t+l*t^2"]).unwrap(), 12).unwrap();
    let second = check_opsu(&Unfolding::parse(&f, &["l"], &["x", "t^4+x*t+l*t^2+l*t^3+l^2*t"]).unwrap(), 12).unwrap();
    for g in ["y^2+z^2", "y^3+z^2", "y^2*z+z^3"] {
        let g = func(g, &["y", "z"]);
        let a = ae_codim(&augment(&f, &first, &g).unwrap(), 16).unwrap().codim;
        let b = ae_codim(&augment(&f, &second, &g).unwrap(), 16).unwrap().codim;
        assert_eq!(a, b, "{g}");
    }
}

#[test]
fn augmentation_shape() {
    let f = MapGerm::parse(&["y"], &["y^2", "y^5"]).unwrap();
    let opsu = check_opsu(&Unfolding::parse(&f, &["l"], &["y^2", "y^5+l*y"]).unwrap(), 12).unwrap();
    let g = func("a^2*b+b^4", &["a", "b"]);
    let r = augment(&f, &opsu, &g).unwrap();
    assert_eq!((r.n(), r.p()), (3, 4));
    assert_eq!(r.components()[2], Polynomial::var(r.ctx(), 1));
    assert_eq!(r.components()[3], Polynomial::var(r.ctx(), 2));
    for (c, base) in r.components()[..2].iter().zip(f.components()) {
        assert_eq!(c.set_zero(&[1, 2]).to_string(), base.to_string());
    }
}

#[test]
fn opsu_checks() {
    let fold = MapGerm::parse(&["t"], &["t^3"]).unwrap();
    assert!(check_opsu(&Unfolding::parse(&fold, &["l"], &["t^3+l*t"]).unwrap(), 12).is_ok());
    let cusp = MapGerm::parse(&["y"], &["y^2", "y^3"]).unwrap();
    let trivial = Unfolding::parse(&cusp, &["l"], &["y^2", "y^3"]).unwrap();
    let r = check_opsu(&trivial, 12);
    // Infinite codimension, caught by a positive jet lower bound.
    assert!(matches!(r, Err(Error::NotStable(1))));
}

#[test]
fn linear_augmenting_functions_are_rejected() {
    let fold = MapGerm::parse(&["t"], &["t^3"]).unwrap();
    let opsu = check_opsu(&Unfolding::parse(&fold, &["l"], &["t^3+l*t"]).unwrap(), 12).unwrap();
    assert!(matches!(augment(&fold, &opsu, &func("z+z^2", &["z"])), Err(Error::InvalidAugmentingFunction(_))));
    assert!(matches!(augment(&fold, &opsu, &func("z^2+1", &["z"])), Err(Error::InvalidAugmentingFunction(_))));
}

#[test]
fn product_formula_on_a_semi_quasihomogeneous_function() {
    // mu = tau for x^3 + y^7 + x*y^5, so the formula is exact.
    let fold = MapGerm::parse(&["t"], &["t^3"]).unwrap();
    let opsu = check_opsu(&Unfolding::parse(&fold, &["l"], &["t^3+l*t"]).unwrap(), 12).unwrap();
    let g = func("x^3+y^7+x*y^5", &["x", "y"]);
    let c = augmentation_codim(1, &g, SubstantialFlag::default(), 24).unwrap();
    let jet = ae_codim(&augment(&fold, &opsu, &g).unwrap(), 16).unwrap().codim;
    assert_eq!(jet, c.value);
}
