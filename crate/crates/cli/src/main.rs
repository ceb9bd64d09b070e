mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use germforge_core::ade::{classify, modality_of_function};
use germforge_core::ae::ae_codim;
use germforge_core::augmentation::{augmentation_codim, build_versal, verify_versal, AugmentedGerm};
use germforge_core::catalog::Catalog;
use germforge_core::germ::{augment, check_opsu, MapGerm, Opsu, SubstantialFlag, Unfolding};
use germforge_core::germfile::GermFile;
use germforge_core::local_algebra::{milnor, tjurina};
use germforge_core::parse::{identifiers, split_tuple};
use germforge_core::quasihomog::{find_weights, is_r_equiv_quasihomogeneous};
use germforge_core::simplicity::{
    decide_simplicity, generate_table44, known_simplicity, modality_of_augmentation, resolve_with_catalog, Status,
    TableEntry, TableInstances, TABLE44_CONJECTURE,
};
use germforge_core::{Budget, Error, Polynomial, Role, VarContext};

use report::{Certification, ErrorReport, Report};

#[derive(Parser, Debug)]
#[command(name = "germforge", version, about = "Exact calculus for augmentations of map-germs")]
struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Jet-order budget for every certified computation.
    #[arg(long = "jet-order", global = true, env = "GERMFORGE_JET_BUDGET")]
    jet_order: Option<usize>,
    /// Load functions, germs, unfoldings and catalog entries from a germ file.
    #[arg(long = "germ-file", global = true)]
    germ_file: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FnArgs {
    /// Polynomial, or the name of a function from the germ file.
    #[arg(short = 'e', long = "expr")]
    expr: String,
    /// Comma-separated variables; defaults to order of appearance.
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// `(f1, .., fp)`, or the name of a germ from the germ file or catalog.
    #[arg(short = 'm', long = "map")]
    map: String,
    /// Comma-separated source variables; defaults to order of appearance.
    #[arg(long = "map-vars")]
    map_vars: Option<String>,
}

#[derive(Args, Debug)]
struct AugArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Augmenting function, or the name of a function from the germ file.
    #[arg(short = 'g', long = "g")]
    g: String,
    #[arg(long = "g-vars")]
    g_vars: Option<String>,
    /// OPSU as `(F1, .., Fp)` or a name; defaults to the catalog's OPSU of `f`.
    #[arg(long)]
    opsu: Option<String>,
    /// Parameter of a tuple OPSU; defaults to its only new variable.
    #[arg(long)]
    param: Option<String>,
    /// Assert that the OPSU is substantial.
    #[arg(long)]
    substantial: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Milnor number.
    Mu(FnArgs),
    /// Tjurina number.
    Tau(FnArgs),
    /// Monomial basis of the Tjurina (or Milnor) algebra.
    Qbasis {
        #[command(flatten)]
        f: FnArgs,
        #[arg(long)]
        milnor: bool,
    },
    /// Quasihomogeneous weights.
    Weights(FnArgs),
    /// ADE classification.
    Classify(FnArgs),
    /// A_e-codimension of a map-germ.
    Codim(MapArgs),
    /// Monomial basis of the normal space of a map-germ.
    Nbasis(MapArgs),
    /// Build the augmentation `(f_{g(z)}(x), z)`.
    Augment(AugArgs),
    /// Codimension of an augmentation.
    Acodim {
        #[command(flatten)]
        a: AugArgs,
        /// Cross-check against a jet computation on the augmented germ.
        #[arg(long)]
        verify: bool,
        /// Fail unless the codimension is exact rather than a lower bound.
        #[arg(long = "require-exact")]
        require_exact: bool,
    },
    /// Versal unfolding of an augmentation.
    Versal {
        #[command(flatten)]
        a: AugArgs,
        /// Check versality in jets.
        #[arg(long)]
        verify: bool,
    },
    /// Simplicity verdict for an augmentation.
    Simple(SimpleArgs),
    /// Modality of an augmentation of a codimension-one germ.
    Modality(ModalityArgs),
    /// Regenerate the table of simple augmentations (C^4,0) -> (C^4,0).
    Table44 {
        /// Every simple P, Q with mu <= 8 and k up to 6.
        #[arg(long)]
        extended: bool,
    },
    /// Browse the catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("f").required(true).args(["map", "f_codim"])))]
struct SimpleArgs {
    #[arg(short = 'm', long = "map")]
    map: Option<String>,
    #[arg(long = "map-vars")]
    map_vars: Option<String>,
    /// A_e-codimension of `f`, when `f` itself is not given.
    #[arg(long = "f-codim")]
    f_codim: Option<usize>,
    /// Whether `f` is simple, when known.
    #[arg(long = "f-simple")]
    f_simple: Option<bool>,
    #[arg(short = 'g', long = "g")]
    g: String,
    #[arg(long = "g-vars")]
    g_vars: Option<String>,
    #[arg(long)]
    opsu: Option<String>,
    #[arg(long)]
    param: Option<String>,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("f").required(true).args(["map", "f_codim"])))]
struct ModalityArgs {
    #[arg(short = 'm', long = "map")]
    map: Option<String>,
    #[arg(long = "map-vars")]
    map_vars: Option<String>,
    #[arg(long = "f-codim")]
    f_codim: Option<usize>,
    #[arg(short = 'g', long = "g")]
    g: String,
    #[arg(long = "g-vars")]
    g_vars: Option<String>,
    /// Whether all deformations of g along its mu-constant stratum are
    /// quasihomogeneous; derived from the type of g when omitted.
    #[arg(long = "mu-constant-qh")]
    mu_constant_qh: Option<bool>,
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    /// All entries.
    List,
    /// One entry by name.
    Show { name: String },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_certification_failure() => 2,
            CliError::Core(e) if e.is_hypothesis_failure() => 3,
            CliError::Core(_) => 1,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Env {
    file: Option<GermFile>,
    catalog: Catalog,
    budget: Budget,
}

impl Env {
    fn load(cli: &Cli) -> CliResult<Env> {
        let budget = cli.jet_order.map(Budget::uniform).unwrap_or_default();
        let mut catalog = Catalog::builtin().clone();
        let file = match &cli.germ_file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                let file = GermFile::parse(&text)?;
                catalog.extend(&Catalog::from_germ_file(&file)?);
                Some(file)
            }
            None => None,
        };
        Ok(Env { file, catalog, budget })
    }

    fn function(&self, text: &str, vars: Option<&str>) -> CliResult<Polynomial> {
        if let Some(p) = self.file.as_ref().and_then(|f| f.function(text.trim())) {
            return Ok(p.clone());
        }
        let names = variable_list(&[text.to_string()], vars)?;
        if names.is_empty() {
            return Err(CliError::Usage(format!("`{text}` has no variables")));
        }
        Ok(Polynomial::parse(text, &VarContext::uniform(&names, Role::Augmenting)?)?)
    }

    fn map_germ(&self, text: &str, vars: Option<&str>) -> CliResult<MapGerm> {
        let name = text.trim();
        if let Some(g) = self.file.as_ref().and_then(|f| f.germ(name)) {
            return Ok(g.clone());
        }
        if let Some(e) = self.catalog.get(name) {
            return Ok(e.germ.clone());
        }
        let comps = split_tuple(text)?;
        let names = variable_list(&comps, vars)?;
        Ok(MapGerm::parse(&names, &comps)?)
    }

    fn opsu(&self, f: &MapGerm, given: Option<&str>, param: Option<&str>) -> CliResult<Opsu> {
        let Some(given) = given else {
            return self
                .catalog
                .entries()
                .iter()
                .find(|e| &e.germ == f && e.opsu.is_some())
                .and_then(|e| e.opsu())
                .ok_or_else(|| CliError::Usage(format!("no OPSU of {f} is known; pass --opsu")));
        };
        let name = given.trim();
        if let Some(u) = self.file.as_ref().and_then(|file| file.unfolding(name)) {
            return Ok(check_opsu(u, self.budget.map)?);
        }
        if let Some(e) = self.catalog.get(name) {
            return e.opsu().ok_or_else(|| CliError::Usage(format!("catalog entry `{name}` has no OPSU")));
        }
        let comps = split_tuple(given)?;
        let base: Vec<&str> = f.ctx().names().iter().map(String::as_str).collect();
        let param = match param {
            Some(p) => p.to_string(),
            None => {
                let fresh: Vec<String> =
                    variable_list(&comps, None)?.into_iter().filter(|v| !base.contains(&v.as_str())).collect();
                match fresh.as_slice() {
                    [p] => p.clone(),
                    _ => return Err(CliError::Usage("cannot tell the OPSU parameter; pass --param".into())),
                }
            }
        };
        let comps: Vec<&str> = comps.iter().map(String::as_str).collect();
        let u = Unfolding::parse(f, &[param.as_str()], &comps)?;
        Ok(check_opsu(&u, self.budget.map)?)
    }
}

/// `vars` when given, otherwise the identifiers of `exprs` in order of
/// first appearance.
fn variable_list(exprs: &[String], vars: Option<&str>) -> CliResult<Vec<String>> {
    if let Some(v) = vars {
        return Ok(v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    let mut out: Vec<String> = Vec::new();
    for e in exprs {
        for id in identifiers(e)? {
            if !out.contains(&id) {
                out.push(id);
            }
        }
    }
    Ok(out)
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::from(items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>())
}

fn run(cli: &Cli, report: &mut Report) -> CliResult<Option<String>> {
    let env = Env::load(cli)?;
    let budget = env.budget;
    match &cli.cmd {
        Cmd::Mu(a) | Cmd::Tau(a) => {
            let g = env.function(&a.expr, a.vars.as_deref())?;
            report.input("function", g.to_string());
            let (key, q) = match cli.cmd {
                Cmd::Mu(_) => ("mu", milnor(&g, budget.function)?),
                _ => ("tau", tjurina(&g, budget.function)?),
            };
            report.result(key, q.dimension);
            report.certify(key, Certification::JetOrder(q.certificate_order));
        }
        Cmd::Qbasis { f, milnor: use_milnor } => {
            let g = env.function(&f.expr, f.vars.as_deref())?;
            report.input("function", g.to_string());
            let q = if *use_milnor { milnor(&g, budget.function)? } else { tjurina(&g, budget.function)? };
            report.result("algebra", if *use_milnor { "milnor" } else { "tjurina" });
            report.result("dimension", q.dimension);
            report.certify("dimension", Certification::JetOrder(q.certificate_order));
            report.result("basis", strings(q.monomial_basis.iter().rev().map(|m| m.display_in(g.ctx()))));
        }
        Cmd::Weights(a) => {
            let g = env.function(&a.expr, a.vars.as_deref())?;
            report.input("function", g.to_string());
            let w = find_weights(&g);
            report.result("quasihomogeneous", w.is_some());
            if let Some(w) = w {
                report.result("variables", strings(g.ctx().names()));
                report.result("weights", w.weights.clone());
                report.result("degree", w.degree);
            }
            report.result("r_equivalent_to_quasihomogeneous", is_r_equiv_quasihomogeneous(&g, budget.function)?);
        }
        Cmd::Classify(a) => {
            let g = env.function(&a.expr, a.vars.as_deref())?;
            report.input("function", g.to_string());
            let c = classify(&g, budget.function)?;
            report.result("type", c.tag.to_string());
            report.result("simple", c.tag.is_simple());
            report.result("corank", c.corank);
            report.result("mu", c.mu);
            report.result("tau", c.tau);
            report.result("modality", modality_of_function(&g, budget.function)?.to_string());
            if let Some(k) = c.certificate_order {
                report.certify("mu", Certification::JetOrder(k));
                report.certify("type", Certification::JetOrder(k));
            }
        }
        Cmd::Codim(m) | Cmd::Nbasis(m) => {
            let f = env.map_germ(&m.map, m.map_vars.as_deref())?;
            report.input("germ", f.to_string());
            let c = ae_codim(&f, budget.map)?;
            report.result("codim", c.codim);
            report.certify("codim", Certification::JetOrder(c.certified_order));
            report.result("normal_basis", strings(&c.basis));
            if let Some(e) = env.catalog.lookup(&f) {
                report.result("catalog_entry", e.name.clone());
            }
        }
        Cmd::Augment(a) => {
            let (f, opsu, g) = augmentation_inputs(&env, a, report)?;
            let result = augment(&f, &opsu, &g)?;
            report.result("augmentation", result.to_string());
            report.result("dims", format!("{} -> {}", result.n(), result.p()));
            if let Some(e) = env.catalog.lookup(&result) {
                report.result("catalog_entry", e.name.clone());
            }
        }
        Cmd::Acodim { a, verify, require_exact } => {
            let (f, opsu, g) = augmentation_inputs(&env, a, report)?;
            let fc = ae_codim(&f, budget.map)?;
            let c = augmentation_codim(fc.codim, &g, SubstantialFlag { asserted: a.substantial }, budget.function)?;
            report.result("f_codim", fc.codim);
            report.certify("f_codim", Certification::JetOrder(fc.certified_order));
            report.result("tau", c.tau);
            report.certify("tau", Certification::JetOrder(c.tau_certificate_order));
            report.result("codim", c.value);
            report.certify("codim", Certification::Formula("f_codim * tau".into()));
            report.result("exact", c.exact);
            if !c.exact {
                let msg = "g is not R-equivalent to a quasihomogeneous function and the OPSU is not asserted substantial; the codimension is a lower bound";
                if *require_exact {
                    return Err(CliError::Core(Error::HypothesesUnmet(msg.into())));
                }
                report.warn("LowerBoundOnly", msg);
            }
            if *verify {
                let result = augment(&f, &opsu, &g)?;
                let jet = ae_codim(&result, budget.map)?;
                report.result("jet_codim", jet.codim);
                report.certify("jet_codim", Certification::JetOrder(jet.certified_order));
                report.result("agrees", jet.codim == c.value);
            }
        }
        Cmd::Versal { a, verify } => {
            let (f, opsu, g) = augmentation_inputs(&env, a, report)?;
            let aug = AugmentedGerm::new(&f, &opsu, &g, SubstantialFlag { asserted: a.substantial }, budget)?;
            let v = build_versal(&aug)?;
            report.result("augmentation", aug.result.to_string());
            report.result("codim", aug.codim.value);
            report.certify("codim", Certification::Formula("f_codim * tau".into()));
            report.result("parameters", strings(v.param_names()));
            report.result("unfolding", v.to_string());
            report.result("tau_basis", strings(aug.tau_basis.iter().map(|m| m.display_in(g.ctx()))));
            report.result("gamma_basis", strings(&aug.gamma_basis));
            if *verify {
                report.result("versal", verify_versal(&aug, &v, budget.map)?);
            }
        }
        Cmd::Simple(s) => {
            let g = env.function(&s.g, s.g_vars.as_deref())?;
            report.input("g", g.to_string());
            let simplicity = match &s.map {
                Some(m) => {
                    let f = env.map_germ(m, s.map_vars.as_deref())?;
                    report.input("f", f.to_string());
                    let opsu = env.opsu(&f, s.opsu.as_deref(), s.param.as_deref())?;
                    let fc = ae_codim(&f, budget.map)?;
                    report.result("f_codim", fc.codim);
                    report.certify("f_codim", Certification::JetOrder(fc.certified_order));
                    let f_simple = s.f_simple.or_else(|| known_simplicity(&f, fc.codim, &env.catalog));
                    let theorem = decide_simplicity(fc.codim, f_simple, &g, budget.function)?;
                    let result = augment(&f, &opsu, &g)?;
                    report.result("augmentation", result.to_string());
                    resolve_with_catalog(theorem, &result, &env.catalog)
                }
                None => {
                    let fc = s.f_codim.expect("clap requires --map or --f-codim");
                    report.input("f_codim", fc);
                    if let Some(b) = s.f_simple {
                        report.input("f_simple", b);
                    }
                    let theorem = decide_simplicity(fc, s.f_simple, &g, budget.function)?;
                    germforge_core::simplicity::SimplicityReport {
                        verdict: theorem.clone(),
                        theorem,
                        catalog_entry: None,
                        catalog_simple: None,
                        consistent: true,
                    }
                }
            };
            report.result("status", format!("{:?}", simplicity.verdict.status));
            report.result("justification", simplicity.verdict.justification.to_string());
            report.result("theorem_verdict", simplicity.theorem.to_string());
            report.result("catalog_entry", simplicity.catalog_entry.clone());
            report.result("consistent", simplicity.consistent);
            if simplicity.verdict.status == Status::Unknown {
                report.warn("Unknown", "neither the theorems nor the catalog decide simplicity");
            }
            if !simplicity.consistent {
                report.warn("Inconsistent", "a theorem and the catalog disagree");
            }
        }
        Cmd::Modality(m) => {
            let g = env.function(&m.g, m.g_vars.as_deref())?;
            report.input("g", g.to_string());
            let fc = match &m.map {
                Some(text) => {
                    let f = env.map_germ(text, m.map_vars.as_deref())?;
                    report.input("f", f.to_string());
                    let c = ae_codim(&f, budget.map)?;
                    report.result("f_codim", c.codim);
                    report.certify("f_codim", Certification::JetOrder(c.certified_order));
                    c.codim
                }
                None => {
                    let fc = m.f_codim.expect("clap requires --map or --f-codim");
                    report.input("f_codim", fc);
                    fc
                }
            };
            let modality = modality_of_augmentation(fc, &g, m.mu_constant_qh, budget.function)?;
            report.result("modality", modality.to_string());
            if modality == germforge_core::ade::Modality::Unknown {
                report.warn("Unknown", "the modality is only known for codimension-one f with a mu-constant quasihomogeneous g");
            }
        }
        Cmd::Table44 { extended } => {
            let which = if *extended { TableInstances::extended() } else { TableInstances::standard() };
            let rows = generate_table44(&env.catalog, budget, &which)?;
            report.input("instances", if *extended { "extended" } else { "standard" });
            report.result("rows", serde_json::to_value(&rows).expect("table rows serialize"));
            let all_match = rows.iter().flat_map(|r| &r.instances).all(|i| i.matches_formula());
            report.result("all_codims_match_formulas", all_match);
            if rows.iter().flat_map(|r| &r.instances).any(|i| !i.simplicity.consistent) {
                report.warn("Inconsistent", "a theorem and the catalog disagree on some instance");
            }
            report.warn("Conjecture", TABLE44_CONJECTURE);
            return Ok(Some(table_text(&rows, all_match)));
        }
        Cmd::Catalog { cmd } => match cmd {
            CatalogCmd::List => {
                let entries: Vec<Value> = env
                    .catalog
                    .entries()
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "family": e.family,
                            "dims": format!("{} -> {}", e.dims.0, e.dims.1),
                            "codim": e.codim,
                            "simple": e.simple,
                            "normal_form": e.germ.to_string(),
                        })
                    })
                    .collect();
                report.result("entries", entries);
            }
            CatalogCmd::Show { name } => {
                let e = env.catalog.get(name).ok_or_else(|| CliError::Usage(format!("no catalog entry `{name}`")))?;
                report.result("name", e.name.clone());
                report.result("family", e.family.clone());
                report.result("dims", format!("{} -> {}", e.dims.0, e.dims.1));
                report.result("normal_form", e.germ.to_string());
                report.result("codim", e.codim);
                report.result("codim_formula", e.codim_formula.clone());
                report.result("simple", e.simple);
                report.result("opsu", e.opsu.as_ref().map(|u| u.to_string()));
                report.result("source", e.source.clone());
            }
        },
    }
    Ok(None)
}

fn augmentation_inputs(env: &Env, a: &AugArgs, report: &mut Report) -> CliResult<(MapGerm, Opsu, Polynomial)> {
    let f = env.map_germ(&a.map.map, a.map.map_vars.as_deref())?;
    let g = env.function(&a.g, a.g_vars.as_deref())?;
    let opsu = env.opsu(&f, a.opsu.as_deref(), a.param.as_deref())?;
    report.input("f", f.to_string());
    report.input("opsu", opsu.unfolding().to_string());
    report.input("g", g.to_string());
    Ok((f, opsu, g))
}

fn table_text(rows: &[TableEntry], all_match: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<6} {:<48} {:<7} {}\n", "type", "normal form", "codim", "constraints"));
    for r in rows {
        out.push_str(&format!("{:<6} {:<48} {:<7} {}\n", r.family, r.normal_form, r.codim_formula, r.constraints));
        for i in &r.instances {
            out.push_str(&format!(
                "       {:<6} {:<9} codim {} (jet {} at order {}, formula {})  {}\n",
                i.tag,
                i.parameter,
                i.codim(),
                i.jet_codim,
                i.jet_certified_order,
                i.formula_value,
                i.simplicity.verdict
            ));
        }
    }
    out.push_str(&format!("all codimensions match their formulas: {all_match}\n"));
    out.push_str(TABLE44_CONJECTURE);
    out.push('\n');
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut report = Report::new(std::env::args().skip(1).collect());
    let outcome = run(&cli, &mut report);
    match outcome {
        Ok(text) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", text.unwrap_or_else(|| report.to_text()));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {}", e.message());
            if cli.json {
                report.error = Some(ErrorReport { kind: e.kind(), message: e.message(), exit_code: code });
                println!("{}", report.to_json());
            }
            ExitCode::from(code as u8)
        }
    }
}
