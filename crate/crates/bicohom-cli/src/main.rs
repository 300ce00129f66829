//! `bicohom` — exact cohomology of bounded double complexes from the
//! command line.
//!
//! Exit codes: `0` success, `1` malformed input or invocation,
//! `2` mathematically invalid input (with a report).

mod output;

use std::process::ExitCode;

use bicohom::bicomplex::Bicomplex;
use bicohom::cohomology::{self, CohomologyError, SixConditions, SpectralPage};
use bicohom::lie::{
    self, build_bicomplex, build_bicomplex_coframe, BuiltinExample, ComplexCoframePresentation,
    ComplexStructure, LieAlgebraPresentation, LieError,
};
use bicohom::linalg::{QMatrix, Scalar};
use bicohom::massey::{massey_scan, triple_massey, Dga, DgaElement};
use bicohom::schema::{self, InputDoc, RealizedInput};
use bicohom::zigzag;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use output::{
    heading, int_list, page_json, print_json, render_grid, render_page, table_grid, table_json,
};

/// Exact cohomology of bounded double complexes: the five cohomology
/// tables, spectral pages, indecomposable decomposition, the del-delbar
/// decision, degeneracy conditions, and triple (Massey) products.
#[derive(Parser)]
#[command(name = "bicohom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a JSON input document, or `builtin:<name>` for a catalog
    /// example (heisenberg, iwasawa, iwasawa-real, kodaira-thurston,
    /// torus:m).
    #[arg(long)]
    input: String,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the input: complex axioms, Jacobi identity, integrability.
    Validate(CommonArgs),
    /// De Rham, Dolbeault, conjugate-Dolbeault, Bott-Chern and Aeppli
    /// dimensions.
    Cohomology(CommonArgs),
    /// Column-filtration spectral pages until stabilization.
    Frolicher {
        #[command(flatten)]
        common: CommonArgs,
        /// Print the single page `r` instead of every computed page.
        #[arg(long)]
        page: Option<usize>,
    },
    /// Decomposition into indecomposable summands (dots, zigzags, squares).
    Zigzag(CommonArgs),
    /// Decide the del-delbar property and print the degreewise defects.
    Ddbar(CommonArgs),
    /// The six equivalent degree-k degeneracy conditions.
    #[command(name = "lemma515")]
    Lemma515 {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluate a single total degree k (default: every degree).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Triple (Massey) products: a scan for non-vanishing products, or one
    /// product of three given classes.
    Massey {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest target degree the scan examines (default: min(top, 4)).
        #[arg(long)]
        degree: Option<usize>,
        /// Three classes: `d:i,d:i,d:i` positions in the class bases, or a
        /// JSON array of `{degree, index}` / `{degree, coords: [...]}`.
        #[arg(long)]
        classes: Option<String>,
    },
    /// Ascending central series dimensions and nilpotency.
    #[command(name = "central-series")]
    CentralSeries(CommonArgs),
    /// Dimension inequalities relating the five cohomologies.
    Inequalities(CommonArgs),
}

enum CliError {
    /// Malformed input or invocation — exit 1.
    Input(String),
    /// Mathematically invalid input — exit 2 (message may already have been
    /// printed by the command itself, in which case it is empty).
    Validation(String),
}

/// Die silently on a closed pipe (`bicohom … | head`) instead of
/// panicking mid-write.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(common) => cmd_validate(&common),
        Command::Cohomology(common) => {
            let kind = load_checked(&common.input)?;
            cmd_cohomology(&common, &kind)
        }
        Command::Frolicher { common, page } => {
            let kind = load_checked(&common.input)?;
            cmd_frolicher(&common, &kind, page)
        }
        Command::Zigzag(common) => {
            let kind = load_checked(&common.input)?;
            cmd_zigzag(&common, &kind)
        }
        Command::Ddbar(common) => {
            let kind = load_checked(&common.input)?;
            cmd_ddbar(&common, &kind)
        }
        Command::Lemma515 { common, degree } => {
            let kind = load_checked(&common.input)?;
            cmd_lemma515(&common, &kind, degree)
        }
        Command::Massey {
            common,
            degree,
            classes,
        } => {
            let kind = load_checked(&common.input)?;
            cmd_massey(&common, &kind, degree, classes.as_deref())
        }
        Command::CentralSeries(common) => {
            let kind = load_checked(&common.input)?;
            cmd_central_series(&common, &kind)
        }
        Command::Inequalities(common) => {
            let kind = load_checked(&common.input)?;
            cmd_inequalities(&common, &kind)
        }
    }
}

// ---------------------------------------------------------------------------
// Input loading and semantic validation
// ---------------------------------------------------------------------------

/// A loaded input, normalized across files and builtins.
enum InputKind {
    Real {
        algebra: LieAlgebraPresentation,
        j: Option<QMatrix>,
    },
    Coframe(ComplexCoframePresentation),
    Raw(Bicomplex),
}

impl InputKind {
    /// Whether the complex comes from invariant forms on a Lie algebra.
    fn is_lie(&self) -> bool {
        !matches!(self, InputKind::Raw(_))
    }
}

/// Resolve `builtin:<name>` or read and realize a JSON document.  All
/// failures here are malformed input (exit 1), not mathematical invalidity.
fn load(spec: &str) -> Result<InputKind, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let ex = lie::builtin(name).map_err(|e| CliError::Input(e.to_string()))?;
        return Ok(match ex {
            BuiltinExample::Real {
                algebra,
                complex_structure,
            } => InputKind::Real {
                algebra,
                j: complex_structure.map(|cs| cs.matrix().clone()),
            },
            BuiltinExample::Coframe(c) => InputKind::Coframe(c),
        });
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| CliError::Input(format!("cannot read {spec}: {e}")))?;
    let doc = InputDoc::parse(&text).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(match doc.realize().map_err(|e| CliError::Input(e.to_string()))? {
        RealizedInput::Real {
            algebra,
            complex_structure,
        } => InputKind::Real {
            algebra,
            j: complex_structure,
        },
        RealizedInput::Coframe(c) => InputKind::Coframe(c),
        RealizedInput::Raw(b) => InputKind::Raw(b),
    })
}

/// The mathematical defects of a syntactically valid input: complex-axiom
/// violations for raw complexes; Jacobi, almost-complex and integrability
/// failures for Lie presentations.  Empty means valid.
fn semantic_violations(kind: &InputKind) -> Vec<String> {
    match kind {
        InputKind::Raw(b) => b.validate().iter().map(ToString::to_string).collect(),
        InputKind::Real { algebra, j } => {
            if let Some((i, jx, k)) = algebra.jacobi_check() {
                return vec![LieError::JacobiViolation { i, j: jx, k }.to_string()];
            }
            if let Some(m) = j {
                match ComplexStructure::new(m.clone()) {
                    Err(e) => return vec![e.to_string()],
                    Ok(cs) => {
                        if let Err(e) = build_bicomplex(algebra, &cs) {
                            return vec![e.to_string()];
                        }
                    }
                }
            }
            Vec::new()
        }
        InputKind::Coframe(c) => match build_bicomplex_coframe(c) {
            Ok(_) => Vec::new(),
            Err(e) => vec![e.to_string()],
        },
    }
}

/// Load, then reject mathematically invalid inputs with exit 2.
fn load_checked(spec: &str) -> Result<InputKind, CliError> {
    let kind = load(spec)?;
    let violations = semantic_violations(&kind);
    if violations.is_empty() {
        Ok(kind)
    } else {
        let mut msg = String::from("invalid input:");
        for v in &violations {
            msg.push_str("\n  - ");
            msg.push_str(v);
        }
        Err(CliError::Validation(msg))
    }
}

/// The double complex of the input; a Lie presentation needs a complex
/// structure for this.
fn bicomplex(kind: &InputKind) -> Result<Bicomplex, CliError> {
    match kind {
        InputKind::Raw(b) => Ok(b.clone()),
        InputKind::Coframe(c) => build_bicomplex_coframe(c)
            .map_err(|e| CliError::Validation(format!("invalid input:\n  - {e}"))),
        InputKind::Real { algebra, j } => {
            let m = j.as_ref().ok_or_else(|| {
                CliError::Input(
                    "the input has no complex structure (field \"J\"); \
                     this command needs the double complex"
                        .into(),
                )
            })?;
            let cs = ComplexStructure::new(m.clone())
                .map_err(|e| CliError::Validation(format!("invalid input:\n  - {e}")))?;
            build_bicomplex(algebra, &cs)
                .map_err(|e| CliError::Validation(format!("invalid input:\n  - {e}")))
        }
    }
}

/// Unwrap an engine computation that cannot fail on an input that already
/// passed validation.
fn engine<T>(r: Result<T, CohomologyError>) -> T {
    r.unwrap_or_else(|e| panic!("engine error on validated input: {e}"))
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_validate(common: &CommonArgs) -> Result<(), CliError> {
    let kind = load(&common.input)?;
    let violations = semantic_violations(&kind);
    let ok = violations.is_empty();
    if common.json {
        print_json(&json!({"ok": ok, "violations": violations}));
    } else if ok {
        println!("validation: OK");
    } else {
        println!("validation: FAILED");
        for v in &violations {
            println!("  - {v}");
        }
    }
    if ok {
        Ok(())
    } else {
        // The report already went to stdout; exit 2 with no extra message.
        Err(CliError::Validation(String::new()))
    }
}

fn cmd_cohomology(common: &CommonArgs, kind: &InputKind) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let tables = engine(cohomology::all_tables(&b));
    if common.json {
        print_json(&json!({
            "b": tables.de_rham.totals(),
            "dolbeault": table_json(&tables.dolbeault),
            "conj_dolbeault": table_json(&tables.conj_dolbeault),
            "bott_chern": table_json(&tables.bott_chern),
            "aeppli": table_json(&tables.aeppli),
            "invariant_cohomology_hypothesis": kind.is_lie(),
        }));
        return Ok(());
    }
    if kind.is_lie() {
        println!(
            "note: invariant (Chevalley-Eilenberg) cohomology of the algebra; equality"
        );
        println!("note: with the cohomology of a compact quotient is assumed, not verified.");
        println!();
    }
    println!("de Rham Betti numbers: {}", int_list(tables.de_rham.totals()));
    for (name, table) in [
        ("Dolbeault", &tables.dolbeault),
        ("conjugate Dolbeault", &tables.conj_dolbeault),
        ("Bott-Chern", &tables.bott_chern),
        ("Aeppli", &tables.aeppli),
    ] {
        println!();
        println!("{}", heading(name));
        print!("{}", render_grid(&table_grid(table)));
    }
    Ok(())
}

/// The requested page, synthesizing the stable page (with zero
/// differentials) when `r` lies beyond stabilization.
fn page_at(res: &cohomology::FrolicherResult, r: usize) -> SpectralPage {
    if let Some(p) = res.page(r) {
        SpectralPage {
            r: p.r,
            entries: p.entries.clone(),
            differential_ranks: p.differential_ranks.clone(),
        }
    } else {
        let inf = res.infinity();
        SpectralPage {
            r,
            entries: inf.entries.clone(),
            differential_ranks: inf
                .differential_ranks
                .iter()
                .map(|col| vec![0; col.len()])
                .collect(),
        }
    }
}

fn cmd_frolicher(common: &CommonArgs, kind: &InputKind, page: Option<usize>) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let res = engine(cohomology::frolicher(&b, b.pmax() + b.qmax() + 2));
    match page {
        Some(0) => Err(CliError::Input("page must be at least 1".into())),
        Some(r) => {
            let p = page_at(&res, r);
            if common.json {
                print_json(&page_json(&p));
            } else {
                print!("{}", render_page(&p));
                if r > res.stabilized_at {
                    println!("(stable since page {})", res.stabilized_at);
                }
            }
            Ok(())
        }
        None => {
            // Pages past stabilization repeat the stable page; list only up
            // to it.
            let shown = res.pages.iter().filter(|p| p.r <= res.stabilized_at);
            if common.json {
                let pages: Vec<Value> = shown.map(page_json).collect();
                print_json(&json!({
                    "stabilized_at": res.stabilized_at,
                    "pages": pages,
                }));
            } else {
                for p in shown {
                    print!("{}", render_page(p));
                    println!();
                }
                println!("stabilizes at page {}", res.stabilized_at);
            }
            Ok(())
        }
    }
}

fn cmd_zigzag(common: &CommonArgs, kind: &InputKind) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let d = engine(zigzag::decompose(&b));
    if common.json {
        print_json(&d.to_json());
    } else {
        print!("{}", d.render());
    }
    Ok(())
}

fn cmd_ddbar(common: &CommonArgs, kind: &InputKind) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let rep = engine(cohomology::satisfies_ddbar(&b));
    if common.json {
        print_json(&json!({
            "satisfies_ddbar": rep.satisfies,
            "delta": rep.delta,
        }));
    } else {
        let verdict = if rep.satisfies { "YES" } else { "NO" };
        println!("∂∂̄-lemma: {verdict}; Δ = {}", int_list(&rep.delta));
    }
    Ok(())
}

fn conditions_json(k: usize, c: &SixConditions) -> Value {
    json!({
        "k": k,
        "a": c.a,
        "b": c.b,
        "c": c.c,
        "a_star": c.a_star,
        "b_star": c.b_star,
        "c_star": c.c_star,
        "all": c.all(),
    })
}

fn conditions_line(k: usize, c: &SixConditions) -> String {
    format!(
        "k={k}: a={} b={} c={} a*={} b*={} c*={}",
        yn(c.a),
        yn(c.b),
        yn(c.c),
        yn(c.a_star),
        yn(c.b_star),
        yn(c.c_star)
    )
}

fn cmd_lemma515(common: &CommonArgs, kind: &InputKind, degree: Option<usize>) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let kmax = b.pmax() + b.qmax();
    match degree {
        Some(k) if k < 1 || k > kmax => Err(CliError::Input(format!(
            "degree {k} out of range 1..={kmax}"
        ))),
        Some(k) => {
            let c = engine(cohomology::lemma_515(&b, k));
            if common.json {
                print_json(&conditions_json(k, &c));
            } else {
                println!("{}", conditions_line(k, &c));
            }
            Ok(())
        }
        None => {
            let conds: Vec<(usize, SixConditions)> = (1..=kmax)
                .map(|k| (k, engine(cohomology::lemma_515(&b, k))))
                .collect();
            let all = conds.iter().all(|(_, c)| c.all());
            if common.json {
                let degrees: Vec<Value> =
                    conds.iter().map(|(k, c)| conditions_json(*k, c)).collect();
                print_json(&json!({"degrees": degrees, "all_degrees": all}));
            } else {
                for (k, c) in &conds {
                    println!("{}", conditions_line(*k, c));
                }
                println!("every condition at every degree: {}", yn(all));
            }
            Ok(())
        }
    }
}

fn cmd_central_series(common: &CommonArgs, kind: &InputKind) -> Result<(), CliError> {
    let InputKind::Real { algebra, .. } = kind else {
        return Err(CliError::Input(
            "the ascending central series needs real structure constants \
             (\"type\": \"real\" or a real builtin)"
                .into(),
        ));
    };
    let s = algebra.central_series();
    if common.json {
        print_json(&json!({
            "dims": s.dims,
            "nilpotent": s.is_nilpotent(),
            "step": s.step,
        }));
    } else {
        println!("ascending central series dims: {}", int_list(&s.dims));
        match s.step {
            Some(k) => println!("nilpotent: yes (step {k})"),
            None => println!("nilpotent: no"),
        }
    }
    Ok(())
}

fn cmd_inequalities(common: &CommonArgs, kind: &InputKind) -> Result<(), CliError> {
    let b = bicomplex(kind)?;
    let n = b.pmax().max(b.qmax());
    let rep = engine(cohomology::inequality_suite(&b, n));
    if common.json {
        print_json(&json!({
            "n": n,
            "bc_bound_ok": rep.bc_bound_ok,
            "gap_bound_ok": rep.gap_bound_ok,
            "ddbar_characterization_ok": rep.ddbar_characterization_ok,
            "violations": rep.violations,
        }));
    } else {
        let okfail = |b: bool| if b { "OK" } else { "VIOLATED" };
        println!("n = {n} (bounding box)");
        println!("bott-chern bound: {}", okfail(rep.bc_bound_ok));
        println!("aeppli/bott-chern gap bound: {}", okfail(rep.gap_bound_ok));
        println!(
            "ddbar characterization: {}",
            okfail(rep.ddbar_characterization_ok)
        );
        for v in &rep.violations {
            println!("  - {v}");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Massey products
// ---------------------------------------------------------------------------

fn cmd_massey(
    common: &CommonArgs,
    kind: &InputKind,
    degree: Option<usize>,
    classes: Option<&str>,
) -> Result<(), CliError> {
    let dga = match kind {
        InputKind::Raw(_) => {
            return Err(CliError::Input(
                "triple products need a multiplicative input (a Lie algebra or a \
                 coframe); a raw double complex carries no product"
                    .into(),
            ))
        }
        InputKind::Real { algebra, .. } => Dga::from_lie(algebra)
            .map_err(|e| CliError::Validation(format!("invalid input:\n  - {e}")))?,
        InputKind::Coframe(c) => Dga::from_coframe(c)
            .map_err(|e| CliError::Validation(format!("invalid input:\n  - {e}")))?,
    };
    match classes {
        Some(spec) => massey_triple(common, &dga, spec),
        None => {
            let max_degree = degree.unwrap_or_else(|| dga.top_degree().min(4));
            massey_scan_report(common, &dga, max_degree);
            Ok(())
        }
    }
}

fn massey_triple(common: &CommonArgs, dga: &Dga, spec: &str) -> Result<(), CliError> {
    let elems = parse_classes(dga, spec)?;
    let result = triple_massey(dga, &elems[0], &elems[1], &elems[2])
        .map_err(|e| CliError::Input(e.to_string()))?;
    let class_strs: Vec<String> = elems
        .iter()
        .map(|e| format!("[{}]", dga.format_element(e)))
        .collect();
    let representative = result
        .representative
        .as_ref()
        .map(|r| dga.format_element(r));
    if common.json {
        print_json(&json!({
            "classes": class_strs,
            "defined": result.defined,
            "representative": representative,
            "indeterminacy_dim": result.defined.then(|| result.indeterminacy.dim()),
            "vanishes": result.defined.then_some(result.vanishes),
        }));
        return Ok(());
    }
    println!("classes: {}", class_strs.join(", "));
    if !result.defined {
        println!("defined: no (a two-fold product is nonzero in cohomology)");
    } else {
        println!("defined: yes");
        println!(
            "representative: {}",
            representative.expect("defined products have a representative")
        );
        println!("indeterminacy dimension: {}", result.indeterminacy.dim());
        println!("vanishes: {}", yn(result.vanishes));
    }
    Ok(())
}

fn massey_scan_report(common: &CommonArgs, dga: &Dga, max_degree: usize) {
    let witnesses = massey_scan(dga, max_degree);
    if common.json {
        let arr: Vec<Value> = witnesses
            .iter()
            .map(|w| {
                json!({
                    "degrees": [w.degrees.0, w.degrees.1, w.degrees.2],
                    "indices": [w.indices.0, w.indices.1, w.indices.2],
                    "representative": w
                        .result
                        .representative
                        .as_ref()
                        .map(|r| dga.format_element(r)),
                    "indeterminacy_dim": w.result.indeterminacy.dim(),
                })
            })
            .collect();
        print_json(&json!({"max_degree": max_degree, "witnesses": arr}));
        return;
    }
    println!("scan of basis-class triples with target degree <= {max_degree}:");
    if witnesses.is_empty() {
        println!("no non-vanishing triple products found (the scan is not a formality certificate)");
        return;
    }
    for w in &witnesses {
        println!(
            "  ({}:{}, {}:{}, {}:{}): representative {}, indeterminacy dim {}",
            w.degrees.0,
            w.indices.0,
            w.degrees.1,
            w.indices.1,
            w.degrees.2,
            w.indices.2,
            dga.format_element(
                w.result
                    .representative
                    .as_ref()
                    .expect("witnesses are defined")
            ),
            w.result.indeterminacy.dim()
        );
    }
    println!("{} non-vanishing triple product(s)", witnesses.len());
}

/// Parse `--classes`: either `d:i,d:i,d:i` or a JSON array of three
/// `{degree, index}` / `{degree, coords: [...]}` objects.
fn parse_classes(dga: &Dga, spec: &str) -> Result<Vec<DgaElement>, CliError> {
    let trimmed = spec.trim();
    if trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed)
            .map_err(|e| CliError::Input(format!("cannot parse --classes as JSON: {e}")))?;
        let arr = v
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| {
                CliError::Input("--classes JSON must be an array of exactly three objects".into())
            })?;
        return arr.iter().map(|obj| class_from_json(dga, obj)).collect();
    }
    let parts: Vec<&str> = trimmed.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::Input(
            "--classes must be three comma-separated degree:index pairs or a JSON array".into(),
        ));
    }
    parts
        .iter()
        .map(|p| class_from_pair(dga, p.trim()))
        .collect()
}

fn class_from_pair(dga: &Dga, text: &str) -> Result<DgaElement, CliError> {
    let bad = || CliError::Input(format!("malformed class {text:?}: expected degree:index"));
    let (d, i) = text.split_once(':').ok_or_else(bad)?;
    let degree: usize = d.trim().parse().map_err(|_| bad())?;
    let index: usize = i.trim().parse().map_err(|_| bad())?;
    checked_basis_class(dga, degree, index)
}

fn check_class_degree(dga: &Dga, degree: usize) -> Result<(), CliError> {
    if degree < 1 || degree > dga.top_degree() {
        return Err(CliError::Input(format!(
            "class degree {degree} out of range 1..={}",
            dga.top_degree()
        )));
    }
    Ok(())
}

fn checked_basis_class(dga: &Dga, degree: usize, index: usize) -> Result<DgaElement, CliError> {
    check_class_degree(dga, degree)?;
    let betti = dga.betti(degree);
    if index >= betti {
        return Err(CliError::Input(format!(
            "class index {index} out of range: degree {degree} has {betti} classes"
        )));
    }
    Ok(dga.basis_class(degree, index))
}

fn class_from_json(dga: &Dga, v: &Value) -> Result<DgaElement, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::Input("each class must be a JSON object".into()))?;
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Input("each class needs an integer \"degree\"".into()))?
        as usize;
    if let Some(idx) = obj.get("index") {
        let index = idx
            .as_u64()
            .ok_or_else(|| CliError::Input("\"index\" must be a non-negative integer".into()))?
            as usize;
        return checked_basis_class(dga, degree, index);
    }
    let coords = obj.get("coords").and_then(Value::as_array).ok_or_else(|| {
        CliError::Input("each class needs \"index\" or \"coords\"".into())
    })?;
    check_class_degree(dga, degree)?;
    let betti = dga.betti(degree);
    if coords.len() != betti {
        return Err(CliError::Input(format!(
            "degree {degree} has {betti} classes; \"coords\" must list exactly that many scalars"
        )));
    }
    let class: Vec<Scalar> = coords
        .iter()
        .map(|c| {
            let s = c.as_str().ok_or_else(|| {
                CliError::Input("\"coords\" entries must be scalar strings".into())
            })?;
            schema::parse_scalar(s).map_err(|e| CliError::Input(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Ok(dga.canonical_representative(degree, &class))
}
