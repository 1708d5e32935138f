//! Command-line front end.
//!
//! Subcommands mirror the library modules: `classify` for two-generator
//! representations, `whitehead` and `volume` for the one-parameter family
//! and its volumes, `orbit` for horoball enumeration, and `verify` for the
//! claim registry. Exit codes: 0 on success, 1 when a verification check
//! fails, 2 on input or usage errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use hypants::horoball::{orbit_enumerate_detailed, GroupGenerators};
use hypants::moebius::MoebiusTransform;
use hypants::pantsrep::{classify_pants_rep, PantsRepresentation};
use hypants::report::FullReport;
use hypants::svg::render_diagram;
use hypants::tol::Tol;
use hypants::verify::run_claims;
use hypants::whitehead::{build_rho, tet_volume, whitehead_volume, TetShape, WhiteheadRep};

#[derive(Parser)]
#[command(
    name = "hypants",
    version,
    about = "Horoball packings and parabolic two-generator representations"
)]
struct Cli {
    /// Numeric tolerance; overrides the HYPANTS_EPS environment variable.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a representation with parabolic peripheral images.
    Classify {
        /// JSON file with {"c1": {"m": ...}, "c2": {"m": ...}}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Build the one-parameter representation at a given parameter.
    Whitehead {
        /// Parameter as RE,IM (or a bare real).
        #[arg(long, value_parser = parse_complex)]
        a: Complex64,
        /// Also report the defining-relation residuals (exit 1 when they
        /// exceed the tolerance).
        #[arg(long)]
        check_relations: bool,
        /// Evaluate a word in c1, c2, q (tokens separated by spaces,
        /// inverses as c1^-1).
        #[arg(long)]
        word: Option<String>,
    },
    /// Ideal-tetrahedron volumes for a shape parameter.
    Volume {
        /// Shape as RE,IM (or a bare real).
        #[arg(long, value_parser = parse_complex)]
        x: Complex64,
    },
    /// Enumerate the horoball orbit of a finitely generated group.
    Orbit {
        /// Group JSON: {"generators": [{"name", "m"}, ...], "lattice": {"t1", "t2"}}.
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        cutoff: f64,
        #[arg(long, default_value_t = 16)]
        max_word_len: usize,
        /// Also write a diagram of the result.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run registered claims and emit a JSON report.
    Verify {
        /// "all" or a comma-separated list of claim ids.
        #[arg(long, default_value = "all")]
        claims: String,
        /// Write the report JSON here as well as to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory for diagram output.
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("not a number: {s:?}"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err(format!("expected RE or RE,IM, got {text:?}")),
    }
}

fn resolve_tol(flag: Option<f64>) -> Tol {
    match flag {
        Some(eps) => Tol(eps),
        None => Tol::from_env(),
    }
}

fn main() {
    let cli = Cli::parse();
    let tol = resolve_tol(cli.epsilon);
    match dispatch(cli.command, tol) {
        Ok(code) => std::process::exit(code),
        Err(message) => {
            eprintln!("hypants: {message}");
            std::process::exit(2);
        }
    }
}

fn dispatch(command: Command, tol: Tol) -> Result<i32, String> {
    match command {
        Command::Classify { input } => classify_cmd(&input, tol),
        Command::Whitehead {
            a,
            check_relations,
            word,
        } => whitehead_cmd(a, check_relations, word.as_deref(), tol),
        Command::Volume { x } => volume_cmd(x),
        Command::Orbit {
            group,
            cutoff,
            max_word_len,
            svg,
        } => orbit_cmd(&group, cutoff, max_word_len, svg.as_deref(), tol),
        Command::Verify {
            claims,
            report,
            svg_dir,
        } => verify_cmd(&claims, report.as_deref(), svg_dir.as_deref(), tol),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn print_json(value: &impl serde::Serialize) {
    use std::io::Write as _;
    let text = serde_json::to_string_pretty(value).expect("report values serialize");
    // Ignore broken pipes so `hypants ... | head` exits quietly.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn classify_cmd(input: &Path, tol: Tol) -> Result<i32, String> {
    let rep: PantsRepresentation = read_json(input)?;
    let normal_form = classify_pants_rep(&rep, tol).map_err(|e| e.to_string())?;
    print_json(&normal_form);
    Ok(0)
}

fn whitehead_cmd(
    a: Complex64,
    check_relations: bool,
    word: Option<&str>,
    tol: Tol,
) -> Result<i32, String> {
    let rho = build_rho(a).map_err(|e| e.to_string())?;
    let mut output = json!({
        "a": [a.re, a.im],
        "c1": rho.c1,
        "c2": rho.c2,
        "q": rho.q,
    });
    let mut exit = 0;
    if check_relations {
        let r1 = rho.relation_r1_residual();
        let r2 = rho.relation_r2_residual();
        let hold = rho.relations_hold(tol);
        output["r1_residual"] = json!(r1);
        output["r2_residual"] = json!(r2);
        output["relations_hold"] = json!(hold);
        if !hold {
            exit = 1;
        }
    }
    if let Some(word) = word {
        let m = evaluate_word(&rho, word)?;
        let class = m.classify(tol);
        output["word"] = json!({
            "matrix": m,
            "tag": class.tag,
            "trace": [class.trace.re, class.trace.im],
        });
    }
    print_json(&output);
    Ok(exit)
}

fn evaluate_word(rho: &WhiteheadRep, word: &str) -> Result<MoebiusTransform, String> {
    let mut product = MoebiusTransform::identity();
    for token in word.split_whitespace() {
        let (name, inverted) = match token.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (token, false),
        };
        let letter = match name.to_ascii_lowercase().as_str() {
            "c1" => rho.c1,
            "c2" => rho.c2,
            "q" => rho.q,
            _ => return Err(format!("unknown word letter {token:?} (use c1, c2, q)")),
        };
        let letter = if inverted { letter.inverse() } else { letter };
        product = product.compose(&letter);
    }
    Ok(product)
}

fn volume_cmd(x: Complex64) -> Result<i32, String> {
    let shape = TetShape::new(x).map_err(|e| e.to_string())?;
    let own = tet_volume(&shape);
    let companion = tet_volume(&shape.companion());
    let total = whitehead_volume(&shape);
    print_json(&json!({
        "tet_volume": own,
        "companion": companion,
        "total": total,
    }));
    Ok(0)
}

fn orbit_cmd(
    group_path: &Path,
    cutoff: f64,
    max_word_len: usize,
    svg: Option<&Path>,
    tol: Tol,
) -> Result<i32, String> {
    let group: GroupGenerators = read_json(group_path)?;
    let orbit =
        orbit_enumerate_detailed(&group, cutoff, max_word_len, tol).map_err(|e| e.to_string())?;
    if let Some(path) = svg {
        let balls: Vec<_> = orbit.iter().map(|o| o.ball).collect();
        render_diagram(&balls, &group.lattice, path).map_err(|e| e.to_string())?;
    }
    print_json(&json!({
        "cutoff": cutoff,
        "max_word_len": max_word_len,
        "count": orbit.len(),
        "balls": orbit,
    }));
    Ok(0)
}

fn verify_cmd(
    claims: &str,
    report_path: Option<&Path>,
    svg_dir: Option<&Path>,
    tol: Tol,
) -> Result<i32, String> {
    let selected: Option<Vec<String>> = if claims == "all" {
        None
    } else {
        Some(claims.split(',').map(|s| s.trim().to_string()).collect())
    };
    let reports =
        run_claims(selected.as_deref(), tol).map_err(|e| e.to_string())?;
    let full = FullReport::from_claims(reports);
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&full).expect("report serializes")
    );
    {
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), "{text}");
    }
    if let Some(path) = report_path {
        std::fs::write(path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if let Some(dir) = svg_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        write_reference_diagram(&dir.join("rigid-orbit.svg"), tol)?;
    }
    Ok(if full.has_failures() { 1 } else { 0 })
}

/// The standard picture: orbit of the rigid pair's group at cutoff 0.1.
fn write_reference_diagram(path: &Path, tol: Tol) -> Result<(), String> {
    use hypants::horoball::{orbit_enumerate, CuspLattice};
    use hypants::pantsrep::{rigid_c1, rigid_c2};
    let lattice = CuspLattice::new(Complex64::new(2.0, 0.0), Complex64::new(0.0, 2.0))
        .map_err(|e| e.to_string())?;
    let group = GroupGenerators::new(
        vec![
            ("C1".to_string(), rigid_c1()),
            ("C2".to_string(), rigid_c2()),
        ],
        lattice,
    );
    let balls = orbit_enumerate(&group, 0.1, 16, tol).map_err(|e| e.to_string())?;
    render_diagram(&balls, &group.lattice, path).map_err(|e| e.to_string())
}
