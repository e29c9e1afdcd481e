//! `witt`: stabilizers, invariant rings, characteristic-polynomial
//! invariants, subgroup indices, and verification suites from the command
//! line. Every command is deterministic given its full flag set.
//!
//! Exit codes: 0 all good, 1 verification failure, 2 usage or input error,
//! 3 size-budget error.

use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use witt_core::action::{adjoint_action, LieAction};
use witt_core::catalog::{self, CatalogEntry};
use witt_core::constant::ConstantGroupAction;
use witt_core::error::Error;
use witt_core::field::{Elt, Field};
use witt_core::invariants::{check_generation, invariants_up_to_degree};
use witt_core::poly::{Polynomial, VarScheme};
use witt_core::psi::{char_poly_invariants_at, char_poly_invariants_symbolic};
use witt_core::verify::{all_passed, render_text, render_tsv, run_suite, Suite};
use witt_core::wn::WnAlgebra;

#[derive(Parser)]
#[command(
    name = "witt",
    about = "Exact desk-scale invariant theory of restricted Lie algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Emit {
    Tsv,
    Text,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format for tables.
    #[arg(long, value_enum, default_value = "tsv")]
    emit: Emit,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic-polynomial invariants of a Jacobson-Witt algebra.
    Charpoly {
        /// Catalog name, e.g. W:1:2.
        #[arg(long)]
        cat: String,
        /// Print the symbolic invariants (default when no point is given).
        #[arg(long)]
        symbolic: bool,
        /// Evaluate at a point: comma-separated coordinates.
        #[arg(long)]
        point: Option<String>,
        /// Extension degree for point coordinates.
        #[arg(long, default_value_t = 1)]
        ext: usize,
        /// Allow the largest (9x9) symbolic computation.
        #[arg(long)]
        force_symbolic: bool,
    },
    /// Per-degree invariant dimensions, optionally with a generation check.
    Invariants {
        /// Catalog name (W:n:p adjoint action, or counterexample:2.remark).
        #[arg(long, conflicts_with_all = ["action", "group"])]
        cat: Option<String>,
        /// Lie action file.
        #[arg(long)]
        action: Option<PathBuf>,
        /// Constant-group action file.
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        /// `psi` for the built-in invariants, or a file of polynomials
        /// (one per line, written in the action's variables).
        #[arg(long)]
        generators: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stabilizer of a rational point under a catalog or file action.
    Stabilizer {
        #[arg(long, conflicts_with = "action")]
        cat: Option<String>,
        #[arg(long)]
        action: Option<PathBuf>,
        /// Comma-separated coordinates.
        #[arg(long)]
        point: String,
        /// Extension degree for the coordinates.
        #[arg(long, default_value_t = 1)]
        ext: usize,
        /// Known maximal codimension to compare against; sampled when absent.
        #[arg(long)]
        c: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Sampled regular-locus sweep: per-point codimensions and the max.
    Regular {
        #[arg(long, conflicts_with = "action")]
        cat: Option<String>,
        #[arg(long)]
        action: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extension degree for sampling.
        #[arg(long, default_value_t = 4)]
        ext: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named verification suite.
    Verify {
        /// hochschild, charpoly, wn-invariants, index, torus,
        /// counterexample, premet, or all.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Budget(_) => 3,
        Error::Structure(_) | Error::VanishingPattern(_) => 1,
        _ => 2,
    }
}

fn emit_output(output: &OutputArgs, content: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn witt_from_catalog(name: &str) -> Result<WnAlgebra, Error> {
    match catalog::resolve(name)? {
        CatalogEntry::Witt(w) => Ok(w),
        _ => Err(Error::InvalidInput(format!(
            "`{name}` is not a Jacobson-Witt catalog entry"
        ))),
    }
}

fn parse_point(field: &Arc<Field>, text: &str, expected: usize) -> Result<Vec<Elt>, Error> {
    let coords: Vec<Elt> = text
        .split(',')
        .map(|c| field.parse_elt(c))
        .collect::<Result<_, _>>()?;
    if coords.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, expected {expected}",
            coords.len()
        )));
    }
    Ok(coords)
}

fn format_point(field: &Arc<Field>, point: &[Elt]) -> String {
    point
        .iter()
        .map(|e| field.format_elt(*e))
        .collect::<Vec<_>>()
        .join(",")
}

enum ResolvedAction {
    Lie(LieAction),
    Constant(ConstantGroupAction),
}

fn resolve_action(
    cat: &Option<String>,
    action: &Option<PathBuf>,
    group: &Option<PathBuf>,
) -> Result<ResolvedAction, Error> {
    if let Some(name) = cat {
        return match catalog::resolve(name)? {
            CatalogEntry::Witt(w) => Ok(ResolvedAction::Lie(adjoint_action(&w)?)),
            CatalogEntry::Constant(c) => Ok(ResolvedAction::Constant(c)),
            CatalogEntry::Lie(_) => Err(Error::InvalidInput(format!(
                "`{name}` has no attached action; use a W:n:p entry or a file"
            ))),
        };
    }
    if let Some(path) = action {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        return Ok(ResolvedAction::Lie(LieAction::parse(&text)?));
    }
    if let Some(path) = group {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        return Ok(ResolvedAction::Constant(
            witt_core::constant::parse_constant_action(&text)?,
        ));
    }
    Err(Error::InvalidInput(
        "one of --cat, --action, --group is required".into(),
    ))
}

fn resolve_lie_action(
    cat: &Option<String>,
    action: &Option<PathBuf>,
) -> Result<LieAction, Error> {
    match resolve_action(cat, action, &None)? {
        ResolvedAction::Lie(a) => Ok(a),
        ResolvedAction::Constant(_) => Err(Error::InvalidInput(
            "this command needs a Lie algebra action".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Charpoly {
            cat,
            symbolic: _,
            point,
            ext,
            force_symbolic,
        } => {
            let w = witt_from_catalog(&cat)?;
            match point {
                Some(text) => {
                    let field = Field::extension(w.p(), ext)?;
                    let coords = parse_point(&field, &text, w.dim())?;
                    let values = char_poly_invariants_at(&w, &field, &coords)?;
                    for (i, v) in values.iter().enumerate() {
                        println!("psi_{i} = {}", field.format_elt(*v));
                    }
                }
                None => {
                    let psi = char_poly_invariants_symbolic(&w, force_symbolic)?;
                    for (i, f) in psi.psi.iter().enumerate() {
                        println!("psi_{i} = {}", f.format_with(VarScheme::Xi0));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants {
            cat,
            action,
            group,
            max_degree,
            generators,
            output,
        } => {
            let resolved = resolve_action(&cat, &action, &group)?;
            let content = match resolved {
                ResolvedAction::Lie(a) => {
                    let gens = load_generators(&a, &cat, &generators)?;
                    invariants_table(&a, gens.as_deref(), max_degree, output.emit)?
                }
                ResolvedAction::Constant(c) => {
                    if generators.is_some() {
                        return Err(Error::InvalidInput(
                            "generation checks apply to Lie algebra actions".into(),
                        ));
                    }
                    constant_invariants_table(&c, max_degree, output.emit)?
                }
            };
            emit_output(&output, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stabilizer {
            cat,
            action,
            point,
            ext,
            c,
            seed,
            samples,
        } => {
            let a = resolve_lie_action(&cat, &action)?;
            let field = Field::extension(a.field().characteristic(), ext)?;
            let coords = parse_point(&field, &point, a.nvars())?;
            let st = a.stabilizer(&field, &coords)?;
            let c_ref = match c {
                Some(c) => c,
                None => a.estimate_codim(seed, samples, 4)?.estimate,
            };
            println!("point: {}", format_point(&field, &coords));
            println!("codim: {}", st.codim);
            println!("stabilizer basis ({} vectors):", st.kernel_basis.rows());
            for r in 0..st.kernel_basis.rows() {
                println!("  {}", format_point(&field, st.kernel_basis.row(r)));
            }
            println!(
                "regular: {} (c = {c_ref})",
                if st.codim == c_ref { "yes" } else { "no" }
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Regular {
            cat,
            action,
            samples,
            seed,
            ext,
            output,
        } => {
            let a = resolve_lie_action(&cat, &action)?;
            let report = a.estimate_codim(seed, samples, ext)?;
            let field = Field::extension(a.field().characteristic(), ext)?;
            let content = match output.emit {
                Emit::Tsv => {
                    let mut s = String::from("sample_index\tpoint\tcodim\n");
                    for (idx, point, codim) in &report.per_point {
                        writeln!(s, "{idx}\t{}\t{codim}", format_point(&field, point)).unwrap();
                    }
                    writeln!(s, "# c = {}", report.estimate).unwrap();
                    writeln!(s, "# witness = {}", format_point(&field, &report.witness))
                        .unwrap();
                    s
                }
                Emit::Text => {
                    let mut s = String::new();
                    writeln!(
                        s,
                        "sampled {} points over F_{{{}^{}}}: max codim = {}",
                        samples,
                        a.field().characteristic(),
                        ext,
                        report.estimate
                    )
                    .unwrap();
                    writeln!(s, "witness: {}", format_point(&field, &report.witness)).unwrap();
                    s
                }
            };
            emit_output(&output, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            seed,
            output,
        } => {
            let suite = Suite::parse(&suite)?;
            let results = run_suite(suite, seed);
            let content = match output.emit {
                Emit::Tsv => render_tsv(&results),
                Emit::Text => render_text(&results),
            };
            emit_output(&output, &content)?;
            if all_passed(&results) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

/// `--generators psi` resolves the symbolic invariants of a W:n:p entry;
/// anything else is a path to a file of polynomials, one per line.
fn load_generators(
    action: &LieAction,
    cat: &Option<String>,
    generators: &Option<String>,
) -> Result<Option<Vec<Polynomial>>, Error> {
    let Some(spec) = generators else {
        return Ok(None);
    };
    if spec == "psi" {
        let Some(name) = cat else {
            return Err(Error::InvalidInput(
                "--generators psi needs a W:n:p catalog action".into(),
            ));
        };
        let w = witt_from_catalog(name)?;
        let psi = char_poly_invariants_symbolic(&w, false)?;
        return Ok(Some(psi.psi));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
    let polys = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            Polynomial::parse(
                action.field().clone(),
                action.nvars(),
                action.var_scheme(),
                l,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(polys))
}

fn invariants_table(
    action: &LieAction,
    generators: Option<&[Polynomial]>,
    max_degree: u32,
    emit: Emit,
) -> Result<String, Error> {
    let rows: Vec<(String, String, String, String)> = match generators {
        Some(gens) => {
            let report = check_generation(action, gens, max_degree)?;
            report
                .rows
                .iter()
                .map(|r| {
                    (
                        r.degree.to_string(),
                        r.dim_invariants.to_string(),
                        r.dim_generated.to_string(),
                        if r.dim_invariants == r.dim_generated {
                            "generated".to_string()
                        } else {
                            "not-generated".to_string()
                        },
                    )
                })
                .collect()
        }
        None => {
            let inv = invariants_up_to_degree(action, max_degree)?;
            inv.degree_dims()
                .iter()
                .enumerate()
                .map(|(d, dim)| (d.to_string(), dim.to_string(), "-".into(), "-".into()))
                .collect()
        }
    };
    Ok(render_invariant_rows(&rows, emit))
}

fn constant_invariants_table(
    action: &ConstantGroupAction,
    max_degree: u32,
    emit: Emit,
) -> Result<String, Error> {
    use witt_core::constant::Target;
    let rows: Vec<(String, String, String, String)> = match action.target() {
        Target::Quotient { .. } => {
            let inv = action.invariants_full()?;
            vec![(
                "full".into(),
                inv.len().to_string(),
                "-".into(),
                "-".into(),
            )]
        }
        Target::Poly { .. } => {
            let inv = action.invariants_graded(max_degree)?;
            inv.degree_dims()
                .iter()
                .enumerate()
                .map(|(d, dim)| (d.to_string(), dim.to_string(), "-".into(), "-".into()))
                .collect()
        }
    };
    Ok(render_invariant_rows(&rows, emit))
}

fn render_invariant_rows(rows: &[(String, String, String, String)], emit: Emit) -> String {
    match emit {
        Emit::Tsv => {
            let mut s = String::from("degree\tdim_invariant\tdim_generated\tverdict\n");
            for (d, i, g, v) in rows {
                writeln!(s, "{d}\t{i}\t{g}\t{v}").unwrap();
            }
            s
        }
        Emit::Text => {
            let mut s = String::new();
            for (d, i, g, v) in rows {
                if g == "-" {
                    writeln!(s, "degree {d}: {i} invariants").unwrap();
                } else {
                    writeln!(s, "degree {d}: {i} invariants, {g} generated ({v})").unwrap();
                }
            }
            s
        }
    }
}
