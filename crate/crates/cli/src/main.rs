//! `modalcheck`: check proof modules, search for 2-cells, and evaluate
//! proof terms against a mode theory.

use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use modal_core::checker::{elaborated_term, CheckOptions, Derivation};
use modal_core::judgements::WfOptions;
use modal_core::metatheory::{normalize, ReductionTrace};
use modal_core::mode_theory::{
    builtin, BuildOptions, CellQueryResult, ModalityPath, ModeTheory, SearchBudget,
};
use modal_core::module::{load_program, load_theory, DeclKind, LoadError, LoadOptions};

#[derive(Parser)]
#[command(name = "modalcheck", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CheckFlags {
    /// Maximum number of rewrite steps when searching for a 2-cell.
    #[arg(long, default_value_t = 6)]
    search_depth: usize,
    /// Maximum length of an intermediate modality word during search.
    #[arg(long, default_value_t = 8)]
    max_word_length: usize,
    /// Require each atom to be used at a single mode.
    #[arg(long)]
    strict_atoms: bool,
    /// Accept mode theories whose equations cannot be oriented into a
    /// confluent rewriting system (word equality may become Unknown).
    #[arg(long)]
    unsafe_rewriting: bool,
}

impl CheckFlags {
    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            check: CheckOptions {
                budget: SearchBudget {
                    max_depth: self.search_depth,
                    max_word_len: self.max_word_length,
                },
                wf: WfOptions {
                    strict_atoms: self.strict_atoms,
                },
            },
            unsafe_rewriting: self.unsafe_rewriting,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every declaration in the given proof modules.
    Check {
        paths: Vec<PathBuf>,
        /// Emit the checked declarations and their derivations as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        flags: CheckFlags,
    },
    /// Search for a 2-cell between two modality words in a theory.
    Cells {
        /// Path to a `.mtt` file, or the name of a built-in theory.
        theory: String,
        /// Source modality word, e.g. `box.box` or `1`.
        from: String,
        /// Target modality word.
        to: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        max_word_length: usize,
        #[arg(long)]
        unsafe_rewriting: bool,
    },
    /// Check a declaration, then reduce its proof term to normal form.
    Eval {
        path: PathBuf,
        decl: String,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
        /// Stop at weak head normal form: do not reduce under λ or box.
        #[arg(long)]
        weak: bool,
        /// Emit the reduction trace as JSON.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        flags: CheckFlags,
    },
}

/// One machine-readable problem report.
#[derive(Serialize, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Diagnostic {
    file: String,
    line: u32,
    col: u32,
    severity: &'static str,
    code: &'static str,
    message: String,
}

fn color_enabled() -> bool {
    match std::env::var("MODALCHECK_COLOR").as_deref() {
        Ok("always") => true,
        Ok("never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn emit(diag: &Diagnostic) {
    let label = if color_enabled() {
        format!("\x1b[31m{}\x1b[0m", diag.severity)
    } else {
        diag.severity.to_string()
    };
    eprintln!(
        "{}:{}:{}: {label}[{}]: {}",
        diag.file, diag.line, diag.col, diag.code, diag.message
    );
}

fn load_error_diag(err: &LoadError) -> Diagnostic {
    match err {
        LoadError::Io { path, message } => Diagnostic {
            file: path.display().to_string(),
            line: 0,
            col: 0,
            severity: "error",
            code: "io",
            message: message.clone(),
        },
        LoadError::Parse {
            path,
            line,
            col,
            message,
        } => Diagnostic {
            file: path.display().to_string(),
            line: *line,
            col: *col,
            severity: "error",
            code: "parse",
            message: message.clone(),
        },
        LoadError::Theory { path, message } => Diagnostic {
            file: path.display().to_string(),
            line: 0,
            col: 0,
            severity: "error",
            code: "theory",
            message: message.clone(),
        },
    }
}

#[derive(Serialize)]
struct CheckedDeclJson {
    file: String,
    name: String,
    kind: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation: Option<Derivation>,
}

fn cmd_check(paths: &[PathBuf], json: bool, flags: &CheckFlags) -> u8 {
    let mut worst = 0u8;
    let mut diagnostics = Vec::new();
    let mut records = Vec::new();
    for path in paths {
        match load_program(path, flags.load_options()) {
            Err(err) => {
                diagnostics.push(load_error_diag(&err));
                worst = worst.max(2);
            }
            Ok(prog) => {
                let file = path.display().to_string();
                for decl in &prog.decls {
                    let kind = match decl.kind {
                        DeclKind::Postulate => "postulate",
                        DeclKind::Thm => "thm",
                    };
                    match &decl.outcome {
                        Ok(derivation) => records.push(CheckedDeclJson {
                            file: file.clone(),
                            name: decl.name.clone(),
                            kind,
                            status: "ok",
                            error: None,
                            derivation: derivation.clone(),
                        }),
                        Err(e) => {
                            worst = worst.max(1);
                            diagnostics.push(Diagnostic {
                                file: file.clone(),
                                line: decl.span.line,
                                col: decl.span.col,
                                severity: "error",
                                code: error_code(e),
                                message: format!("{}: {e}", decl.name),
                            });
                            records.push(CheckedDeclJson {
                                file: file.clone(),
                                name: decl.name.clone(),
                                kind,
                                status: "error",
                                error: Some(e.to_string()),
                                derivation: None,
                            });
                        }
                    }
                }
            }
        }
    }
    diagnostics.sort();
    for d in &diagnostics {
        emit(d);
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&records).unwrap());
    } else {
        for r in &records {
            if r.status == "ok" {
                println!("{}: {} {}: ok", r.file, r.kind, r.name);
            }
        }
    }
    worst
}

fn error_code(e: &modal_core::checker::TypeError) -> &'static str {
    use modal_core::checker::TypeError::*;
    match e {
        CellMissing { .. } => "cell-missing",
        Wf(_) => "wf",
        ModeTheory(_) => "mode-theory",
        NotClassical(_) => "not-classical",
        _ => "type",
    }
}

fn resolve_theory(spec: &str, unsafe_rewriting: bool) -> Result<ModeTheory, String> {
    let path = Path::new(spec);
    if path.exists() || spec.ends_with(".mtt") {
        load_theory(
            path,
            BuildOptions { unsafe_rewriting },
        )
        .map_err(|e| e.to_string())
    } else {
        builtin(spec).map_err(|e| format!("no built-in theory `{spec}`: {e}"))
    }
}

fn parse_word(mt: &ModeTheory, word: &str) -> Result<ModalityPath, String> {
    // Words are written in composition order; storage is diagrammatic.
    let factors: Vec<String> = word
        .split('.')
        .map(str::trim)
        .filter(|f| !f.is_empty() && *f != "1")
        .rev()
        .map(str::to_string)
        .collect();
    let hint = if mt.modes().len() == 1 {
        Some(&mt.modes()[0])
    } else {
        None
    };
    mt.path_from_word(&factors, hint).map_err(|e| e.to_string())
}

fn cmd_cells(
    theory: &str,
    from: &str,
    to: &str,
    depth: usize,
    max_word_length: usize,
    unsafe_rewriting: bool,
) -> u8 {
    let mt = match resolve_theory(theory, unsafe_rewriting) {
        Ok(mt) => mt,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let (from, to) = match (parse_word(&mt, from), parse_word(&mt, to)) {
        (Ok(f), Ok(t)) => (f, t),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let budget = SearchBudget {
        max_depth: depth,
        max_word_len: max_word_length,
    };
    match mt.cell_exists(&from, &to, budget) {
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
        Ok(CellQueryResult::Found(cell)) => {
            println!("Found: {cell} : {} => {}", cell.from, cell.to);
            if let Ok(map) = mt.comonad_map(&cell) {
                println!(
                    "monotone map [{}] -> [{}]: {:?}",
                    map.dom, map.cod, map.map
                );
            }
            0
        }
        Ok(CellQueryResult::NotFound) => {
            println!("NotFound");
            0
        }
        Ok(CellQueryResult::Unknown) => {
            println!(
                "Unknown (budget: depth {depth}, max word length {max_word_length})"
            );
            0
        }
    }
}

#[derive(Serialize)]
struct EvalReport {
    decl: String,
    normal_form: String,
    fuel_used: usize,
    normalized: bool,
    trace: ReductionTrace,
}

fn cmd_eval(
    path: &Path,
    decl: &str,
    fuel: usize,
    weak: bool,
    trace: bool,
    flags: &CheckFlags,
) -> u8 {
    let prog = match load_program(path, flags.load_options()) {
        Ok(prog) => prog,
        Err(e) => {
            emit(&load_error_diag(&e));
            return 2;
        }
    };
    let Some(checked) = prog.decls.iter().find(|d| d.name == decl) else {
        eprintln!("error: no declaration named `{decl}` in {}", path.display());
        return 2;
    };
    let derivation = match &checked.outcome {
        Err(e) => {
            eprintln!("error: `{decl}` does not check: {e}");
            return 1;
        }
        Ok(None) => {
            eprintln!("error: `{decl}` is a postulate; there is nothing to evaluate");
            return 2;
        }
        Ok(Some(d)) => d,
    };
    let term = elaborated_term(derivation);
    let result = normalize(&prog.theory, &derivation.mode, &term, fuel, weak);
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
        Ok((normal, steps)) => {
            if trace {
                let report = EvalReport {
                    decl: decl.to_string(),
                    normal_form: normal.to_string(),
                    fuel_used: steps.fuel_used,
                    normalized: steps.normalized,
                    trace: steps,
                };
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("{normal}");
                if !steps.normalized {
                    println!("FuelExhausted after {} steps", steps.fuel_used);
                }
            }
            0
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Check { paths, json, flags } => cmd_check(paths, *json, flags),
        Command::Cells {
            theory,
            from,
            to,
            depth,
            max_word_length,
            unsafe_rewriting,
        } => cmd_cells(theory, from, to, *depth, *max_word_length, *unsafe_rewriting),
        Command::Eval {
            path,
            decl,
            fuel,
            weak,
            trace,
            flags,
        } => cmd_eval(path, decl, *fuel, *weak, *trace, flags),
    };
    ExitCode::from(code)
}
