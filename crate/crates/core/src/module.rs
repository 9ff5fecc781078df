//! Loading proof modules from disk: parse a `.mml` file, build the mode
//! theory from its imports, resolve the declarations, and check them.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::checker::{CheckOptions, Checker, Derivation, TypeError};
use crate::lex::Span;
use crate::mode_theory::{parse_mtt, BuildOptions, ModeTheory, Presentation};
use crate::syntax::parse::parse_mml;
use crate::syntax::resolve::{resolve_module, Module};

/// A fatal loading problem: the program could not even be checked.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}:{col}: {message}")]
    Parse {
        path: PathBuf,
        line: u32,
        col: u32,
        message: String,
    },
    #[error("{path}: {message}")]
    Theory { path: PathBuf, message: String },
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    pub check: CheckOptions,
    pub unsafe_rewriting: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Postulate,
    Thm,
}

/// The result of checking one declaration.  Postulates carry no derivation.
#[derive(Debug)]
pub struct CheckedDecl {
    pub name: String,
    pub kind: DeclKind,
    pub span: Span,
    pub outcome: Result<Option<Derivation>, TypeError>,
}

#[derive(Debug)]
pub struct LoadedProgram {
    pub path: PathBuf,
    pub theory: ModeTheory,
    pub module: Module,
    pub decls: Vec<CheckedDecl>,
}

impl LoadedProgram {
    pub fn all_ok(&self) -> bool {
        self.decls.iter().all(|d| d.outcome.is_ok())
    }

    /// A checker over this program's theory with its postulates declared.
    pub fn checker(&self, opts: CheckOptions) -> Result<Checker<'_>, TypeError> {
        let mut checker = Checker::new(&self.theory, opts);
        for p in &self.module.postulates {
            checker.declare_postulate(&p.name, p.scheme.clone(), p.mode.clone())?;
        }
        Ok(checker)
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Load and build a mode theory from a `.mtt` file.
pub fn load_theory(path: &Path, opts: BuildOptions) -> Result<ModeTheory, LoadError> {
    let text = read(path)?;
    let pres = parse_mtt(&text).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        line: e.span.line,
        col: e.span.col,
        message: e.message,
    })?;
    pres.build(opts).map_err(|e| LoadError::Theory {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn merge(into: Presentation, other: Presentation) -> Presentation {
    let mut out = into;
    out.modes.extend(other.modes);
    out.generators.extend(other.generators);
    out.equations.extend(other.equations);
    out.cells.extend(other.cells);
    out.cell_equations.extend(other.cell_equations);
    out.classical_modes.extend(other.classical_modes);
    out
}

/// Load a `.mml` proof module: resolve its imports relative to its own
/// directory, build the combined mode theory, and check every declaration.
/// Declaration failures are reported per declaration in the result; only
/// I/O, parse, and theory-construction problems are `LoadError`s.
pub fn load_program(path: &Path, opts: LoadOptions) -> Result<LoadedProgram, LoadError> {
    let text = read(path)?;
    let surface = parse_mml(&text).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        line: e.span.line,
        col: e.span.col,
        message: e.message,
    })?;

    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut pres = Presentation::new();
    for (import, span) in &surface.imports {
        let import_path = dir.join(import);
        let text = read(&import_path)?;
        let imported = parse_mtt(&text).map_err(|e| LoadError::Parse {
            path: import_path.clone(),
            line: e.span.line,
            col: e.span.col,
            message: e.message,
        })?;
        let _ = span;
        pres = merge(pres, imported);
    }
    let theory = pres
        .build(BuildOptions {
            unsafe_rewriting: opts.unsafe_rewriting,
        })
        .map_err(|e| LoadError::Theory {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;

    let module = resolve_module(&theory, &surface).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        line: e.span.line,
        col: e.span.col,
        message: e.message,
    })?;

    let mut checker = Checker::new(&theory, opts.check);
    let mut decls = Vec::new();
    for p in &module.postulates {
        let outcome = checker
            .declare_postulate(&p.name, p.scheme.clone(), p.mode.clone())
            .map(|()| None);
        decls.push(CheckedDecl {
            name: p.name.clone(),
            kind: DeclKind::Postulate,
            span: p.span,
            outcome,
        });
    }
    for t in &module.thms {
        let outcome = checker.check_thm(&t.term, &t.ty, &t.mode).map(Some);
        decls.push(CheckedDecl {
            name: t.name.clone(),
            kind: DeclKind::Thm,
            span: t.span,
            outcome,
        });
    }
    // Report in source order.
    decls.sort_by_key(|d| (d.span.line, d.span.col));

    drop(checker);
    Ok(LoadedProgram {
        path: path.to_path_buf(),
        theory,
        module,
        decls,
    })
}
