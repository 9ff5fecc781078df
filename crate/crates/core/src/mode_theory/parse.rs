//! Parser for the `.mtt` mode-theory format.
//!
//! ```text
//! mode m.
//! modality mu : n -> m.
//! eq mu . nu = xi.          -- word equation, `.` is composition, `1` the identity
//! cell alpha : mu => nu.
//! classical m.
//! builtin s4-comonad.
//! ```

use super::{builtin, Presentation};
use crate::lex::{lex, Cursor, SyntaxError, Tok};

const KEYWORDS: &[&str] = &["mode", "modality", "eq", "cell", "classical", "builtin"];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parse `.mtt` source into a raw presentation. `builtin NAME.` statements
/// splice the named built-in theory's presentation in.
pub fn parse_mtt(input: &str) -> Result<Presentation, SyntaxError> {
    let mut cur = Cursor::new(lex(input)?);
    let mut pres = Presentation::new();
    while !cur.at_end() {
        let (kw, span) = cur.expect_ident()?;
        match kw.as_str() {
            "mode" => {
                let (name, _) = cur.expect_ident()?;
                cur.expect(&Tok::Dot)?;
                pres = pres.mode(&name);
            }
            "modality" => {
                let (name, _) = cur.expect_ident()?;
                cur.expect(&Tok::Colon)?;
                let (source, _) = cur.expect_ident()?;
                cur.expect(&Tok::Arrow)?;
                let (target, _) = cur.expect_ident()?;
                cur.expect(&Tok::Dot)?;
                pres = pres.modality(&name, &source, &target);
            }
            "eq" => {
                let lhs = parse_word(&mut cur)?;
                cur.expect(&Tok::Eq)?;
                let rhs = parse_word(&mut cur)?;
                cur.expect(&Tok::Dot)?;
                pres.equations.push((lhs, rhs));
            }
            "cell" => {
                let (name, _) = cur.expect_ident()?;
                cur.expect(&Tok::Colon)?;
                let from = parse_word(&mut cur)?;
                cur.expect(&Tok::DArrow)?;
                let to = parse_word(&mut cur)?;
                cur.expect(&Tok::Dot)?;
                let froms: Vec<&str> = from.iter().map(|s| s.as_str()).collect();
                let tos: Vec<&str> = to.iter().map(|s| s.as_str()).collect();
                pres = pres.cell(&name, &froms, &tos);
            }
            "classical" => {
                let (name, _) = cur.expect_ident()?;
                cur.expect(&Tok::Dot)?;
                pres = pres.classical(&name);
            }
            "builtin" => {
                let (name, nspan) = cur.expect_ident()?;
                cur.expect(&Tok::Dot)?;
                let mt = builtin(&name).map_err(|e| SyntaxError::new(e.to_string(), nspan))?;
                splice(&mut pres, &mt);
            }
            other => {
                return Err(SyntaxError::new(
                    format!("expected a declaration keyword, found `{other}`"),
                    span,
                ))
            }
        }
    }
    Ok(pres)
}

/// A modality word, written in composition order (`a . b` means `a ∘ b`, `b`
/// applied first). Returned in diagrammatic order. `1` tokens are identities
/// and vanish.
fn parse_word(cur: &mut Cursor) -> Result<Vec<String>, SyntaxError> {
    let mut written = Vec::new();
    loop {
        match cur.next() {
            Some((Tok::Ident(s), span)) => {
                if is_keyword(&s) {
                    return Err(SyntaxError::new(
                        format!("`{s}` is a reserved word and cannot name a modality"),
                        span,
                    ));
                }
                written.push(s);
            }
            Some((Tok::Int(1), _)) => {} // identity factor
            Some((t, s)) => {
                return Err(SyntaxError::new(
                    format!("expected a modality name, found {t}"),
                    s,
                ))
            }
            None => {
                return Err(SyntaxError::new(
                    "expected a modality name, found end of input",
                    cur.span(),
                ))
            }
        }
        // The composition dot binds the next factor; a statement-terminating
        // dot is followed by a keyword or the end of input.
        if cur.peek() == Some(&Tok::Dot) {
            let next_is_factor = match cur.peek2() {
                Some(Tok::Int(1)) => true,
                Some(Tok::Ident(s)) => !is_keyword(s),
                _ => false,
            };
            if next_is_factor {
                cur.next();
                continue;
            }
        }
        // Written order is composition order; storage is diagrammatic.
        written.reverse();
        return Ok(written);
    }
}

fn splice(pres: &mut Presentation, mt: &super::ModeTheory) {
    for m in mt.modes() {
        if !pres.modes.contains(m) {
            pres.modes.push(m.clone());
        }
    }
    pres.generators.extend(mt.generators.iter().cloned());
    pres.equations.extend(mt.equations.iter().cloned());
    pres.cells.extend(mt.cells.iter().cloned());
    pres.cell_equations.extend(mt.cell_equations.iter().cloned());
    pres.classical_modes
        .extend(mt.classical_modes.iter().cloned());
    if pres.oracle.is_none() {
        pres.oracle = mt.oracle.clone();
    }
}
