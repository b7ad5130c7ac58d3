//! Text format for abduction instances.
//!
//! ```text
//! abd 1
//! vars 2
//! rel NEQ 2 01;10
//! con NEQ 1 2
//! hyp 1
//! man 2
//! ```
//!
//! Tuples are bit strings, coordinate 1 first. An empty relation is written
//! `-` and the single tuple of arity 0 as `_`. `hyp` and `man` may repeat and
//! may be empty. The header line is optional on input.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::model::{AbductionInstance, Constraint, Formula, Relation, Var};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, tok: &str, msg: impl Into<String>) -> ParseError {
        // Byte offset of the token within the line, 1-based.
        let col = (tok.as_ptr() as usize).saturating_sub(self.text.as_ptr() as usize) + 1;
        ParseError {
            line: self.no,
            col,
            msg: msg.into(),
        }
    }
}

fn parse_var(line: &Line, tok: &str, n: Option<u32>) -> Result<Var, ParseError> {
    let n = n.ok_or_else(|| line.err(tok, "`vars` must come first"))?;
    let i: u32 = tok
        .parse()
        .map_err(|_| line.err(tok, format!("expected a variable index, found {tok:?}")))?;
    if i == 0 || i > n {
        return Err(line.err(tok, format!("variable {i} outside 1..={n}")));
    }
    Ok(Var::from_index(i))
}

fn parse_tuples(line: &Line, tok: &str, arity: usize) -> Result<Vec<u64>, ParseError> {
    if tok == "-" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for t in tok.split(';') {
        if t == "_" && arity == 0 {
            out.push(0);
            continue;
        }
        if t.len() != arity {
            return Err(line.err(
                t,
                format!("tuple {t:?} has length {}, arity is {arity}", t.len()),
            ));
        }
        let mut bits = 0u64;
        for (i, ch) in t.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(line.err(t, format!("bad digit {ch:?} in tuple"))),
            }
        }
        out.push(bits);
    }
    Ok(out)
}

pub fn parse_str(text: &str) -> Result<AbductionInstance, ParseError> {
    let mut n: Option<u32> = None;
    let mut rels: HashMap<String, Arc<Relation>> = HashMap::new();
    let mut cons: Vec<Constraint> = Vec::new();
    let mut hyp = BTreeSet::new();
    let mut man = BTreeSet::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = Line {
            no: i + 1,
            text: raw,
        };
        last_line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else {
            continue;
        };
        match kw {
            "abd" => {
                if rest != ["1"] {
                    return Err(line.err(kw, "unsupported header, expected `abd 1`"));
                }
            }
            "vars" => {
                if n.is_some() {
                    return Err(line.err(kw, "duplicate `vars`"));
                }
                let [tok] = rest else {
                    return Err(line.err(kw, "expected `vars <n>`"));
                };
                n = Some(
                    tok.parse()
                        .map_err(|_| line.err(tok, format!("expected a count, found {tok:?}")))?,
                );
            }
            "rel" => {
                let [name, arity_tok, tuples] = rest else {
                    return Err(line.err(kw, "expected `rel <name> <arity> <tuples>`"));
                };
                let arity: usize = arity_tok
                    .parse()
                    .map_err(|_| line.err(arity_tok, "expected an arity"))?;
                let ts = parse_tuples(&line, tuples, arity)?;
                let r = Relation::new(arity, ts).map_err(|e| line.err(arity_tok, e.to_string()))?;
                if rels
                    .insert(name.to_string(), Arc::new(r.with_name(*name)))
                    .is_some()
                {
                    return Err(line.err(name, format!("relation {name} defined twice")));
                }
            }
            "con" => {
                let Some((name, vars)) = rest.split_first() else {
                    return Err(line.err(kw, "expected `con <relation> <vars>`"));
                };
                let r = rels
                    .get(*name)
                    .ok_or_else(|| line.err(name, format!("unknown relation {name}")))?;
                let scope = vars
                    .iter()
                    .map(|t| parse_var(&line, t, n))
                    .collect::<Result<Vec<_>, _>>()?;
                let c =
                    Constraint::new(r.clone(), scope).map_err(|e| line.err(name, e.to_string()))?;
                cons.push(c);
            }
            "hyp" | "man" => {
                let set = if kw == "hyp" { &mut hyp } else { &mut man };
                for t in rest {
                    set.insert(parse_var(&line, t, n)?);
                }
            }
            _ => return Err(line.err(kw, format!("unknown keyword {kw:?}"))),
        }
    }
    let n = n.ok_or(ParseError {
        line: last_line.max(1),
        col: 1,
        msg: "missing `vars` line".into(),
    })?;
    let kb = Formula::new(n, cons).expect("scopes checked while parsing");
    Ok(AbductionInstance::new(kb, hyp, man).expect("variables checked while parsing"))
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.')
}

fn tuples_string(r: &Relation) -> String {
    if r.is_empty() {
        return "-".into();
    }
    if r.arity() == 0 {
        return "_".into();
    }
    r.tuples()
        .iter()
        .map(|&t| Relation::tuple_string(t, r.arity()))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_string(inst: &AbductionInstance) -> String {
    let mut out = String::from("abd 1\n");
    writeln!(out, "vars {}", inst.kb.num_vars()).unwrap();
    let mut names: HashMap<Relation, String> = HashMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for c in inst.kb.constraints() {
        if names.contains_key(&*c.relation) {
            continue;
        }
        let base = c
            .relation
            .name()
            .filter(|s| valid_name(s))
            .unwrap_or("R")
            .to_string();
        let mut name = base.clone();
        let mut i = 1;
        while used.contains(&name) {
            name = format!("{base}.{i}");
            i += 1;
        }
        writeln!(
            out,
            "rel {name} {} {}",
            c.relation.arity(),
            tuples_string(&c.relation)
        )
        .unwrap();
        used.insert(name.clone());
        names.insert((*c.relation).clone(), name);
    }
    for c in inst.kb.constraints() {
        write!(out, "con {}", names[&*c.relation]).unwrap();
        for x in &c.scope {
            write!(out, " {}", x.index()).unwrap();
        }
        out.push('\n');
    }
    let list = |s: &BTreeSet<Var>| {
        s.iter()
            .map(|x| format!(" {}", x.index()))
            .collect::<String>()
    };
    writeln!(out, "hyp{}", list(&inst.hypotheses)).unwrap();
    writeln!(out, "man{}", list(&inst.manifestations)).unwrap();
    out
}

pub fn parse(path: &Path) -> Result<AbductionInstance, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_str(&text)?)
}

pub fn write(inst: &AbductionInstance, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, write_string(inst)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let inst = parse_str("vars 2\nrel NEQ 2 01;10\ncon NEQ 1 2\nhyp 1\nman 2\n").unwrap();
        assert_eq!(inst.kb.constraints().len(), 1);
        assert_eq!(*inst.kb.constraints()[0].relation, *Relation::neq());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_str("vars 2\nrel NEQ 2 01;1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 14));
        let e = parse_str("vars 2\ncon X 1 2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        let e = parse_str("vars 2\nrel T 1 1\ncon T 3\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 7));
    }

    #[test]
    fn round_trip_edge_cases() {
        let mut kb = Formula::empty(3);
        kb.push(Constraint::new(Relation::falsum(), vec![]).unwrap())
            .unwrap();
        kb.push(Constraint::new(Relation::verum(), vec![]).unwrap())
            .unwrap();
        kb.push(
            Constraint::new(
                Arc::new(Relation::new(2, []).unwrap()),
                vec![Var::from_index(1), Var::from_index(3)],
            )
            .unwrap(),
        )
        .unwrap();
        let inst = AbductionInstance::new(kb, [], [Var::from_index(2)]).unwrap();
        let text = write_string(&inst);
        assert_eq!(parse_str(&text).unwrap(), inst);
        assert_eq!(write_string(&parse_str(&text).unwrap()), text);
    }
}
