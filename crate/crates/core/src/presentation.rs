//! Quivers with relations and the line-oriented text format.
//!
//! A document looks like
//!
//! ```text
//! # the dumb-bell with r = s = 3
//! category dumbbell_3_3
//! points x y
//! arrow l : x -> x
//! arrow m : x -> y
//! arrow r : y -> y
//! rel m l = r m
//! rel l l l = 0
//! rel r r r = 0
//! ```
//!
//! Paths are written in function-composition order: the leftmost arrow is
//! applied last, so `m l` means "first `l`, then `m`" and runs from the
//! source of `l` to the target of `m`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowDecl {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub points: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
}

impl Quiver {
    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn arrow(&self, name: &str) -> Result<&ArrowDecl> {
        self.arrows
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for p in &self.points {
            check_ident(p)?;
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateName(p.clone()));
            }
        }
        let mut arrows = HashSet::new();
        for a in &self.arrows {
            check_ident(&a.name)?;
            if !arrows.insert(a.name.as_str()) {
                return Err(Error::DuplicateName(a.name.clone()));
            }
            for end in [&a.source, &a.target] {
                if self.point_index(end).is_none() {
                    return Err(Error::UnknownPoint(end.clone()));
                }
            }
        }
        Ok(())
    }
}

/// A nonempty path, arrows listed in composition order (leftmost applied last).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathExpr(pub Vec<String>);

impl PathExpr {
    pub fn new<S: Into<String>>(arrows: impl IntoIterator<Item = S>) -> Self {
        PathExpr(arrows.into_iter().map(Into::into).collect())
    }

    /// Splits on whitespace: `"m l"` is `m` after `l`.
    pub fn parse(text: &str) -> Result<Self> {
        let arrows: Vec<String> = text.split_whitespace().map(str::to_string).collect();
        if arrows.is_empty() {
            return Err(Error::Syntax {
                line: 1,
                col: 1,
                msg: "empty path".into(),
            });
        }
        for a in &arrows {
            check_ident(a)?;
        }
        Ok(PathExpr(arrows))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Source and target point names, checking composability.
    pub fn endpoints<'q>(&self, quiver: &'q Quiver) -> Result<(&'q str, &'q str)> {
        let first = self.0.first().ok_or(Error::NonComposable(String::new()))?;
        let last = self.0.last().unwrap();
        let head = quiver.arrow(first)?;
        let tail = quiver.arrow(last)?;
        for w in self.0.windows(2) {
            let after = quiver.arrow(&w[0])?;
            let before = quiver.arrow(&w[1])?;
            if before.target != after.source {
                return Err(Error::NonComposable(self.to_string()));
            }
        }
        Ok((tail.source.as_str(), head.target.as_str()))
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    Zero { path: PathExpr },
    Commutativity { left: PathExpr, right: PathExpr },
}

impl Relation {
    pub fn zero(path: PathExpr) -> Self {
        Relation::Zero { path }
    }

    pub fn commutativity(left: PathExpr, right: PathExpr) -> Self {
        Relation::Commutativity { left, right }
    }

    pub fn paths(&self) -> Vec<&PathExpr> {
        match self {
            Relation::Zero { path } => vec![path],
            Relation::Commutativity { left, right } => vec![left, right],
        }
    }

    fn validate(&self, quiver: &Quiver) -> Result<()> {
        match self {
            Relation::Zero { path } => {
                path.endpoints(quiver)?;
                if path.len() < 2 {
                    return Err(Error::InvalidRelation {
                        rel: self.to_string(),
                        reason: "an arrow cannot be zero".into(),
                    });
                }
            }
            Relation::Commutativity { left, right } => {
                let l = left.endpoints(quiver)?;
                let r = right.endpoints(quiver)?;
                if l != r {
                    return Err(Error::NonParallel(self.to_string()));
                }
                if left == right {
                    return Err(Error::InvalidRelation {
                        rel: self.to_string(),
                        reason: "both sides are the same path".into(),
                    });
                }
                if left.len() < 2 || right.len() < 2 {
                    return Err(Error::InvalidRelation {
                        rel: self.to_string(),
                        reason: "an arrow would stop being irreducible".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Relation::Zero { path: a }, Relation::Zero { path: b }) => a == b,
            (
                Relation::Commutativity { left: a, right: b },
                Relation::Commutativity { left: c, right: d },
            ) => (a == c && b == d) || (a == d && b == c),
            _ => false,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Zero { path } => write!(f, "{path} = 0"),
            Relation::Commutativity { left, right } => write!(f, "{left} = {right}"),
        }
    }
}

/// A validated quiver with relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation")]
pub struct Presentation {
    pub name: String,
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

#[derive(Deserialize)]
struct RawPresentation {
    name: String,
    quiver: Quiver,
    #[serde(default)]
    relations: Vec<Relation>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = Error;

    fn try_from(raw: RawPresentation) -> Result<Self> {
        Presentation::new(raw.name, raw.quiver, raw.relations)
    }
}

impl Presentation {
    /// Validates the quiver and every relation; duplicate relations are dropped.
    pub fn new(name: impl Into<String>, quiver: Quiver, relations: Vec<Relation>) -> Result<Self> {
        let name = name.into();
        check_ident(&name)?;
        quiver.validate()?;
        let mut kept: Vec<Relation> = Vec::with_capacity(relations.len());
        for rel in relations {
            rel.validate(&quiver)?;
            if !kept.contains(&rel) {
                kept.push(rel);
            }
        }
        Ok(Presentation {
            name,
            quiver,
            relations: kept,
        })
    }
}

fn check_ident(name: &str) -> Result<()> {
    let mut chars = name.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Syntax {
            line: 1,
            col: 1,
            msg: format!("`{name}` is not an identifier"),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Colon,
    Arrow,
    Equals,
}

fn tokenize(line: &str) -> Vec<(usize, Tok<'_>)> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'#' {
            break;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let col = i + 1;
        match c {
            b':' => {
                out.push((col, Tok::Colon));
                i += 1;
            }
            b'=' => {
                out.push((col, Tok::Equals));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((col, Tok::Arrow));
                i += 2;
            }
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && !matches!(bytes[i], b':' | b'=' | b'#')
                    && !(bytes[i] == b'-' && bytes.get(i + 1) == Some(&b'>'))
                {
                    i += 1;
                }
                out.push((col, Tok::Word(&line[start..i])));
            }
        }
    }
    out
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses the text format; diagnostics carry line and column.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut name: Option<String> = None;
    let mut quiver = Quiver::default();
    let mut relations = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks = tokenize(raw);
        let Some((kcol, first)) = toks.first() else {
            continue;
        };
        let Tok::Word(keyword) = first else {
            return Err(syntax(ln, *kcol, "expected a keyword"));
        };
        let rest = &toks[1..];
        let word = |i: usize, what: &str| -> Result<(usize, &str)> {
            match rest.get(i) {
                Some((c, Tok::Word(w))) => {
                    check_ident(w).map_err(|_| syntax(ln, *c, format!("bad {what} `{w}`")))?;
                    Ok((*c, *w))
                }
                Some((c, _)) => Err(syntax(ln, *c, format!("expected {what}"))),
                None => Err(syntax(ln, raw.len() + 1, format!("expected {what}"))),
            }
        };
        match *keyword {
            "category" => {
                let (c, n) = word(0, "category name")?;
                if name.is_some() {
                    return Err(syntax(ln, c, "category declared twice"));
                }
                if let Some((c, _)) = rest.get(1) {
                    return Err(syntax(ln, *c, "trailing input"));
                }
                name = Some(n.to_string());
            }
            "points" => {
                for i in 0..rest.len() {
                    let (c, p) = word(i, "point name")?;
                    if quiver.point_index(p).is_some() {
                        return Err(Error::DuplicateName(p.into()).at(ln, c));
                    }
                    quiver.points.push(p.to_string());
                }
            }
            "arrow" => {
                let (nc, a) = word(0, "arrow name")?;
                match rest.get(1) {
                    Some((_, Tok::Colon)) => {}
                    Some((c, _)) => return Err(syntax(ln, *c, "expected `:`")),
                    None => return Err(syntax(ln, raw.len() + 1, "expected `:`")),
                }
                let (sc, s) = word(2, "source point")?;
                match rest.get(3) {
                    Some((_, Tok::Arrow)) => {}
                    Some((c, _)) => return Err(syntax(ln, *c, "expected `->`")),
                    None => return Err(syntax(ln, raw.len() + 1, "expected `->`")),
                }
                let (tc, t) = word(4, "target point")?;
                if let Some((c, _)) = rest.get(5) {
                    return Err(syntax(ln, *c, "trailing input"));
                }
                if quiver.point_index(s).is_none() {
                    return Err(Error::UnknownPoint(s.into()).at(ln, sc));
                }
                if quiver.point_index(t).is_none() {
                    return Err(Error::UnknownPoint(t.into()).at(ln, tc));
                }
                if quiver.arrow_index(a).is_some() {
                    return Err(Error::DuplicateName(a.into()).at(ln, nc));
                }
                quiver.arrows.push(ArrowDecl {
                    name: a.into(),
                    source: s.into(),
                    target: t.into(),
                });
            }
            "rel" => {
                let eq = rest
                    .iter()
                    .position(|(_, t)| *t == Tok::Equals)
                    .ok_or_else(|| syntax(ln, raw.len() + 1, "expected `=`"))?;
                let side = |toks: &[(usize, Tok<'_>)], at: usize| -> Result<PathExpr> {
                    if toks.is_empty() {
                        return Err(syntax(ln, at, "empty path"));
                    }
                    let mut arrows = Vec::new();
                    for (c, t) in toks {
                        match t {
                            Tok::Word(w) => {
                                if quiver.arrow_index(w).is_none() {
                                    return Err(Error::UnknownArrow((*w).into()).at(ln, *c));
                                }
                                arrows.push(w.to_string());
                            }
                            _ => return Err(syntax(ln, *c, "unexpected token in path")),
                        }
                    }
                    let p = PathExpr(arrows);
                    p.endpoints(&quiver).map_err(|e| e.at(ln, toks[0].0))?;
                    Ok(p)
                };
                let eq_col = rest[eq].0;
                let left = side(&rest[..eq], eq_col)?;
                let rhs = &rest[eq + 1..];
                let rel = match rhs {
                    [(_, Tok::Word("0"))] => Relation::zero(left),
                    _ => Relation::commutativity(left, side(rhs, raw.len() + 1)?),
                };
                rel.validate(&quiver).map_err(|e| e.at(ln, *kcol))?;
                relations.push(rel);
            }
            other => return Err(syntax(ln, *kcol, format!("unknown keyword `{other}`"))),
        }
    }

    Presentation::new(name.unwrap_or_else(|| "P".into()), quiver, relations)
}

/// Canonical text form; `parse_presentation` reads it back to an equal value.
pub fn print_presentation(p: &Presentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("category {}\n", p.name));
    if !p.quiver.points.is_empty() {
        out.push_str(&format!("points {}\n", p.quiver.points.join(" ")));
    }
    for a in &p.quiver.arrows {
        out.push_str(&format!("arrow {} : {} -> {}\n", a.name, a.source, a.target));
    }
    for r in &p.relations {
        out.push_str(&format!("rel {r}\n"));
    }
    out
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_presentation(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUMBBELL: &str = "category db\npoints x y\narrow l : x -> x\narrow m : x -> y\narrow r : y -> y\nrel m l = r m\nrel l l l = 0\nrel r r r = 0\n";

    #[test]
    fn parses_dumbbell() {
        let p = parse_presentation(DUMBBELL).unwrap();
        assert_eq!(p.quiver.points.len(), 2);
        assert_eq!(p.quiver.arrows.len(), 3);
        assert_eq!(p.relations.len(), 3);
        assert_eq!(print_presentation(&p), DUMBBELL);
    }

    #[test]
    fn single_point_no_arrows() {
        let p = parse_presentation("points x\n").unwrap();
        assert!(p.relations.is_empty());
        assert!(p.quiver.arrows.is_empty());
    }

    #[test]
    fn rejects_non_parallel() {
        let text = "points x y\narrow l : x -> x\narrow m : x -> y\narrow r : y -> y\nrel m l = r\n";
        let err = parse_presentation(text).unwrap_err();
        assert!(matches!(err.kind(), Error::NonParallel(_)), "{err}");
        assert!(err.to_string().starts_with("5:"));
    }

    #[test]
    fn rejects_non_composable_and_unknown() {
        let text = "points x y\narrow m : x -> y\nrel m m = 0\n";
        let err = parse_presentation(text).unwrap_err();
        assert!(matches!(err.kind(), Error::NonComposable(_)));
        let err = parse_presentation("points x\narrow a : x -> z\n").unwrap_err();
        assert!(matches!(err.kind(), Error::UnknownPoint(_)));
        assert_eq!(err.to_string(), "2:16: unknown point `z`");
        let err = parse_presentation("points x\narrow a : x -> x\nrel a b = 0\n").unwrap_err();
        assert!(matches!(err.kind(), Error::UnknownArrow(_)));
    }

    #[test]
    fn rejects_arrow_identified_with_path() {
        let text = "points x y\narrow l : x -> x\narrow m : x -> y\narrow u : x -> y\nrel u = m l\n";
        let err = parse_presentation(text).unwrap_err();
        assert!(matches!(err.kind(), Error::InvalidRelation { .. }));
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_presentation("points x\narrow a x -> x\n").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, col: 9, msg: "expected `:`".into() });
        let err = parse_presentation("frobnicate\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, col: 1, .. }));
    }

    #[test]
    fn duplicates_are_dropped() {
        let text = "points x y\narrow l : x -> x\narrow m : x -> y\narrow r : y -> y\nrel m l = r m\nrel r m = m l\nrel l l = 0\nrel l l = 0\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.relations.len(), 2);
    }

    #[test]
    fn zero_only_prints_no_commutativity() {
        let p = parse_presentation("points x\narrow a : x -> x\nrel a a = 0\n").unwrap();
        let text = print_presentation(&p);
        for line in text.lines().filter(|l| l.contains('=')) {
            assert!(line.ends_with("= 0"));
        }
    }

    #[test]
    fn json_mirrors_fields() {
        let p = parse_presentation(DUMBBELL).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"kind\":\"commutativity\""));
        let back: Presentation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = json.replace("\"r\",\"m\"", "\"r\"");
        assert!(serde_json::from_str::<Presentation>(&bad).is_err());
    }
}
