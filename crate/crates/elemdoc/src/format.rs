//! Line-oriented text formats for theories, morphisms and models.
//!
//! Theory files:
//!
//! ```text
//! theory monoid
//! op e : -> elem
//! op * : elem elem -> elem
//! ax left_unit: *(e, x1) = x1
//! ax trans: R(x1, x2) & R(x2, x3) => R(x1, x3)
//! ```
//!
//! Morphism files name their source and target theory files, relative to
//! the morphism file. Model files name their theory file the same way.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use elemdoc_core::semantics::{decode_tuple, tuple_count, Structure};
use elemdoc_core::syntax::{Atom, Context, HornFormula, Signature, SortId, Term, Theory, TheoryMorphism};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.file, self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Sym(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Eq,
    Implies,
    Arrow,
    Amp,
    LBrace,
    RBrace,
}

struct Lexer<'a> {
    file: &'a str,
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const PUNCT: &str = "()[],:=&{}";

fn lex_line(s: &str) -> Result<Vec<(Tok, usize)>, (usize, String)> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let tok = match (two.as_str(), c) {
            ("=>", _) => {
                i += 2;
                Tok::Implies
            }
            ("->", _) => {
                i += 2;
                Tok::Arrow
            }
            (_, '(') => Tok::LParen,
            (_, ')') => Tok::RParen,
            (_, '[') => Tok::LBrack,
            (_, ']') => Tok::RBrack,
            (_, '{') => Tok::LBrace,
            (_, '}') => Tok::RBrace,
            (_, ',') => Tok::Comma,
            (_, ':') => Tok::Colon,
            (_, '=') => Tok::Eq,
            (_, '&') => Tok::Amp,
            _ => {
                let start = i;
                while i < chars.len() && !chars[i].is_whitespace() && !PUNCT.contains(chars[i]) {
                    let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
                    if i > start && (two == "->" || two == "=>") {
                        break;
                    }
                    i += 1;
                }
                if i == start {
                    return Err((col, format!("unexpected character `{c}`")));
                }
                out.push((Tok::Sym(chars[start..i].iter().collect()), col));
                continue;
            }
        };
        if !matches!(tok, Tok::Implies | Tok::Arrow) {
            i += 1;
        }
        out.push((tok, col));
    }
    Ok(out)
}

impl<'a> Lexer<'a> {
    fn new(file: &'a str, line: usize, s: &str) -> Result<Self, ParseError> {
        let toks = lex_line(s).map_err(|(col, msg)| ParseError { file: file.into(), line, col, msg })?;
        Ok(Self { file, line, toks, pos: 0 })
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or_else(|| self.toks.last().map(|t| t.1 + 1).unwrap_or(1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { file: self.file.into(), line: self.line, col: self.col(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn sym(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ParseError> {
        let col = self.col();
        let s = self.sym(what)?;
        s.parse().map_err(|_| ParseError { file: self.file.into(), line: self.line, col, msg: format!("expected {what}, found `{s}`") })
    }
}

fn var_index(s: &str) -> Option<usize> {
    let n: usize = s.strip_prefix('x')?.parse().ok()?;
    (n >= 1 && !s[1..].starts_with('0')).then(|| n - 1)
}

/// Terms and formulas over a signature, with variables `x1, x2, …`.
struct FormulaParser<'s> {
    sig: &'s Signature,
    /// Sorts inferred for variables so far.
    vars: Vec<Option<SortId>>,
}

impl FormulaParser<'_> {
    fn bind(&mut self, lx: &Lexer, i: usize, s: SortId) -> Result<(), ParseError> {
        if self.vars.len() <= i {
            self.vars.resize(i + 1, None);
        }
        match self.vars[i] {
            Some(t) if t != s => {
                lx.err(format!("x{} used at sorts {} and {}", i + 1, self.sig.sorts[t.0], self.sig.sorts[s.0]))
            }
            _ => {
                self.vars[i] = Some(s);
                Ok(())
            }
        }
    }

    /// A term, with its sort when determined.
    fn term(&mut self, lx: &mut Lexer, expected: Option<SortId>) -> Result<(Term, Option<SortId>), ParseError> {
        let col = lx.col();
        let name = lx.sym("a term")?;
        if let Some(i) = var_index(&name) {
            if lx.peek() != Some(&Tok::LParen) {
                if let Some(s) = expected {
                    self.bind(lx, i, s)?;
                } else if self.vars.len() <= i {
                    self.vars.resize(i + 1, None);
                }
                return Ok((Term::Var(i), expected.or(self.vars[i])));
            }
        }
        let Some(f) = self.sig.op(&name) else {
            return Err(ParseError { file: lx.file.into(), line: lx.line, col, msg: format!("unknown operation `{name}`") });
        };
        let decl = self.sig.op_decl(f).clone();
        let mut args = Vec::new();
        if lx.eat(&Tok::LParen) {
            if !lx.eat(&Tok::RParen) {
                loop {
                    let k = args.len();
                    if k >= decl.args.len() {
                        return lx.err(format!("`{name}` takes {} arguments", decl.args.len()));
                    }
                    args.push(self.term(lx, Some(decl.args[k]))?.0);
                    if lx.eat(&Tok::RParen) {
                        break;
                    }
                    lx.expect(Tok::Comma, "`,` or `)`")?;
                }
            }
        }
        if args.len() != decl.args.len() {
            return Err(ParseError {
                file: lx.file.into(),
                line: lx.line,
                col,
                msg: format!("`{name}` takes {} arguments, got {}", decl.args.len(), args.len()),
            });
        }
        if let Some(s) = expected {
            if s != decl.result {
                return Err(ParseError {
                    file: lx.file.into(),
                    line: lx.line,
                    col,
                    msg: format!("`{name}` has sort {}, expected {}", self.sig.sorts[decl.result.0], self.sig.sorts[s.0]),
                });
            }
        }
        Ok((Term::App(f, args), Some(decl.result)))
    }

    fn atom(&mut self, lx: &mut Lexer) -> Result<Option<Atom>, ParseError> {
        if let (Some(Tok::Sym(s)), next) = (lx.peek(), lx.peek2()) {
            if s == "true" && next != Some(&Tok::LParen) {
                lx.next();
                return Ok(None);
            }
            if let Some(r) = self.sig.rel(s) {
                lx.next();
                let decl = self.sig.rel_decl(r).clone();
                lx.expect(Tok::LParen, "`(`")?;
                let mut args = Vec::new();
                loop {
                    if args.len() >= decl.args.len() {
                        return lx.err(format!("`{}` takes {} arguments", decl.name, decl.args.len()));
                    }
                    args.push(self.term(lx, Some(decl.args[args.len()]))?.0);
                    if lx.eat(&Tok::RParen) {
                        break;
                    }
                    lx.expect(Tok::Comma, "`,` or `)`")?;
                }
                if args.len() != decl.args.len() {
                    return lx.err(format!("`{}` takes {} arguments", decl.name, decl.args.len()));
                }
                return Ok(Some(Atom::Rel(r, args)));
            }
        }
        let start = lx.pos;
        let (_, ls) = self.term(lx, None)?;
        lx.expect(Tok::Eq, "`=`")?;
        let (r, rs) = self.term(lx, ls)?;
        let (l, _) = match (ls, rs) {
            (None, Some(s)) => {
                // re-read the left side with the sort now known
                let save = lx.pos;
                lx.pos = start;
                let out = self.term(lx, Some(s))?;
                lx.pos = save;
                out
            }
            _ => {
                let save = lx.pos;
                lx.pos = start;
                let out = self.term(lx, ls)?;
                lx.pos = save;
                out
            }
        };
        Ok(Some(Atom::Eq(l, r)))
    }

    fn formula(&mut self, lx: &mut Lexer) -> Result<HornFormula, ParseError> {
        let mut atoms = Vec::new();
        loop {
            atoms.extend(self.atom(lx)?);
            if !lx.eat(&Tok::Amp) {
                break;
            }
        }
        Ok(HornFormula::from_atoms(atoms))
    }

    /// Sorts of `x1..xn`; unconstrained variables get the first sort.
    fn context(&self, lx: &Lexer, min_len: usize) -> Result<Context, ParseError> {
        let n = self.vars.len().max(min_len);
        if n > 0 && self.sig.sorts.is_empty() {
            return lx.err("variables over a signature without sorts");
        }
        Ok((0..n).map(|i| self.vars.get(i).copied().flatten().unwrap_or(SortId(0))).collect())
    }
}

fn annotation(lx: &mut Lexer, sig: &Signature, p: &mut FormulaParser) -> Result<usize, ParseError> {
    let mut n = 0;
    if lx.eat(&Tok::LBrack) {
        loop {
            let v = lx.sym("a variable")?;
            let Some(i) = var_index(&v) else { return lx.err(format!("`{v}` is not a variable")) };
            lx.expect(Tok::Colon, "`:`")?;
            let s = lx.sym("a sort")?;
            let Some(sid) = sig.sort(&s) else { return lx.err(format!("unknown sort `{s}`")) };
            p.bind(lx, i, sid)?;
            n = n.max(i + 1);
            if lx.eat(&Tok::RBrack) {
                break;
            }
            lx.expect(Tok::Comma, "`,` or `]`")?;
        }
    }
    Ok(n)
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    })
}

/// Parses a theory. `default_name` is used without a `theory` line.
pub fn parse_theory(file: &str, text: &str, default_name: &str) -> Result<Theory, ParseError> {
    let mut sig = Signature::new();
    let mut name = default_name.to_string();
    let mut axioms: Vec<(usize, String)> = Vec::new();
    let mut implicit = false;
    for (ln, line) in lines(text) {
        let mut lx = Lexer::new(file, ln, line)?;
        let kw = lx.sym("a keyword")?;
        match kw.as_str() {
            "theory" => {
                name = lx.sym("a name")?;
                lx.done()?;
            }
            "sort" => {
                let s = lx.sym("a sort name")?;
                if implicit {
                    return lx.err("sorts must be declared before use");
                }
                if sig.add_sort(&s).is_err() {
                    return lx.err(format!("sort `{s}` declared twice"));
                }
                lx.done()?;
            }
            "op" | "rel" => {
                let n = lx.sym("a symbol name")?;
                lx.expect(Tok::Colon, "`:`")?;
                let mut sorts = Vec::new();
                while let Some(Tok::Sym(_)) = lx.peek() {
                    sorts.push(lx.sym("a sort")?);
                }
                let result = if kw == "op" {
                    lx.expect(Tok::Arrow, "`->`")?;
                    Some(lx.sym("a result sort")?)
                } else {
                    if sorts.is_empty() {
                        return lx.err("relations take at least one argument");
                    }
                    None
                };
                lx.done()?;
                if sig.sorts.is_empty() {
                    sig.add_sort("elem").unwrap();
                    implicit = true;
                }
                let lookup = |s: &str, lx: &Lexer| match sig.sort(s) {
                    Some(id) => Ok(id),
                    None => lx.err(format!("unknown sort `{s}`")),
                };
                let args = sorts.iter().map(|s| lookup(s, &lx)).collect::<Result<Vec<_>, _>>()?;
                let res = match &result {
                    Some(r) => Some(lookup(r, &lx)?),
                    None => None,
                };
                let added = match res {
                    Some(r) => sig.add_op(&n, &args, r).map(|_| ()),
                    None => sig.add_rel(&n, &args).map(|_| ()),
                };
                if added.is_err() {
                    return lx.err(format!("symbol `{n}` declared twice"));
                }
            }
            "ax" => axioms.push((ln, line.to_string())),
            other => return lx.err(format!("unknown keyword `{other}`")),
        }
    }
    if sig.sorts.is_empty() {
        sig.add_sort("elem").unwrap();
    }
    let mut t = Theory::new(&name, sig.clone());
    for (k, (ln, line)) in axioms.iter().enumerate() {
        let mut lx = Lexer::new(file, *ln, line)?;
        lx.next();
        let mut ax_name = format!("ax{}", k + 1);
        if let (Some(Tok::Sym(s)), Some(Tok::Colon)) = (lx.peek(), lx.peek2()) {
            if var_index(s).is_none() {
                ax_name = s.clone();
                lx.next();
                lx.next();
            }
        }
        let mut p = FormulaParser { sig: &sig, vars: Vec::new() };
        let min = annotation(&mut lx, &sig, &mut p)?;
        let first = p.formula(&mut lx)?;
        let (premise, conclusion) = if lx.eat(&Tok::Implies) { (first, p.formula(&mut lx)?) } else { (HornFormula::top(), first) };
        lx.done()?;
        let ctx = p.context(&lx, min)?;
        if t.axiom(&ax_name, ctx, premise, conclusion).is_err() {
            return lx.err(format!("axiom `{ax_name}` is ill-sorted"));
        }
    }
    Ok(t)
}

fn show_term(sig: &Signature, t: &Term) -> String {
    match t {
        Term::Var(i) => format!("x{}", i + 1),
        Term::App(f, args) if args.is_empty() => sig.op_decl(*f).name.clone(),
        Term::App(f, args) => {
            let a: Vec<String> = args.iter().map(|x| show_term(sig, x)).collect();
            format!("{}({})", sig.op_decl(*f).name, a.join(", "))
        }
    }
}

fn show_formula(sig: &Signature, phi: &HornFormula) -> String {
    if phi.is_top() {
        return "true".into();
    }
    let atoms: Vec<String> = phi
        .atoms()
        .iter()
        .map(|a| match a {
            Atom::Eq(l, r) => format!("{} = {}", show_term(sig, l), show_term(sig, r)),
            Atom::Rel(r, ts) => {
                let a: Vec<String> = ts.iter().map(|x| show_term(sig, x)).collect();
                format!("{}({})", sig.rel_decl(*r).name, a.join(", "))
            }
        })
        .collect();
    atoms.join(" & ")
}

/// Sorts forced on variables by their positions, as the parser infers them.
fn inferred_context(sig: &Signature, phis: &[&HornFormula]) -> Vec<Option<SortId>> {
    let mut vars: Vec<Option<SortId>> = Vec::new();
    fn walk(sig: &Signature, t: &Term, expected: Option<SortId>, vars: &mut Vec<Option<SortId>>) -> Option<SortId> {
        match t {
            Term::Var(i) => {
                if vars.len() <= *i {
                    vars.resize(i + 1, None);
                }
                if vars[*i].is_none() {
                    vars[*i] = expected;
                }
                vars[*i]
            }
            Term::App(f, args) => {
                let d = sig.op_decl(*f);
                for (a, s) in args.iter().zip(&d.args) {
                    walk(sig, a, Some(*s), vars);
                }
                Some(d.result)
            }
        }
    }
    for phi in phis {
        for a in phi.atoms() {
            match a {
                Atom::Eq(l, r) => {
                    let ls = walk(sig, l, None, &mut vars);
                    let rs = walk(sig, r, ls, &mut vars);
                    walk(sig, l, rs, &mut vars);
                }
                Atom::Rel(r, ts) => {
                    let d = sig.rel_decl(*r);
                    for (t, s) in ts.iter().zip(&d.args) {
                        walk(sig, t, Some(*s), &mut vars);
                    }
                }
            }
        }
    }
    vars
}

pub fn print_theory(t: &Theory) -> String {
    let sig = &t.sig;
    let mut out = format!("theory {}\n", t.name);
    let implicit = sig.sorts.len() == 1 && sig.sorts[0] == "elem";
    if !implicit {
        for s in &sig.sorts {
            out += &format!("sort {s}\n");
        }
    }
    for o in &sig.ops {
        let args: Vec<&str> = o.args.iter().map(|s| sig.sorts[s.0].as_str()).collect();
        let sep = if args.is_empty() { "" } else { " " };
        out += &format!("op {} : {}{sep}-> {}\n", o.name, args.join(" "), sig.sorts[o.result.0]);
    }
    for r in &sig.rels {
        let args: Vec<&str> = r.args.iter().map(|s| sig.sorts[s.0].as_str()).collect();
        out += &format!("rel {} : {}\n", r.name, args.join(" "));
    }
    for s in &t.axioms {
        let inferred = inferred_context(sig, &[&s.premise, &s.conclusion]);
        let default: Vec<SortId> = (0..inferred.len()).map(|i| inferred[i].unwrap_or(SortId(0))).collect();
        let ann = if default == s.ctx {
            String::new()
        } else {
            let vs: Vec<String> = s.ctx.iter().enumerate().map(|(i, so)| format!("x{}:{}", i + 1, sig.sorts[so.0])).collect();
            format!("[{}] ", vs.join(", "))
        };
        let body = if s.premise.is_top() {
            show_formula(sig, &s.conclusion)
        } else {
            format!("{} => {}", show_formula(sig, &s.premise), show_formula(sig, &s.conclusion))
        };
        out += &format!("ax {}: {ann}{body}\n", s.name);
    }
    out
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "theory".into())
}

#[derive(Debug)]
pub enum LoadError {
    Io(PathBuf, std::io::Error),
    Parse(ParseError),
    Invalid(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            LoadError::Parse(e) => write!(f, "{e}"),
            LoadError::Invalid(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for LoadError {}

impl From<ParseError> for LoadError {
    fn from(e: ParseError) -> Self {
        LoadError::Parse(e)
    }
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|e| LoadError::Io(path.to_path_buf(), e))
}

pub fn load_theory(path: &Path) -> Result<Theory, LoadError> {
    Ok(parse_theory(&path.display().to_string(), &read(path)?, &stem(path))?)
}

/// A morphism together with the theory paths written in its file.
#[derive(Clone, Debug)]
pub struct MorphismFile {
    pub source_path: String,
    pub target_path: String,
    pub morphism: TheoryMorphism,
}

/// Parses a morphism; `resolve` loads the named theory files.
pub fn parse_morphism(
    file: &str,
    text: &str,
    default_name: &str,
    resolve: &dyn Fn(&str) -> Result<Theory, LoadError>,
) -> Result<MorphismFile, LoadError> {
    let mut name = default_name.to_string();
    let (mut src, mut tgt) = (None, None);
    let mut rest = Vec::new();
    for (ln, line) in lines(text) {
        let mut lx = Lexer::new(file, ln, line)?;
        let kw = lx.sym("a keyword")?;
        match kw.as_str() {
            "morphism" => {
                name = lx.sym("a name")?;
                lx.done()?;
            }
            "source" | "target" => {
                let p = line.trim()[kw.len()..].trim().to_string();
                if p.is_empty() {
                    return Err(lx.err::<()>("expected a path").unwrap_err().into());
                }
                if kw == "source" {
                    src = Some(p);
                } else {
                    tgt = Some(p);
                }
            }
            "sort" | "op" | "rel" => rest.push((ln, line)),
            other => return Err(lx.err::<()>(format!("unknown keyword `{other}`")).unwrap_err().into()),
        }
    }
    let missing = |w: &str| LoadError::Parse(ParseError { file: file.into(), line: 1, col: 1, msg: format!("no {w} line") });
    let source_path = src.ok_or_else(|| missing("source"))?;
    let target_path = tgt.ok_or_else(|| missing("target"))?;
    let (s, t) = (resolve(&source_path)?, resolve(&target_path)?);
    let (ssig, tsig) = (&s.sig, &t.sig);
    let mut sort_map: Vec<Option<SortId>> = ssig.sorts.iter().map(|n| tsig.sort(n)).collect();
    let mut op_map: Vec<Option<Term>> = vec![None; ssig.ops.len()];
    let mut rel_map: Vec<Option<HornFormula>> = vec![None; ssig.rels.len()];
    // sorts first: op and rel images are checked against the sort map
    rest.sort_by_key(|(_, l)| !l.trim_start().starts_with("sort"));
    for (ln, line) in rest {
        let mut lx = Lexer::new(file, ln, line)?;
        let kw = lx.sym("a keyword")?;
        let sym = lx.sym("a symbol")?;
        lx.expect(Tok::Arrow, "`->`")?;
        match kw.as_str() {
            "sort" => {
                let Some(a) = ssig.sort(&sym) else { return Err(lx.err::<()>(format!("unknown source sort `{sym}`")).unwrap_err().into()) };
                let b = lx.sym("a target sort")?;
                let Some(b) = tsig.sort(&b) else { return Err(lx.err::<()>(format!("unknown target sort `{b}`")).unwrap_err().into()) };
                sort_map[a.0] = Some(b);
                lx.done()?;
            }
            "op" => {
                let Some(f) = ssig.op(&sym) else { return Err(lx.err::<()>(format!("unknown source operation `{sym}`")).unwrap_err().into()) };
                let d = ssig.op_decl(f);
                let mut p = FormulaParser { sig: tsig, vars: Vec::new() };
                for (i, s) in d.args.iter().enumerate() {
                    let ts = sort_map[s.0].unwrap_or(SortId(0));
                    p.bind(&lx, i, ts)?;
                }
                let expected = sort_map[d.result.0];
                let (term, _) = p.term(&mut lx, expected)?;
                lx.done()?;
                if p.vars.len() > d.args.len() {
                    return Err(lx.err::<()>(format!("image of `{sym}` uses x{}", p.vars.len())).unwrap_err().into());
                }
                op_map[f.0] = Some(term);
            }
            _ => {
                let Some(r) = ssig.rel(&sym) else { return Err(lx.err::<()>(format!("unknown source relation `{sym}`")).unwrap_err().into()) };
                let d = ssig.rel_decl(r);
                let mut p = FormulaParser { sig: tsig, vars: Vec::new() };
                for (i, s) in d.args.iter().enumerate() {
                    p.bind(&lx, i, sort_map[s.0].unwrap_or(SortId(0)))?;
                }
                let phi = p.formula(&mut lx)?;
                lx.done()?;
                if p.vars.len() > d.args.len() {
                    return Err(lx.err::<()>(format!("image of `{sym}` uses x{}", p.vars.len())).unwrap_err().into());
                }
                rel_map[r.0] = Some(phi);
            }
        }
    }
    let sort_map = sort_map
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| LoadError::Invalid(format!("source sort `{}` has no image", ssig.sorts[i]))))
        .collect::<Result<Vec<_>, _>>()?;
    let op_map = op_map
        .into_iter()
        .enumerate()
        .map(|(i, t)| match t {
            Some(t) => Ok(t),
            None => default_op_image(ssig, tsig, i),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rel_map = rel_map
        .into_iter()
        .enumerate()
        .map(|(i, p)| match p {
            Some(p) => Ok(p),
            None => default_rel_image(ssig, tsig, i),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let morphism = TheoryMorphism { name, source: s, target: t, sort_map, op_map, rel_map };
    morphism.check().map_err(|e| LoadError::Invalid(format!("{file}: {e}")))?;
    Ok(MorphismFile { source_path, target_path, morphism })
}

fn default_op_image(ssig: &Signature, tsig: &Signature, i: usize) -> Result<Term, LoadError> {
    let d = &ssig.ops[i];
    let f = tsig.op(&d.name).ok_or_else(|| LoadError::Invalid(format!("operation `{}` has no image", d.name)))?;
    Ok(Term::App(f, (0..d.args.len()).map(Term::Var).collect()))
}

fn default_rel_image(ssig: &Signature, tsig: &Signature, i: usize) -> Result<HornFormula, LoadError> {
    let d = &ssig.rels[i];
    let r = tsig.rel(&d.name).ok_or_else(|| LoadError::Invalid(format!("relation `{}` has no image", d.name)))?;
    Ok(HornFormula::atom(Atom::Rel(r, (0..d.args.len()).map(Term::Var).collect())))
}

pub fn print_morphism(m: &MorphismFile) -> String {
    let e = &m.morphism;
    let (ssig, tsig) = (&e.source.sig, &e.target.sig);
    let mut out = format!("morphism {}\nsource {}\ntarget {}\n", e.name, m.source_path, m.target_path);
    for (i, s) in e.sort_map.iter().enumerate() {
        if tsig.sort(&ssig.sorts[i]) != Some(*s) {
            out += &format!("sort {} -> {}\n", ssig.sorts[i], tsig.sorts[s.0]);
        }
    }
    for (i, t) in e.op_map.iter().enumerate() {
        if default_op_image(ssig, tsig, i).ok().as_ref() != Some(t) {
            out += &format!("op {} -> {}\n", ssig.ops[i].name, show_term(tsig, t));
        }
    }
    for (i, p) in e.rel_map.iter().enumerate() {
        if default_rel_image(ssig, tsig, i).ok().as_ref() != Some(p) {
            out += &format!("rel {} -> {}\n", ssig.rels[i].name, show_formula(tsig, p));
        }
    }
    out
}

fn relative(base: &Path, p: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(p)
}

pub fn load_morphism(path: &Path) -> Result<MorphismFile, LoadError> {
    let resolve = |p: &str| load_theory(&relative(path, p));
    parse_morphism(&path.display().to_string(), &read(path)?, &stem(path), &resolve)
}

#[derive(Clone, Debug)]
pub struct ModelFile {
    pub theory_path: String,
    pub model: Structure,
}

fn tuple(lx: &mut Lexer) -> Result<Vec<usize>, ParseError> {
    lx.expect(Tok::LParen, "`(`")?;
    let mut v = Vec::new();
    if lx.eat(&Tok::RParen) {
        return Ok(v);
    }
    loop {
        v.push(lx.number("an element")?);
        if lx.eat(&Tok::RParen) {
            return Ok(v);
        }
        lx.expect(Tok::Comma, "`,` or `)`")?;
    }
}

/// Parses a model; `resolve` loads its theory file. Returns the theory too.
pub fn parse_model(
    file: &str,
    text: &str,
    resolve: &dyn Fn(&str) -> Result<Theory, LoadError>,
) -> Result<(ModelFile, Theory), LoadError> {
    let mut it = lines(text);
    let Some((ln, first)) = it.next() else {
        return Err(ParseError { file: file.into(), line: 1, col: 1, msg: "empty model file".into() }.into());
    };
    let mut lx = Lexer::new(file, ln, first)?;
    if lx.sym("`model`")? != "model" {
        return Err(lx.err::<()>("expected `model <name> : <theory-file>`").unwrap_err().into());
    }
    let name = lx.sym("a model name")?;
    lx.expect(Tok::Colon, "`:`")?;
    let theory_path = first[first.find(':').unwrap() + 1..].trim().to_string();
    let t = resolve(&theory_path)?;
    let sig = &t.sig;
    let mut carriers: Vec<Option<usize>> = vec![None; sig.sorts.len()];
    let mut ops: Vec<Vec<Option<usize>>> = Vec::new();
    let mut rels: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![Default::default(); sig.rels.len()];
    let ensure_tables = |carriers: &[Option<usize>], ops: &mut Vec<Vec<Option<usize>>>, lx: &Lexer| -> Result<(), ParseError> {
        if !ops.is_empty() || sig.ops.is_empty() {
            return Ok(());
        }
        if carriers.iter().any(Option::is_none) {
            return lx.err("all carriers must be given before tables");
        }
        let c: Vec<usize> = carriers.iter().map(|x| x.unwrap()).collect();
        *ops = sig.ops.iter().map(|d| vec![None; tuple_count(&c, &d.args)]).collect();
        Ok(())
    };
    for (ln, line) in it {
        let mut lx = Lexer::new(file, ln, line)?;
        let kw = lx.sym("a keyword")?;
        match kw.as_str() {
            "carrier" => {
                let s = lx.sym("a sort")?;
                let Some(sid) = sig.sort(&s) else { return Err(lx.err::<()>(format!("unknown sort `{s}`")).unwrap_err().into()) };
                lx.expect(Tok::Eq, "`=`")?;
                carriers[sid.0] = Some(lx.number("a size")?);
                lx.done()?;
            }
            "op" => {
                ensure_tables(&carriers, &mut ops, &lx)?;
                let f = lx.sym("an operation")?;
                let Some(fid) = sig.op(&f) else { return Err(lx.err::<()>(format!("unknown operation `{f}`")).unwrap_err().into()) };
                let d = sig.op_decl(fid);
                let c: Vec<usize> = carriers.iter().map(|x| x.unwrap()).collect();
                if lx.eat(&Tok::Eq) {
                    lx.expect(Tok::LBrack, "`[`")?;
                    let mut vals = Vec::new();
                    if !lx.eat(&Tok::RBrack) {
                        loop {
                            vals.push(lx.number("a value")?);
                            if lx.eat(&Tok::RBrack) {
                                break;
                            }
                            lx.expect(Tok::Comma, "`,` or `]`")?;
                        }
                    }
                    if vals.len() != ops[fid.0].len() {
                        return Err(lx.err::<()>(format!("`{f}` needs {} entries", ops[fid.0].len())).unwrap_err().into());
                    }
                    ops[fid.0] = vals.into_iter().map(Some).collect();
                } else {
                    lx.expect(Tok::Colon, "`:` or `=`")?;
                    let args = tuple(&mut lx)?;
                    lx.expect(Tok::Arrow, "`->`")?;
                    let v = lx.number("a value")?;
                    if args.len() != d.args.len() || args.iter().zip(&d.args).any(|(&a, s)| a >= c[s.0]) {
                        return Err(lx.err::<()>(format!("bad argument tuple for `{f}`")).unwrap_err().into());
                    }
                    let i = elemdoc_core::semantics::encode_tuple(&c, &d.args, &args);
                    ops[fid.0][i] = Some(v);
                }
                lx.done()?;
            }
            "rel" => {
                let r = lx.sym("a relation")?;
                let Some(rid) = sig.rel(&r) else { return Err(lx.err::<()>(format!("unknown relation `{r}`")).unwrap_err().into()) };
                lx.expect(Tok::Eq, "`=`")?;
                lx.expect(Tok::LBrace, "`{`")?;
                if !lx.eat(&Tok::RBrace) {
                    loop {
                        rels[rid.0].insert(tuple(&mut lx)?);
                        if lx.eat(&Tok::RBrace) {
                            break;
                        }
                        lx.expect(Tok::Comma, "`,` or `}`")?;
                    }
                }
                lx.done()?;
            }
            other => return Err(lx.err::<()>(format!("unknown keyword `{other}`")).unwrap_err().into()),
        }
    }
    let carriers = carriers
        .iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| LoadError::Invalid(format!("{file}: no carrier for sort `{}`", sig.sorts[i]))))
        .collect::<Result<Vec<_>, _>>()?;
    if ops.is_empty() {
        ops = sig.ops.iter().map(|d| vec![None; tuple_count(&carriers, &d.args)]).collect();
    }
    let ops = ops
        .into_iter()
        .enumerate()
        .map(|(i, tab)| {
            tab.into_iter()
                .enumerate()
                .map(|(k, v)| {
                    v.ok_or_else(|| {
                        let args = decode_tuple(&carriers, &sig.ops[i].args, k);
                        LoadError::Invalid(format!("{file}: `{}` undefined at {args:?}", sig.ops[i].name))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let model = Structure { name, sig: sig.clone(), carriers, ops, rels };
    let r = model.validate();
    if r.has_violations() {
        return Err(LoadError::Invalid(format!("{file}: {r}")));
    }
    Ok((ModelFile { theory_path, model }, t))
}

pub fn print_model(m: &ModelFile) -> String {
    let s = &m.model;
    let sig = &s.sig;
    let mut out = format!("model {} : {}\n", s.name, m.theory_path);
    for (i, c) in s.carriers.iter().enumerate() {
        out += &format!("carrier {} = {c}\n", sig.sorts[i]);
    }
    for f in sig.op_ids() {
        let d = sig.op_decl(f);
        for (k, args) in s.tuples(&d.args).enumerate() {
            let a: Vec<String> = args.iter().map(usize::to_string).collect();
            out += &format!("op {} : ({}) -> {}\n", d.name, a.join(", "), s.ops[f.0][k]);
        }
    }
    for r in sig.rel_ids() {
        let ts: Vec<String> = s.rels[r.0]
            .iter()
            .map(|t| format!("({})", t.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        out += &format!("rel {} = {{{}}}\n", sig.rel_decl(r).name, ts.join(", "));
    }
    out
}

pub fn load_model(path: &Path) -> Result<(ModelFile, Theory), LoadError> {
    let resolve = |p: &str| load_theory(&relative(path, p));
    parse_model(&path.display().to_string(), &read(path)?, &resolve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use elemdoc_core::corpus;

    const MONOID: &str = "\
theory monoid
op e : -> elem
op * : elem elem -> elem
ax left_unit: *(e, x1) = x1
ax right_unit: *(x1, e) = x1
ax assoc: *(*(x1, x2), x3) = *(x1, *(x2, x3))
";

    #[test]
    fn monoid_file() {
        let t = parse_theory("m", MONOID, "m").unwrap();
        assert_eq!(t.axioms.len(), 3);
        assert_eq!(t.sig, corpus::monoid().sig);
        assert_eq!(t.axioms, corpus::monoid().axioms);
        assert_eq!(print_theory(&t), MONOID);
    }

    #[test]
    fn empty_theory_with_one_sort() {
        let t = parse_theory("e", "sort thing\n", "e").unwrap();
        assert_eq!(t.sig.sorts, vec!["thing".to_string()]);
        assert!(t.axioms.is_empty());
    }

    #[test]
    fn undeclared_symbol_is_located() {
        let e = parse_theory("bad.thy", "op e : -> elem\nax *(e, x1) = x1\n", "b").unwrap_err();
        assert_eq!((e.line, e.col), (2, 4));
        assert!(e.msg.contains('*'));
    }

    #[test]
    fn corpus_theories_round_trip() {
        for t in corpus::theories() {
            let text = print_theory(&t);
            let back = parse_theory("t", &text, "t").unwrap();
            assert_eq!(back.sig, t.sig, "{}", t.name);
            assert_eq!(back.axioms, t.axioms, "{}", t.name);
            assert_eq!(print_theory(&back), text);
        }
    }

    #[test]
    fn premise_and_annotation() {
        let text = "theory p\nrel R : elem elem\nax trans: R(x1, x2) & R(x2, x3) => R(x1, x3)\nax spare: [x1:elem, x2:elem] x1 = x1\n";
        let t = parse_theory("p", text, "p").unwrap();
        assert_eq!(t.axioms[0].premise.atoms().len(), 2);
        assert_eq!(t.axioms[1].ctx.len(), 2);
        assert_eq!(print_theory(&t), text);
    }
}
