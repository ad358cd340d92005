//! Simply-typed applicative first-order terms, rules and rewrite systems.
//!
//! Terms are stored in spine form: a head symbol applied to a (possibly
//! partial) argument list, or a sort-typed variable. Types are never stored
//! on nodes; they are recomputed from the [`Signature`] on demand.

mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_term, parse_trs};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrsError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("type error at line {line}: {msg}")]
    Type { line: usize, msg: String },
    #[error("rule error at line {line}: {msg}")]
    Rule { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

/// `ι₁ ⇒ … ⇒ ι_m ⇒ κ`, with `m = args.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleType {
    pub args: Vec<SortId>,
    pub result: SortId,
}

impl SimpleType {
    pub fn sort(result: SortId) -> Self {
        SimpleType {
            args: Vec::new(),
            result,
        }
    }

    pub fn is_sort(&self) -> bool {
        self.args.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// The type left after supplying the first `n` arguments.
    pub fn after_args(&self, n: usize) -> SimpleType {
        SimpleType {
            args: self.args[n.min(self.args.len())..].to_vec(),
            result: self.result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub ty: SimpleType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub sort: SortId,
}

/// Sorts, function symbols and declared variables of one system.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    sorts: Vec<String>,
    symbols: Vec<Symbol>,
    vars: Vec<Variable>,
    sort_index: HashMap<String, SortId>,
    sym_index: HashMap<String, SymId>,
    var_index: HashMap<String, VarId>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId, String> {
        if self.sort_index.contains_key(name) {
            return Err(format!("sort `{name}` declared twice"));
        }
        let id = SortId(self.sorts.len());
        self.sorts.push(name.to_string());
        self.sort_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_symbol(&mut self, name: &str, ty: SimpleType) -> Result<SymId, String> {
        if self.sym_index.contains_key(name) {
            return Err(format!("symbol `{name}` declared twice"));
        }
        if self.var_index.contains_key(name) {
            return Err(format!("`{name}` is already a variable"));
        }
        let id = SymId(self.symbols.len());
        self.symbols.push(Symbol {
            name: name.to_string(),
            ty,
        });
        self.sym_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_var(&mut self, name: &str, sort: SortId) -> Result<VarId, String> {
        if self.var_index.contains_key(name) {
            return Err(format!("variable `{name}` declared twice"));
        }
        if self.sym_index.contains_key(name) {
            return Err(format!("`{name}` is already a symbol"));
        }
        let id = VarId(self.vars.len());
        self.vars.push(Variable {
            name: name.to_string(),
            sort,
        });
        self.var_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn sorts(&self) -> impl Iterator<Item = (SortId, &str)> {
        self.sorts
            .iter()
            .enumerate()
            .map(|(i, s)| (SortId(i), s.as_str()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymId, &Symbol)> {
        self.symbols.iter().enumerate().map(|(i, s)| (SymId(i), s))
    }

    pub fn vars(&self) -> impl Iterator<Item = (VarId, &Variable)> {
        self.vars.iter().enumerate().map(|(i, v)| (VarId(i), v))
    }

    pub fn sort_name(&self, id: SortId) -> &str {
        &self.sorts[id.0]
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sort_index.get(name).copied()
    }

    pub fn symbol(&self, id: SymId) -> &Symbol {
        &self.symbols[id.0]
    }

    pub fn symbol_id(&self, name: &str) -> Option<SymId> {
        self.sym_index.get(name).copied()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id.0]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.var_index.get(name).copied()
    }

    /// Variables of `sort` in declaration order.
    pub fn vars_of_sort(&self, sort: SortId) -> Vec<VarId> {
        self.vars()
            .filter(|(_, v)| v.sort == sort)
            .map(|(id, _)| id)
            .collect()
    }

    /// Type of a well-formed term; typing is checked when terms are built.
    pub fn type_of(&self, t: &Term) -> SimpleType {
        match t {
            Term::Var(v) => SimpleType::sort(self.var(*v).sort),
            Term::App(f, args) => self.symbol(*f).ty.after_args(args.len()),
        }
    }

    pub fn show<'a>(&'a self, t: &'a Term) -> TermDisplay<'a> {
        TermDisplay { sig: self, term: t }
    }

    pub fn show_type(&self, ty: &SimpleType) -> String {
        let mut parts: Vec<&str> = ty.args.iter().map(|s| self.sort_name(*s)).collect();
        parts.push(self.sort_name(ty.result));
        parts.join(" => ")
    }

    /// Build `f args` checking arity and argument sorts.
    pub fn app(&self, f: SymId, args: Vec<Term>) -> Result<Term, String> {
        let sym = self.symbol(f);
        if args.len() > sym.ty.arity() {
            return Err(format!(
                "`{}` takes at most {} arguments, got {}",
                sym.name,
                sym.ty.arity(),
                args.len()
            ));
        }
        for (i, a) in args.iter().enumerate() {
            let at = self.type_of(a);
            let expected = sym.ty.args[i];
            if !at.is_sort() || at.result != expected {
                return Err(format!(
                    "argument {} of `{}` has type {}, expected {}",
                    i + 1,
                    sym.name,
                    self.show_type(&at),
                    self.sort_name(expected)
                ));
            }
        }
        Ok(Term::App(f, args))
    }
}

/// A first-order applicative term in spine form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarId),
    App(SymId, Vec<Term>),
}

/// Path of argument indices from the root; the empty path is the root.
pub type Position = Vec<usize>;

impl Term {
    pub fn constant(f: SymId) -> Term {
        Term::App(f, Vec::new())
    }

    /// Absolute size: one per symbol and variable occurrence.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn head(&self) -> Option<SymId> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(*f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of occurrences of each variable.
    pub fn var_occurrences(&self) -> BTreeMap<VarId, usize> {
        let mut out = BTreeMap::new();
        fn go(t: &Term, out: &mut BTreeMap<VarId, usize>) {
            match t {
                Term::Var(v) => *out.entry(*v).or_default() += 1,
                Term::App(_, args) => args.iter().for_each(|a| go(a, out)),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn symbols(&self) -> BTreeSet<SymId> {
        let mut out = BTreeSet::new();
        fn go(t: &Term, out: &mut BTreeSet<SymId>) {
            if let Term::App(f, args) = t {
                out.insert(*f);
                args.iter().for_each(|a| go(a, out));
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((i, rest)) => self.args().get(*i)?.at(rest),
        }
    }

    pub fn replace_at(&self, pos: &[usize], new: Term) -> Term {
        match pos.split_first() {
            None => new,
            Some((i, rest)) => match self {
                Term::App(f, args) => {
                    let mut args = args.clone();
                    args[*i] = args[*i].replace_at(rest, new);
                    Term::App(*f, args)
                }
                Term::Var(_) => panic!("position below a variable"),
            },
        }
    }

    /// Homomorphic replacement of variables; symbols are unchanged.
    pub fn apply(&self, subst: &Substitution) -> Term {
        match self {
            Term::Var(v) => subst.get(*v).cloned().unwrap_or(Term::Var(*v)),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.apply(subst)).collect()),
        }
    }
}

pub struct TermDisplay<'a> {
    sig: &'a Signature,
    term: &'a Term,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(sig: &Signature, t: &Term, nested: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Term::Var(v) => write!(f, "{}", sig.var(*v).name),
                Term::App(h, args) if args.is_empty() => write!(f, "{}", sig.symbol(*h).name),
                Term::App(h, args) => {
                    if nested {
                        write!(f, "(")?;
                    }
                    write!(f, "{}", sig.symbol(*h).name)?;
                    for a in args {
                        write!(f, " ")?;
                        go(sig, a, true, f)?;
                    }
                    if nested {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self.sig, self.term, false, f)
    }
}

/// A type-preserving finite map from variables to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(
        sig: &Signature,
        pairs: impl IntoIterator<Item = (VarId, Term)>,
    ) -> Result<Self, TrsError> {
        let mut map = BTreeMap::new();
        for (v, t) in pairs {
            let ty = sig.type_of(&t);
            let var = sig.var(v);
            if !ty.is_sort() || ty.result != var.sort {
                return Err(TrsError::Type {
                    line: 0,
                    msg: format!(
                        "substitution maps `{}` : {} to a term of type {}",
                        var.name,
                        sig.sort_name(var.sort),
                        sig.show_type(&ty)
                    ),
                });
            }
            if t != Term::Var(v) {
                map.insert(v, t);
            }
        }
        Ok(Substitution { map })
    }

    /// Unchecked insertion, used by matching where types agree by construction.
    pub(crate) fn bind(&mut self, v: VarId, t: Term) {
        self.map.insert(v, t);
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn domain(&self) -> impl Iterator<Item = VarId> + '_ {
        self.map.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    /// `self; other`: first apply `self`, then `other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<VarId, Term> =
            self.map.iter().map(|(v, t)| (*v, t.apply(other))).collect();
        for (v, t) in &other.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        map.retain(|v, t| *t != Term::Var(*v));
        Substitution { map }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    /// Source line, 0 when built programmatically.
    pub line: usize,
}

impl Rule {
    pub fn head(&self) -> SymId {
        self.lhs.head().expect("rule lhs is headed by a symbol")
    }
}

/// A validated rewrite system with its constructor/defined split.
#[derive(Debug, Clone)]
pub struct Trs {
    pub sig: Signature,
    pub rules: Vec<Rule>,
    defined: BTreeSet<SymId>,
}

impl Trs {
    /// Validate rules and compute the constructor/defined partition.
    pub fn new(sig: Signature, rules: Vec<Rule>) -> Result<Self, TrsError> {
        for r in &rules {
            let Some(_) = r.lhs.head() else {
                return Err(TrsError::Rule {
                    line: r.line,
                    msg: "left-hand side must be headed by a function symbol".into(),
                });
            };
            let lt = sig.type_of(&r.lhs);
            let rt = sig.type_of(&r.rhs);
            if lt != rt {
                return Err(TrsError::Type {
                    line: r.line,
                    msg: format!(
                        "sides have different types: {} vs {}",
                        sig.show_type(&lt),
                        sig.show_type(&rt)
                    ),
                });
            }
            let lv = r.lhs.vars();
            if let Some(v) = r.rhs.vars().into_iter().find(|v| !lv.contains(v)) {
                return Err(TrsError::Rule {
                    line: r.line,
                    msg: format!(
                        "variable `{}` occurs on the right but not on the left",
                        sig.var(v).name
                    ),
                });
            }
        }
        let defined = rules.iter().map(Rule::head).collect();
        Ok(Trs {
            sig,
            rules,
            defined,
        })
    }

    pub fn is_defined(&self, f: SymId) -> bool {
        self.defined.contains(&f)
    }

    pub fn is_constructor(&self, f: SymId) -> bool {
        !self.defined.contains(&f)
    }

    pub fn defined(&self) -> impl Iterator<Item = SymId> + '_ {
        self.defined.iter().copied()
    }

    pub fn constructors(&self) -> impl Iterator<Item = SymId> + '_ {
        self.sig
            .symbols()
            .map(|(id, _)| id)
            .filter(move |id| !self.defined.contains(id))
    }

    pub fn rules_of(&self, f: SymId) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.head() == f)
    }

    pub fn type_of(&self, t: &Term) -> SimpleType {
        self.sig.type_of(t)
    }

    pub fn show<'a>(&'a self, t: &'a Term) -> TermDisplay<'a> {
        self.sig.show(t)
    }

    pub fn show_rule(&self, r: &Rule) -> String {
        format!("{} -> {}", self.sig.show(&r.lhs), self.sig.show(&r.rhs))
    }

    /// `c d₁ … d_k` with `c` a constructor and every `dᵢ` data.
    pub fn is_data(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(f, args) => self.is_constructor(*f) && args.iter().all(|a| self.is_data(a)),
        }
    }

    /// Sort-typed, headed by a defined symbol, all arguments data.
    pub fn is_basic(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(f, args) => {
                self.is_defined(*f)
                    && self.type_of(t).is_sort()
                    && args.iter().all(|a| self.is_data(a))
            }
        }
    }

    /// Checked substitution application.
    pub fn apply_subst(
        &self,
        t: &Term,
        pairs: impl IntoIterator<Item = (VarId, Term)>,
    ) -> Result<Term, TrsError> {
        Ok(t.apply(&Substitution::new(&self.sig, pairs)?))
    }

    /// The subsystem of rules defining `names` and everything they call.
    /// Symbols outside that closure that are defined in `self` are dropped
    /// from the signature so they do not turn into constructors.
    pub fn restrict_to(&self, names: &[&str]) -> Result<Trs, TrsError> {
        let mut keep: BTreeSet<SymId> = BTreeSet::new();
        let mut todo: Vec<SymId> = Vec::new();
        for n in names {
            let id = self.sig.symbol_id(n).ok_or_else(|| TrsError::Rule {
                line: 0,
                msg: format!("unknown symbol `{n}`"),
            })?;
            todo.push(id);
        }
        while let Some(f) = todo.pop() {
            if !keep.insert(f) {
                continue;
            }
            for r in self.rules_of(f) {
                for g in r.lhs.symbols().into_iter().chain(r.rhs.symbols()) {
                    if self.is_defined(g) && !keep.contains(&g) {
                        todo.push(g);
                    }
                }
            }
        }
        let mut sig = Signature::new();
        for (_, s) in self.sig.sorts() {
            sig.add_sort(s).expect("distinct sorts");
        }
        let mut sym_map = HashMap::new();
        for (id, sym) in self.sig.symbols() {
            if self.is_constructor(id) || keep.contains(&id) {
                let new = sig
                    .add_symbol(&sym.name, sym.ty.clone())
                    .expect("distinct symbols");
                sym_map.insert(id, new);
            }
        }
        for (_, v) in self.sig.vars() {
            sig.add_var(&v.name, v.sort).expect("distinct variables");
        }
        fn remap(t: &Term, m: &HashMap<SymId, SymId>) -> Term {
            match t {
                Term::Var(v) => Term::Var(*v),
                Term::App(f, args) => Term::App(m[f], args.iter().map(|a| remap(a, m)).collect()),
            }
        }
        let rules = self
            .rules
            .iter()
            .filter(|r| keep.contains(&r.head()))
            .map(|r| Rule {
                lhs: remap(&r.lhs, &sym_map),
                rhs: remap(&r.rhs, &sym_map),
                line: r.line,
            })
            .collect();
        Trs::new(sig, rules)
    }
}

#[cfg(test)]
mod tests;
