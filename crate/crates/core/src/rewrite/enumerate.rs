use std::collections::HashMap;

use crate::syntax::{SortId, SymId, Term, Trs};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pool {
    Data,
    Ground,
}

/// Ground sort-typed terms of a given absolute size, smallest first.
pub struct TermEnumerator<'a> {
    trs: &'a Trs,
    cache: HashMap<(Pool, SortId, usize), Vec<Term>>,
}

impl<'a> TermEnumerator<'a> {
    pub fn new(trs: &'a Trs) -> Self {
        TermEnumerator {
            trs,
            cache: HashMap::new(),
        }
    }

    /// Data terms of sort `sort` with exactly `size` symbols.
    pub fn data_terms(&mut self, sort: SortId, size: usize) -> Vec<Term> {
        self.pool(Pool::Data, sort, size)
    }

    /// Basic terms (fully applied defined symbol over data) of exactly `size`.
    pub fn basic_terms(&mut self, size: usize) -> Vec<Term> {
        let heads: Vec<SymId> = self.trs.defined().collect();
        let mut out = Vec::new();
        for f in heads {
            let ty = self.trs.sig.symbol(f).ty.clone();
            self.headed(f, &ty.args, size, Pool::Data, &mut out);
        }
        out
    }

    /// All ground fully applied terms of exactly `size`, of every sort.
    pub fn ground_terms(&mut self, size: usize) -> Vec<Term> {
        let sorts: Vec<SortId> = self.trs.sig.sorts().map(|(id, _)| id).collect();
        let mut out = Vec::new();
        for s in sorts {
            out.extend(self.pool(Pool::Ground, s, size));
        }
        out
    }

    fn pool(&mut self, pool: Pool, sort: SortId, size: usize) -> Vec<Term> {
        if size == 0 {
            return Vec::new();
        }
        if let Some(v) = self.cache.get(&(pool, sort, size)) {
            return v.clone();
        }
        let heads: Vec<(SymId, Vec<SortId>)> = self
            .trs
            .sig
            .symbols()
            .filter(|(id, s)| {
                s.ty.result == sort && (pool == Pool::Ground || self.trs.is_constructor(*id))
            })
            .map(|(id, s)| (id, s.ty.args.clone()))
            .collect();
        let mut out = Vec::new();
        for (f, args) in heads {
            self.headed(f, &args, size, pool, &mut out);
        }
        self.cache.insert((pool, sort, size), out.clone());
        out
    }

    /// `f t₁ … t_m` with the `tᵢ` drawn from `pool` and total size `size`.
    fn headed(&mut self, f: SymId, args: &[SortId], size: usize, pool: Pool, out: &mut Vec<Term>) {
        if size < 1 + args.len() {
            return;
        }
        let mut partial = Vec::new();
        self.fill(f, args, size - 1, pool, &mut partial, out);
    }

    fn fill(
        &mut self,
        f: SymId,
        sorts: &[SortId],
        remaining: usize,
        pool: Pool,
        partial: &mut Vec<Term>,
        out: &mut Vec<Term>,
    ) {
        let Some((&first, rest)) = sorts.split_first() else {
            if remaining == 0 {
                out.push(Term::App(f, partial.clone()));
            }
            return;
        };
        // leave at least one symbol for each later argument
        let max_here = remaining.saturating_sub(rest.len());
        for n in 1..=max_here {
            for t in self.pool(pool, first, n) {
                partial.push(t);
                self.fill(f, rest, remaining - n, pool, partial, out);
                partial.pop();
            }
        }
    }
}
