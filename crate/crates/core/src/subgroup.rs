//! Stallings foldings for finitely generated subgroups of free groups.
//!
//! Every edge carries a label: a word in the subgroup's generators of
//! record. Reading the labels along any basepoint loop gives an expression
//! of the loop's word in those generators, so `express` is a walk. The
//! labels are kept consistent through every fold by a vertex potential
//! argument: for an edge `v -x-> w` labelled `λ`, `τ(v)·x = λ·τ(w)`, with
//! `τ(basepoint) = 1`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Generator, GeneratorMap, Word};

/// Generator `i` of the alphabet in which [`SubgroupGraph::express`]
/// writes its answers.
pub fn record_generator(i: usize) -> Generator {
    Generator::indexed("", "gen", i as u32)
}

#[derive(Clone, Debug)]
struct Edge {
    from: usize,
    to: usize,
    gen: usize,
    label: Word,
    alive: bool,
}

/// A folded core graph with a basepoint at vertex 0.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    alphabet: Alphabet,
    generators: Vec<Word>,
    vertex_count: usize,
    // (from, generator index, to, label), sorted
    edges: Vec<(usize, usize, usize, Word)>,
    // per vertex: (signed code, target, edge index), sorted by code
    out: Vec<Vec<(i32, usize, usize)>>,
}

fn code_key(c: i32) -> (u32, bool) {
    (c.unsigned_abs(), c < 0)
}

struct Folder {
    edges: Vec<Edge>,
    inc: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

impl Folder {
    fn new_vertex(&mut self) -> usize {
        self.inc.push(Vec::new());
        self.alive.push(true);
        self.inc.len() - 1
    }

    fn add_edge(&mut self, from: usize, gen: usize, to: usize, label: Word) {
        let id = self.edges.len();
        self.edges.push(Edge { from, to, gen, label, alive: true });
        self.inc[from].push(id);
        if to != from {
            self.inc[to].push(id);
        }
    }

    fn live_incident(&mut self, v: usize) -> Vec<usize> {
        let edges = &self.edges;
        let list = &mut self.inc[v];
        list.retain(|&e| edges[e].alive && (edges[e].from == v || edges[e].to == v));
        list.sort_unstable();
        list.dedup();
        list.clone()
    }

    // Half-edges leaving v: (code, edge, other end, label read in that direction).
    fn halves(&mut self, v: usize) -> Vec<(i32, usize, usize, Word)> {
        let mut out = Vec::new();
        for e in self.live_incident(v) {
            let edge = &self.edges[e];
            let code = edge.gen as i32 + 1;
            if edge.from == v {
                out.push((code, e, edge.to, edge.label.clone()));
            }
            if edge.to == v {
                out.push((-code, e, edge.from, edge.label.inverse()));
            }
        }
        out
    }

    fn kill_edge(&mut self, e: usize) {
        self.edges[e].alive = false;
    }

    // Identify `gone` with `kept`, where τ(gone) = δ⁻¹·τ(kept).
    fn merge(&mut self, gone: usize, kept: usize, delta: &Word) {
        let delta_inv = delta.inverse();
        for e in self.live_incident(gone) {
            let already = {
                let edge = &self.edges[e];
                edge.from == kept || edge.to == kept
            };
            let edge = &mut self.edges[e];
            if edge.from == gone {
                edge.label = delta.mul(&edge.label);
                edge.from = kept;
            }
            if edge.to == gone {
                edge.label = edge.label.mul(&delta_inv);
                edge.to = kept;
            }
            if !already {
                self.inc[kept].push(e);
            }
        }
        self.inc[gone].clear();
        self.alive[gone] = false;
    }

    // Folds one collision at v if there is one; returns the vertices to revisit.
    fn fold_at(&mut self, v: usize) -> Option<Vec<usize>> {
        let mut halves = self.halves(v);
        halves.sort_by(|a, b| code_key(a.0).cmp(&code_key(b.0)).then(a.1.cmp(&b.1)));
        let pos = halves.windows(2).position(|p| p[0].0 == p[1].0)?;
        let (_, e1, w1, l1) = halves[pos].clone();
        let (_, e2, w2, l2) = halves[pos + 1].clone();
        if w1 == w2 {
            self.kill_edge(e2);
            return Some(vec![v, w1]);
        }
        // keep the basepoint fixed: it anchors τ = 1
        let (e_keep, keep, l_keep, e_gone, gone, l_gone) = if w2 == 0 {
            (e2, w2, l2, e1, w1, l1)
        } else {
            (e1, w1, l1, e2, w2, l2)
        };
        let _ = e_keep;
        self.kill_edge(e_gone);
        let delta = l_keep.inverse().mul(&l_gone);
        self.merge(gone, keep, &delta);
        let mut revisit = vec![keep];
        if v != gone {
            revisit.push(v);
        }
        Some(revisit)
    }
}

impl SubgroupGraph {
    /// Folds the subgroup generated by `gens`. Each word is freely reduced
    /// first; the empty word contributes nothing.
    pub fn fold(gens: &[Word]) -> Self {
        let generators: Vec<Word> = gens.iter().map(Word::reduce).collect();
        let alphabet: Alphabet = generators
            .iter()
            .flat_map(|w| w.generators())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut f = Folder { edges: Vec::new(), inc: Vec::new(), alive: Vec::new() };
        f.new_vertex();
        for (i, w) in generators.iter().enumerate() {
            let letters: Vec<_> = w.letters().collect();
            let n = letters.len();
            let mut at = 0;
            for (k, l) in letters.iter().enumerate() {
                let next = if k + 1 == n { 0 } else { f.new_vertex() };
                let gen = alphabet.get_index_of(&l.generator).expect("letter in alphabet");
                let label = if k == 0 { Word::letter(&record_generator(i)) } else { Word::empty() };
                if l.sign.value() > 0 {
                    f.add_edge(at, gen, next, label);
                } else {
                    f.add_edge(next, gen, at, label.inverse());
                }
                at = next;
            }
        }

        let mut stack: Vec<usize> = (0..f.inc.len()).rev().collect();
        while let Some(v) = stack.pop() {
            if !f.alive[v] {
                continue;
            }
            if let Some(revisit) = f.fold_at(v) {
                stack.extend(revisit.into_iter().rev());
            }
        }

        trim(&mut f);
        Self::canonical(alphabet, generators, &mut f)
    }

    fn canonical(alphabet: Alphabet, generators: Vec<Word>, f: &mut Folder) -> Self {
        let mut number = vec![usize::MAX; f.inc.len()];
        number[0] = 0;
        let mut order = vec![0];
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let mut halves = f.halves(v);
            halves.sort_by_key(|a| code_key(a.0));
            for (_, _, w, _) in halves {
                if number[w] == usize::MAX {
                    number[w] = order.len();
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut edges: Vec<(usize, usize, usize, Word)> = f
            .edges
            .iter()
            .filter(|e| e.alive)
            .map(|e| (number[e.from], e.gen, number[e.to], e.label.clone()))
            .collect();
        edges.sort_by_key(|a| (a.0, a.1, a.2));
        let mut out = vec![Vec::new(); order.len()];
        for (i, (from, gen, to, _)) in edges.iter().enumerate() {
            let code = *gen as i32 + 1;
            out[*from].push((code, *to, i));
            out[*to].push((-code, *from, i));
        }
        for list in &mut out {
            list.sort_by_key(|&(c, _, _)| code_key(c));
        }
        SubgroupGraph { alphabet, generators, vertex_count: order.len(), edges, out }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The words the graph was folded from, freely reduced.
    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    /// Edges as `(from, generator, to)` triples in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, &Generator, usize)> + '_ {
        self.edges.iter().map(|(f, g, t, _)| (*f, &self.alphabet[*g], *t))
    }

    /// Rank of the subgroup: edges − vertices + 1.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    fn step(&self, v: usize, code: i32) -> Option<(usize, usize)> {
        let list = &self.out[v];
        let i = list.binary_search_by_key(&code_key(code), |&(c, _, _)| code_key(c)).ok()?;
        Some((list[i].1, list[i].2))
    }

    // Follows the reduced form of w from the basepoint; returns the end vertex
    // and, if asked for, the label product. None if the walk leaves the graph.
    // Edges with a fixed letter are injective in a folded graph, so a run of
    // that letter that revisits a vertex has come back to where it started;
    // whole periods are then skipped.
    fn trace(&self, w: &Word, want_label: bool) -> Option<(usize, Word)> {
        let mut v = 0;
        let mut label = Word::empty();
        for s in w.reduce().syllables() {
            let gen = self.alphabet.get_index_of(s.generator())? as i32 + 1;
            let code = if s.exponent() > 0 { gen } else { -gen };
            let start = v;
            let mut remaining = s.exponent().unsigned_abs();
            let mut period = Some((0u64, Word::empty()));
            while remaining > 0 {
                let (next, e) = self.step(v, code)?;
                let edge = self.edges[e].3.syllables();
                let push = |w: &mut Word| {
                    if code > 0 {
                        edge.iter().for_each(|t| w.push_reduced(t.generator(), t.exponent()));
                    } else {
                        edge.iter().rev().for_each(|t| w.push_reduced(t.generator(), -t.exponent()));
                    }
                };
                if want_label {
                    push(&mut label);
                }
                v = next;
                remaining -= 1;
                let Some((len, cycle)) = period.as_mut() else { continue };
                *len += 1;
                if want_label {
                    push(cycle);
                }
                if v == start {
                    let q = remaining / *len;
                    if want_label && q > 0 {
                        let whole = cycle.pow(q as i64);
                        whole.syllables().iter().for_each(|t| label.push_reduced(t.generator(), t.exponent()));
                    }
                    remaining -= q * *len;
                    period = None;
                }
            }
        }
        Some((v, label))
    }

    /// Whether `w` lies in the subgroup.
    pub fn contains(&self, w: &Word) -> bool {
        matches!(self.trace(w, false), Some((0, _)))
    }

    /// Writes a member of the subgroup as a word in the generators of
    /// record, `gen_0, gen_1, …` (see [`record_generator`]).
    pub fn express(&self, w: &Word) -> Result<Word> {
        match self.trace(w, true) {
            Some((0, label)) => Ok(label),
            _ => Err(Error::NotAMember),
        }
    }

    /// The substitution `gen_i ↦ generators()[i]`.
    pub fn record_map(&self) -> GeneratorMap {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, w)| (record_generator(i), w.clone()))
            .collect()
    }

    /// Whether the two graphs are the same labelled graph. Both are in
    /// canonical numbering, so this is a direct comparison.
    pub fn same_graph(&self, other: &SubgroupGraph) -> bool {
        self.alphabet == other.alphabet
            && self.vertex_count == other.vertex_count
            && self.edges().eq(other.edges())
    }

    /// Serializable dump: vertex count, basepoint and edge triples.
    pub fn dump(&self) -> GraphDump {
        GraphDump {
            vertices: self.vertex_count,
            basepoint: 0,
            edges: self.edges().map(|(f, g, t)| (f, g.clone(), t)).collect(),
            generators: self.generators.clone(),
        }
    }
}

/// Plain form of a [`SubgroupGraph`] for certificate files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct GraphDump {
    pub vertices: usize,
    pub basepoint: usize,
    pub edges: Vec<(usize, Generator, usize)>,
    pub generators: Vec<Word>,
}

fn trim(f: &mut Folder) {
    let mut stack: Vec<usize> = (1..f.inc.len()).collect();
    while let Some(v) = stack.pop() {
        if v == 0 || !f.alive[v] {
            continue;
        }
        let inc = f.live_incident(v);
        let degree: usize = inc
            .iter()
            .map(|&e| if f.edges[e].from == f.edges[e].to { 2 } else { 1 })
            .sum();
        if degree <= 1 {
            for e in inc {
                let other = if f.edges[e].from == v { f.edges[e].to } else { f.edges[e].from };
                f.kill_edge(e);
                stack.push(other);
            }
            f.alive[v] = false;
            f.inc[v].clear();
        }
    }
}

/// Rank of the subgroup generated by `gens`.
pub fn graph_rank(gens: &[Word]) -> usize {
    SubgroupGraph::fold(gens).rank()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn gen(i: usize) -> Word {
        Word::letter(&record_generator(i))
    }

    #[test]
    fn long_runs_skip_whole_cycles() {
        let g = SubgroupGraph::fold(&[w("a^3"), w("b a^5 b'")]);
        let big = w("a^3000 b a^-50005 b' a^6");
        let e = g.express(&big).unwrap();
        assert_eq!(e, w("gen_0^1000 gen_1^-10001 gen_0^2"));
        assert_eq!(g.record_map().substitute(&e).unwrap().reduce(), big);
        assert!(!g.contains(&w("a^3001")));
        assert!(!g.contains(&w("b a^50004 b'")));
    }

    #[test]
    fn square_of_a_letter() {
        let g = SubgroupGraph::fold(&[w("a^2")]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.rank(), 1);
        assert!(!g.contains(&w("a")));
        assert!(g.contains(&w("a^-6")));
        assert_eq!(g.express(&w("a^4")).unwrap(), gen(0).pow(2));
        assert!(matches!(g.express(&w("a")), Err(Error::NotAMember)));
    }

    #[test]
    fn ab_and_a_generate_everything() {
        let g = SubgroupGraph::fold(&[w("a b"), w("a")]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.rank(), 2);
        assert!(g.contains(&w("b")));
        assert_eq!(g.express(&w("b")).unwrap(), gen(1).inverse().mul(&gen(0)));
    }

    #[test]
    fn free_rank_two() {
        assert_eq!(graph_rank(&[w("a"), w("b")]), 2);
        assert_eq!(graph_rank(&[]), 0);
        assert_eq!(graph_rank(&[w("1")]), 0);
        assert_eq!(graph_rank(&[w("a b a'"), w("a b^2 a'")]), 1);
    }

    #[test]
    fn conjugate_has_hanging_basepoint() {
        let g = SubgroupGraph::fold(&[w("a b a'")]);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.contains(&w("a b^-3 a'")));
        assert!(!g.contains(&w("b")));
        assert_eq!(g.express(&w("a b^2 a'")).unwrap(), gen(0).pow(2));
    }

    #[test]
    fn dump_lists_edges() {
        let d = SubgroupGraph::fold(&[w("a^2")]).dump();
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["vertices"], 2);
        assert_eq!(json["edges"], serde_json::json!([[0, "a", 1], [1, "a", 0]]));
    }

    fn small_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0u8..3, prop::bool::ANY), 0..7).prop_map(|ls| {
            let mut out = Word::empty();
            for (g, pos) in ls {
                let g = Generator::plain(["a", "b", "c"][g as usize]);
                out.push_reduced(&g, if pos { 1 } else { -1 });
            }
            out
        })
    }

    proptest! {
        #[test]
        fn generators_are_members(gens in prop::collection::vec(small_word(), 0..5)) {
            let g = SubgroupGraph::fold(&gens);
            prop_assert!(g.rank() <= gens.len());
            for x in &gens {
                prop_assert!(g.contains(x));
            }
        }

        #[test]
        fn express_substitutes_back(gens in prop::collection::vec(small_word(), 1..5),
                                    picks in prop::collection::vec((0usize..5, prop::bool::ANY), 0..6)) {
            let g = SubgroupGraph::fold(&gens);
            let mut target = Word::empty();
            for (i, pos) in picks {
                let x = &gens[i % gens.len()];
                target = target.mul(&if pos { x.clone() } else { x.inverse() });
            }
            let e = g.express(&target).unwrap();
            prop_assert_eq!(g.record_map().substitute(&e).unwrap(), target);
        }

        #[test]
        fn folding_is_order_independent(gens in prop::collection::vec(small_word(), 0..5), seed in 0usize..120) {
            let mut shuffled = gens.clone();
            let n = shuffled.len();
            if n > 1 {
                shuffled.rotate_left(seed % n);
                shuffled.swap(0, (seed / n) % n);
            }
            let a = SubgroupGraph::fold(&gens);
            let b = SubgroupGraph::fold(&shuffled);
            prop_assert!(a.same_graph(&b));
        }
    }
}
