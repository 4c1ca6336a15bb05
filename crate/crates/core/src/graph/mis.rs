//! Exact maximum independent sets by bitset branch and bound.
//!
//! Independence is taken on the symmetrized arc set: two nodes conflict when
//! an arc joins them in either direction. The search is the max-clique
//! algorithm of the complement graph (BBMC style): candidate sets are
//! bitsets and every search node is bounded by a greedy clique cover of the
//! candidates in the original graph, since an independent set picks at most
//! one node from each clique.

use super::bitset::Bitset;
use crate::error::{invalid_input, Error, Result};

/// Default cap on branch-and-bound search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Unweighted digraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryDigraph {
    n: usize,
    out: Vec<Bitset>,
}

impl BinaryDigraph {
    /// Graph on `n` nodes with no arcs.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            out: vec![Bitset::new(n); n],
        }
    }

    /// Builds a graph from an arc list. Self-loops are ignored.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (i, j) in arcs {
            if i >= n || j >= n {
                return Err(invalid_input(format!(
                    "arc {i}->{j} out of range for n = {n}"
                )));
            }
            g.add_arc(i, j);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                g.add_arc(i, j);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `from -> to`; a self-loop is silently dropped.
    pub fn add_arc(&mut self, from: usize, to: usize) {
        if from != to {
            self.out[from].insert(to);
        }
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.out[from].contains(to)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(Bitset::len).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |j| (i, j)))
    }

    /// Whether every arc of `self` is also an arc of `other`.
    pub fn is_subgraph_of(&self, other: &BinaryDigraph) -> bool {
        self.n == other.n && self.out.iter().zip(&other.out).all(|(a, b)| a.is_subset(b))
    }

    /// Whether no arc joins two members of `set`, in either direction.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&i| set.iter().all(|&j| !self.has_arc(i, j)))
    }

    fn symmetrized(&self) -> Vec<Bitset> {
        let mut adj = self.out.clone();
        for (i, j) in self.arcs() {
            adj[j].insert(i);
        }
        adj
    }
}

/// Exact independence number with the default node budget.
pub fn independence_number(g: &BinaryDigraph) -> Result<usize> {
    independence_number_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn independence_number_with_budget(g: &BinaryDigraph, budget: u64) -> Result<usize> {
    maximum_independent_set(g, budget).map(|s| s.len())
}

/// A maximum independent set (ascending node order), or
/// [`Error::BudgetExceeded`] if the search needs more than `budget` nodes.
pub fn maximum_independent_set(g: &BinaryDigraph, budget: u64) -> Result<Vec<usize>> {
    if g.n == 0 {
        return Err(invalid_input("independence number of an empty node set"));
    }
    let adj = g.symmetrized();
    let non_adj: Vec<Bitset> = adj
        .iter()
        .enumerate()
        .map(|(v, row)| {
            let mut s = Bitset::full(g.n);
            s.difference_with(row);
            s.remove(v);
            s
        })
        .collect();

    let mut search = Search {
        adj: &adj,
        non_adj: &non_adj,
        best: greedy_independent_set(&adj, g.n),
        nodes: 0,
        budget,
    };
    let mut current = Vec::with_capacity(g.n);
    search.expand(&mut current, Bitset::full(g.n))?;

    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

/// Min-degree greedy; seeds the incumbent so the first bounds already prune.
fn greedy_independent_set(adj: &[Bitset], n: usize) -> Vec<usize> {
    let mut alive = Bitset::full(n);
    let mut chosen = Vec::new();
    while !alive.is_empty() {
        let v = alive
            .iter()
            .min_by_key(|&v| {
                let mut d = adj[v].clone();
                d.intersect_with(&alive);
                d.len()
            })
            .expect("non-empty");
        chosen.push(v);
        alive.remove(v);
        alive.difference_with(&adj[v]);
    }
    chosen
}

struct Search<'a> {
    adj: &'a [Bitset],
    non_adj: &'a [Bitset],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut candidates: Bitset) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }

        let (order, bounds) = self.clique_cover(&candidates);
        for k in (0..order.len()).rev() {
            if current.len() + bounds[k] <= self.best.len() {
                return Ok(());
            }
            let v = order[k];
            current.push(v);
            let mut next = candidates.clone();
            next.intersect_with(&self.non_adj[v]);
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best.clone_from(current);
                }
            } else {
                self.expand(current, next)?;
            }
            current.pop();
            candidates.remove(v);
        }
        Ok(())
    }

    /// Greedy partition of `candidates` into cliques of the graph.
    /// `bounds[k]` is the number of cliques touched by `order[..=k]`, an upper
    /// bound on how many of those nodes an independent set can contain.
    fn clique_cover(&self, candidates: &Bitset) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(candidates.len());
        let mut bounds = Vec::with_capacity(candidates.len());
        let mut uncovered = candidates.clone();
        let mut cliques = 0;
        while !uncovered.is_empty() {
            cliques += 1;
            let mut joinable = uncovered.clone();
            while let Some(v) = joinable.first() {
                joinable.remove(v);
                uncovered.remove(v);
                joinable.intersect_with(&self.adj[v]);
                order.push(v);
                bounds.push(cliques);
            }
        }
        (order, bounds)
    }
}
