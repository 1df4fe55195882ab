//! Solving `V − V∘𝒯 = F` for locally constant `F` and
//! `𝒯 = σ^{p_1} × … × σ^{p_H}` on a shift of finite type.
//!
//! Coordinate `i` is read in blocks of `p_i` symbols, so `𝒯` becomes the
//! shift on tuples of blocks. Nodes of the graph are tuples of `ℓ` blocks,
//! edges tuples of `ℓ + 1` blocks, and `F` lives on edges. A potential on
//! nodes exists iff every cycle sum vanishes; otherwise some cycle through a
//! spanning tree has a nonzero sum and becomes a periodic orbit.

use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::livsic::functions::{LocallyConstantFn, ProductFn};
use crate::rational::{self, Q};
use crate::symbolic::{Point, ShiftSpace, Word, MAX_WORDS};
use crate::systems::ProductPoint;

struct BlockGraph {
    ell: usize,
    powers: Vec<usize>,
    node_index: Vec<HashMap<Word, usize>>,
    node_strides: Vec<usize>,
    n_nodes: usize,
    /// `(src, dst, coordinate edge words)`.
    edges: Vec<(usize, usize, Vec<Word>)>,
}

impl BlockGraph {
    fn build(space: &ShiftSpace, depths: &[usize], powers: &[usize]) -> Result<Self> {
        let order = space.local_order().ok_or(Error::NotFiniteType)?;
        if powers.len() != depths.len() {
            return Err(Error::InvalidArgument("one power per coordinate".into()));
        }
        if powers.contains(&0) {
            return Err(Error::InvalidArgument("shift powers must be positive".into()));
        }
        let ell = depths
            .iter()
            .zip(powers)
            .map(|(&m, &p)| (m.div_ceil(p).saturating_sub(1)).max(order.div_ceil(p)).max(1))
            .max()
            .unwrap_or(1);
        let mut node_words = Vec::new();
        let mut edge_words = Vec::new();
        for &p in powers {
            node_words.push(space.admissible_words(ell * p)?);
            edge_words.push(space.admissible_words((ell + 1) * p)?);
        }
        let node_index: Vec<HashMap<Word, usize>> = node_words
            .iter()
            .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
            .collect();
        let mut node_strides = vec![0; powers.len()];
        let mut n_nodes = 1usize;
        for i in (0..powers.len()).rev() {
            node_strides[i] = n_nodes;
            n_nodes = n_nodes.saturating_mul(node_words[i].len());
        }
        let n_edges = edge_words.iter().fold(1usize, |a, e| a.saturating_mul(e.len()));
        if n_edges > MAX_WORDS || n_nodes > MAX_WORDS {
            return Err(Error::budget("coboundary graph", MAX_WORDS));
        }
        let mut edges = Vec::with_capacity(n_edges);
        let mut idx = vec![0usize; powers.len()];
        if edge_words.iter().all(|e| !e.is_empty()) {
            loop {
                let words: Vec<Word> = idx.iter().zip(&edge_words).map(|(&j, es)| es[j].clone()).collect();
                let mut src = 0;
                let mut dst = 0;
                for (i, w) in words.iter().enumerate() {
                    let p = powers[i];
                    src += node_index[i][&Word::from(&w[..ell * p])] * node_strides[i];
                    dst += node_index[i][&Word::from(&w[p..])] * node_strides[i];
                }
                edges.push((src, dst, words));
                let mut c = powers.len();
                let done = loop {
                    if c == 0 {
                        break true;
                    }
                    c -= 1;
                    idx[c] += 1;
                    if idx[c] < edge_words[c].len() {
                        break false;
                    }
                    idx[c] = 0;
                };
                if done {
                    break;
                }
            }
        }
        Ok(BlockGraph {
            ell,
            powers: powers.to_vec(),
            node_index,
            node_strides,
            n_nodes,
            edges,
        })
    }

    fn node_of(&self, words: &[&[u8]]) -> usize {
        words
            .iter()
            .enumerate()
            .map(|(i, w)| self.node_index[i][&Word::from(*w)] * self.node_strides[i])
            .sum()
    }

    /// The periodic product point that follows a closed walk of edges.
    fn walk_point(&self, space: &ShiftSpace, walk: &[usize]) -> Result<ProductPoint> {
        let coords = (0..self.powers.len())
            .map(|i| {
                let p = self.powers[i];
                let period: Vec<u8> = walk.iter().flat_map(|&e| self.edges[e].2[i][..p].to_vec()).collect();
                Point::periodic(space.alphabet(), period)
            })
            .collect::<Result<Vec<_>>>()?;
        ProductPoint::new(coords)
    }
}

/// Longest simple cycle of the block graph for `F` under the given powers;
/// orbit sums up to this period decide whether `F` is a coboundary.
pub fn cycle_length_bound(f: &ProductFn, powers: &[usize]) -> Result<usize> {
    Ok(BlockGraph::build(f.space(), f.depths(), powers)?.n_nodes)
}

#[derive(Clone, Debug)]
pub struct ProductCertificate {
    /// `V`, of depth `ℓ·p_i` in coordinate `i`.
    pub g: ProductFn,
    pub residual: Q,
}

/// A periodic orbit of period `k` along which `F` does not sum to zero.
#[derive(Clone, Debug)]
pub struct ObstructionWitness {
    pub point: ProductPoint,
    pub k: usize,
    pub sum: Q,
}

#[derive(Clone, Debug)]
pub enum ProductSolve {
    Coboundary(ProductCertificate),
    Obstruction(ObstructionWitness),
}

pub fn solve_product_coboundary(f: &ProductFn, powers: &[usize]) -> Result<ProductSolve> {
    let space = f.space();
    let graph = BlockGraph::build(space, f.depths(), powers)?;
    let n = graph.n_nodes;
    let weights: Vec<Q> = graph
        .edges
        .iter()
        .map(|(_, _, ws)| {
            let refs: Vec<&[u8]> = ws.iter().map(|w| w.as_slice()).collect();
            f.value(&refs).clone()
        })
        .collect();
    let mut out_edges = vec![Vec::new(); n];
    let mut in_edges = vec![Vec::new(); n];
    for (e, (s, d, _)) in graph.edges.iter().enumerate() {
        out_edges[*s].push(e);
        in_edges[*d].push(e);
    }

    let mut g: Vec<Option<Q>> = vec![None; n];
    let mut component = vec![usize::MAX; n];
    // Per component: root, and tree edges towards / away from it.
    let mut roots = Vec::new();
    let mut strongly = Vec::new();
    let mut to_node: Vec<Option<usize>> = vec![None; n];
    let mut to_root: Vec<Option<usize>> = vec![None; n];
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let c = roots.len();
        roots.push(root);
        let members = undirected_component(root, &graph, &out_edges, &in_edges, &mut component, c);
        let fwd = bfs(root, &out_edges, |e| graph.edges[e].1, &mut to_node);
        let bwd = bfs(root, &in_edges, |e| graph.edges[e].0, &mut to_root);
        let strong = fwd.len() == members.len() && bwd.len() == members.len();
        strongly.push(strong);
        g[root] = Some(Q::zero());
        if strong {
            // Potentials along the forward tree, so that a tree path from the
            // root to `u` sums to `−g(u)`.
            for &v in &fwd[1..] {
                let e = to_node[v].unwrap();
                g[v] = Some(g[graph.edges[e].0].as_ref().unwrap() - &weights[e]);
            }
            continue;
        }
        // Otherwise along an undirected spanning tree.
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let gu = g[u].clone().unwrap();
            for &e in &out_edges[u] {
                let v = graph.edges[e].1;
                if g[v].is_none() {
                    g[v] = Some(&gu - &weights[e]);
                    queue.push_back(v);
                }
            }
            for &e in &in_edges[u] {
                let v = graph.edges[e].0;
                if g[v].is_none() {
                    g[v] = Some(&gu + &weights[e]);
                    queue.push_back(v);
                }
            }
        }
    }
    let g: Vec<Q> = g.into_iter().map(|q| q.unwrap_or_else(Q::zero)).collect();

    for (e, (s, d, _)) in graph.edges.iter().enumerate() {
        if &g[*s] - &g[*d] == weights[e] {
            continue;
        }
        let c = component[*s];
        if !strongly[c] {
            return Err(Error::Reducible);
        }
        let root = roots[c];
        let path_to = |v: usize| {
            let mut p = Vec::new();
            let mut cur = v;
            while cur != root {
                let e = to_node[cur].expect("forward tree covers the component");
                p.push(e);
                cur = graph.edges[e].0;
            }
            p.reverse();
            p
        };
        let path_from = |v: usize| {
            let mut p = Vec::new();
            let mut cur = v;
            while cur != root {
                let e = to_root[cur].expect("backward tree covers the component");
                p.push(e);
                cur = graph.edges[e].1;
            }
            p
        };
        let mut through = path_to(*s);
        through.push(e);
        through.extend(path_from(*d));
        let mut around = path_to(*d);
        around.extend(path_from(*d));
        let sum = |walk: &[usize]| walk.iter().map(|&e| weights[e].clone()).sum::<Q>();
        let walk = if !sum(&through).is_zero() { through } else { around };
        let total = sum(&walk);
        debug_assert!(!total.is_zero());
        return Ok(ProductSolve::Obstruction(ObstructionWitness {
            point: graph.walk_point(space, &walk)?,
            k: walk.len(),
            sum: total,
        }));
    }

    let depths: Vec<usize> = graph.powers.iter().map(|p| graph.ell * p).collect();
    let potential = ProductFn::from_fn(space, &depths, |ws| g[graph.node_of(ws)].clone())?;
    let residual = graph
        .edges
        .iter()
        .enumerate()
        .map(|(e, (s, d, _))| (&weights[e] - (&g[*s] - &g[*d])).abs())
        .max()
        .unwrap_or_else(Q::zero);
    Ok(ProductSolve::Coboundary(ProductCertificate {
        g: potential,
        residual,
    }))
}

fn undirected_component(
    root: usize,
    graph: &BlockGraph,
    out_edges: &[Vec<usize>],
    in_edges: &[Vec<usize>],
    component: &mut [usize],
    c: usize,
) -> Vec<usize> {
    let mut members = vec![root];
    component[root] = c;
    let mut i = 0;
    while i < members.len() {
        let u = members[i];
        i += 1;
        let next = out_edges[u]
            .iter()
            .map(|&e| graph.edges[e].1)
            .chain(in_edges[u].iter().map(|&e| graph.edges[e].0));
        for v in next.collect::<Vec<_>>() {
            if component[v] == usize::MAX {
                component[v] = c;
                members.push(v);
            }
        }
    }
    members
}

/// BFS from `root`; `tree[v]` is the edge used to reach `v`. Returns the
/// nodes in visiting order.
fn bfs(root: usize, adj: &[Vec<usize>], other: impl Fn(usize) -> usize, tree: &mut [Option<usize>]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[root] = true;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &e in &adj[u] {
            let v = other(e);
            if !seen[v] {
                seen[v] = true;
                tree[v] = Some(e);
                order.push(v);
            }
        }
    }
    order
}

#[derive(Clone, Debug)]
pub struct CoboundaryCertificate {
    /// `g` with `f = g − g∘σ^p`.
    pub g: LocallyConstantFn,
    pub residual: Q,
}

#[derive(Clone, Debug)]
pub struct CycleWitness {
    pub point: Point,
    pub k: usize,
    pub sum: Q,
}

#[derive(Clone, Debug)]
pub enum CoboundaryOutcome {
    Coboundary(CoboundaryCertificate),
    Obstruction(CycleWitness),
}

/// Single-map form: `f = g − g∘σ^p`, or a periodic orbit with nonzero sum.
pub fn solve_coboundary(f: &LocallyConstantFn, p: usize) -> Result<CoboundaryOutcome> {
    let product = ProductFn::from_single(f)?;
    match solve_product_coboundary(&product, &[p])? {
        ProductSolve::Coboundary(c) => {
            let depth = c.g.depths()[0];
            let g = LocallyConstantFn::from_fn(f.space(), depth, |w| c.g.value(&[w]).clone())?;
            Ok(CoboundaryOutcome::Coboundary(CoboundaryCertificate {
                g,
                residual: c.residual,
            }))
        }
        ProductSolve::Obstruction(w) => Ok(CoboundaryOutcome::Obstruction(CycleWitness {
            point: w.point.coords.into_iter().next().unwrap(),
            k: w.k,
            sum: w.sum,
        })),
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SolveJson {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Vec<(Vec<String>, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessJson {
    pub point: Vec<String>,
    pub period: usize,
    pub sum: String,
}

impl ProductSolve {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, ProductSolve::Coboundary(_))
    }

    pub fn to_json(&self) -> SolveJson {
        match self {
            ProductSolve::Coboundary(c) => {
                let alphabet = c.g.space().alphabet();
                let per_coord: Vec<Vec<Word>> = c
                    .g
                    .depths()
                    .iter()
                    .map(|&m| c.g.space().admissible_words(m).unwrap_or_default())
                    .collect();
                let mut rows = Vec::new();
                let mut stack: Vec<Vec<&Word>> = vec![Vec::new()];
                for ws in &per_coord {
                    stack = stack
                        .into_iter()
                        .flat_map(|prefix| {
                            ws.iter().map(move |w| {
                                let mut t = prefix.clone();
                                t.push(w);
                                t
                            })
                        })
                        .collect();
                }
                for tuple in stack {
                    let refs: Vec<&[u8]> = tuple.iter().map(|w| w.as_slice()).collect();
                    rows.push((
                        tuple.iter().map(|w| alphabet.format_word(w)).collect(),
                        rational::format(c.g.value(&refs)),
                    ));
                }
                SolveJson {
                    outcome: "coboundary".into(),
                    residual: Some(rational::format(&c.residual)),
                    potential: Some(rows),
                    witness: None,
                }
            }
            ProductSolve::Obstruction(w) => SolveJson {
                outcome: "obstruction".into(),
                residual: None,
                potential: None,
                witness: Some(WitnessJson {
                    point: w.point.coords.iter().map(ToString::to_string).collect(),
                    period: w.k,
                    sum: rational::format(&w.sum),
                }),
            },
        }
    }
}
