//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use diagrammar::cat::Ob;
use diagrammar::dependency::{DependencyGrammar, DependencyRelation};
use diagrammar::hypergraph::HyperDiagram;
use diagrammar::monoidal::{Diagram, DiagramBox, MonBox, Side, Ty};
use diagrammar::operad::{Node, Tree};
use diagrammar::rigid::RDiagram;
use diagrammar::tensor::{Dim, Semiring, Tensor, TensorNet};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ty(names: &[&str]) -> Ty {
    Ty::of(names)
}

/// Generators over the four objects `a`, `b`, `c`, `d`: every arity from
/// states to merges appears at least once.
pub fn signature() -> Vec<MonBox> {
    vec![
        MonBox::new("f", ty(&["a"]), ty(&["b"])),
        MonBox::new("g", ty(&["b", "c"]), ty(&["d"])),
        MonBox::new("h", ty(&["d"]), ty(&["a", "c"])),
        MonBox::new("u", ty(&[]), ty(&["c"])),
        MonBox::new("e", ty(&["b"]), ty(&[])),
    ]
}

/// Every type of length at most `n` over the four objects.
pub fn all_types(n: usize) -> Vec<Ty> {
    let mut out = vec![Ty::unit()];
    let mut frontier = vec![Ty::unit()];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &frontier {
            for x in ["a", "b", "c", "d"] {
                next.push(t.tensor(&ty(&[x])));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every diagram with exactly `k` boxes from `sig` starting at `dom`.
pub fn all_diagrams(dom: &Ty, sig: &[MonBox], k: usize) -> Vec<Diagram<MonBox>> {
    let mut current = vec![Diagram::id(dom.clone())];
    for _ in 0..k {
        let mut next = Vec::new();
        for d in &current {
            let wires = d.cod().clone();
            for b in sig {
                for off in 0..=wires.len() {
                    if off + b.dom.len() <= wires.len()
                        && wires.slice(off..off + b.dom.len()) == b.dom
                    {
                        let layer = b.diagram().whisker(
                            &wires.slice(0..off),
                            &wires.slice(off + b.dom.len()..wires.len()),
                        );
                        next.push(d.then(&layer).expect("typed layer"));
                    }
                }
            }
        }
        current = next;
    }
    current
}

/// The interchanger class of `d`, by breadth-first search over single
/// exchanges of adjacent boxes.
pub fn closure<B: DiagramBox>(d: &Diagram<B>) -> Vec<Diagram<B>> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([d.clone()]);
    let mut out = Vec::new();
    seen.insert(d.clone());
    while let Some(x) = queue.pop_front() {
        for i in 0..x.len().saturating_sub(1) {
            for side in [Side::Left, Side::Right] {
                if let Ok(y) = x.interchange_with(i, side) {
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        out.push(x);
    }
    out
}

/// No box lies weakly to the left of the box just before it.
pub fn irreducible<B: DiagramBox>(d: &Diagram<B>) -> bool {
    let (bs, os) = (d.boxes(), d.offsets());
    (0..d.len().saturating_sub(1)).all(|k| os[k + 1] + bs[k + 1].dom().len() > os[k])
}

/// The element of the class with the lexicographically least offsets.
pub fn lex_least<B: DiagramBox>(class: &[Diagram<B>]) -> Diagram<B> {
    class
        .iter()
        .min_by(|x, y| x.offsets().cmp(y.offsets()))
        .cloned()
        .expect("non-empty class")
}

/// A random tree of bounded depth over a small typed signature.
pub fn random_tree(rng: &mut StdRng, dom: &str, depth: usize) -> Tree {
    let sig = [
        Node::new("f", "x", vec![Ob::new("x"), Ob::new("x")]),
        Node::new("g", "x", vec![Ob::new("x"), Ob::new("y")]),
        Node::new("h", "x", vec![Ob::new("y"), Ob::new("x")]),
        Node::new("k", "y", vec![Ob::new("y")]),
        Node::leaf("p", "x"),
        Node::leaf("q", "y"),
    ];
    if depth == 0 || rng.gen_bool(0.25) {
        return Tree::id(dom);
    }
    let options: Vec<&Node> = sig.iter().filter(|n| n.dom.name() == dom).collect();
    let node = options[rng.gen_range(0..options.len())].clone();
    let args: Vec<Tree> = node
        .cod
        .iter()
        .map(|x| random_tree(rng, x.name(), depth - 1))
        .collect();
    node.tree().graft(&args).expect("typed grafting")
}

/// A random projective dependency tree over `n` words, with a grammar
/// that licenses exactly the rules it uses. Word `i` carries the symbol
/// `t<i>` and is spelled `w<i>`.
pub fn random_dependency(
    rng: &mut StdRng,
    n: usize,
) -> (DependencyGrammar, Vec<String>, DependencyRelation) {
    fn build(rng: &mut StdRng, lo: usize, hi: usize, deps: &mut Vec<(usize, usize)>) -> usize {
        let head = rng.gen_range(lo..hi);
        // Split each side into consecutive spans, one per dependent.
        for (a, b) in [(lo, head), (head + 1, hi)] {
            let mut start = a;
            while start < b {
                let end = rng.gen_range(start + 1..=b);
                let child = build(rng, start, end, deps);
                deps.push((child, head));
                start = end;
            }
        }
        head
    }
    let mut deps = Vec::new();
    let root = build(rng, 0, n, &mut deps);
    let symbols: Vec<Ob> = (0..n).map(|i| Ob::new(format!("t{i}"))).collect();
    let mut heads = Vec::new();
    for h in 0..n {
        let mut left: Vec<usize> = deps
            .iter()
            .filter(|d| d.1 == h && d.0 < h)
            .map(|d| d.0)
            .collect();
        let mut right: Vec<usize> = deps
            .iter()
            .filter(|d| d.1 == h && d.0 > h)
            .map(|d| d.0)
            .collect();
        left.sort_unstable_by(|a, b| b.cmp(a));
        right.sort_unstable_by(|a, b| b.cmp(a));
        let obs = |xs: &[usize]| xs.iter().map(|&i| symbols[i].clone()).collect();
        heads.push((symbols[h].clone(), obs(&left), obs(&right)));
    }
    let words: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let grammar = DependencyGrammar {
        heads,
        words: words.iter().cloned().zip(symbols.iter().cloned()).collect(),
        roots: vec![symbols[root].clone()],
        sentence: Ob::new("s"),
    };
    let rel = DependencyRelation {
        symbols,
        deps,
        root,
    };
    (grammar, words, rel)
}

/// Whether the graph with a node per box and an edge per wire segment
/// between two boxes is a forest.
pub fn wire_graph_is_acyclic(d: &RDiagram) -> bool {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    // Each open wire remembers the box that produced it, if any.
    let mut open: Vec<Option<usize>> = vec![None; d.dom().len()];
    for (i, (b, &off)) in d.boxes().iter().zip(d.offsets()).enumerate() {
        for src in open.drain(off..off + b.dom().len()).flatten() {
            let (a, c) = (find(&mut parent, src), find(&mut parent, i));
            if a == c {
                return false;
            }
            parent[a] = c;
        }
        open.splice(off..off, std::iter::repeat_n(Some(i), b.cod().len()));
    }
    true
}

/// A random net: `n` vertices, random edges (loops included) with
/// dimensions in `1..=max_dim`, entries drawn by `entry`.
pub fn random_net<S: Semiring>(
    rng: &mut StdRng,
    n: usize,
    max_edges: usize,
    max_dim: usize,
    mut entry: impl FnMut(&mut StdRng) -> S,
) -> TensorNet<S> {
    let m = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize, usize)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            (u.min(v), u.max(v), rng.gen_range(1..=max_dim))
        })
        .collect();
    let tensors = (0..n)
        .map(|v| {
            let shape: Vec<usize> = edges
                .iter()
                .flat_map(|&(a, b, d)| [(a == v).then_some(d), (b == v).then_some(d)])
                .flatten()
                .collect();
            let dim = Dim::new(&shape);
            let data = (0..dim.size()).map(|_| entry(rng)).collect();
            Tensor::state(dim, data).expect("sized data")
        })
        .collect();
    TensorNet::new((0..n).map(|i| format!("v{i}")).collect(), edges, tensors)
        .expect("consistent net")
}

/// The value of a net by enumerating every assignment of values to edges.
pub fn brute_force_value<S: Semiring>(net: &TensorNet<S>) -> S {
    let dims: Vec<usize> = net.edges().iter().map(|e| e.2).collect();
    let mut total = S::zero();
    let mut assignment = vec![0usize; dims.len()];
    loop {
        let mut term = S::one();
        for (v, t) in net.tensors().iter().enumerate() {
            let mut index = 0;
            for e in net.axes(v) {
                if dims[e] != 1 {
                    index = index * dims[e] + assignment[e];
                }
            }
            term = term.mul(t.data()[index]);
        }
        total = total.add(term);
        let mut k = 0;
        loop {
            if k == dims.len() {
                return total;
            }
            assignment[k] += 1;
            if assignment[k] < dims[k] {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Pathwidth through the vertex separation number: the least, over
/// orders, of the largest number of placed vertices with an unplaced
/// neighbour.
pub fn pathwidth(n: usize, edges: &[(usize, usize)]) -> usize {
    permutations(n)
        .iter()
        .map(|order| {
            let mut placed = vec![false; n];
            let mut worst = 0;
            for &v in order {
                placed[v] = true;
                let boundary = (0..n)
                    .filter(|&x| {
                        placed[x]
                            && edges
                                .iter()
                                .any(|&(a, b)| (a == x && !placed[b]) || (b == x && !placed[a]))
                    })
                    .count();
                worst = worst.max(boundary);
            }
            worst
        })
        .min()
        .unwrap_or(0)
}

/// A random connected simple graph on `n` vertices.
pub fn random_connected_graph(rng: &mut StdRng, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(0.3) {
                edges.push((u, v));
            }
        }
    }
    edges.shuffle(rng);
    edges
}

/// A net with one all-ones tensor per vertex on the given graph.
pub fn graph_net(n: usize, edges: &[(usize, usize)], dim: usize) -> TensorNet<f64> {
    let edges: Vec<(usize, usize, usize)> = edges
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v), dim))
        .collect();
    let tensors = (0..n)
        .map(|v| {
            let k = edges.iter().filter(|e| e.0 == v).count()
                + edges.iter().filter(|e| e.1 == v).count();
            let shape = vec![dim; k];
            let d = Dim::new(&shape);
            Tensor::state(d.clone(), vec![1.0; d.size()]).unwrap()
        })
        .collect();
    TensorNet::new((0..n).map(|i| format!("v{i}")).collect(), edges, tensors).unwrap()
}

/// A random hypergraph diagram with boxes from a two-object signature.
pub fn random_hyper(rng: &mut StdRng, dom: usize, cod: usize, max_boxes: usize) -> HyperDiagram {
    let sig = [
        MonBox::new("f", ty(&["x"]), ty(&["x"])),
        MonBox::new("g", ty(&["x", "x"]), ty(&["x"])),
        MonBox::new("h", ty(&["x"]), ty(&["x", "y"])),
        MonBox::new("k", ty(&["y"]), ty(&[])),
    ];
    let n_boxes = rng.gen_range(0..=max_boxes);
    let boxes: Vec<MonBox> = (0..n_boxes)
        .map(|_| sig[rng.gen_range(0..sig.len())].clone())
        .collect();
    let x = Ty::of(&["x"]);
    let (dom_ty, cod_ty) = (
        (0..dom).fold(Ty::unit(), |t, _| t.tensor(&x)),
        (0..cod).fold(Ty::unit(), |t, _| t.tensor(&x)),
    );
    let mut port_types: Vec<String> = dom_ty.iter().map(|o| o.name().to_string()).collect();
    for b in &boxes {
        port_types.extend(
            b.dom
                .iter()
                .chain(b.cod.iter())
                .map(|o| o.name().to_string()),
        );
    }
    port_types.extend(cod_ty.iter().map(|o| o.name().to_string()));
    // Spiders 0..pool are of type x, pool..2 * pool of type y.
    let pool = rng.gen_range(1..=port_types.len().max(1));
    let wires: Vec<usize> = port_types
        .iter()
        .map(|t| rng.gen_range(0..pool) + if t == "x" { 0 } else { pool })
        .collect();
    HyperDiagram::new(dom_ty, cod_ty, boxes, wires).expect("typed wires")
}

/// A random diagram with up to `max_boxes` boxes from `signature()`,
/// starting at a random type of length at most 3.
pub fn random_diagram(rng: &mut StdRng, max_boxes: usize) -> Diagram<MonBox> {
    let sig = signature();
    let dom: Ty = (0..rng.gen_range(0..=3))
        .map(|_| Ob::new(["a", "b", "c", "d"][rng.gen_range(0..4)]))
        .collect();
    let mut d = Diagram::id(dom);
    for _ in 0..rng.gen_range(0..=max_boxes) {
        let wires = d.cod().clone();
        let mut fits = Vec::new();
        for b in &sig {
            for off in 0..=wires.len() {
                if off + b.dom.len() <= wires.len() && wires.slice(off..off + b.dom.len()) == b.dom
                {
                    fits.push((b, off));
                }
            }
        }
        let (b, off) = fits[rng.gen_range(0..fits.len())];
        let layer = b.diagram().whisker(
            &wires.slice(0..off),
            &wires.slice(off + b.dom.len()..wires.len()),
        );
        d = d.then(&layer).expect("typed layer");
    }
    d
}
