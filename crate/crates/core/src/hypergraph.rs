//! Free hypergraph categories. A diagram is stored through its incidence
//! graph: a list of boxes and, for every port, the spider it is attached
//! to. Ports are listed as the domain, then the inputs and outputs of each
//! box in turn, then the codomain.

use std::collections::HashMap;

use crate::cat::Ob;
use crate::error::{mismatch, Error, Result};
use crate::monoidal::{Diagram, DiagramBox, MonBox, Monoidal, Ty};
use crate::rigid::{self, permutation, RBox, RDiagram, RKind, Rigid, RigidOb, RigidTy};

/// Where a port sits in the port list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    Dom(usize),
    BoxIn(usize, usize),
    BoxOut(usize, usize),
    Cod(usize),
}

impl Port {
    /// Ports through which a wire enters a spider from above.
    pub fn is_source(self) -> bool {
        matches!(self, Port::Dom(_) | Port::BoxOut(..))
    }
}

/// Structural predicates of a hypergraph diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Structure {
    /// Every spider has at most one source and at most one target.
    pub monogamous: bool,
    /// Every spider has exactly one source and exactly one target.
    pub bijective: bool,
    /// Wires flow downward: every spider with a target has a source above
    /// it and every spider with a source has a target.
    pub progressive: bool,
}

/// A diagram in a free hypergraph category, kept in canonical form:
/// spiders are numbered by first occurrence along the ports, and spiders
/// without ports come last, sorted by type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HyperDiagram {
    dom: Ty,
    cod: Ty,
    boxes: Vec<MonBox>,
    wires: Vec<usize>,
    spider_types: Vec<Ob>,
}

impl HyperDiagram {
    /// Infers the type of every spider from its ports.
    pub fn new(dom: Ty, cod: Ty, boxes: Vec<MonBox>, wires: Vec<usize>) -> Result<Self> {
        Self::with_spiders(dom, cod, boxes, wires, HashMap::new())
    }

    /// Like `new`, with explicit types for spiders, which may include
    /// spiders that no port touches.
    pub fn with_spiders(
        dom: Ty,
        cod: Ty,
        boxes: Vec<MonBox>,
        wires: Vec<usize>,
        mut spider_types: HashMap<usize, Ob>,
    ) -> Result<Self> {
        let port_types = port_types(&dom, &boxes, &cod);
        if port_types.len() != wires.len() {
            return Err(Error::BadWireCount {
                expected: port_types.len(),
                got: wires.len(),
            });
        }
        for (&spider, typ) in wires.iter().zip(&port_types) {
            match spider_types.get(&spider) {
                Some(first) if first != *typ => {
                    return Err(Error::TypeConflict {
                        spider,
                        first: first.to_string(),
                        second: typ.to_string(),
                    })
                }
                Some(_) => {}
                None => {
                    spider_types.insert(spider, (*typ).clone());
                }
            }
        }
        Ok(Self::canonical(dom, cod, boxes, &wires, &spider_types))
    }

    /// Renumbers spiders densely by first occurrence; unused spiders go
    /// last, ordered by type.
    fn canonical(
        dom: Ty,
        cod: Ty,
        boxes: Vec<MonBox>,
        wires: &[usize],
        types: &HashMap<usize, Ob>,
    ) -> Self {
        let mut rename: HashMap<usize, usize> = HashMap::new();
        let mut spider_types = Vec::new();
        let mut new_wires = Vec::with_capacity(wires.len());
        for &w in wires {
            let next = rename.len();
            let id = *rename.entry(w).or_insert(next);
            if id == spider_types.len() {
                spider_types.push(types[&w].clone());
            }
            new_wires.push(id);
        }
        let mut scalars: Vec<&Ob> = types
            .iter()
            .filter(|(k, _)| !rename.contains_key(k))
            .map(|(_, t)| t)
            .collect();
        scalars.sort();
        spider_types.extend(scalars.into_iter().cloned());
        HyperDiagram {
            dom,
            cod,
            boxes,
            wires: new_wires,
            spider_types,
        }
    }

    pub fn id(t: &Ty) -> Self {
        Self::spider(1, 1, t)
    }

    /// The diagram with a single box.
    pub fn from_box(b: &MonBox) -> Self {
        let (d, n) = (b.dom.len(), b.dom.len() + b.cod.len());
        let wires: Vec<usize> = (0..d).chain(0..n).chain(d..n).collect();
        Self::new(b.dom.clone(), b.cod.clone(), vec![b.clone()], wires)
            .expect("a box is well typed")
    }

    /// `n_in` copies of `t` merged into `n_out` copies, one spider per
    /// object of `t`.
    pub fn spider(n_in: usize, n_out: usize, t: &Ty) -> Self {
        let power = |n: usize| (0..n).fold(Ty::unit(), |acc: Ty, _| acc.tensor(t));
        let wires = (0..n_in + n_out).flat_map(|_| 0..t.len()).collect();
        let types = t.iter().cloned().enumerate().collect();
        Self::with_spiders(power(n_in), power(n_out), vec![], wires, types)
            .expect("spiders are well typed")
    }

    /// `left @ right -> right @ left`.
    pub fn swap(left: &Ty, right: &Ty) -> Self {
        let (l, n) = (left.len(), left.len() + right.len());
        let wires = (0..n).chain(l..n).chain(0..l).collect();
        Self::new(left.tensor(right), right.tensor(left), vec![], wires)
            .expect("swaps are well typed")
    }

    pub fn dom(&self) -> &Ty {
        &self.dom
    }

    pub fn cod(&self) -> &Ty {
        &self.cod
    }

    pub fn boxes(&self) -> &[MonBox] {
        &self.boxes
    }

    pub fn wires(&self) -> &[usize] {
        &self.wires
    }

    pub fn spider_types(&self) -> &[Ob] {
        &self.spider_types
    }

    /// Types of the spiders that no port touches.
    pub fn scalars(&self) -> &[Ob] {
        let used = self.wires.iter().max().map_or(0, |m| m + 1);
        &self.spider_types[used..]
    }

    /// Every port, in the order of `wires`.
    pub fn ports(&self) -> Vec<Port> {
        let mut out: Vec<Port> = (0..self.dom.len()).map(Port::Dom).collect();
        for (k, b) in self.boxes.iter().enumerate() {
            out.extend((0..b.dom.len()).map(|j| Port::BoxIn(k, j)));
            out.extend((0..b.cod.len()).map(|j| Port::BoxOut(k, j)));
        }
        out.extend((0..self.cod.len()).map(Port::Cod));
        out
    }

    /// Index into `wires` of the first input of each box.
    fn box_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.boxes.len());
        let mut i = self.dom.len();
        for b in &self.boxes {
            offsets.push(i);
            i += b.dom.len() + b.cod.len();
        }
        offsets
    }

    /// Sequential composition: the pushout identifying the codomain
    /// spiders of `self` with the domain spiders of `other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.cod != other.dom {
            return Err(mismatch(&self.cod, &other.dom));
        }
        let shift = self.spider_types.len();
        let mut uf = UnionFind::new(shift + other.spider_types.len());
        let n_cod = self.cod.len();
        let own_cod = &self.wires[self.wires.len() - n_cod..];
        for (i, &w) in own_cod.iter().enumerate() {
            uf.union(w, other.wires[i] + shift);
        }
        let wires: Vec<usize> = self.wires[..self.wires.len() - n_cod]
            .iter()
            .copied()
            .chain(other.wires[other.dom.len()..].iter().map(|w| w + shift))
            .map(|w| uf.find(w))
            .collect();
        let mut types = HashMap::new();
        for (i, t) in self
            .spider_types
            .iter()
            .chain(&other.spider_types)
            .enumerate()
        {
            types.entry(uf.find(i)).or_insert_with(|| t.clone());
        }
        let boxes = self.boxes.iter().chain(&other.boxes).cloned().collect();
        Ok(Self::canonical(
            self.dom.clone(),
            other.cod.clone(),
            boxes,
            &wires,
            &types,
        ))
    }

    /// Parallel composition: the disjoint union.
    pub fn tensor(&self, other: &Self) -> Self {
        let shift = self.spider_types.len();
        let theirs = |ws: &[usize]| ws.iter().map(|w| w + shift).collect::<Vec<_>>();
        let (a_dom, a_cod) = (self.dom.len(), self.cod.len());
        let (b_dom, b_cod) = (other.dom.len(), other.cod.len());
        let (na, nb) = (self.wires.len(), other.wires.len());
        let mut wires = self.wires[..a_dom].to_vec();
        wires.extend(theirs(&other.wires[..b_dom]));
        wires.extend_from_slice(&self.wires[a_dom..na - a_cod]);
        wires.extend(theirs(&other.wires[b_dom..nb - b_cod]));
        wires.extend_from_slice(&self.wires[na - a_cod..]);
        wires.extend(theirs(&other.wires[nb - b_cod..]));
        let types = self
            .spider_types
            .iter()
            .chain(&other.spider_types)
            .cloned()
            .enumerate()
            .collect();
        let boxes = self.boxes.iter().chain(&other.boxes).cloned().collect();
        Self::canonical(
            self.dom.tensor(&other.dom),
            self.cod.tensor(&other.cod),
            boxes,
            &wires,
            &types,
        )
    }

    /// Equality up to reordering boxes: searches the permutations of
    /// `other`'s boxes that keep labels in place, so the cost grows with
    /// the number of repeated boxes.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.dom != other.dom
            || self.cod != other.cod
            || self.wires.len() != other.wires.len()
            || self.spider_types.len() != other.spider_types.len()
        {
            return false;
        }
        let mut perm = Vec::with_capacity(self.boxes.len());
        let mut used = vec![false; other.boxes.len()];
        self.boxes.len() == other.boxes.len() && self.match_boxes(other, &mut perm, &mut used)
    }

    fn match_boxes(&self, other: &Self, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == self.boxes.len() {
            return self.equals_reordered(other, perm);
        }
        for j in 0..other.boxes.len() {
            if used[j] || other.boxes[j] != self.boxes[i] {
                continue;
            }
            used[j] = true;
            perm.push(j);
            if self.match_boxes(other, perm, used) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
        false
    }

    /// Whether `other`, with box `perm[i]` moved to position `i`, is `self`.
    fn equals_reordered(&self, other: &Self, perm: &[usize]) -> bool {
        let offsets = other.box_offsets();
        let (n_dom, n) = (other.dom.len(), other.wires.len());
        let mut wires = other.wires[..n_dom].to_vec();
        for &j in perm {
            let b = &other.boxes[j];
            wires.extend_from_slice(
                &other.wires[offsets[j]..offsets[j] + b.dom.len() + b.cod.len()],
            );
        }
        wires.extend_from_slice(&other.wires[n - other.cod.len()..]);
        let types = other.spider_types.iter().cloned().enumerate().collect();
        let boxes = perm.iter().map(|&j| other.boxes[j].clone()).collect();
        *self == Self::canonical(other.dom.clone(), other.cod.clone(), boxes, &wires, &types)
    }

    /// Identifies spider `b` with spider `a`.
    pub fn fuse(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.spider_types.len();
        if a >= n || b >= n {
            return Err(Error::BadPort(format!("no spider {}", a.max(b))));
        }
        if self.spider_types[a] != self.spider_types[b] {
            return Err(Error::TypeConflict {
                spider: a,
                first: self.spider_types[a].to_string(),
                second: self.spider_types[b].to_string(),
            });
        }
        let wires: Vec<usize> = self
            .wires
            .iter()
            .map(|&w| if w == b { a } else { w })
            .collect();
        let types = self
            .spider_types
            .iter()
            .cloned()
            .enumerate()
            .filter(|&(i, _)| i != b || a == b)
            .collect();
        Ok(Self::canonical(
            self.dom.clone(),
            self.cod.clone(),
            self.boxes.clone(),
            &wires,
            &types,
        ))
    }

    pub fn structure(&self) -> Structure {
        let n = self.spider_types.len();
        let (mut sources, mut targets) = (vec![0usize; n], vec![0usize; n]);
        for (port, &w) in self.ports().into_iter().zip(&self.wires) {
            if port.is_source() {
                sources[w] += 1;
            } else {
                targets[w] += 1;
            }
        }
        let monogamous = (0..n).all(|s| sources[s] <= 1 && targets[s] <= 1);
        let bijective = (0..n).all(|s| sources[s] == 1 && targets[s] == 1);
        let balanced = (0..n).all(|s| (sources[s] == 0) == (targets[s] == 0));
        // Spiders reached so far by a domain port or an earlier box output.
        let mut reached = vec![false; n];
        for &w in &self.wires[..self.dom.len()] {
            reached[w] = true;
        }
        let mut ordered = true;
        for (k, start) in self.box_offsets().into_iter().enumerate() {
            let b = &self.boxes[k];
            let inputs = &self.wires[start..start + b.dom.len()];
            ordered &= inputs.iter().all(|&w| reached[w]);
            for &w in &self.wires[start + b.dom.len()..start + b.dom.len() + b.cod.len()] {
                reached[w] = true;
            }
        }
        Structure {
            monogamous,
            bijective,
            progressive: balanced && ordered,
        }
    }

    /// Merges codomain ports `a` and `b` with a two-legged spider, after
    /// swapping `b` next to `a`. The merged wire stays at position `a`.
    pub fn coref_link(&self, a: usize, b: usize) -> Result<Self> {
        let n = self.cod.len();
        if a == b || a >= n || b >= n {
            return Err(Error::BadPort(format!("cannot link ports {a} and {b}")));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if self.cod[lo] != self.cod[hi] {
            return Err(Error::TypeConflict {
                spider: self.wires[self.wires.len() - n + hi],
                first: self.cod[lo].to_string(),
                second: self.cod[hi].to_string(),
            });
        }
        let x = self.cod.slice(lo..lo + 1);
        let between = self.cod.slice(lo + 1..hi);
        let swaps = Self::id(&x).tensor(&Self::swap(&between, &x));
        let merge = Self::spider(2, 1, &x).tensor(&Self::id(&between));
        let link = swaps.then(&merge)?;
        let whole = Self::id(&self.cod.slice(0..lo))
            .tensor(&link)
            .tensor(&Self::id(&self.cod.slice(hi + 1..n)));
        self.then(&whole)
    }

    /// Links each cluster of codomain ports to its first member, folding
    /// left. Indices refer to the codomain before any linking.
    pub fn resolve(&self, clusters: &[Vec<usize>]) -> Result<Self> {
        let mut position: Vec<Option<usize>> = (0..self.cod.len()).map(Some).collect();
        let mut d = self.clone();
        for cluster in clusters {
            let Some((&main, mentions)) = cluster.split_first() else {
                continue;
            };
            for &m in mentions {
                let at = |i: usize| {
                    position
                        .get(i)
                        .copied()
                        .flatten()
                        .ok_or_else(|| Error::BadPort(format!("port {i} is already linked")))
                };
                let (pa, pb) = (at(main)?, at(m)?);
                d = d.coref_link(pa, pb)?;
                let removed = pa.max(pb);
                position[if pb == removed { m } else { main }] = None;
                if pb != removed {
                    position[m] = Some(pa.min(pb));
                }
                for p in position.iter_mut().flatten() {
                    if *p > removed {
                        *p -= 1;
                    }
                }
                if pb != removed {
                    // Keep following the surviving wire from the main port.
                    position[main] = position[m].take();
                }
            }
        }
        Ok(d)
    }

    /// A rigid diagram with the same wiring, built from spider boxes,
    /// swaps and the boxes of `self` in order. Every spider is opened at
    /// the top with all of its legs; box outputs are joined back to their
    /// spider with two-legged spiders playing the role of cups.
    pub fn downgrade(&self) -> RDiagram {
        let rob = |x: &Ob| RigidOb::new(x.name());
        let rty = |t: &Ty| -> RigidTy { t.iter().map(rob).collect() };
        let ports = self.ports();
        let n = self.spider_types.len();
        let mut in_dom = vec![Vec::new(); n];
        let mut legs = vec![Vec::new(); n];
        for (p, (&w, port)) in self.wires.iter().zip(&ports).enumerate() {
            if matches!(port, Port::Dom(_)) {
                in_dom[w].push(p);
            } else {
                legs[w].push(p);
            }
        }
        // Each wire is labelled by the port it will end up at.
        let type_of = |p: usize| rob(&self.spider_types[self.wires[p]]);
        let order: Vec<usize> = in_dom.iter().flatten().copied().collect();
        let dom = rty(&self.dom);
        let mut d = permutation(&dom, &order).expect("a permutation of the domain");
        let mut middle = Diagram::id(Ty::unit());
        let mut bundle: Vec<(usize, bool)> = Vec::new();
        for s in 0..n {
            let x = rob(&self.spider_types[s]);
            let (k_in, k_out) = (in_dom[s].len(), legs[s].len());
            let piece = if (k_in, k_out) == (1, 1) {
                Diagram::id(Ty::new(vec![x]))
            } else {
                RBox::spider(k_in, k_out, &x).diagram()
            };
            middle = middle.tensor(&piece);
            bundle.extend(legs[s].iter().map(|&p| (p, false)));
        }
        d = d.then(&middle).expect("spiders fit");
        let wire_ty = |bundle: &[(usize, bool)]| -> RigidTy {
            bundle.iter().map(|&(p, _)| type_of(p)).collect()
        };
        // Moves the labels in `wanted` to the right end, in order.
        let gather = |d: &mut RDiagram,
                      bundle: &mut Vec<(usize, bool)>,
                      wanted: &[(usize, bool)]| {
            let mut perm: Vec<usize> = (0..bundle.len())
                .filter(|&i| !wanted.contains(&bundle[i]))
                .collect();
            perm.extend(
                wanted
                    .iter()
                    .map(|w| bundle.iter().position(|b| b == w).expect("label present")),
            );
            let moved = permutation(&wire_ty(bundle), &perm).expect("a permutation of the bundle");
            *d = d.then(&moved).expect("permutation fits");
            *bundle = perm.iter().map(|&i| bundle[i]).collect();
        };
        for (k, start) in self.box_offsets().into_iter().enumerate() {
            let b = &self.boxes[k];
            let inputs: Vec<(usize, bool)> =
                (start..start + b.dom.len()).map(|p| (p, false)).collect();
            gather(&mut d, &mut bundle, &inputs);
            let rest = bundle.len() - inputs.len();
            bundle.truncate(rest);
            let bx = RBox::gen(b.name.clone(), rty(&b.dom), rty(&b.cod));
            d = d
                .then(&bx.diagram().whisker(&wire_ty(&bundle), &Ty::unit()))
                .expect("box fits");
            let outputs: Vec<usize> =
                (start + b.dom.len()..start + b.dom.len() + b.cod.len()).collect();
            bundle.extend(outputs.iter().map(|&p| (p, true)));
            let pairs: Vec<(usize, bool)> = outputs
                .iter()
                .flat_map(|&p| [(p, false), (p, true)])
                .collect();
            gather(&mut d, &mut bundle, &pairs);
            bundle.truncate(bundle.len() - pairs.len());
            let mut cups = Diagram::id(wire_ty(&bundle));
            for &p in &outputs {
                cups = cups.tensor(&RBox::spider(2, 0, &type_of(p)).diagram());
            }
            d = d.then(&cups).expect("cups fit");
        }
        let cod_start = self.wires.len() - self.cod.len();
        let targets: Vec<(usize, bool)> =
            (cod_start..self.wires.len()).map(|p| (p, false)).collect();
        gather(&mut d, &mut bundle, &targets);
        d
    }

    /// Reads a rigid diagram as a hypergraph diagram, forgetting winding
    /// numbers; cups and caps become two-legged spiders.
    pub fn upgrade(d: &RDiagram) -> Result<Self> {
        rigid::functor::<HyperDiagram>(
            |name| Ok(Ty::of(&[name])),
            |b| {
                let ty =
                    |t: &RigidTy| -> Ty { t.iter().map(|o| Ob::new(o.name.clone())).collect() };
                match b.kind() {
                    RKind::Gen(name) => Ok(Self::from_box(&MonBox::new(
                        name.clone(),
                        ty(b.dom()),
                        ty(b.cod()),
                    ))),
                    _ => unreachable!("structural boxes are handled by the functor"),
                }
            },
        )
        .apply(d)
    }

    /// The image of a monoidal diagram.
    pub fn from_monoidal(d: &Diagram<MonBox>) -> Result<Self> {
        let mut out = Self::id(d.dom());
        for layer in d.layers() {
            out = out.then_layer(&layer.left, &Self::from_box(&layer.bx), &layer.right)?;
        }
        Ok(out)
    }
}

fn port_types<'a>(dom: &'a Ty, boxes: &'a [MonBox], cod: &'a Ty) -> Vec<&'a Ob> {
    let mut out: Vec<&Ob> = dom.iter().collect();
    for b in boxes {
        out.extend(b.dom.iter());
        out.extend(b.cod.iter());
    }
    out.extend(cod.iter());
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let parent = self.0[x];
        if parent == x {
            return x;
        }
        let root = self.find(parent);
        self.0[x] = root;
        root
    }

    /// Keeps the smaller representative so results do not depend on the
    /// order of unions.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi] = lo;
    }
}

impl Monoidal for HyperDiagram {
    type Ty = Ty;

    fn unit() -> Ty {
        Ty::unit()
    }

    fn ty_tensor(a: &Ty, b: &Ty) -> Ty {
        a.tensor(b)
    }

    fn dom(&self) -> Ty {
        self.dom.clone()
    }

    fn cod(&self) -> Ty {
        self.cod.clone()
    }

    fn id(t: &Ty) -> Self {
        HyperDiagram::id(t)
    }

    fn then(&self, other: &Self) -> Result<Self> {
        HyperDiagram::then(self, other)
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(HyperDiagram::tensor(self, other))
    }

    fn ty_len(t: &Ty) -> usize {
        t.len()
    }

    fn ty_split(t: &Ty, n: usize) -> (Ty, Ty) {
        (t.slice(0..n), t.slice(n..t.len()))
    }
}

fn reversed(t: &Ty) -> Ty {
    t.iter().rev().cloned().collect()
}

/// Hypergraph categories are self-dual compact closed: the adjoints of a
/// type are its reverse.
impl Rigid for HyperDiagram {
    fn ty_l(t: &Ty) -> Ty {
        reversed(t)
    }

    fn ty_r(t: &Ty) -> Ty {
        reversed(t)
    }

    fn cups(left: &Ty, right: &Ty) -> Result<Self> {
        if *right != reversed(left) {
            return Err(Error::AdjointMismatch {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        let k = left.len();
        let wires = (0..k).chain((0..k).rev()).collect();
        Self::new(left.tensor(right), Ty::unit(), vec![], wires)
    }

    fn caps(left: &Ty, right: &Ty) -> Result<Self> {
        if *right != reversed(left) {
            return Err(Error::AdjointMismatch {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        let k = left.len();
        let wires = (0..k).chain((0..k).rev()).collect();
        Self::new(Ty::unit(), left.tensor(right), vec![], wires)
    }

    fn swap(left: &Ty, right: &Ty) -> Result<Self> {
        Ok(HyperDiagram::swap(left, right))
    }

    fn spider(n_in: usize, n_out: usize, t: &Ty) -> Result<Self> {
        Ok(HyperDiagram::spider(n_in, n_out, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoidal::tree_to_diagram;
    use crate::operad::Node;

    fn x() -> Ty {
        Ty::of(&["x"])
    }

    #[test]
    fn construction() {
        assert!(HyperDiagram::new(x(), x(), vec![], vec![0, 0]).is_ok());
        let conflict = HyperDiagram::new(Ty::of(&["x", "y"]), Ty::unit(), vec![], vec![0, 0]);
        assert!(matches!(conflict, Err(Error::TypeConflict { .. })));
        let count = HyperDiagram::new(x(), x(), vec![], vec![0]);
        assert!(matches!(
            count,
            Err(Error::BadWireCount {
                expected: 2,
                got: 1
            })
        ));
        assert_eq!(HyperDiagram::spider(2, 1, &x()).wires(), [0, 0, 0]);
        assert_eq!(HyperDiagram::spider(1, 1, &x()), HyperDiagram::id(&x()));
        let three = HyperDiagram::spider(0, 3, &x());
        assert_eq!(three.wires(), [0, 0, 0]);
        assert_eq!(HyperDiagram::spider(0, 0, &x()).scalars(), [Ob::new("x")]);
    }

    #[test]
    fn spider_fusion() {
        let s = |a, b| HyperDiagram::spider(a, b, &x());
        assert_eq!(s(1, 2).then(&s(2, 1)).unwrap(), s(1, 1));
        let ids = s(1, 1).tensor(&s(1, 1));
        assert_eq!(s(1, 2).then(&ids).unwrap(), s(1, 2));
        // snake through a cup and a cap made of spiders
        let snake = s(0, 2)
            .tensor(&s(1, 1))
            .then(&s(1, 1).tensor(&s(2, 0)))
            .unwrap();
        assert_eq!(snake, s(1, 1));
        let circle = s(0, 1).then(&s(1, 0)).unwrap();
        assert_eq!(circle.scalars(), [Ob::new("x")]);
    }

    #[test]
    fn swaps() {
        let (a, b) = (Ty::of(&["x"]), Ty::of(&["y", "z"]));
        let twice = HyperDiagram::swap(&a, &b)
            .then(&HyperDiagram::swap(&b, &a))
            .unwrap();
        assert_eq!(twice, HyperDiagram::id(&a.tensor(&b)));
    }

    #[test]
    fn structure() {
        let tree = Node::new("crossed", Ob::new("s"), vec![Ob::new("n"), Ob::new("n")])
            .tree()
            .graft(&[
                Node::leaf("Moses", Ob::new("n")).tree(),
                Node::leaf("Sea", Ob::new("n")).tree(),
            ])
            .unwrap();
        let d = HyperDiagram::from_monoidal(&tree_to_diagram(&tree, false)).unwrap();
        let st = d.structure();
        assert!(st.monogamous && st.bijective && st.progressive);
        assert!(!HyperDiagram::spider(1, 3, &x()).structure().monogamous);
        let cup = HyperDiagram::cups(&x(), &x()).unwrap();
        assert!(!cup.structure().progressive);
    }

    #[test]
    fn downgrade_round_trip() {
        let f = MonBox::new("f", Ty::of(&["x", "y"]), Ty::of(&["y"]));
        let g = MonBox::new("g", Ty::of(&["y"]), Ty::of(&["x", "x"]));
        let d = HyperDiagram::from_box(&f)
            .then(&HyperDiagram::from_box(&g))
            .unwrap()
            .then(&HyperDiagram::swap(&x(), &x()))
            .unwrap()
            .then(&HyperDiagram::spider(2, 1, &x()))
            .unwrap();
        let back = HyperDiagram::upgrade(&d.downgrade()).unwrap();
        assert_eq!(back, d);
        assert_eq!(
            HyperDiagram::id(&x()).downgrade(),
            Diagram::id(Ty::new(vec![RigidOb::new("x")]))
        );
        let one = HyperDiagram::spider(1, 2, &x()).downgrade();
        assert_eq!(one.len(), 1);
        // a feedback loop
        let h = MonBox::new("h", Ty::of(&["x", "x"]), Ty::of(&["x"]));
        let trace = HyperDiagram::new(x(), Ty::unit(), vec![h], vec![0, 0, 1, 1]).unwrap();
        assert_eq!(HyperDiagram::upgrade(&trace.downgrade()).unwrap(), trace);
        assert!(!trace.structure().progressive);
    }

    #[test]
    fn coreference() {
        let n = Ty::of(&["n"]);
        let words = HyperDiagram::from_box(&MonBox::new("lovers", Ty::unit(), n.clone()))
            .tensor(&HyperDiagram::from_box(&MonBox::new(
                "take",
                Ty::unit(),
                Ty::of(&["s"]),
            )))
            .tensor(&HyperDiagram::from_box(&MonBox::new(
                "their",
                Ty::unit(),
                n.clone(),
            )));
        let linked = words.coref_link(0, 2).unwrap();
        assert_eq!(linked.cod(), &Ty::of(&["n", "s"]));
        let direct = words
            .then(
                &HyperDiagram::new(
                    Ty::of(&["n", "s", "n"]),
                    Ty::of(&["n", "s"]),
                    vec![],
                    vec![0, 1, 0, 0, 1],
                )
                .unwrap(),
            )
            .unwrap();
        assert_eq!(linked, direct);
        assert!(matches!(words.coref_link(1, 1), Err(Error::BadPort(_))));
        assert!(matches!(
            words.coref_link(0, 1),
            Err(Error::TypeConflict { .. })
        ));
        let resolved = words
            .tensor(&HyperDiagram::from_box(&MonBox::new("life", Ty::unit(), n)))
            .resolve(&[vec![0, 2, 3]])
            .unwrap();
        assert_eq!(resolved.cod(), &Ty::of(&["n", "s"]));
        assert!(!resolved.structure().monogamous);
    }
}
