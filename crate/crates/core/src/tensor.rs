//! Tensors over commutative semirings, the compact closed structure of
//! matrices, and tensor networks with their contraction orders.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{mismatch, Error, Result};
use crate::monoidal::{Diagram, DiagramBox, Functor, Monoidal, Ty};
use crate::rigid::{permutation, RBox, RDiagram, RKind, Rigid, RigidOb, RigidTy};

/// Absolute tolerance used when comparing floating point entries.
pub const TOLERANCE: f64 = 1e-9;

/// A commutative semiring: enough structure for matrix multiplication.
pub trait Semiring: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;

    /// Equality, up to `TOLERANCE` relative to the larger magnitude (and
    /// absolute below 1) for floating point carriers.
    fn close(self, other: Self) -> bool {
        self == other
    }
}

/// Booleans with `or` and `and`: relations.
impl Semiring for bool {
    const NAME: &'static str = "bool";

    fn zero() -> Self {
        false
    }

    fn one() -> Self {
        true
    }

    fn add(self, other: Self) -> Self {
        self || other
    }

    fn mul(self, other: Self) -> Self {
        self && other
    }
}

/// Natural numbers; arithmetic saturates instead of overflowing.
impl Semiring for u64 {
    const NAME: &'static str = "nat";

    fn zero() -> Self {
        0
    }

    fn one() -> Self {
        1
    }

    fn add(self, other: Self) -> Self {
        self.saturating_add(other)
    }

    fn mul(self, other: Self) -> Self {
        self.saturating_mul(other)
    }
}

impl Semiring for f64 {
    const NAME: &'static str = "real";

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn add(self, other: Self) -> Self {
        self + other
    }

    fn mul(self, other: Self) -> Self {
        self * other
    }

    fn close(self, other: Self) -> bool {
        (self - other).abs() <= TOLERANCE * self.abs().max(other.abs()).max(1.0)
    }
}

impl Semiring for Complex64 {
    const NAME: &'static str = "complex";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn add(self, other: Self) -> Self {
        self + other
    }

    fn mul(self, other: Self) -> Self {
        self * other
    }

    fn close(self, other: Self) -> bool {
        (self - other).norm() <= TOLERANCE * self.norm().max(other.norm()).max(1.0)
    }
}

/// A list of dimensions, one per wire. Dimension 1 is the unit and is
/// dropped; left and right adjoints both reverse the list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Dim(Vec<usize>);

impl Dim {
    /// # Panics
    /// If some dimension is zero.
    pub fn new(dims: &[usize]) -> Self {
        Self::try_new(dims).expect("dimensions are positive")
    }

    pub fn try_new(dims: &[usize]) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!("zero dimension in {dims:?}")));
        }
        Ok(Dim(dims.iter().copied().filter(|&d| d != 1).collect()))
    }

    pub fn unit() -> Self {
        Dim(Vec::new())
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The number of entries of a vector of this type.
    pub fn size(&self) -> usize {
        self.0.iter().product()
    }

    pub fn tensor(&self, other: &Dim) -> Dim {
        Dim(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn reversed(&self) -> Dim {
        Dim(self.0.iter().rev().copied().collect())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Dim {
        Dim(self.0[range].to_vec())
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Dim(1)");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "Dim({})", parts.join(", "))
    }
}

/// Row-major strides of a shape.
fn strides(shape: &[usize]) -> Vec<usize> {
    let mut out = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        out[i] = out[i + 1] * shape[i + 1];
    }
    out
}

/// Moves axis `i` of `data` to position `target[i]`.
fn move_axes<S: Copy>(data: &[S], shape: &[usize], target: &[usize]) -> Vec<S> {
    let mut out_shape = vec![0; shape.len()];
    for (i, &t) in target.iter().enumerate() {
        out_shape[t] = shape[i];
    }
    let out_strides = strides(&out_shape);
    let moved: Vec<usize> = target.iter().map(|&t| out_strides[t]).collect();
    let mut out = data.to_vec();
    let mut index = vec![0; shape.len()];
    for &x in data {
        let pos: usize = index.iter().zip(&moved).map(|(i, s)| i * s).sum();
        out[pos] = x;
        for axis in (0..shape.len()).rev() {
            index[axis] += 1;
            if index[axis] < shape[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
    out
}

/// Calls `f` on every multi-index of `shape`, in row-major order.
fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut index = vec![0; shape.len()];
    loop {
        f(&index);
        let mut axis = shape.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < shape[axis] {
                break;
            }
            index[axis] = 0;
        }
    }
}

/// A morphism `dom -> cod` of matrices over `S`, stored as a row-major
/// array with the axes of `dom` followed by the axes of `cod`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<S> {
    dom: Dim,
    cod: Dim,
    data: Vec<S>,
}

impl<S: Semiring> Tensor<S> {
    pub fn new(dom: Dim, cod: Dim, data: Vec<S>) -> Result<Self> {
        let expected = dom.size() * cod.size();
        if data.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for {dom} -> {cod}, expected {expected}",
                data.len()
            )));
        }
        Ok(Tensor { dom, cod, data })
    }

    /// A state `unit -> cod`.
    pub fn state(cod: Dim, data: Vec<S>) -> Result<Self> {
        Self::new(Dim::unit(), cod, data)
    }

    pub fn scalar(x: S) -> Self {
        Tensor {
            dom: Dim::unit(),
            cod: Dim::unit(),
            data: vec![x],
        }
    }

    pub fn dom(&self) -> &Dim {
        &self.dom
    }

    pub fn cod(&self) -> &Dim {
        &self.cod
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    /// The axes of the array: `dom` then `cod`.
    pub fn shape(&self) -> Vec<usize> {
        self.dom.tensor(&self.cod).0
    }

    pub fn id(d: &Dim) -> Self {
        let n = d.size();
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        Tensor {
            dom: d.clone(),
            cod: d.clone(),
            data,
        }
    }

    /// Matrix product over the semiring.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.cod != other.dom {
            return Err(mismatch(&self.cod, &other.dom));
        }
        let (m, k, n) = (self.dom.size(), self.cod.size(), other.cod.size());
        let mut data = vec![S::zero(); m * n];
        for i in 0..m {
            for j in 0..k {
                let a = self.data[i * k + j];
                if a == S::zero() {
                    continue;
                }
                for l in 0..n {
                    data[i * n + l] = data[i * n + l].add(a.mul(other.data[j * n + l]));
                }
            }
        }
        Ok(Tensor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            data,
        })
    }

    /// Kronecker product, with the axes moved so that the domain comes
    /// before the codomain.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.data.len() * other.data.len());
        for &a in &self.data {
            for &b in &other.data {
                data.push(a.mul(b));
            }
        }
        let (d0, c0, d1) = (self.dom.len(), self.cod.len(), other.dom.len());
        let shape: Vec<usize> = self.shape().into_iter().chain(other.shape()).collect();
        let target: Vec<usize> = (0..shape.len())
            .map(|i| {
                if i < d0 || i >= d0 + c0 + d1 {
                    i
                } else if i >= d0 + c0 {
                    i - c0
                } else {
                    i + d1
                }
            })
            .collect();
        Tensor {
            dom: self.dom.tensor(&other.dom),
            cod: self.cod.tensor(&other.cod),
            data: move_axes(&data, &shape, &target),
        }
    }

    /// `left @ right -> right @ left`.
    pub fn swap(left: &Dim, right: &Dim) -> Self {
        let both = left.tensor(right);
        let id = Self::id(&both);
        let n = both.len();
        let shape = id.shape();
        let target: Vec<usize> = (0..2 * n)
            .map(|i| {
                if i < n {
                    i
                } else if i < n + left.len() {
                    i + right.len()
                } else {
                    i - left.len()
                }
            })
            .collect();
        Tensor {
            dom: both,
            cod: right.tensor(left),
            data: move_axes(&id.data, &shape, &target),
        }
    }

    /// The indicator of `left[i] == right[k - 1 - i]` for all `i`.
    fn nested_delta(left: &Dim, right: &Dim) -> Result<Vec<S>> {
        if *right != left.reversed() {
            return Err(Error::AdjointMismatch {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        let k = left.len();
        let shape = left.tensor(right).0;
        let mut data = Vec::with_capacity(shape.iter().product());
        for_each_index(&shape, |idx| {
            let hit = (0..k).all(|i| idx[i] == idx[2 * k - 1 - i]);
            data.push(if hit { S::one() } else { S::zero() });
        });
        Ok(data)
    }

    pub fn cups(left: &Dim, right: &Dim) -> Result<Self> {
        let data = Self::nested_delta(left, right)?;
        Self::new(left.tensor(right), Dim::unit(), data)
    }

    pub fn caps(left: &Dim, right: &Dim) -> Result<Self> {
        let data = Self::nested_delta(left, right)?;
        Self::new(Dim::unit(), left.tensor(right), data)
    }

    /// The generalised Kronecker delta: one on the entries where all the
    /// legs attached to each object of `d` agree.
    pub fn spider(n_in: usize, n_out: usize, d: &Dim) -> Self {
        let legs = n_in + n_out;
        let k = d.len();
        let shape: Vec<usize> = (0..legs).flat_map(|_| d.0.iter().copied()).collect();
        let mut data = Vec::with_capacity(shape.iter().product());
        for_each_index(&shape, |idx| {
            let hit = (0..k).all(|j| (1..legs).all(|leg| idx[leg * k + j] == idx[j]));
            data.push(if hit { S::one() } else { S::zero() });
        });
        let power = |n: usize| (0..n).fold(Dim::unit(), |acc, _| acc.tensor(d));
        Tensor {
            dom: power(n_in),
            cod: power(n_out),
            data,
        }
    }

    /// Entry-wise comparison within the semiring's tolerance.
    pub fn close(&self, other: &Self) -> bool {
        self.dom == other.dom
            && self.cod == other.cod
            && self.data.iter().zip(&other.data).all(|(a, b)| a.close(*b))
    }

    /// Applies `f` to every entry.
    pub fn map<T: Semiring>(&self, f: impl Fn(S) -> T) -> Tensor<T> {
        Tensor {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Same array, read as a state on `dom @ cod`.
    pub fn as_state(&self) -> Self {
        Tensor {
            dom: Dim::unit(),
            cod: self.dom.tensor(&self.cod),
            data: self.data.clone(),
        }
    }
}

impl<S: Semiring> Monoidal for Tensor<S> {
    type Ty = Dim;

    fn unit() -> Dim {
        Dim::unit()
    }

    fn ty_tensor(a: &Dim, b: &Dim) -> Dim {
        a.tensor(b)
    }

    fn dom(&self) -> Dim {
        self.dom.clone()
    }

    fn cod(&self) -> Dim {
        self.cod.clone()
    }

    fn id(t: &Dim) -> Self {
        Tensor::id(t)
    }

    fn then(&self, other: &Self) -> Result<Self> {
        Tensor::then(self, other)
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Tensor::tensor(self, other))
    }

    fn ty_len(t: &Dim) -> usize {
        t.len()
    }

    fn ty_split(t: &Dim, n: usize) -> (Dim, Dim) {
        (t.slice(0..n), t.slice(n..t.len()))
    }

    /// Applies `f` to the middle wires directly, without building the
    /// whiskered layer.
    fn then_layer(&self, left: &Dim, f: &Self, right: &Dim) -> Result<Self> {
        let expected = left.tensor(&f.dom).tensor(right);
        if self.cod != expected {
            return Err(mismatch(&self.cod, &expected));
        }
        let (x, l, a, b, r) = (
            self.dom.size(),
            left.size(),
            f.dom.size(),
            f.cod.size(),
            right.size(),
        );
        let mut data = vec![S::zero(); x * l * b * r];
        for xi in 0..x {
            for li in 0..l {
                for ai in 0..a {
                    for ri in 0..r {
                        let v = self.data[((xi * l + li) * a + ai) * r + ri];
                        if v == S::zero() {
                            continue;
                        }
                        for bi in 0..b {
                            let out = &mut data[((xi * l + li) * b + bi) * r + ri];
                            *out = out.add(v.mul(f.data[ai * b + bi]));
                        }
                    }
                }
            }
        }
        Ok(Tensor {
            dom: self.dom.clone(),
            cod: left.tensor(&f.cod).tensor(right),
            data,
        })
    }
}

impl<S: Semiring> Rigid for Tensor<S> {
    fn ty_l(t: &Dim) -> Dim {
        t.reversed()
    }

    fn ty_r(t: &Dim) -> Dim {
        t.reversed()
    }

    fn cups(left: &Dim, right: &Dim) -> Result<Self> {
        Tensor::cups(left, right)
    }

    fn caps(left: &Dim, right: &Dim) -> Result<Self> {
        Tensor::caps(left, right)
    }

    fn swap(left: &Dim, right: &Dim) -> Result<Self> {
        Ok(Tensor::swap(left, right))
    }

    fn spider(n_in: usize, n_out: usize, t: &Dim) -> Result<Self> {
        Ok(Tensor::spider(n_in, n_out, t))
    }
}

/// A functor from rigid diagrams into tensors.
pub type TensorFunctor<S> = Functor<RBox, Tensor<S>>;

/// A tensor functor given by a dimension for each basic object and an
/// array for each generating box, looked up by name. Arrays are checked
/// against the dimensions of the box's domain and codomain.
pub fn tensor_functor<S: Semiring>(
    ob: HashMap<String, Dim>,
    ar: HashMap<String, Vec<S>>,
) -> TensorFunctor<S> {
    let ob_map = ob.clone();
    crate::rigid::functor(
        move |name| {
            ob_map
                .get(name)
                .cloned()
                .ok_or_else(|| Error::MissingMapping(name.to_string()))
        },
        move |b: &RBox| {
            let ty = |t: &RigidTy| -> Result<Dim> {
                t.iter().try_fold(Dim::unit(), |acc, x| {
                    let d = ob
                        .get(&x.name)
                        .cloned()
                        .ok_or_else(|| Error::MissingMapping(x.name.clone()))?;
                    Ok(acc.tensor(&if x.z % 2 == 0 { d } else { d.reversed() }))
                })
            };
            let data = ar
                .get(&b.name())
                .cloned()
                .ok_or_else(|| Error::MissingMapping(b.name()))?;
            Tensor::new(ty(b.dom())?, ty(b.cod())?, data)
        },
    )
}

/// A tensor network: vertices carrying tensors, joined by edges carrying
/// dimensions. The tensor of a vertex is a state whose axes follow the
/// incident edges in declaration order; a loop contributes two axes.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorNet<S> {
    vertices: Vec<String>,
    edges: Vec<(usize, usize, usize)>,
    tensors: Vec<Tensor<S>>,
}

impl<S: Semiring> TensorNet<S> {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(usize, usize, usize)>,
        tensors: Vec<Tensor<S>>,
    ) -> Result<Self> {
        if tensors.len() != vertices.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} tensors for {} vertices",
                tensors.len(),
                vertices.len()
            )));
        }
        let net = TensorNet {
            vertices,
            edges,
            tensors,
        };
        for &(u, v, d) in &net.edges {
            if u >= net.vertices.len() || v >= net.vertices.len() || d == 0 {
                return Err(Error::ShapeMismatch(format!("bad edge ({u}, {v}, {d})")));
            }
        }
        for (v, t) in net.tensors.iter().enumerate() {
            let expected: Vec<usize> = net.axes(v).iter().map(|&e| net.edges[e].2).collect();
            let shape: Vec<usize> = t.shape();
            let nontrivial: Vec<usize> = expected.iter().copied().filter(|&d| d != 1).collect();
            if shape != nontrivial {
                return Err(Error::ShapeMismatch(format!(
                    "tensor of {} has shape {shape:?}, edges need {expected:?}",
                    net.vertices[v]
                )));
            }
        }
        Ok(net)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn tensors(&self) -> &[Tensor<S>] {
        &self.tensors
    }

    /// The edges incident to `v`, one entry per axis of its tensor.
    pub fn axes(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (e, &(a, b, _)) in self.edges.iter().enumerate() {
            if a == v {
                out.push(e);
            }
            if b == v {
                out.push(e);
            }
        }
        out
    }

    /// Axes of `v` with dimension-one edges left out, matching its tensor.
    fn labelled(&self, v: usize) -> Factor<S> {
        let labels = self
            .axes(v)
            .into_iter()
            .filter(|&e| self.edges[e].2 != 1)
            .collect();
        Factor {
            labels,
            data: self.tensors[v].data.clone(),
        }
    }

    fn dims(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.2).collect()
    }

    fn check_order(&self, order: &[usize]) -> Result<()> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::BadOrder(format!(
                "{} vertices, order has {}",
                n,
                order.len()
            )));
        }
        for &v in order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::BadOrder(format!("{order:?} is not a permutation")));
            }
        }
        Ok(())
    }

    /// Swallows the vertices one by one in the given order.
    pub fn contract_with_order(&self, order: &[usize]) -> Result<S> {
        self.check_order(order)?;
        let dims = self.dims();
        let mut done = vec![false; self.vertices.len()];
        let mut acc = Factor {
            labels: Vec::new(),
            data: vec![S::one()],
        };
        for &v in order {
            done[v] = true;
            let next = self.labelled(v);
            let mut keep: Vec<usize> = Vec::new();
            for &e in acc.labels.iter().chain(&next.labels) {
                let (a, b, _) = self.edges[e];
                if !(done[a] && done[b]) && !keep.contains(&e) {
                    keep.push(e);
                }
            }
            acc = acc.contract(&next, &keep, &dims);
        }
        Ok(acc.data[0])
    }

    /// Contraction in vertex order.
    pub fn contract(&self) -> S {
        let order: Vec<usize> = (0..self.vertices.len()).collect();
        self.contract_with_order(&order).expect("identity order")
    }

    /// Edges between the vertices flagged in `inside` and the others.
    fn cut(&self, inside: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| inside[a] != inside[b])
            .count()
    }

    /// The largest number of edges crossing a bubble around a prefix of
    /// the order.
    pub fn bubblewidth(&self, order: &[usize]) -> Result<usize> {
        self.check_order(order)?;
        let mut inside = vec![false; self.vertices.len()];
        let mut width = 0;
        for &v in order {
            inside[v] = true;
            width = width.max(self.cut(&inside));
        }
        Ok(width)
    }

    /// Repeatedly takes the vertex that leaves the fewest edges crossing
    /// the bubble, breaking ties by the smallest index.
    pub fn greedy_order(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut inside = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best = None;
            for v in 0..n {
                if inside[v] {
                    continue;
                }
                inside[v] = true;
                let key = (self.cut(&inside), v);
                inside[v] = false;
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
            let best = best.expect("a vertex is left").1;
            inside[best] = true;
            order.push(best);
        }
        order
    }

    /// An order of least bubblewidth, by dynamic programming over subsets.
    /// Only available for nets of at most 10 vertices.
    pub fn best_order(&self) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        if n > 10 {
            return Err(Error::BadOrder(format!(
                "{n} vertices is too many for an exhaustive search"
            )));
        }
        let full = 1usize << n;
        let cut_of = |set: usize| {
            let inside: Vec<bool> = (0..n).map(|v| set >> v & 1 == 1).collect();
            self.cut(&inside)
        };
        let mut best = vec![usize::MAX; full];
        let mut last = vec![0usize; full];
        best[0] = 0;
        for set in 1..full {
            let c = cut_of(set);
            for v in 0..n {
                if set >> v & 1 == 1 {
                    let w = best[set ^ (1 << v)].max(c);
                    if w < best[set] {
                        best[set] = w;
                        last[set] = v;
                    }
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut set = full - 1;
        while set != 0 {
            order.push(last[set]);
            set ^= 1 << last[set];
        }
        order.reverse();
        Ok(order)
    }

    /// A premonoidal diagram evaluating the net in the given order: each
    /// vertex becomes a box whose inputs are its edges to earlier vertices
    /// and whose outputs are its edges to later ones, after swaps bring
    /// the inputs to the right end of the open wires. Its width is the
    /// bubblewidth of the order.
    pub fn premonoidal(&self, order: &[usize]) -> Result<Premonoidal<S>> {
        self.check_order(order)?;
        let n = self.vertices.len();
        let mut position = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let wire = |e: usize| RigidOb::new(format!("e{e}"));
        let mut bundle: Vec<usize> = Vec::new();
        let mut d = Diagram::id(Ty::unit());
        let mut tensors = HashMap::new();
        let dims = self.dims();
        for &v in order {
            let axes = self.axes(v);
            let proper = |e: &usize| self.edges[*e].0 != self.edges[*e].1;
            let mut inputs: Vec<usize> = axes.iter().copied().filter(proper).collect();
            inputs.retain(|&e| {
                let (a, b, _) = self.edges[e];
                position[if a == v { b } else { a }] < position[v]
            });
            let outputs: Vec<usize> = axes
                .iter()
                .copied()
                .filter(|e| proper(e) && !inputs.contains(e))
                .collect();
            let mut perm: Vec<usize> = (0..bundle.len())
                .filter(|&i| !inputs.contains(&bundle[i]))
                .collect();
            perm.extend(
                inputs
                    .iter()
                    .map(|e| bundle.iter().position(|b| b == e).expect("open wire")),
            );
            let current: RigidTy = bundle.iter().map(|&e| wire(e)).collect();
            d = d.then(&permutation(&current, &perm)?)?;
            bundle = perm.iter().map(|&i| bundle[i]).collect();
            bundle.truncate(bundle.len() - inputs.len());
            let name = format!("v{v}");
            let bx = RBox::gen(
                name.clone(),
                inputs.iter().map(|&e| wire(e)).collect(),
                outputs.iter().map(|&e| wire(e)).collect(),
            );
            let rest: RigidTy = bundle.iter().map(|&e| wire(e)).collect();
            d = d.then(&bx.diagram().whisker(&rest, &Ty::unit()))?;
            bundle.extend(&outputs);
            // Trace out loops, then order the axes as inputs then outputs.
            let keep: Vec<usize> = inputs
                .iter()
                .chain(&outputs)
                .copied()
                .filter(|&e| dims[e] != 1)
                .collect();
            let one = Factor {
                labels: Vec::new(),
                data: vec![S::one()],
            };
            let traced = one.contract(&self.labelled(v), &keep, &dims);
            let dim_of = |es: &[usize]| Dim::new(&es.iter().map(|&e| dims[e]).collect::<Vec<_>>());
            tensors.insert(
                name,
                Tensor::new(dim_of(&inputs), dim_of(&outputs), traced.data)?,
            );
        }
        let dims = dims
            .iter()
            .enumerate()
            .map(|(e, &d)| (format!("e{e}"), Dim::new(&[d])))
            .collect();
        Ok(Premonoidal {
            diagram: d,
            tensors,
            dims,
        })
    }

    /// The translation of a rigid diagram whose boundaries are sent to the
    /// unit: every box that is not a cup, a cap or a swap becomes a vertex
    /// carrying its image under `f`, and wires become edges. Closed loops
    /// become scalar vertices.
    pub fn from_diagram(d: &RDiagram, f: &TensorFunctor<S>) -> Result<Self> {
        if !f.ty(d.dom())?.is_empty() || !f.ty(d.cod())?.is_empty() {
            return Err(Error::NotClosed(format!("{} -> {}", d.dom(), d.cod())));
        }
        // Wire ends are numbered; `link` joins the two ends of a wire.
        let mut ends: Vec<Option<(usize, usize)>> = Vec::new();
        let mut dim_of_end: Vec<usize> = Vec::new();
        let mut uf: Vec<usize> = Vec::new();
        fn find(uf: &mut [usize], x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        let mut fresh = |port: Option<(usize, usize)>,
                         dim: usize,
                         ends: &mut Vec<Option<(usize, usize)>>,
                         uf: &mut Vec<usize>| {
            ends.push(port);
            dim_of_end.push(dim);
            uf.push(uf.len());
            uf.len() - 1
        };
        let mut vertices = Vec::new();
        let mut tensors = Vec::new();
        let mut bundle: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for layer in d.layers() {
            let left = f.ty(&layer.left)?.len();
            let b = &layer.bx;
            let k_in = f.ty(b.dom())?.len();
            let dims_out = f.ty(b.cod())?;
            let consumed: Vec<usize> = bundle.drain(left..left + k_in).collect();
            let produced: Vec<usize> = match b.kind() {
                RKind::Cup => {
                    let k = consumed.len() / 2;
                    for i in 0..k {
                        pairs.push((consumed[i], consumed[2 * k - 1 - i]));
                    }
                    Vec::new()
                }
                RKind::Cap => {
                    let k = dims_out.len() / 2;
                    let out: Vec<usize> = dims_out
                        .dims()
                        .iter()
                        .map(|&dim| fresh(None, dim, &mut ends, &mut uf))
                        .collect();
                    for i in 0..k {
                        pairs.push((out[i], out[2 * k - 1 - i]));
                    }
                    out
                }
                RKind::Swap => {
                    let split = f.ty(&b.dom().slice(0..1))?.len();
                    consumed[split..]
                        .iter()
                        .chain(&consumed[..split])
                        .copied()
                        .collect()
                }
                _ => {
                    let v = vertices.len();
                    vertices.push(b.name());
                    let t = f.ar(b)?;
                    let in_dims = t.dom().dims().to_vec();
                    for (j, &end) in consumed.iter().enumerate() {
                        let port = fresh(Some((v, j)), in_dims[j], &mut ends, &mut uf);
                        pairs.push((end, port));
                    }
                    let out: Vec<usize> = dims_out
                        .dims()
                        .iter()
                        .enumerate()
                        .map(|(j, &dim)| fresh(Some((v, k_in + j)), dim, &mut ends, &mut uf))
                        .collect();
                    tensors.push(t.as_state());
                    out
                }
            };
            bundle.splice(left..left, produced);
        }
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            uf[ra.max(rb)] = ra.min(rb);
        }
        // Group the vertex ports by wire.
        let mut classes: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        let mut loops: Vec<(usize, usize)> = Vec::new();
        for x in 0..ends.len() {
            let root = find(&mut uf, x);
            match ends[x] {
                Some(port) => classes.entry(root).or_default().push(port),
                None => loops.push((root, dim_of_end[x])),
            }
        }
        // Each edge is (u, v, dim, port of u, port of v) with u <= v.
        let mut edges: Vec<(usize, usize, usize, usize, usize)> = Vec::new();
        for ports in classes.values() {
            let [a, b] = ports[..] else {
                return Err(Error::IllTyped("a wire does not join two ports".into()));
            };
            let ((u, i), (v, j)) = (a.min(b), a.max(b));
            let dim = tensors[u].cod().dims()[i];
            edges.push((u, v, dim, i, j));
        }
        edges.sort_unstable();
        loops.sort_unstable();
        loops.dedup_by_key(|l| l.0);
        for (root, dim) in loops {
            if !classes.contains_key(&root) {
                vertices.push("loop".into());
                tensors.push(Tensor::scalar(
                    (0..dim).fold(S::zero(), |acc, _| acc.add(S::one())),
                ));
            }
        }
        // Reorder each vertex's axes to follow the edge declaration order.
        let mut axis_of: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        let mut port_to_axis: HashMap<(usize, usize), usize> = HashMap::new();
        for &(u, v, _, i, j) in &edges {
            port_to_axis.insert((u, i), axis_of[u].len());
            axis_of[u].push(i);
            port_to_axis.insert((v, j), axis_of[v].len());
            axis_of[v].push(j);
        }
        let mut moved = Vec::with_capacity(tensors.len());
        for (v, t) in tensors.into_iter().enumerate() {
            let shape = t.cod().dims().to_vec();
            let target: Vec<usize> = (0..shape.len()).map(|p| port_to_axis[&(v, p)]).collect();
            let data = move_axes(t.data(), &shape, &target);
            let new_shape: Vec<usize> = axis_of[v].iter().map(|&p| shape[p]).collect();
            moved.push(Tensor::state(Dim::new(&new_shape), data)?);
        }
        let edges = edges.into_iter().map(|(u, v, d, _, _)| (u, v, d)).collect();
        TensorNet::new(vertices, edges, moved)
    }
}

/// The premonoidal diagram of a net under a contraction order, with the
/// data needed to evaluate it.
#[derive(Debug, Clone)]
pub struct Premonoidal<S> {
    pub diagram: RDiagram,
    pub tensors: HashMap<String, Tensor<S>>,
    pub dims: HashMap<String, Dim>,
}

impl<S: Semiring> Premonoidal<S> {
    pub fn functor(&self) -> TensorFunctor<S> {
        let dims = self.dims.clone();
        let tensors = self.tensors.clone();
        crate::rigid::functor(
            move |name| {
                dims.get(name)
                    .cloned()
                    .ok_or_else(|| Error::MissingMapping(name.into()))
            },
            move |b: &RBox| {
                tensors
                    .get(&b.name())
                    .cloned()
                    .ok_or_else(|| Error::MissingMapping(b.name()))
            },
        )
    }

    pub fn evaluate(&self) -> Result<Tensor<S>> {
        self.functor().apply(&self.diagram)
    }
}

/// A tensor whose axes are labelled by edges.
struct Factor<S> {
    labels: Vec<usize>,
    data: Vec<S>,
}

impl<S: Semiring> Factor<S> {
    /// Multiplies two factors and sums out every label not in `keep`.
    /// Repeated labels within a factor are read diagonally.
    fn contract(&self, other: &Self, keep: &[usize], dims: &[usize]) -> Self {
        let mut all: Vec<usize> = Vec::new();
        for &l in self.labels.iter().chain(&other.labels).chain(keep) {
            if !all.contains(&l) {
                all.push(l);
            }
        }
        let slot = |l: usize| all.iter().position(|&x| x == l).expect("label");
        let shape: Vec<usize> = all.iter().map(|&l| dims[l]).collect();
        let place = |labels: &[usize]| -> Vec<(usize, usize)> {
            let st = strides(&labels.iter().map(|&l| dims[l]).collect::<Vec<_>>());
            labels.iter().zip(st).map(|(&l, s)| (slot(l), s)).collect()
        };
        let (pa, pb, pk) = (place(&self.labels), place(&other.labels), place(keep));
        let offset = |p: &[(usize, usize)], idx: &[usize]| -> usize {
            p.iter().map(|&(k, s)| idx[k] * s).sum()
        };
        let size: usize = keep.iter().map(|&l| dims[l]).product();
        let mut data = vec![S::zero(); size];
        for_each_index(&shape, |idx| {
            let a = self.data[offset(&pa, idx)];
            if a == S::zero() {
                return;
            }
            let b = other.data[offset(&pb, idx)];
            let out = &mut data[offset(&pk, idx)];
            *out = out.add(a.mul(b));
        });
        Factor {
            labels: keep.to_vec(),
            data,
        }
    }
}
