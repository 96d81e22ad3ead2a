//! Free monoidal categories in the premonoidal encoding: a diagram is its
//! domain, its codomain, a list of boxes and, for each box, the number of
//! wires to its left.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::ops::Range;
use std::sync::Arc;

use crate::cat::Ob;
use crate::error::{mismatch, Error, Result};
use crate::operad::{OperadTarget, Tree, Weight};

/// A list of objects; tensor is concatenation and the empty list is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ty<O = Ob>(Vec<O>);

impl<O> Default for Ty<O> {
    fn default() -> Self {
        Ty(Vec::new())
    }
}

impl<O: Clone> Ty<O> {
    pub fn new(objects: Vec<O>) -> Self {
        Ty(objects)
    }

    pub fn unit() -> Self {
        Ty(Vec::new())
    }

    pub fn objects(&self) -> &[O] {
        &self.0
    }

    pub fn into_objects(self) -> Vec<O> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, O> {
        self.0.iter()
    }

    pub fn tensor(&self, other: &Ty<O>) -> Ty<O> {
        let mut objects = self.0.clone();
        objects.extend(other.0.iter().cloned());
        Ty(objects)
    }

    pub fn slice(&self, range: Range<usize>) -> Ty<O> {
        Ty(self.0[range].to_vec())
    }
}

impl Ty<Ob> {
    /// Convenience constructor from object names.
    pub fn of(names: &[&str]) -> Self {
        Ty(names.iter().map(|n| Ob::new(*n)).collect())
    }
}

impl<O> FromIterator<O> for Ty<O> {
    fn from_iter<I: IntoIterator<Item = O>>(iter: I) -> Self {
        Ty(iter.into_iter().collect())
    }
}

impl<O> std::ops::Index<usize> for Ty<O> {
    type Output = O;

    fn index(&self, i: usize) -> &O {
        &self.0[i]
    }
}

impl<O: fmt::Display> fmt::Display for Ty<O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Ty()");
        }
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" @ ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// What a diagram needs from its boxes.
pub trait DiagramBox: Clone + PartialEq + Eq + Hash + fmt::Debug {
    type Ob: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display;

    fn dom(&self) -> &Ty<Self::Ob>;
    fn cod(&self) -> &Ty<Self::Ob>;
    fn name(&self) -> String;

    /// Total order used to break ties between floating scalars.
    fn sort_key(&self) -> String {
        format!("{}:{}:{}", self.name(), self.dom(), self.cod())
    }
}

/// A generating box `name: dom -> cod`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonBox<O = Ob> {
    pub name: String,
    pub dom: Ty<O>,
    pub cod: Ty<O>,
}

impl<O> MonBox<O> {
    pub fn new(name: impl Into<String>, dom: Ty<O>, cod: Ty<O>) -> Self {
        MonBox {
            name: name.into(),
            dom,
            cod,
        }
    }
}

impl<O: Clone + Eq + Hash + fmt::Debug + fmt::Display> DiagramBox for MonBox<O> {
    type Ob = O;

    fn dom(&self) -> &Ty<O> {
        &self.dom
    }

    fn cod(&self) -> &Ty<O> {
        &self.cod
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

impl<O: Clone + Eq + Hash + fmt::Debug + fmt::Display> MonBox<O> {
    /// The diagram made of this box alone.
    pub fn diagram(&self) -> Diagram<MonBox<O>> {
        Diagram::from_box(self.clone())
    }
}

/// One box with the identity wires on either side of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer<B: DiagramBox> {
    pub left: Ty<B::Ob>,
    pub bx: B,
    pub right: Ty<B::Ob>,
}

impl<B: DiagramBox> Layer<B> {
    pub fn dom(&self) -> Ty<B::Ob> {
        self.left.tensor(self.bx.dom()).tensor(&self.right)
    }

    pub fn cod(&self) -> Ty<B::Ob> {
        self.left.tensor(self.bx.cod()).tensor(&self.right)
    }
}

/// Which rule to use when exchanging two adjacent boxes. The two rules
/// only disagree when the earlier box has no outputs, the later box has
/// no inputs and they touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The later box lies to the left of the earlier one.
    Left,
    /// The later box lies to the right of the earlier one.
    Right,
}

/// A diagram in the premonoidal encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram<B: DiagramBox> {
    dom: Ty<B::Ob>,
    cod: Ty<B::Ob>,
    boxes: Vec<B>,
    offsets: Vec<usize>,
}

impl<B: DiagramBox> Diagram<B> {
    /// Validates the encoding by scanning the layers from the domain.
    pub fn new(dom: Ty<B::Ob>, cod: Ty<B::Ob>, boxes: Vec<B>, offsets: Vec<usize>) -> Result<Self> {
        if boxes.len() != offsets.len() {
            return Err(Error::IllTyped(format!(
                "{} boxes but {} offsets",
                boxes.len(),
                offsets.len()
            )));
        }
        let mut scan = dom.clone();
        for (i, (b, &off)) in boxes.iter().zip(&offsets).enumerate() {
            let n = b.dom().len();
            if off + n > scan.len() {
                return Err(Error::IllTyped(format!(
                    "box {i} ({}) at offset {off} needs {n} inputs but the diagram has width {}",
                    b.name(),
                    scan.len()
                )));
            }
            if &scan.slice(off..off + n) != b.dom() {
                return Err(Error::IllTyped(format!(
                    "box {i} ({}) expects {} but receives {}",
                    b.name(),
                    b.dom(),
                    scan.slice(off..off + n)
                )));
            }
            scan = scan
                .slice(0..off)
                .tensor(b.cod())
                .tensor(&scan.slice(off + n..scan.len()));
        }
        if scan != cod {
            return Err(Error::IllTyped(format!(
                "scan ends at {scan}, declared codomain {cod}"
            )));
        }
        Ok(Diagram {
            dom,
            cod,
            boxes,
            offsets,
        })
    }

    pub(crate) fn new_unchecked(
        dom: Ty<B::Ob>,
        cod: Ty<B::Ob>,
        boxes: Vec<B>,
        offsets: Vec<usize>,
    ) -> Self {
        debug_assert!(
            Diagram::new(dom.clone(), cod.clone(), boxes.clone(), offsets.clone()).is_ok()
        );
        Diagram {
            dom,
            cod,
            boxes,
            offsets,
        }
    }

    pub fn id(t: Ty<B::Ob>) -> Self {
        Diagram {
            dom: t.clone(),
            cod: t,
            boxes: Vec::new(),
            offsets: Vec::new(),
        }
    }

    pub fn from_box(b: B) -> Self {
        Diagram {
            dom: b.dom().clone(),
            cod: b.cod().clone(),
            boxes: vec![b],
            offsets: vec![0],
        }
    }

    pub fn dom(&self) -> &Ty<B::Ob> {
        &self.dom
    }

    pub fn cod(&self) -> &Ty<B::Ob> {
        &self.cod
    }

    pub fn boxes(&self) -> &[B] {
        &self.boxes
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn is_id(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Sequential composition `self >> other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.cod != other.dom {
            return Err(mismatch(&self.cod, &other.dom));
        }
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        let mut offsets = self.offsets.clone();
        offsets.extend(&other.offsets);
        Ok(Diagram {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            boxes,
            offsets,
        })
    }

    /// Parallel composition: `self` runs first, then `other` to its right.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        let mut offsets = self.offsets.clone();
        offsets.extend(other.offsets.iter().map(|o| o + self.cod.len()));
        Diagram {
            dom: self.dom.tensor(&other.dom),
            cod: self.cod.tensor(&other.cod),
            boxes,
            offsets,
        }
    }

    /// `id(left) @ self @ id(right)`.
    pub fn whisker(&self, left: &Ty<B::Ob>, right: &Ty<B::Ob>) -> Self {
        Diagram {
            dom: left.tensor(&self.dom).tensor(right),
            cod: left.tensor(&self.cod).tensor(right),
            boxes: self.boxes.clone(),
            offsets: self.offsets.iter().map(|o| o + left.len()).collect(),
        }
    }

    /// The types between consecutive layers, from `dom` to `cod`.
    pub fn scan(&self) -> Vec<Ty<B::Ob>> {
        let mut out = Vec::with_capacity(self.boxes.len() + 1);
        let mut current = self.dom.clone();
        out.push(current.clone());
        for (b, &off) in self.boxes.iter().zip(&self.offsets) {
            let end = off + b.dom().len();
            current = current
                .slice(0..off)
                .tensor(b.cod())
                .tensor(&current.slice(end..current.len()));
            out.push(current.clone());
        }
        out
    }

    pub fn layers(&self) -> Vec<Layer<B>> {
        let scan = self.scan();
        self.boxes
            .iter()
            .zip(&self.offsets)
            .zip(&scan)
            .map(|((b, &off), t)| Layer {
                left: t.slice(0..off),
                bx: b.clone(),
                right: t.slice(off + b.dom().len()..t.len()),
            })
            .collect()
    }

    /// The largest number of wires between two layers.
    pub fn width(&self) -> usize {
        self.scan().iter().map(Ty::len).max().unwrap_or(0)
    }

    /// Exchanges boxes `i` and `i + 1` using the given rule.
    pub fn interchange_with(&self, i: usize, side: Side) -> Result<Self> {
        let mut d = self.clone();
        if !d.exchange(i, side) {
            return Err(Error::InterchangerError(i, i + 1));
        }
        Ok(d)
    }

    /// Moves box `i` to position `j` by successive exchanges of adjacent
    /// boxes, preferring the right-hand rule when both apply.
    pub fn interchange(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.boxes.len();
        if i >= n || j >= n {
            return Err(Error::InterchangerError(i, j));
        }
        let mut d = self.clone();
        let swap = |d: &mut Self, k: usize| {
            if d.exchange(k, Side::Right) || d.exchange(k, Side::Left) {
                Ok(())
            } else {
                Err(Error::InterchangerError(k, k + 1))
            }
        };
        if i < j {
            for k in i..j {
                swap(&mut d, k)?;
            }
        } else {
            for k in (j..i).rev() {
                swap(&mut d, k)?;
            }
        }
        Ok(d)
    }

    /// In-place exchange of boxes `i` and `i + 1`; false if the rule does
    /// not apply.
    fn exchange(&mut self, i: usize, side: Side) -> bool {
        if i + 1 >= self.boxes.len() {
            return false;
        }
        let (a, b) = (self.offsets[i], self.offsets[i + 1]);
        let (first, second) = (&self.boxes[i], &self.boxes[i + 1]);
        let (new_second_off, new_first_off) = match side {
            Side::Left if b + second.dom().len() <= a => {
                (b, a + second.cod().len() - second.dom().len())
            }
            Side::Right if b >= a + first.cod().len() => {
                (b + first.dom().len() - first.cod().len(), a)
            }
            _ => return false,
        };
        self.boxes.swap(i, i + 1);
        self.offsets[i] = new_second_off;
        self.offsets[i + 1] = new_first_off;
        true
    }

    /// Whether box `k + 1` should move above box `k` during normalisation.
    fn moves_up(&self, k: usize) -> bool {
        let (a, b) = (self.offsets[k], self.offsets[k + 1]);
        let (first, second) = (&self.boxes[k], &self.boxes[k + 1]);
        let is_scalar = |x: &B| x.dom().is_empty() && x.cod().is_empty();
        if a == b && is_scalar(first) && is_scalar(second) {
            return second.sort_key() < first.sort_key();
        }
        b + second.dom().len() <= a
    }

    /// Interchanger normal form: while some box sits weakly to the left of
    /// the box just above it, move it up. Floating scalars at the same
    /// position are sorted by name. The procedure stops early if it ever
    /// revisits a configuration, which can only happen for diagrams with
    /// components disconnected from both boundaries.
    pub fn normal_form(&self) -> Self {
        let mut d = self.clone();
        let n = d.boxes.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut seen: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
        let mut k = 0;
        while k + 1 < n {
            if d.moves_up(k) {
                d.exchange(k, Side::Left);
                order.swap(k, k + 1);
                if !seen.insert((order.clone(), d.offsets.clone())) {
                    break;
                }
                k = k.saturating_sub(1);
            } else {
                k += 1;
            }
        }
        d
    }

    /// Equality up to interchangers.
    pub fn nf_equal(&self, other: &Self) -> bool {
        self.normal_form() == other.normal_form()
    }

    /// Replaces every box, keeping offsets; `f` must preserve box types.
    pub fn map_boxes<C: DiagramBox<Ob = B::Ob>>(&self, f: impl Fn(&B) -> C) -> Diagram<C> {
        Diagram {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            boxes: self.boxes.iter().map(f).collect(),
            offsets: self.offsets.clone(),
        }
    }
}

impl<B: DiagramBox> fmt::Display for Diagram<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "Id({})", self.dom);
        }
        for (i, layer) in self.layers().iter().enumerate() {
            if i > 0 {
                f.write_str(" >> ")?;
            }
            if !layer.left.is_empty() {
                write!(f, "Id({}) @ ", layer.left)?;
            }
            f.write_str(&layer.bx.name())?;
            if !layer.right.is_empty() {
                write!(f, " @ Id({})", layer.right)?;
            }
        }
        Ok(())
    }
}

/// A monoidal category that functors can land in.
pub trait Monoidal: Clone + Sized {
    type Ty: Clone + PartialEq + fmt::Debug;

    fn unit() -> Self::Ty;
    fn ty_tensor(a: &Self::Ty, b: &Self::Ty) -> Self::Ty;
    fn dom(&self) -> Self::Ty;
    fn cod(&self) -> Self::Ty;
    fn id(t: &Self::Ty) -> Self;
    fn then(&self, other: &Self) -> Result<Self>;
    fn tensor(&self, other: &Self) -> Result<Self>;

    /// Number of objects in a type.
    fn ty_len(t: &Self::Ty) -> usize;

    /// Splits a type after its first `n` objects.
    fn ty_split(t: &Self::Ty, n: usize) -> (Self::Ty, Self::Ty);

    /// `self >> (id(left) @ f @ id(right))`. Backends may override this
    /// with something cheaper than building the whiskered layer.
    fn then_layer(&self, left: &Self::Ty, f: &Self, right: &Self::Ty) -> Result<Self> {
        let layer = Self::id(left).tensor(f)?.tensor(&Self::id(right))?;
        self.then(&layer)
    }
}

impl<B: DiagramBox> Monoidal for Diagram<B> {
    type Ty = Ty<B::Ob>;

    fn unit() -> Self::Ty {
        Ty::unit()
    }

    fn ty_tensor(a: &Self::Ty, b: &Self::Ty) -> Self::Ty {
        a.tensor(b)
    }

    fn dom(&self) -> Self::Ty {
        self.dom.clone()
    }

    fn cod(&self) -> Self::Ty {
        self.cod.clone()
    }

    fn id(t: &Self::Ty) -> Self {
        Diagram::id(t.clone())
    }

    fn then(&self, other: &Self) -> Result<Self> {
        Diagram::then(self, other)
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Diagram::tensor(self, other))
    }

    fn ty_len(t: &Self::Ty) -> usize {
        t.len()
    }

    fn ty_split(t: &Self::Ty, n: usize) -> (Self::Ty, Self::Ty) {
        (t.slice(0..n), t.slice(n..t.len()))
    }

    fn then_layer(&self, left: &Self::Ty, f: &Self, right: &Self::Ty) -> Result<Self> {
        Diagram::then(self, &f.whisker(left, right))
    }
}

/// Weights form a monoidal category with one object.
impl Monoidal for Weight {
    type Ty = ();

    fn unit() {}

    fn ty_tensor(_: &(), _: &()) {}

    fn dom(&self) {}

    fn cod(&self) {}

    fn ty_len(_: &()) -> usize {
        0
    }

    fn ty_split(_: &(), _: usize) -> ((), ()) {
        ((), ())
    }

    fn id(_: &()) -> Self {
        Weight(1.0)
    }

    fn then(&self, other: &Self) -> Result<Self> {
        Ok(Weight(self.0 * other.0))
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Weight(self.0 * other.0))
    }
}

type ObFn<O, T> = Arc<dyn Fn(&O) -> Result<<T as Monoidal>::Ty> + Send + Sync>;
type ArFn<B, T> = Arc<dyn Fn(&B) -> Result<T> + Send + Sync>;

/// A monoidal functor out of diagrams with boxes `B`, given by its action
/// on single objects and on boxes.
pub struct Functor<B: DiagramBox, T: Monoidal> {
    ob: ObFn<B::Ob, T>,
    ar: ArFn<B, T>,
}

impl<B: DiagramBox, T: Monoidal> Clone for Functor<B, T> {
    fn clone(&self) -> Self {
        Functor {
            ob: self.ob.clone(),
            ar: self.ar.clone(),
        }
    }
}

impl<B, T> Functor<B, T>
where
    B: DiagramBox + Send + Sync + 'static,
    B::Ob: Send + Sync + 'static,
    T: Monoidal + Send + Sync + 'static,
    T::Ty: Send + Sync + 'static,
{
    pub fn new(
        ob: impl Fn(&B::Ob) -> Result<T::Ty> + Send + Sync + 'static,
        ar: impl Fn(&B) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Functor {
            ob: Arc::new(ob),
            ar: Arc::new(ar),
        }
    }

    /// A functor given by finite tables.
    pub fn from_maps(ob: HashMap<B::Ob, T::Ty>, ar: HashMap<B, T>) -> Self {
        Functor::new(
            move |x| {
                ob.get(x)
                    .cloned()
                    .ok_or_else(|| Error::MissingMapping(x.to_string()))
            },
            move |b| {
                ar.get(b)
                    .cloned()
                    .ok_or_else(|| Error::MissingMapping(b.name()))
            },
        )
    }
}

impl<B: DiagramBox, T: Monoidal> Functor<B, T> {
    pub fn ob(&self, x: &B::Ob) -> Result<T::Ty> {
        (self.ob)(x)
    }

    pub fn ty(&self, t: &Ty<B::Ob>) -> Result<T::Ty> {
        t.iter()
            .try_fold(T::unit(), |acc, x| Ok(T::ty_tensor(&acc, &self.ob(x)?)))
    }

    /// The image of a single box, checked against the images of its types.
    pub fn ar(&self, b: &B) -> Result<T> {
        let image = (self.ar)(b)?;
        let (dom, cod) = (self.ty(b.dom())?, self.ty(b.cod())?);
        if image.dom() != dom || image.cod() != cod {
            return Err(Error::ShapeMismatch(format!(
                "image of {} has type {:?} -> {:?}, expected {:?} -> {:?}",
                b.name(),
                image.dom(),
                image.cod(),
                dom,
                cod
            )));
        }
        Ok(image)
    }

    /// Layer-by-layer substitution.
    pub fn apply(&self, d: &Diagram<B>) -> Result<T> {
        let mut result = T::id(&self.ty(d.dom())?);
        for layer in d.layers() {
            let left = self.ty(&layer.left)?;
            let right = self.ty(&layer.right)?;
            result = result.then_layer(&left, &self.ar(&layer.bx)?, &right)?;
        }
        Ok(result)
    }
}

/// A functor between free monoidal categories.
pub type MonFunctor = Functor<MonBox, Diagram<MonBox>>;

/// Diagrams as an operad algebra target: a node's box sits above the
/// tensor of its branches.
impl OperadTarget for Diagram<MonBox> {
    type Ob = Ty;

    fn identity(ob: &Ty) -> Result<Self> {
        Ok(Diagram::id(ob.clone()))
    }

    fn compose(&self, args: &[Self]) -> Result<Self> {
        let below = args
            .iter()
            .fold(Diagram::id(Ty::unit()), |acc, a| acc.tensor(a));
        self.then(&below)
    }
}

/// The diagram of a tree. Covariant: a node `x -> y1 .. yk` becomes a box
/// `x -> y1 @ .. @ yk` placed above its branches. Contravariant: the box
/// is `y1 @ .. @ yk -> x` and sits below its branches.
pub fn tree_to_diagram(t: &Tree, contravariant: bool) -> Diagram<MonBox> {
    match t {
        Tree::Id(x) => Diagram::id(Ty::new(vec![x.clone()])),
        Tree::Node { root, branches } => {
            let x = Ty::new(vec![root.dom.clone()]);
            let ys = Ty::new(root.cod.clone());
            let bx = if contravariant {
                MonBox::new(root.name.clone(), ys, x)
            } else {
                MonBox::new(root.name.clone(), x, ys)
            };
            let node = Diagram::from_box(bx);
            if branches.is_empty() {
                return node;
            }
            let below = branches
                .iter()
                .map(|b| tree_to_diagram(b, contravariant))
                .fold(Diagram::id(Ty::unit()), |acc, d| acc.tensor(&d));
            if contravariant {
                below.then(&node).expect("branch codomains match the node")
            } else {
                node.then(&below)
                    .expect("node codomain matches the branches")
            }
        }
    }
}
