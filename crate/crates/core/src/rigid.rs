//! Free rigid categories: objects with winding numbers, cups and caps,
//! transposition of wires and the snake-removing normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::monoidal::{Diagram, DiagramBox, Functor, MonBox, Monoidal, Side, Ty};

/// A basic type with a winding number: `z > 0` counts right adjoints and
/// `z < 0` left adjoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RigidOb {
    pub name: String,
    pub z: i32,
}

impl RigidOb {
    pub fn new(name: impl Into<String>) -> Self {
        RigidOb {
            name: name.into(),
            z: 0,
        }
    }

    pub fn with_z(name: impl Into<String>, z: i32) -> Self {
        RigidOb {
            name: name.into(),
            z,
        }
    }

    pub fn l(&self) -> Self {
        RigidOb::with_z(self.name.clone(), self.z - 1)
    }

    pub fn r(&self) -> Self {
        RigidOb::with_z(self.name.clone(), self.z + 1)
    }

    /// Reads `n`, `n.r`, `n.l.l` and so on.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split('.');
        let name = parts.next().filter(|n| !n.is_empty())?;
        let mut z = 0;
        for p in parts {
            match p {
                "l" => z -= 1,
                "r" => z += 1,
                _ => return None,
            }
        }
        Some(RigidOb::with_z(name, z))
    }
}

impl fmt::Display for RigidOb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        let suffix = if self.z > 0 { ".r" } else { ".l" };
        for _ in 0..self.z.unsigned_abs() {
            f.write_str(suffix)?;
        }
        Ok(())
    }
}

/// Pregroup types.
pub type RigidTy = Ty<RigidOb>;

/// Left and right adjoints of types: reverse the list and shift windings.
pub trait Adjoint {
    fn l(&self) -> Self;
    fn r(&self) -> Self;
}

impl Adjoint for RigidTy {
    fn l(&self) -> Self {
        self.iter().rev().map(RigidOb::l).collect()
    }

    fn r(&self) -> Self {
        self.iter().rev().map(RigidOb::r).collect()
    }
}

/// Builds a type of winding-zero objects from names.
pub fn rty(names: &[&str]) -> RigidTy {
    names.iter().map(|n| RigidOb::new(*n)).collect()
}

/// Parses a whitespace-separated list such as `n.r s n.l`.
pub fn parse_rigid_ty(s: &str) -> Option<RigidTy> {
    s.split_whitespace().map(RigidOb::parse).collect()
}

/// The kinds of box a rigid diagram may contain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RKind {
    Gen(String),
    Cup,
    Cap,
    Spider,
    Swap,
}

/// A box of a rigid diagram: a generator or a structural box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RBox {
    kind: RKind,
    dom: RigidTy,
    cod: RigidTy,
}

impl RBox {
    pub fn gen(name: impl Into<String>, dom: RigidTy, cod: RigidTy) -> Self {
        RBox {
            kind: RKind::Gen(name.into()),
            dom,
            cod,
        }
    }

    /// `a @ b -> unit`, defined when `b == a.r`.
    pub fn cup(a: &RigidOb, b: &RigidOb) -> Result<Self> {
        if *b != a.r() {
            return Err(Error::AdjointMismatch {
                left: a.to_string(),
                right: b.to_string(),
            });
        }
        Ok(RBox {
            kind: RKind::Cup,
            dom: Ty::new(vec![a.clone(), b.clone()]),
            cod: Ty::unit(),
        })
    }

    /// `unit -> a @ b`, defined when `b == a.l`.
    pub fn cap(a: &RigidOb, b: &RigidOb) -> Result<Self> {
        if *b != a.l() {
            return Err(Error::AdjointMismatch {
                left: a.to_string(),
                right: b.to_string(),
            });
        }
        Ok(RBox {
            kind: RKind::Cap,
            dom: Ty::unit(),
            cod: Ty::new(vec![a.clone(), b.clone()]),
        })
    }

    /// A spider on one object with `n_in` inputs and `n_out` outputs.
    pub fn spider(n_in: usize, n_out: usize, x: &RigidOb) -> Self {
        RBox {
            kind: RKind::Spider,
            dom: Ty::new(vec![x.clone(); n_in]),
            cod: Ty::new(vec![x.clone(); n_out]),
        }
    }

    /// The symmetry `a @ b -> b @ a` on two objects.
    pub fn swap(a: &RigidOb, b: &RigidOb) -> Self {
        RBox {
            kind: RKind::Swap,
            dom: Ty::new(vec![a.clone(), b.clone()]),
            cod: Ty::new(vec![b.clone(), a.clone()]),
        }
    }

    /// Rebuilds a box from its kind and types, checking the structural
    /// shapes.
    pub fn from_parts(kind: RKind, dom: RigidTy, cod: RigidTy) -> Result<Self> {
        let bad = |what: &str| Error::IllTyped(format!("malformed {what} box: {dom} -> {cod}"));
        match &kind {
            RKind::Gen(_) => {}
            RKind::Cup => {
                if !(dom.len() == 2 && cod.is_empty() && dom[1] == dom[0].r()) {
                    return Err(bad("cup"));
                }
            }
            RKind::Cap => {
                if !(cod.len() == 2 && dom.is_empty() && cod[1] == cod[0].l()) {
                    return Err(bad("cap"));
                }
            }
            RKind::Spider => {
                let mut all = dom.iter().chain(cod.iter());
                if let Some(first) = all.next() {
                    if !all.all(|x| x == first) {
                        return Err(bad("spider"));
                    }
                }
            }
            RKind::Swap => {
                if !(dom.len() == 2 && cod.len() == 2 && dom[0] == cod[1] && dom[1] == cod[0]) {
                    return Err(bad("swap"));
                }
            }
        }
        Ok(RBox { kind, dom, cod })
    }

    pub fn kind(&self) -> &RKind {
        &self.kind
    }

    pub fn is_cup(&self) -> bool {
        self.kind == RKind::Cup
    }

    pub fn is_cap(&self) -> bool {
        self.kind == RKind::Cap
    }

    pub fn diagram(&self) -> RDiagram {
        Diagram::from_box(self.clone())
    }
}

impl From<MonBox<RigidOb>> for RBox {
    fn from(b: MonBox<RigidOb>) -> Self {
        RBox::gen(b.name, b.dom, b.cod)
    }
}

impl DiagramBox for RBox {
    type Ob = RigidOb;

    fn dom(&self) -> &RigidTy {
        &self.dom
    }

    fn cod(&self) -> &RigidTy {
        &self.cod
    }

    fn name(&self) -> String {
        match &self.kind {
            RKind::Gen(name) => name.clone(),
            RKind::Cup => "Cup".into(),
            RKind::Cap => "Cap".into(),
            RKind::Spider => "Spider".into(),
            RKind::Swap => "Swap".into(),
        }
    }

    fn sort_key(&self) -> String {
        format!("{:?}:{}:{}", self.kind, self.dom, self.cod)
    }
}

/// Diagrams of the free rigid category.
pub type RDiagram = Diagram<RBox>;

/// A monoidal category with adjoints, cups and caps. Swaps and spiders are
/// optional extras for backends that have them.
pub trait Rigid: Monoidal {
    fn ty_l(t: &Self::Ty) -> Self::Ty;
    fn ty_r(t: &Self::Ty) -> Self::Ty;
    /// `left @ right -> unit`, defined when `right` is the right adjoint
    /// of `left`.
    fn cups(left: &Self::Ty, right: &Self::Ty) -> Result<Self>;
    /// `unit -> left @ right`, defined when `right` is the left adjoint
    /// of `left`.
    fn caps(left: &Self::Ty, right: &Self::Ty) -> Result<Self>;

    fn swap(_left: &Self::Ty, _right: &Self::Ty) -> Result<Self> {
        Err(Error::BackendUnsupported("swap".into()))
    }

    fn spider(_n_in: usize, _n_out: usize, _t: &Self::Ty) -> Result<Self> {
        Err(Error::BackendUnsupported("spider".into()))
    }
}

impl Rigid for RDiagram {
    fn ty_l(t: &RigidTy) -> RigidTy {
        t.l()
    }

    fn ty_r(t: &RigidTy) -> RigidTy {
        t.r()
    }

    fn cups(left: &RigidTy, right: &RigidTy) -> Result<Self> {
        if *right != left.r() {
            return Err(Error::AdjointMismatch {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        let k = left.len();
        let mut boxes = Vec::with_capacity(k);
        let mut offsets = Vec::with_capacity(k);
        for i in 0..k {
            boxes.push(RBox::cup(&left[k - 1 - i], &right[i])?);
            offsets.push(k - 1 - i);
        }
        Ok(Diagram::new_unchecked(
            left.tensor(right),
            Ty::unit(),
            boxes,
            offsets,
        ))
    }

    fn caps(left: &RigidTy, right: &RigidTy) -> Result<Self> {
        if *right != left.l() {
            return Err(Error::AdjointMismatch {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        let k = left.len();
        let mut boxes = Vec::with_capacity(k);
        let mut offsets = Vec::with_capacity(k);
        for i in 0..k {
            boxes.push(RBox::cap(&left[i], &right[k - 1 - i])?);
            offsets.push(i);
        }
        Ok(Diagram::new_unchecked(
            Ty::unit(),
            left.tensor(right),
            boxes,
            offsets,
        ))
    }

    fn swap(left: &RigidTy, right: &RigidTy) -> Result<Self> {
        let k = left.len();
        let mut boxes = Vec::new();
        let mut offsets = Vec::new();
        for (r, y) in right.iter().enumerate() {
            for p in (r..r + k).rev() {
                boxes.push(RBox::swap(&left[p - r], y));
                offsets.push(p);
            }
        }
        Ok(Diagram::new_unchecked(
            left.tensor(right),
            right.tensor(left),
            boxes,
            offsets,
        ))
    }

    fn spider(n_in: usize, n_out: usize, t: &RigidTy) -> Result<Self> {
        let k = t.len();
        let repeat = |n: usize| (0..n).fold(Ty::unit(), |acc: RigidTy, _| acc.tensor(t));
        // Group the legs by object, apply one spider per object, ungroup.
        let grouped = |n: usize| -> Vec<usize> {
            (0..k)
                .flat_map(|j| (0..n).map(move |leg| leg * k + j))
                .collect()
        };
        let dom = repeat(n_in);
        let gather = permutation(&dom, &grouped(n_in))?;
        let mut middle = Diagram::id(Ty::unit());
        for x in t.iter() {
            middle = middle.tensor(&RBox::spider(n_in, n_out, x).diagram());
        }
        let cod = repeat(n_out);
        let grouped_out = grouped(n_out);
        let mut inverse = vec![0; grouped_out.len()];
        for (i, &p) in grouped_out.iter().enumerate() {
            inverse[p] = i;
        }
        let grouped_cod: RigidTy = grouped_out.iter().map(|&p| cod[p].clone()).collect();
        let scatter = permutation(&grouped_cod, &inverse)?;
        gather.then(&middle)?.then(&scatter)
    }
}

/// The permutation diagram whose output `i` is input `perm[i]`, built from
/// adjacent swaps by bubble sort.
pub fn permutation(dom: &RigidTy, perm: &[usize]) -> Result<RDiagram> {
    let n = dom.len();
    let mut check = perm.to_vec();
    check.sort_unstable();
    if perm.len() != n || check.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::BadPort(format!(
            "{perm:?} is not a permutation of {n} wires"
        )));
    }
    // rank[w] is the target position of the wire currently at position w.
    let mut rank = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        rank[p] = i;
    }
    let mut current = dom.clone().into_objects();
    let mut boxes = Vec::new();
    let mut offsets = Vec::new();
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for i in 0..n.saturating_sub(1) {
            if rank[i] > rank[i + 1] {
                boxes.push(RBox::swap(&current[i], &current[i + 1]));
                offsets.push(i);
                current.swap(i, i + 1);
                rank.swap(i, i + 1);
                sorted = false;
            }
        }
    }
    Ok(Diagram::new_unchecked(
        dom.clone(),
        Ty::new(current),
        boxes,
        offsets,
    ))
}

/// Bends the first (`left`) or last `n` input wires up into outputs.
pub fn curry<T: Rigid>(d: &T, n: usize, left: bool) -> Result<T> {
    let dom = d.dom();
    let len = T::ty_len(&dom);
    if n > len {
        return Err(Error::TooManyWires {
            requested: n,
            available: len,
        });
    }
    if n == 0 {
        return Ok(d.clone());
    }
    if left {
        let (wires, rest) = T::ty_split(&dom, n);
        let wr = T::ty_r(&wires);
        let top = T::caps(&wr, &wires)?.tensor(&T::id(&rest))?;
        top.then(&T::id(&wr).tensor(d)?)
    } else {
        let (rest, wires) = T::ty_split(&dom, len - n);
        let wl = T::ty_l(&wires);
        let top = T::id(&rest).tensor(&T::caps(&wires, &wl)?)?;
        top.then(&d.tensor(&T::id(&wl))?)
    }
}

/// Bends the first (`left`) or last `n` output wires down into inputs.
pub fn uncurry<T: Rigid>(d: &T, n: usize, left: bool) -> Result<T> {
    let cod = d.cod();
    let len = T::ty_len(&cod);
    if n > len {
        return Err(Error::TooManyWires {
            requested: n,
            available: len,
        });
    }
    if n == 0 {
        return Ok(d.clone());
    }
    if left {
        let (wires, rest) = T::ty_split(&cod, n);
        let wl = T::ty_l(&wires);
        T::id(&wl)
            .tensor(d)?
            .then(&T::cups(&wl, &wires)?.tensor(&T::id(&rest))?)
    } else {
        let (rest, wires) = T::ty_split(&cod, len - n);
        let wr = T::ty_r(&wires);
        d.tensor(&T::id(&wr))?
            .then(&T::id(&rest).tensor(&T::cups(&wires, &wr)?)?)
    }
}

/// Where a wire leaving a box ends up.
enum WireEnd {
    /// Consumed by box `index` at input `port`.
    Box {
        index: usize,
        port: usize,
    },
    Boundary,
}

/// Follows the wire at position `pos` just below box `from` down the
/// diagram. Boxes passed on the way are reported through `passed` as
/// `(index, true)` when they lie left of the wire.
fn follow(d: &RDiagram, from: usize, mut pos: usize, passed: &mut Vec<(usize, bool)>) -> WireEnd {
    for k in from + 1..d.len() {
        let b = &d.boxes()[k];
        let off = d.offsets()[k];
        let m = b.dom().len();
        if off <= pos && pos < off + m {
            return WireEnd::Box {
                index: k,
                port: pos - off,
            };
        }
        if off + m <= pos {
            passed.push((k, true));
            pos = pos + b.cod().len() - m;
        } else {
            passed.push((k, false));
        }
    }
    WireEnd::Boundary
}

/// Moves box `k` up to index `target`, returning false if some exchange
/// is impossible.
fn move_up(d: &mut RDiagram, mut k: usize, target: usize, side: Side) -> bool {
    while k > target {
        match d
            .interchange_with(k - 1, side)
            .or_else(|_| d.interchange_with(k - 1, flip(side)))
        {
            Ok(next) => *d = next,
            Err(_) => return false,
        }
        k -= 1;
    }
    true
}

fn move_down(d: &mut RDiagram, mut k: usize, target: usize, side: Side) -> bool {
    while k < target {
        match d
            .interchange_with(k, side)
            .or_else(|_| d.interchange_with(k, flip(side)))
        {
            Ok(next) => *d = next,
            Err(_) => return false,
        }
        k += 1;
    }
    true
}

fn flip(side: Side) -> Side {
    match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

/// Tries to yank the snake starting at cap `i` through its output
/// `out` (0 for the left leg, 1 for the right leg).
fn yank(d: &RDiagram, i: usize, out: usize) -> Option<RDiagram> {
    let mut passed = Vec::new();
    let end = follow(d, i, d.offsets()[i] + out, &mut passed);
    let WireEnd::Box { index: cup, port } = end else {
        return None;
    };
    // A snake joins the left leg of a cap to the right leg of a cup, or
    // the right leg of a cap to the left leg of a cup.
    if !d.boxes()[cup].is_cup() || port == out {
        return None;
    }
    let mut work = d.clone();
    let (mut cap_idx, mut cup_idx) = (i, cup);
    // Boxes on the side of the bent leg go above the cap, the others go
    // below the cup.
    let goes_up = |left_of_wire: bool| left_of_wire == (out == 0);
    let up: Vec<usize> = passed
        .iter()
        .filter(|p| goes_up(p.1))
        .map(|p| p.0)
        .collect();
    let down: Vec<usize> = passed
        .iter()
        .filter(|p| !goes_up(p.1))
        .map(|p| p.0)
        .collect();
    let side_up = if out == 0 { Side::Left } else { Side::Right };
    // Indices shift as boxes move; track them through the moves.
    let mut positions: Vec<usize> = (0..work.len()).collect();
    for &k in &up {
        let at = positions.iter().position(|&p| p == k)?;
        let target = positions.iter().position(|&p| p == i)?;
        if !move_up(&mut work, at, target, side_up) {
            return None;
        }
        let moved = positions.remove(at);
        positions.insert(target, moved);
    }
    for &k in down.iter().rev() {
        let at = positions.iter().position(|&p| p == k)?;
        let target = positions.iter().position(|&p| p == cup)?;
        if !move_down(&mut work, at, target, side_up) {
            return None;
        }
        let moved = positions.remove(at);
        positions.insert(target, moved);
    }
    cap_idx = positions.iter().position(|&p| p == cap_idx)?;
    cup_idx = positions.iter().position(|&p| p == cup_idx)?;
    if cup_idx != cap_idx + 1 {
        return None;
    }
    let cap_off = work.offsets()[cap_idx];
    let cup_off = work.offsets()[cup_idx];
    let joined = if out == 0 {
        cup_off + 1 == cap_off
    } else {
        cup_off == cap_off + 1
    };
    if !joined {
        return None;
    }
    let mut boxes = work.boxes().to_vec();
    let mut offsets = work.offsets().to_vec();
    boxes.drain(cap_idx..=cup_idx);
    offsets.drain(cap_idx..=cup_idx);
    Some(Diagram::new_unchecked(
        work.dom().clone(),
        work.cod().clone(),
        boxes,
        offsets,
    ))
}

/// Removes every snake, then applies the interchanger normal form.
pub fn normal_form(d: &RDiagram) -> RDiagram {
    let mut current = d.clone();
    'outer: loop {
        for i in 0..current.len() {
            if !current.boxes()[i].is_cap() {
                continue;
            }
            for out in 0..2 {
                if let Some(next) = yank(&current, i, out) {
                    current = next;
                    continue 'outer;
                }
            }
        }
        break;
    }
    current.normal_form()
}

/// Reads a diagram of the free monoidal category as a rigid diagram whose
/// objects all have winding number zero.
pub fn from_monoidal(d: &Diagram<MonBox>) -> RDiagram {
    let ty = |t: &Ty| -> RigidTy { t.iter().map(|x| RigidOb::new(x.name())).collect() };
    let boxes = d
        .boxes()
        .iter()
        .map(|b| RBox::gen(b.name.clone(), ty(&b.dom), ty(&b.cod)))
        .collect();
    Diagram::new_unchecked(ty(d.dom()), ty(d.cod()), boxes, d.offsets().to_vec())
}

/// A functor out of the free rigid category: generators go through `ar`,
/// structural boxes go to the structure of the target.
pub fn functor<T>(
    ob: impl Fn(&str) -> Result<T::Ty> + Send + Sync + 'static,
    ar: impl Fn(&RBox) -> Result<T> + Send + Sync + 'static,
) -> Functor<RBox, T>
where
    T: Rigid + Send + Sync + 'static,
    T::Ty: Send + Sync + 'static,
{
    let ob = std::sync::Arc::new(ob);
    let ob_inner = ob.clone();
    let map_ob = move |x: &RigidOb| -> Result<T::Ty> {
        let mut t = ob_inner(&x.name)?;
        for _ in 0..x.z.unsigned_abs() {
            t = if x.z > 0 { T::ty_r(&t) } else { T::ty_l(&t) };
        }
        Ok(t)
    };
    let map_ob2 = map_ob.clone();
    Functor::new(map_ob, move |b: &RBox| {
        let ty = |t: &RigidTy| -> Result<T::Ty> {
            t.iter()
                .try_fold(T::unit(), |acc, x| Ok(T::ty_tensor(&acc, &map_ob2(x)?)))
        };
        match b.kind() {
            RKind::Gen(_) => ar(b),
            RKind::Cup => T::cups(&map_ob2(&b.dom()[0])?, &map_ob2(&b.dom()[1])?),
            RKind::Cap => T::caps(&map_ob2(&b.cod()[0])?, &map_ob2(&b.cod()[1])?),
            RKind::Swap => T::swap(&map_ob2(&b.dom()[0])?, &map_ob2(&b.dom()[1])?),
            RKind::Spider => {
                let x = b.dom().iter().chain(b.cod().iter()).next();
                let t = match x {
                    Some(x) => map_ob2(x)?,
                    None => ty(&Ty::unit())?,
                };
                T::spider(b.dom().len(), b.cod().len(), &t)
            }
        }
    })
}
