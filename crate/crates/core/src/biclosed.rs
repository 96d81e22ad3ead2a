//! Free biclosed categories: types built with `<<` (over) and `>>` (under),
//! diagrams recording every use of currying, and the rules of categorial
//! grammars built from identities.
//!
//! As in a plain syntax tree, `UnCurry(Curry(f))` is not rewritten to `f`;
//! equality of biclosed diagrams is structural.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monoidal::{Diagram, DiagramBox, Monoidal, Ty};
use crate::rigid::{self, Adjoint, RDiagram};
use crate::text;

/// A single biclosed object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BOb {
    Basic(String),
    /// `left << right`: a `left` still missing a `right` on its right.
    Over(BTy, BTy),
    /// `left >> right`: a `right` still missing a `left` on its left.
    Under(BTy, BTy),
}

pub type BTy = Ty<BOb>;

/// The one-object type `name`.
pub fn basic(name: &str) -> BTy {
    Ty::new(vec![BOb::Basic(name.to_string())])
}

/// `a << b`. Over the unit this is just `a`.
pub fn over(a: &BTy, b: &BTy) -> BTy {
    if b.is_empty() {
        return a.clone();
    }
    Ty::new(vec![BOb::Over(a.clone(), b.clone())])
}

/// `a >> b`. Under the unit this is just `b`.
pub fn under(a: &BTy, b: &BTy) -> BTy {
    if a.is_empty() {
        return b.clone();
    }
    Ty::new(vec![BOb::Under(a.clone(), b.clone())])
}

/// Parenthesises everything except basic objects.
fn operand(t: &BTy) -> String {
    match t.objects() {
        [BOb::Basic(name)] => name.clone(),
        _ => format!("({})", show(t)),
    }
}

/// Prints a type so that `parse_bty` reads it back: `()` for the unit and
/// parentheses around closed objects inside a tensor.
pub fn show(t: &BTy) -> String {
    match t.objects() {
        [] => "()".to_string(),
        [x] => x.to_string(),
        xs => xs
            .iter()
            .map(|x| match x {
                BOb::Basic(name) => name.clone(),
                _ => format!("({x})"),
            })
            .collect::<Vec<_>>()
            .join(" @ "),
    }
}

impl fmt::Display for BOb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BOb::Basic(name) => f.write_str(name),
            BOb::Over(a, b) => write!(f, "{} << {}", operand(a), operand(b)),
            BOb::Under(a, b) => write!(f, "{} >> {}", operand(a), operand(b)),
        }
    }
}

/// A box of a biclosed diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BBox {
    Gen {
        name: String,
        dom: BTy,
        cod: BTy,
    },
    /// Bends the first (`left`) or last `n` inputs of `inner` into its output.
    Curry {
        inner: Box<BDiagram>,
        n: usize,
        left: bool,
        dom: BTy,
        cod: BTy,
    },
    /// Turns an output `a << b` into an extra input `b` on the right, or an
    /// output `a >> b` into an extra input `a` on the left.
    UnCurry {
        inner: Box<BDiagram>,
        dom: BTy,
        cod: BTy,
    },
}

pub type BDiagram = Diagram<BBox>;

impl BBox {
    pub fn gen(name: impl Into<String>, dom: BTy, cod: BTy) -> Self {
        BBox::Gen {
            name: name.into(),
            dom,
            cod,
        }
    }

    pub fn diagram(&self) -> BDiagram {
        Diagram::from_box(self.clone())
    }
}

impl DiagramBox for BBox {
    type Ob = BOb;

    fn dom(&self) -> &BTy {
        match self {
            BBox::Gen { dom, .. } | BBox::Curry { dom, .. } | BBox::UnCurry { dom, .. } => dom,
        }
    }

    fn cod(&self) -> &BTy {
        match self {
            BBox::Gen { cod, .. } | BBox::Curry { cod, .. } | BBox::UnCurry { cod, .. } => cod,
        }
    }

    fn name(&self) -> String {
        match self {
            BBox::Gen { name, .. } => name.clone(),
            BBox::Curry { inner, .. } => format!("Curry({inner})"),
            BBox::UnCurry { inner, .. } => format!("UnCurry({inner})"),
        }
    }
}

/// Bends the first (`left`) or last `n` input wires of `d` into its output.
pub fn curry(d: &BDiagram, n: usize, left: bool) -> Result<BDiagram> {
    let dom = d.dom();
    if n > dom.len() {
        return Err(Error::TooManyWires {
            requested: n,
            available: dom.len(),
        });
    }
    if n == 0 {
        return Ok(d.clone());
    }
    let (new_dom, cod) = if left {
        (dom.slice(n..dom.len()), under(&dom.slice(0..n), d.cod()))
    } else {
        let k = dom.len() - n;
        (dom.slice(0..k), over(d.cod(), &dom.slice(k..dom.len())))
    };
    Ok(BBox::Curry {
        inner: Box::new(d.clone()),
        n,
        left,
        dom: new_dom,
        cod,
    }
    .diagram())
}

/// Undoes currying at the type level. A diagram whose output is not a
/// single over or under object is returned unchanged.
pub fn uncurry(d: &BDiagram) -> BDiagram {
    let (dom, cod) = match d.cod().objects() {
        [BOb::Over(a, b)] => (d.dom().tensor(b), a.clone()),
        [BOb::Under(a, b)] => (a.tensor(d.dom()), b.clone()),
        _ => return d.clone(),
    };
    BBox::UnCurry {
        inner: Box::new(d.clone()),
        dom,
        cod,
    }
    .diagram()
}

/// A monoidal category with both internal homs, enough structure to be
/// the target of a functor out of a free biclosed category.
pub trait Closed: Monoidal {
    fn ty_over(a: &Self::Ty, b: &Self::Ty) -> Self::Ty;
    fn ty_under(a: &Self::Ty, b: &Self::Ty) -> Self::Ty;
    /// Bends the first (`left`) or last `n` input wires into the output.
    fn curry(&self, n: usize, left: bool) -> Result<Self>;
    /// The inverse of `curry`, where `n` counts the wires of the argument
    /// being fed back in.
    fn uncurry(&self, n: usize, left: bool) -> Result<Self>;
}

impl Closed for BDiagram {
    fn ty_over(a: &BTy, b: &BTy) -> BTy {
        over(a, b)
    }

    fn ty_under(a: &BTy, b: &BTy) -> BTy {
        under(a, b)
    }

    fn curry(&self, n: usize, left: bool) -> Result<Self> {
        curry(self, n, left)
    }

    fn uncurry(&self, _n: usize, _left: bool) -> Result<Self> {
        Ok(uncurry(self))
    }
}

/// Rigid diagrams are biclosed with `a << b = a @ b.l` and
/// `a >> b = a.r @ b`; currying bends wires with caps and cups.
impl Closed for RDiagram {
    fn ty_over(a: &Self::Ty, b: &Self::Ty) -> Self::Ty {
        a.tensor(&b.l())
    }

    fn ty_under(a: &Self::Ty, b: &Self::Ty) -> Self::Ty {
        a.r().tensor(b)
    }

    fn curry(&self, n: usize, left: bool) -> Result<Self> {
        rigid::curry(self, n, left)
    }

    fn uncurry(&self, n: usize, left: bool) -> Result<Self> {
        rigid::uncurry(self, n, left)
    }
}

type ObMap<T> = Arc<dyn Fn(&str) -> Result<<T as Monoidal>::Ty> + Send + Sync>;
type ArMap<T> = Arc<dyn Fn(&BBox) -> Result<T> + Send + Sync>;

/// A functor out of a free biclosed category. Generators go through `ar`;
/// currying boxes go to the currying of the target.
pub struct ClosedFunctor<T: Closed> {
    ob: ObMap<T>,
    ar: ArMap<T>,
}

impl<T: Closed> Clone for ClosedFunctor<T> {
    fn clone(&self) -> Self {
        ClosedFunctor {
            ob: self.ob.clone(),
            ar: self.ar.clone(),
        }
    }
}

impl<T: Closed> ClosedFunctor<T> {
    pub fn new(
        ob: impl Fn(&str) -> Result<T::Ty> + Send + Sync + 'static,
        ar: impl Fn(&BBox) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        ClosedFunctor {
            ob: Arc::new(ob),
            ar: Arc::new(ar),
        }
    }

    pub fn ob(&self, x: &BOb) -> Result<T::Ty> {
        match x {
            BOb::Basic(name) => (self.ob)(name),
            BOb::Over(a, b) => Ok(T::ty_over(&self.ty(a)?, &self.ty(b)?)),
            BOb::Under(a, b) => Ok(T::ty_under(&self.ty(a)?, &self.ty(b)?)),
        }
    }

    pub fn ty(&self, t: &BTy) -> Result<T::Ty> {
        t.iter()
            .try_fold(T::unit(), |acc, x| Ok(T::ty_tensor(&acc, &self.ob(x)?)))
    }

    pub fn ar(&self, b: &BBox) -> Result<T> {
        match b {
            BBox::Gen { name, dom, cod } => {
                let image = (self.ar)(b)?;
                let (dom, cod) = (self.ty(dom)?, self.ty(cod)?);
                if image.dom() != dom || image.cod() != cod {
                    return Err(Error::ShapeMismatch(format!(
                        "image of {name} has type {:?} -> {:?}, expected {dom:?} -> {cod:?}",
                        image.dom(),
                        image.cod()
                    )));
                }
                Ok(image)
            }
            BBox::Curry { inner, n, left, .. } => {
                let dom = inner.dom();
                let bent = if *left {
                    dom.slice(0..*n)
                } else {
                    dom.slice(dom.len() - n..dom.len())
                };
                self.apply(inner)?.curry(T::ty_len(&self.ty(&bent)?), *left)
            }
            BBox::UnCurry { inner, .. } => {
                let image = self.apply(inner)?;
                match inner.cod().objects() {
                    [BOb::Over(_, b)] => image.uncurry(T::ty_len(&self.ty(b)?), false),
                    [BOb::Under(a, _)] => image.uncurry(T::ty_len(&self.ty(a)?), true),
                    _ => Ok(image),
                }
            }
        }
    }

    pub fn apply(&self, d: &BDiagram) -> Result<T> {
        let mut result = T::id(&self.ty(d.dom())?);
        for layer in d.layers() {
            let left = self.ty(&layer.left)?;
            let right = self.ty(&layer.right)?;
            result = result.then_layer(&left, &self.ar(&layer.bx)?, &right)?;
        }
        Ok(result)
    }
}

/// The rules of categorial grammars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `a @ (a >> b) -> b`
    ForwardApplication,
    /// `(b << a) @ a -> b`
    BackwardApplication,
    /// `(x >> y) @ (y >> z) -> x >> z`
    ForwardComposition,
    /// `(x << y) @ (y << z) -> x << z`
    BackwardComposition,
    /// `x -> y << (x >> y)`
    ForwardTypeRaising,
    /// `x -> (y << x) >> y`
    BackwardTypeRaising,
    /// `(y << x) @ (y >> z) -> x >> z`
    ForwardCrossed,
    /// `(x << y) @ (z >> y) -> x << z`
    BackwardCrossed,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::ForwardApplication,
        Rule::BackwardApplication,
        Rule::ForwardComposition,
        Rule::BackwardComposition,
        Rule::ForwardTypeRaising,
        Rule::BackwardTypeRaising,
        Rule::ForwardCrossed,
        Rule::BackwardCrossed,
    ];

    /// How many types the rule is parametrised by.
    pub fn arity(self) -> usize {
        match self {
            Rule::ForwardApplication
            | Rule::BackwardApplication
            | Rule::ForwardTypeRaising
            | Rule::BackwardTypeRaising => 2,
            _ => 3,
        }
    }

    /// Builds the rule from identities, curry and uncurry.
    pub fn build(self, types: &[BTy]) -> Result<BDiagram> {
        if types.len() != self.arity() {
            return Err(Error::BadRuleTypes(format!(
                "{self:?} takes {} types, got {}",
                self.arity(),
                types.len()
            )));
        }
        let (x, y) = (&types[0], &types[1]);
        Ok(match self {
            Rule::ForwardApplication => fa(x, y),
            Rule::BackwardApplication => ba(x, y),
            Rule::ForwardComposition => fc(x, y, &types[2]),
            Rule::BackwardComposition => bc(x, y, &types[2]),
            Rule::ForwardTypeRaising => tyr_forward(x, y),
            Rule::BackwardTypeRaising => tyr_backward(x, y),
            Rule::ForwardCrossed => fx(x, y, &types[2]),
            Rule::BackwardCrossed => bx(x, y, &types[2]),
        })
    }
}

fn then(a: &BDiagram, b: &BDiagram) -> BDiagram {
    a.then(b).expect("rule proofs are well typed")
}

fn id(t: &BTy) -> BDiagram {
    Diagram::id(t.clone())
}

fn curried(d: &BDiagram, n: usize, left: bool) -> BDiagram {
    curry(d, n, left).expect("rule proofs bend existing wires")
}

/// `a @ (a >> b) -> b`
pub fn fa(a: &BTy, b: &BTy) -> BDiagram {
    if a.is_empty() {
        return id(b);
    }
    uncurry(&id(&under(a, b)))
}

/// `(b << a) @ a -> b`
pub fn ba(a: &BTy, b: &BTy) -> BDiagram {
    if a.is_empty() {
        return id(b);
    }
    uncurry(&id(&over(b, a)))
}

/// `(x >> y) @ (y >> z) -> x >> z`
pub fn fc(x: &BTy, y: &BTy, z: &BTy) -> BDiagram {
    let proof = then(&fa(x, y).tensor(&id(&under(y, z))), &fa(y, z));
    curried(&proof, x.len(), true)
}

/// `(x << y) @ (y << z) -> x << z`
pub fn bc(x: &BTy, y: &BTy, z: &BTy) -> BDiagram {
    let proof = then(&id(&over(x, y)).tensor(&ba(z, y)), &ba(y, x));
    curried(&proof, z.len(), false)
}

/// `x -> y << (x >> y)`
pub fn tyr_forward(x: &BTy, y: &BTy) -> BDiagram {
    let proof = uncurry(&id(&under(x, y)));
    let n = proof.dom().len() - x.len();
    curried(&proof, n, false)
}

/// `x -> (y << x) >> y`
pub fn tyr_backward(x: &BTy, y: &BTy) -> BDiagram {
    let proof = uncurry(&id(&over(y, x)));
    let n = proof.dom().len() - x.len();
    curried(&proof, n, true)
}

/// The generator `Swap: a @ b -> b @ a`.
pub fn swap(a: &BTy, b: &BTy) -> BDiagram {
    BBox::gen("Swap", a.tensor(b), b.tensor(a)).diagram()
}

/// `(y << x) @ (y >> z) -> x >> z`
pub fn fx(x: &BTy, y: &BTy, z: &BTy) -> BDiagram {
    let left = then(&swap(x, &over(y, x)), &ba(x, y));
    let proof = then(&left.tensor(&id(&under(y, z))), &fa(y, z));
    curried(&proof, x.len(), true)
}

/// `(x << y) @ (z >> y) -> x << z`
pub fn bx(x: &BTy, y: &BTy, z: &BTy) -> BDiagram {
    let right = then(&swap(&under(z, y), z), &fa(z, y));
    let proof = then(&id(&over(x, y)).tensor(&right), &ba(y, x));
    curried(&proof, z.len(), false)
}

/// Parses a biclosed type such as `(n >> s) << n` or `a @ (b << c)`.
/// `@` binds tighter than `<<` and `>>`, which associate to the left;
/// `()` is the unit.
pub fn parse_bty(s: &str) -> Result<BTy> {
    TyParser { src: s, pos: 0 }
        .parse()
        .map_err(|(offset, message)| Error::Syntax {
            line: 1,
            column: offset + 1,
            message,
        })
}

struct TyParser<'a> {
    src: &'a str,
    pos: usize,
}

type ParseResult<T> = std::result::Result<T, (usize, String)>;

impl TyParser<'_> {
    fn parse(mut self) -> ParseResult<BTy> {
        let t = self.closed()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err((self.pos, "unexpected input".into()));
        }
        Ok(t)
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn closed(&mut self) -> ParseResult<BTy> {
        let mut t = self.product()?;
        loop {
            if self.eat("<<") {
                t = over(&t, &self.product()?);
            } else if self.eat(">>") {
                t = under(&t, &self.product()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> ParseResult<BTy> {
        let mut t = self.atom()?;
        while self.eat("@") {
            t = t.tensor(&self.atom()?);
        }
        Ok(t)
    }

    fn atom(&mut self) -> ParseResult<BTy> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("(") {
            if self.eat(")") {
                return Ok(Ty::unit());
            }
            let t = self.closed()?;
            if !self.eat(")") {
                return Err((self.pos, "expected `)`".into()));
            }
            return Ok(t);
        }
        let len = self.src[start..]
            .find(|c: char| !(c.is_alphanumeric() || "_'.-".contains(c)))
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err((start, "expected a type".into()));
        }
        self.pos += len;
        Ok(basic(&self.src[start..start + len]))
    }
}

/// A categorial lexicon: `word : type` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub entries: Vec<(String, BTy)>,
}

impl Lexicon {
    pub fn from_text(src: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text::lines(src) {
            let colon = line
                .content
                .find(':')
                .ok_or_else(|| line.error(0, "expected `word : type`"))?;
            let word = line.content[..colon].trim();
            if word.is_empty() {
                return Err(line.error(0, "missing word"));
            }
            let ty = parse_bty(&line.content[colon + 1..]).map_err(|e| match e {
                Error::Syntax {
                    column, message, ..
                } => line.error(colon + column, message),
                other => other,
            })?;
            entries.push((word.to_string(), ty));
        }
        Ok(Lexicon { entries })
    }

    /// The word state `word: unit -> type`, for the first matching entry.
    pub fn state(&self, word: &str) -> Option<BDiagram> {
        self.entries
            .iter()
            .find(|(w, _)| w == word)
            .map(|(w, t)| BBox::gen(w.clone(), Ty::unit(), t.clone()).diagram())
    }
}
