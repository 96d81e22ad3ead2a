//! Functions on tuples of values: the cartesian closed backend used for
//! logical and arithmetic models.

use std::fmt;
use std::sync::Arc;

use crate::biclosed::{over, under, BOb, BTy, Closed};
use crate::error::{mismatch, Error, Result};
use crate::monoidal::Monoidal;

type Inside = Arc<dyn Fn(&[Value]) -> Result<Vec<Value>> + Send + Sync>;

/// A function value produced by currying.
#[derive(Clone)]
pub struct Closure {
    arity: usize,
    inside: Inside,
}

impl Closure {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn call(&self, xs: &[Value]) -> Result<Vec<Value>> {
        if xs.len() != self.arity {
            return Err(Error::ArityError {
                expected: self.arity,
                got: xs.len(),
            });
        }
        (self.inside)(xs)
    }
}

/// Closures are equal only when they are the same allocation.
impl PartialEq for Closure {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inside, &other.inside)
    }
}

impl fmt::Debug for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Closure/{}", self.arity)
    }
}

/// The values that flow along the wires.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Bool(bool),
    Str(String),
    Closure(Closure),
}

impl Value {
    pub fn as_int(&self) -> Result<i64> {
        match self {
            Value::Int(n) => Ok(*n),
            other => Err(Error::Value(format!("expected an integer, got {other}"))),
        }
    }

    pub fn as_bool(&self) -> Result<bool> {
        match self {
            Value::Bool(b) => Ok(*b),
            other => Err(Error::Value(format!("expected a boolean, got {other}"))),
        }
    }

    pub fn as_closure(&self) -> Result<&Closure> {
        match self {
            Value::Closure(c) => Ok(c),
            other => Err(Error::Value(format!("expected a closure, got {other}"))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{}", if *b { "True" } else { "False" }),
            Value::Str(s) => write!(f, "{s:?}"),
            Value::Closure(c) => write!(f, "<closure/{}>", c.arity),
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

/// A function from `|dom|`-tuples to `|cod|`-tuples. Types are checked by
/// length only: every object, closed or not, carries one value.
#[derive(Clone)]
pub struct FnMorphism {
    dom: BTy,
    cod: BTy,
    inside: Inside,
}

impl fmt::Debug for FnMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Function({} -> {})", self.dom, self.cod)
    }
}

impl FnMorphism {
    pub fn new(
        dom: BTy,
        cod: BTy,
        inside: impl Fn(&[Value]) -> Result<Vec<Value>> + Send + Sync + 'static,
    ) -> Self {
        FnMorphism {
            dom,
            cod,
            inside: Arc::new(inside),
        }
    }

    /// A constant `unit -> t`.
    pub fn constant(t: BTy, values: Vec<Value>) -> Self {
        FnMorphism::new(BTy::unit(), t, move |_| Ok(values.clone()))
    }

    pub fn dom(&self) -> &BTy {
        &self.dom
    }

    pub fn cod(&self) -> &BTy {
        &self.cod
    }

    /// Applies the function, checking the length of input and output.
    pub fn call(&self, xs: &[Value]) -> Result<Vec<Value>> {
        if xs.len() != self.dom.len() {
            return Err(Error::ArityError {
                expected: self.dom.len(),
                got: xs.len(),
            });
        }
        let out = (self.inside)(xs)?;
        if out.len() != self.cod.len() {
            return Err(Error::ArityError {
                expected: self.cod.len(),
                got: out.len(),
            });
        }
        Ok(out)
    }

    pub fn id(t: &BTy) -> Self {
        FnMorphism::new(t.clone(), t.clone(), |xs| Ok(xs.to_vec()))
    }

    pub fn copy(t: &BTy) -> Self {
        FnMorphism::new(t.clone(), t.tensor(t), |xs| {
            Ok(xs.iter().chain(xs).cloned().collect())
        })
    }

    pub fn delete(t: &BTy) -> Self {
        FnMorphism::new(t.clone(), BTy::unit(), |_| Ok(Vec::new()))
    }

    pub fn swap(a: &BTy, b: &BTy) -> Self {
        let n = a.len();
        FnMorphism::new(a.tensor(b), b.tensor(a), move |xs| {
            Ok(xs[n..].iter().chain(&xs[..n]).cloned().collect())
        })
    }

    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.cod != other.dom {
            return Err(mismatch(&self.cod, &other.dom));
        }
        let (f, g) = (self.clone(), other.clone());
        Ok(FnMorphism::new(
            self.dom.clone(),
            other.cod.clone(),
            move |xs| g.call(&f.call(xs)?),
        ))
    }

    /// Splits the input after `|dom(self)|` values and concatenates the
    /// outputs.
    pub fn tensor(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        let n = self.dom.len();
        FnMorphism::new(
            self.dom.tensor(&other.dom),
            self.cod.tensor(&other.cod),
            move |xs| {
                let mut out = f.call(&xs[..n])?;
                out.extend(g.call(&xs[n..])?);
                Ok(out)
            },
        )
    }

    /// Bends the first (`left`) or last `n` inputs into a closure output.
    pub fn curry(&self, n: usize, left: bool) -> Result<Self> {
        let len = self.dom.len();
        if n > len {
            return Err(Error::TooManyWires {
                requested: n,
                available: len,
            });
        }
        let f = self.clone();
        if left {
            let (bent, rest) = (self.dom.slice(0..n), self.dom.slice(n..len));
            let cod = under(&bent, &self.cod);
            Ok(FnMorphism::new(rest, cod, move |xs| {
                let (f, kept) = (f.clone(), xs.to_vec());
                Ok(vec![closure(n, move |args| {
                    f.call(&args.iter().chain(&kept).cloned().collect::<Vec<_>>())
                })])
            }))
        } else {
            let (rest, bent) = (self.dom.slice(0..len - n), self.dom.slice(len - n..len));
            let cod = over(&self.cod, &bent);
            Ok(FnMorphism::new(rest, cod, move |xs| {
                let (f, kept) = (f.clone(), xs.to_vec());
                Ok(vec![closure(n, move |args| {
                    f.call(&kept.iter().chain(args).cloned().collect::<Vec<_>>())
                })])
            }))
        }
    }

    /// Feeds extra inputs to the closure returned by `self`: on the right
    /// for an output `a << b`, on the left for an output `a >> b`.
    pub fn uncurry(&self) -> Result<Self> {
        let f = self.clone();
        let n = self.dom.len();
        match self.cod.objects() {
            [BOb::Over(a, b)] => Ok(FnMorphism::new(self.dom.tensor(b), a.clone(), move |xs| {
                let out = f.call(&xs[..n])?;
                out[0].as_closure()?.call(&xs[n..])
            })),
            [BOb::Under(a, b)] => {
                let k = a.len();
                Ok(FnMorphism::new(a.tensor(&self.dom), b.clone(), move |xs| {
                    let out = f.call(&xs[k..])?;
                    out[0].as_closure()?.call(&xs[..k])
                }))
            }
            _ => Err(Error::NotClosedType(self.cod.to_string())),
        }
    }
}

fn closure(
    arity: usize,
    inside: impl Fn(&[Value]) -> Result<Vec<Value>> + Send + Sync + 'static,
) -> Value {
    Value::Closure(Closure {
        arity,
        inside: Arc::new(inside),
    })
}

impl Monoidal for FnMorphism {
    type Ty = BTy;

    fn unit() -> BTy {
        BTy::unit()
    }

    fn ty_tensor(a: &BTy, b: &BTy) -> BTy {
        a.tensor(b)
    }

    fn dom(&self) -> BTy {
        self.dom.clone()
    }

    fn cod(&self) -> BTy {
        self.cod.clone()
    }

    fn id(t: &BTy) -> Self {
        FnMorphism::id(t)
    }

    fn then(&self, other: &Self) -> Result<Self> {
        FnMorphism::then(self, other)
    }

    fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(FnMorphism::tensor(self, other))
    }

    fn ty_len(t: &BTy) -> usize {
        t.len()
    }

    fn ty_split(t: &BTy, n: usize) -> (BTy, BTy) {
        (t.slice(0..n), t.slice(n..t.len()))
    }
}

impl Closed for FnMorphism {
    fn ty_over(a: &BTy, b: &BTy) -> BTy {
        over(a, b)
    }

    fn ty_under(a: &BTy, b: &BTy) -> BTy {
        under(a, b)
    }

    fn curry(&self, n: usize, left: bool) -> Result<Self> {
        FnMorphism::curry(self, n, left)
    }

    fn uncurry(&self, _n: usize, _left: bool) -> Result<Self> {
        FnMorphism::uncurry(self)
    }
}
