//! Free categories on a directed-graph signature, their functors, and
//! regular grammars parsed as path search.

use std::collections::HashMap;
use std::fmt;

use crate::error::{mismatch, Error, Result};
use crate::text;

/// A generating object, identified by its name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ob(pub String);

impl Ob {
    pub fn new(name: impl Into<String>) -> Self {
        Ob(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ob {
    fn from(s: &str) -> Self {
        Ob::new(s)
    }
}

/// A generating arrow `name: dom -> cod`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CatBox {
    pub name: String,
    pub dom: Ob,
    pub cod: Ob,
}

impl CatBox {
    pub fn new(name: impl Into<String>, dom: impl Into<Ob>, cod: impl Into<Ob>) -> Self {
        CatBox {
            name: name.into(),
            dom: dom.into(),
            cod: cod.into(),
        }
    }

    /// The arrow made of this single box.
    pub fn arrow(&self) -> Arrow {
        Arrow {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            boxes: vec![self.clone()],
        }
    }
}

impl fmt::Display for CatBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.dom, self.cod)
    }
}

/// A path in the free category: a composable list of boxes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    dom: Ob,
    cod: Ob,
    boxes: Vec<CatBox>,
}

impl Arrow {
    /// Builds an arrow, checking that consecutive boxes compose.
    pub fn new(dom: Ob, cod: Ob, boxes: Vec<CatBox>) -> Result<Self> {
        let mut current = &dom;
        for b in &boxes {
            if &b.dom != current {
                return Err(mismatch(current, &b.dom));
            }
            current = &b.cod;
        }
        if current != &cod {
            return Err(mismatch(current, &cod));
        }
        Ok(Arrow { dom, cod, boxes })
    }

    pub fn id(ob: Ob) -> Self {
        Arrow {
            dom: ob.clone(),
            cod: ob,
            boxes: Vec::new(),
        }
    }

    pub fn dom(&self) -> &Ob {
        &self.dom
    }

    pub fn cod(&self) -> &Ob {
        &self.cod
    }

    pub fn boxes(&self) -> &[CatBox] {
        &self.boxes
    }

    /// Sequential composition `self >> other`.
    pub fn then(&self, other: &Arrow) -> Result<Arrow> {
        if self.cod != other.dom {
            return Err(mismatch(&self.cod, &other.dom));
        }
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(Arrow {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            boxes,
        })
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return write!(f, "Id({})", self.dom);
        }
        let names: Vec<&str> = self.boxes.iter().map(|b| b.name.as_str()).collect();
        f.write_str(&names.join(" >> "))
    }
}

/// A functor between free categories, given on generators.
#[derive(Debug, Clone, Default)]
pub struct CatFunctor {
    ob: HashMap<Ob, Ob>,
    ar: HashMap<CatBox, Arrow>,
}

impl CatFunctor {
    /// Builds a functor, checking that each box image has the mapped type.
    pub fn new(ob: HashMap<Ob, Ob>, ar: HashMap<CatBox, Arrow>) -> Result<Self> {
        for (b, image) in &ar {
            let dom = ob
                .get(&b.dom)
                .ok_or_else(|| Error::MissingMapping(b.dom.to_string()))?;
            let cod = ob
                .get(&b.cod)
                .ok_or_else(|| Error::MissingMapping(b.cod.to_string()))?;
            if image.dom() != dom {
                return Err(mismatch(dom, image.dom()));
            }
            if image.cod() != cod {
                return Err(mismatch(image.cod(), cod));
            }
        }
        Ok(CatFunctor { ob, ar })
    }

    pub fn ob(&self, x: &Ob) -> Result<Ob> {
        self.ob
            .get(x)
            .cloned()
            .ok_or_else(|| Error::MissingMapping(x.to_string()))
    }

    /// Applies the functor box by box.
    pub fn apply(&self, f: &Arrow) -> Result<Arrow> {
        let mut result = Arrow::id(self.ob(f.dom())?);
        for b in f.boxes() {
            let image = self
                .ar
                .get(b)
                .ok_or_else(|| Error::MissingMapping(b.to_string()))?;
            result = result.then(image)?;
        }
        Ok(result)
    }
}

/// A labelled directed graph with start and end states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularGrammar {
    pub edges: Vec<CatBox>,
    pub start: Ob,
    pub end: Ob,
}

impl RegularGrammar {
    pub fn new(edges: Vec<CatBox>, start: Ob, end: Ob) -> Self {
        RegularGrammar { edges, start, end }
    }

    /// Reads the line format `START s`, `END s`, `EDGE src label dst`.
    pub fn from_text(src: &str) -> Result<Self> {
        let mut start = None;
        let mut end = None;
        let mut edges = Vec::new();
        for line in text::lines(src) {
            let toks = text::tokens(line.content);
            let (_, keyword) = toks[0];
            match (keyword, toks.len()) {
                ("START", 2) => start = Some(Ob::new(toks[1].1)),
                ("END", 2) => end = Some(Ob::new(toks[1].1)),
                ("EDGE", 4) => edges.push(CatBox::new(toks[2].1, toks[1].1, toks[3].1)),
                ("START" | "END" | "EDGE", _) => {
                    return Err(line.error(0, format!("wrong number of fields for {keyword}")))
                }
                _ => return Err(line.error(0, format!("unknown keyword `{keyword}`"))),
            }
        }
        let missing = |what: &str| Error::Syntax {
            line: src.lines().count().max(1),
            column: 1,
            message: format!("missing {what} declaration"),
        };
        Ok(RegularGrammar {
            edges,
            start: start.ok_or_else(|| missing("START"))?,
            end: end.ok_or_else(|| missing("END"))?,
        })
    }

    /// Greedy left-to-right scan: each symbol takes the first edge, in
    /// declaration order, that carries the label and leaves the current
    /// state. Nondeterministic grammars may therefore reject words that
    /// some path accepts.
    pub fn parse(&self, word: &[&str]) -> Option<Arrow> {
        let mut arrow = Arrow::id(self.start.clone());
        for symbol in word {
            let edge = self
                .edges
                .iter()
                .find(|e| e.name == *symbol && &e.dom == arrow.cod())?;
            arrow = arrow.then(&edge.arrow()).ok()?;
        }
        (arrow.cod() == &self.end).then_some(arrow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abba_grammar() -> RegularGrammar {
        RegularGrammar::new(
            vec![
                CatBox::new("A", "s0", "x"),
                CatBox::new("B", "x", "x"),
                CatBox::new("A", "x", "s1"),
            ],
            Ob::new("s0"),
            Ob::new("s1"),
        )
    }

    #[test]
    fn unit_and_associativity() {
        let f = CatBox::new("f", "x", "y").arrow();
        let g = CatBox::new("g", "y", "z").arrow();
        let h = CatBox::new("h", "z", "x").arrow();
        let fg_h = f.then(&g).unwrap().then(&h).unwrap();
        let f_gh = f.then(&g.then(&h).unwrap()).unwrap();
        assert_eq!(fg_h, f_gh);
        assert_eq!(f.then(&Arrow::id(Ob::new("y"))).unwrap(), f);
        assert_eq!(Arrow::id(Ob::new("x")).then(&f).unwrap(), f);
        let idx = Arrow::id(Ob::new("x"));
        assert_eq!(idx.then(&idx).unwrap(), idx);
    }

    #[test]
    fn composition_mismatch() {
        let f = CatBox::new("f", "x", "y").arrow();
        assert!(matches!(f.then(&f), Err(Error::CompositionMismatch { .. })));
        assert!(Arrow::new(Ob::new("x"), Ob::new("z"), vec![CatBox::new("f", "x", "y")]).is_err());
    }

    #[test]
    fn swapping_functor() {
        let (x, y) = (Ob::new("x"), Ob::new("y"));
        let f = CatBox::new("f", "x", "y");
        let g = CatBox::new("g", "y", "x");
        let ob = HashMap::from([(x.clone(), y.clone()), (y.clone(), x.clone())]);
        let ar = HashMap::from([(f.clone(), g.arrow()), (g.clone(), f.arrow())]);
        let functor = CatFunctor::new(ob, ar).unwrap();
        let fg = f.arrow().then(&g.arrow()).unwrap();
        assert_eq!(
            functor.apply(&fg).unwrap(),
            functor
                .apply(&f.arrow())
                .unwrap()
                .then(&functor.apply(&g.arrow()).unwrap())
                .unwrap()
        );
        assert_eq!(functor.apply(&Arrow::id(x.clone())).unwrap(), Arrow::id(y));
        let missing = CatBox::new("h", "x", "x").arrow();
        assert!(matches!(
            functor.apply(&missing),
            Err(Error::MissingMapping(_))
        ));
    }

    #[test]
    fn functor_rejects_badly_typed_images() {
        let f = CatBox::new("f", "x", "y");
        let ob = HashMap::from([(Ob::new("x"), Ob::new("x")), (Ob::new("y"), Ob::new("y"))]);
        let ar = HashMap::from([(f, Arrow::id(Ob::new("x")))]);
        assert!(CatFunctor::new(ob, ar).is_err());
    }

    #[test]
    fn regular_parsing() {
        let g = abba_grammar();
        let arrow = g.parse(&["A", "B", "B", "A"]).unwrap();
        assert_eq!(arrow.boxes().len(), 4);
        assert_eq!(arrow.dom(), &Ob::new("s0"));
        assert_eq!(arrow.cod(), &Ob::new("s1"));
        assert!(g.parse(&["A", "B", "A", "B"]).is_none());
        assert!(g.parse(&["A", "B"]).is_none());
    }

    #[test]
    fn empty_word_needs_start_equal_end() {
        let g = RegularGrammar::new(vec![], Ob::new("q"), Ob::new("q"));
        assert_eq!(g.parse(&[]), Some(Arrow::id(Ob::new("q"))));
        assert!(abba_grammar().parse(&[]).is_none());
    }

    #[test]
    fn text_format() {
        let src = "# toy\nSTART s0\nEND s1\nEDGE s0 A x\nEDGE x B x\nEDGE x A s1\n";
        assert_eq!(RegularGrammar::from_text(src).unwrap(), abba_grammar());
        let err = RegularGrammar::from_text("START s0\nEDGE s0 A\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 2,
                column: 1,
                ..
            }
        ));
        assert!(RegularGrammar::from_text("START s0\n").is_err());
    }
}
