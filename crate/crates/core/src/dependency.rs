//! Dependency grammars, well-formedness of dependency relations, and their
//! translation into pregroup reductions.

use std::collections::BTreeSet;

use crate::cat::Ob;
use crate::error::{Error, Result};
use crate::monoidal::{tree_to_diagram, Diagram, DiagramBox, Ty};
use crate::operad::{Node, Tree};
use crate::pregroup::{emit_cups, induced_name, word_states, PregroupGrammar};
use crate::rigid::{self, Adjoint, RBox, RDiagram, RKind, RigidOb, RigidTy};
use crate::text;

/// Rules of a dependency grammar. Dependents in a head rule are listed in
/// the order their adjoints appear in the head's pregroup type: nearest
/// first on the left, farthest first on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGrammar {
    /// `(head, left dependents, right dependents)`.
    pub heads: Vec<(Ob, Vec<Ob>, Vec<Ob>)>,
    /// Words and the symbols they may carry.
    pub words: Vec<(String, Ob)>,
    /// Symbols that may govern a sentence.
    pub roots: Vec<Ob>,
    pub sentence: Ob,
}

impl DependencyGrammar {
    /// Reads `HEAD v : n * n`, `WORD crossed : v`, `ROOT v` and an
    /// optional `SENTENCE s` (default `s`).
    pub fn from_text(src: &str) -> Result<Self> {
        let mut g = DependencyGrammar {
            heads: Vec::new(),
            words: Vec::new(),
            roots: Vec::new(),
            sentence: Ob::new("s"),
        };
        for line in text::lines(src) {
            let toks = text::tokens(line.content);
            let keyword = toks[0].1;
            match keyword {
                "ROOT" | "SENTENCE" => {
                    if toks.len() != 2 {
                        return Err(line.error(0, format!("expected `{keyword} <symbol>`")));
                    }
                    let ob = Ob::new(toks[1].1);
                    if keyword == "ROOT" {
                        g.roots.push(ob);
                    } else {
                        g.sentence = ob;
                    }
                }
                "WORD" => {
                    let rest = &line.content[4..];
                    let colon = rest
                        .rfind(':')
                        .ok_or_else(|| line.error(0, "expected `WORD <word> : <symbol>`"))?;
                    let word = rest[..colon].trim();
                    let symbol = rest[colon + 1..].trim();
                    if word.is_empty() || symbol.is_empty() || symbol.contains(char::is_whitespace)
                    {
                        return Err(line.error(0, "expected `WORD <word> : <symbol>`"));
                    }
                    g.words.push((word.to_string(), Ob::new(symbol)));
                }
                "HEAD" => {
                    if toks.len() < 4 || toks[2].1 != ":" {
                        return Err(line.error(0, "expected `HEAD <symbol> : <left> * <right>`"));
                    }
                    let deps: Vec<&str> = toks[3..].iter().map(|t| t.1).collect();
                    let stars: Vec<usize> = (0..deps.len()).filter(|&i| deps[i] == "*").collect();
                    let [star] = stars[..] else {
                        return Err(line.error(toks[3].0, "expected exactly one `*`"));
                    };
                    let obs = |xs: &[&str]| xs.iter().map(|x| Ob::new(*x)).collect();
                    g.heads.push((
                        Ob::new(toks[1].1),
                        obs(&deps[..star]),
                        obs(&deps[star + 1..]),
                    ));
                }
                _ => return Err(line.error(0, format!("unknown keyword `{keyword}`"))),
            }
        }
        Ok(g)
    }

    /// The pregroup grammar with one entry per word rule and matching head
    /// rule, and an induced step from each root symbol to the sentence.
    pub fn to_pregroup(&self) -> PregroupGrammar {
        let mut lexicon = Vec::new();
        for (word, x) in &self.words {
            for (head, left, right) in &self.heads {
                if head == x {
                    lexicon.push((word.clone(), lexical_type(x, left, right)));
                }
            }
        }
        let induced = self
            .roots
            .iter()
            .filter(|r| **r != self.sentence)
            .map(|r| (r.name().to_string(), self.sentence.name().to_string()))
            .collect();
        PregroupGrammar::new(lexicon, induced, RigidOb::new(self.sentence.name()))
    }
}

/// `y1.r .. yl.r x z1.l .. zk.l` for left dependents `y` and right
/// dependents `z`, both in type order.
pub fn lexical_type(x: &Ob, left: &[Ob], right: &[Ob]) -> RigidTy {
    let mut out: Vec<RigidOb> = left.iter().map(|y| RigidOb::with_z(y.name(), 1)).collect();
    out.push(RigidOb::new(x.name()));
    out.extend(right.iter().map(|z| RigidOb::with_z(z.name(), -1)));
    Ty::new(out)
}

/// Which well-formedness condition a relation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// Some index is out of range.
    Indices,
    /// The dependency relation has a cycle.
    Acyclicity,
    /// Some symbol depends on two heads.
    Monogamy,
    /// Some word inside an arc is not governed by the arc's head.
    Planarity,
    /// The root has a head.
    Rootedness,
    /// Some word does not reach the root.
    Connectedness,
}

/// A dependency analysis of a sentence: `(i, j)` in `deps` means the
/// symbol at position `i` depends on the symbol at position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyRelation {
    pub symbols: Vec<Ob>,
    pub deps: Vec<(usize, usize)>,
    pub root: usize,
}

impl DependencyRelation {
    fn heads_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.deps.iter().filter(move |d| d.0 == i).map(|d| d.1)
    }

    /// Whether `j` is `h` or one of its transitive dependents.
    fn governed_by(&self, j: usize, h: usize) -> bool {
        let mut seen = vec![false; self.symbols.len()];
        let mut stack = vec![j];
        while let Some(x) = stack.pop() {
            if x == h {
                return true;
            }
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            stack.extend(self.heads_of(x));
        }
        false
    }

    fn has_cycle(&self) -> bool {
        let n = self.symbols.len();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        fn visit(r: &DependencyRelation, x: usize, state: &mut [u8]) -> bool {
            state[x] = 1;
            for h in r.heads_of(x) {
                if state[h] == 1 || (state[h] == 0 && visit(r, h, state)) {
                    return true;
                }
            }
            state[x] = 2;
            false
        }
        (0..n).any(|x| state[x] == 0 && visit(self, x, &mut state))
    }

    /// Lists the violated conditions; empty means well formed.
    /// Connectedness is only checked for acyclic relations.
    pub fn validate(&self) -> Vec<Condition> {
        let n = self.symbols.len();
        let mut out = BTreeSet::new();
        if self.root >= n || self.deps.iter().any(|&(i, j)| i >= n || j >= n) {
            return vec![Condition::Indices];
        }
        let cyclic = self.has_cycle();
        if cyclic {
            out.insert(Condition::Acyclicity);
        }
        for i in 0..n {
            let heads: BTreeSet<usize> = self.heads_of(i).collect();
            if heads.len() > 1 {
                out.insert(Condition::Monogamy);
            }
        }
        for &(a, h) in &self.deps {
            let (lo, hi) = (a.min(h), a.max(h));
            if (lo + 1..hi).any(|j| !self.governed_by(j, h)) {
                out.insert(Condition::Planarity);
            }
        }
        if self.heads_of(self.root).next().is_some() {
            out.insert(Condition::Rootedness);
        }
        if !cyclic && (0..n).any(|i| !self.governed_by(i, self.root)) {
            out.insert(Condition::Connectedness);
        }
        out.into_iter().collect()
    }

    /// Dependents of `i` to its left and to its right, in surface order.
    fn dependents(&self, i: usize) -> (Vec<usize>, Vec<usize>) {
        let mut deps: Vec<usize> = self.deps.iter().filter(|d| d.1 == i).map(|d| d.0).collect();
        deps.sort_unstable();
        deps.dedup();
        deps.into_iter().partition(|&j| j < i)
    }

    /// The dependency tree: each word is a node from its symbol to the
    /// symbols of its dependents in surface order.
    pub fn tree(&self, words: &[&str]) -> Result<Tree> {
        if !self.validate().is_empty() {
            return Err(Error::InvalidRelation(format!("{:?}", self.validate())));
        }
        self.subtree(words, self.root)
    }

    fn subtree(&self, words: &[&str], i: usize) -> Result<Tree> {
        let (left, right) = self.dependents(i);
        let children: Vec<usize> = left.into_iter().chain(right).collect();
        let node = Node::new(
            words[i],
            self.symbols[i].clone(),
            children.iter().map(|&j| self.symbols[j].clone()).collect(),
        );
        if children.is_empty() {
            return Ok(node.tree());
        }
        let branches = children
            .iter()
            .map(|&j| self.subtree(words, j))
            .collect::<Result<Vec<_>>>()?;
        node.tree().graft(&branches)
    }
}

/// Translates a dependency analysis into a pregroup reduction: one state
/// per word typed by its head rule, one cup per dependency, and an
/// induced step from the root symbol to the sentence type.
pub fn dependency_to_pregroup(
    g: &DependencyGrammar,
    words: &[&str],
    rel: &DependencyRelation,
) -> Result<RDiagram> {
    if words.len() != rel.symbols.len() {
        return Err(Error::InvalidRelation(format!(
            "{} words but {} symbols",
            words.len(),
            rel.symbols.len()
        )));
    }
    let violations = rel.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidRelation(format!("{violations:?}")));
    }
    let root_symbol = &rel.symbols[rel.root];
    if !g.roots.contains(root_symbol) {
        return Err(Error::RuleNotInGrammar(format!("ROOT {root_symbol}")));
    }
    let mut types = Vec::with_capacity(words.len());
    let mut starts = Vec::with_capacity(words.len());
    let mut total = 0;
    for (i, (w, x)) in words.iter().zip(&rel.symbols).enumerate() {
        if !g.words.iter().any(|(word, s)| word == w && s == x) {
            return Err(Error::RuleNotInGrammar(format!("WORD {w} : {x}")));
        }
        let (left, right) = rel.dependents(i);
        let ys: Vec<Ob> = left.iter().rev().map(|&j| rel.symbols[j].clone()).collect();
        let zs: Vec<Ob> = right
            .iter()
            .rev()
            .map(|&j| rel.symbols[j].clone())
            .collect();
        if !g
            .heads
            .iter()
            .any(|(h, l, r)| h == x && *l == ys && *r == zs)
        {
            let show = |v: &[Ob]| v.iter().map(Ob::to_string).collect::<Vec<_>>().join(" ");
            return Err(Error::RuleNotInGrammar(format!(
                "HEAD {x} : {} * {}",
                show(&ys),
                show(&zs)
            )));
        }
        let t = lexical_type(x, &ys, &zs);
        starts.push(total);
        total += t.len();
        types.push(t);
    }
    // Position of the symbol of word i inside the concatenated types.
    let own = |i: usize| starts[i] + types[i].iter().position(|o| o.z == 0).expect("head symbol");
    let mut pairs = Vec::new();
    for h in 0..words.len() {
        let (left, right) = rel.dependents(h);
        let hx = own(h);
        for (t, &j) in left.iter().enumerate() {
            // The farthest left dependent pairs with the adjoint next to x.
            pairs.push((own(j), hx - 1 - t));
        }
        for (t, &k) in right.iter().enumerate() {
            pairs.push((hx + 1 + (right.len() - 1 - t), own(k)));
        }
    }
    let type_refs: Vec<&RigidTy> = types.iter().collect();
    let mut d = emit_cups(&word_states(words, &type_refs), &pairs);
    if *root_symbol != g.sentence {
        let bx = RBox::gen(
            induced_name(root_symbol.name(), g.sentence.name()),
            Ty::new(vec![RigidOb::new(root_symbol.name())]),
            Ty::new(vec![RigidOb::new(g.sentence.name())]),
        );
        d = d.then(&bx.diagram())?;
    }
    Ok(d)
}

/// Sends each word state `w: unit -> y.r x z.l` to the box
/// `w: y @ z -> x` with its input wires bent up, and every other box to
/// itself. Normalising the image recovers the dependency tree.
pub fn rewiring(d: &RDiagram) -> Result<RDiagram> {
    let f = rigid::functor::<RDiagram>(
        |name| Ok(Ty::new(vec![RigidOb::new(name)])),
        |b: &RBox| {
            if !matches!(b.kind(), RKind::Gen(_)) || !b.dom().is_empty() {
                return Ok(b.diagram());
            }
            let cod = b.cod();
            let Some(x) = cod.iter().position(|o| o.z == 0) else {
                return Ok(b.diagram());
            };
            let left = cod.slice(0..x).l();
            let right = cod.slice(x + 1..cod.len()).r();
            let inner = RBox::gen(b.name(), left.tensor(&right), cod.slice(x..x + 1)).diagram();
            rigid::curry(&rigid::curry(&inner, left.len(), true)?, right.len(), false)
        },
    );
    f.apply(d)
}

/// The contravariant diagram of the dependency tree, followed by the
/// induced step to the sentence type when the root symbol differs.
pub fn tree_diagram(
    g: &DependencyGrammar,
    words: &[&str],
    rel: &DependencyRelation,
) -> Result<RDiagram> {
    let tree = rel.tree(words)?;
    let mut d = rigid::from_monoidal(&tree_to_diagram(&tree, true));
    let root_symbol = &rel.symbols[rel.root];
    if *root_symbol != g.sentence {
        let bx = RBox::gen(
            induced_name(root_symbol.name(), g.sentence.name()),
            Ty::new(vec![RigidOb::new(root_symbol.name())]),
            Ty::new(vec![RigidOb::new(g.sentence.name())]),
        );
        d = d.then(&Diagram::from_box(bx))?;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MOSES: &str =
        "HEAD v : n * n\nHEAD n : *\nHEAD n : a d *\nHEAD a : *\nHEAD d : *\n\
        WORD Moses : n\nWORD crossed : v\nWORD the : d\nWORD Red : a\nWORD Sea : n\nROOT v\n";

    fn moses_relation() -> DependencyRelation {
        let sym = |s: &str| Ob::new(s);
        DependencyRelation {
            symbols: vec![sym("n"), sym("v"), sym("d"), sym("a"), sym("n")],
            deps: vec![(0, 1), (4, 1), (2, 4), (3, 4)],
            root: 1,
        }
    }

    const WORDS: [&str; 5] = ["Moses", "crossed", "the", "Red", "Sea"];

    #[test]
    fn moses_is_well_formed() {
        assert!(moses_relation().validate().is_empty());
        let tree = moses_relation().tree(&WORDS).unwrap();
        assert_eq!(tree.to_string(), "crossed(Moses, Sea(the, Red))");
    }

    #[test]
    fn violations() {
        let n = Ob::new("n");
        let cyclic = DependencyRelation {
            symbols: vec![n.clone(); 3],
            deps: vec![(0, 1), (1, 0)],
            root: 2,
        };
        assert_eq!(cyclic.validate(), vec![Condition::Acyclicity]);
        let crossing = DependencyRelation {
            symbols: vec![n.clone(); 5],
            deps: vec![(1, 3), (2, 4), (4, 3), (0, 3)],
            root: 3,
        };
        assert_eq!(crossing.validate(), vec![Condition::Planarity]);
        let two_heads = DependencyRelation {
            symbols: vec![n.clone(); 3],
            deps: vec![(0, 1), (0, 2), (1, 2)],
            root: 2,
        };
        assert_eq!(two_heads.validate(), vec![Condition::Monogamy]);
        let headed_root = DependencyRelation {
            symbols: vec![n.clone(); 2],
            deps: vec![(1, 0)],
            root: 1,
        };
        assert!(headed_root.validate().contains(&Condition::Rootedness));
        let out_of_range = DependencyRelation {
            symbols: vec![n],
            deps: vec![(0, 3)],
            root: 0,
        };
        assert_eq!(out_of_range.validate(), vec![Condition::Indices]);
    }

    #[test]
    fn lexical_types() {
        let t = lexical_type(&Ob::new("v"), &[Ob::new("n")], &[Ob::new("n")]);
        assert_eq!(t.to_string(), "n.r @ v @ n.l");
    }

    #[test]
    fn translation_matches_the_tree() {
        let g = DependencyGrammar::from_text(MOSES).unwrap();
        let rel = moses_relation();
        let d = dependency_to_pregroup(&g, &WORDS, &rel).unwrap();
        assert_eq!(d.cod().to_string(), "s");
        assert_eq!(d.boxes().iter().filter(|b| b.is_cup()).count(), 4);
        let rewired = rigid::normal_form(&rewiring(&d).unwrap());
        let expected = tree_diagram(&g, &WORDS, &rel).unwrap().normal_form();
        assert_eq!(rewired, expected);
    }

    #[test]
    fn single_word_sentence() {
        let g = DependencyGrammar::from_text("HEAD v : *\nWORD go : v\nROOT v\n").unwrap();
        let rel = DependencyRelation {
            symbols: vec![Ob::new("v")],
            deps: vec![],
            root: 0,
        };
        let d = dependency_to_pregroup(&g, &["go"], &rel).unwrap();
        let names: Vec<String> = d.boxes().iter().map(|b| b.name()).collect();
        assert_eq!(names, ["go", "induced:v->s"]);
    }

    #[test]
    fn missing_rules_are_reported() {
        let g = DependencyGrammar::from_text("HEAD v : *\nWORD go : v\n").unwrap();
        let rel = DependencyRelation {
            symbols: vec![Ob::new("v")],
            deps: vec![],
            root: 0,
        };
        assert!(matches!(
            dependency_to_pregroup(&g, &["go"], &rel),
            Err(Error::RuleNotInGrammar(_))
        ));
        let g = DependencyGrammar::from_text("ROOT v\nWORD go : v\n").unwrap();
        assert!(matches!(
            dependency_to_pregroup(&g, &["go"], &rel),
            Err(Error::RuleNotInGrammar(_))
        ));
    }

    #[test]
    fn pregroup_view_parses() {
        let g = DependencyGrammar::from_text(MOSES).unwrap();
        let p = g.to_pregroup();
        let d = p.parse(&WORDS).unwrap();
        assert_eq!(d.cod().to_string(), "s");
        assert!(DependencyGrammar::from_text("HEAD v : n n\n").is_err());
        assert!(DependencyGrammar::from_text("FOO\n").is_err());
    }
}
