//! Free operads: labelled trees with typed grafting, algebras over them,
//! and context-free grammars parsed with CYK.

use std::collections::HashMap;
use std::fmt;

use crate::cat::Ob;
use crate::error::{Error, Result};
use crate::text;

/// An operation `name: dom -> cod[0] ... cod[k-1]`. Nodes with an empty
/// codomain are leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub name: String,
    pub dom: Ob,
    pub cod: Vec<Ob>,
}

impl Node {
    pub fn new(name: impl Into<String>, dom: impl Into<Ob>, cod: Vec<Ob>) -> Self {
        Node {
            name: name.into(),
            dom: dom.into(),
            cod,
        }
    }

    pub fn leaf(name: impl Into<String>, dom: impl Into<Ob>) -> Self {
        Node::new(name, dom, Vec::new())
    }

    pub fn is_leaf(&self) -> bool {
        self.cod.is_empty()
    }

    /// The tree consisting of this node alone.
    pub fn tree(&self) -> Tree {
        Tree::Node {
            root: self.clone(),
            branches: Vec::new(),
        }
    }
}

fn obs_to_string(obs: &[Ob]) -> String {
    obs.iter().map(Ob::to_string).collect::<Vec<_>>().join(" ")
}

/// A morphism of the free operad.
///
/// A node with no branches is a bare node whose codomain is still open.
/// Once grafted, every slot of the root holds a branch; open slots are
/// represented by identity branches, and a node whose branches are all
/// identities is stored bare, so equal trees have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Id(Ob),
    Node { root: Node, branches: Vec<Tree> },
}

impl Tree {
    pub fn id(ob: impl Into<Ob>) -> Self {
        Tree::Id(ob.into())
    }

    pub fn dom(&self) -> &Ob {
        match self {
            Tree::Id(x) => x,
            Tree::Node { root, .. } => &root.dom,
        }
    }

    /// The list of open leaves, read left to right.
    pub fn cod(&self) -> Vec<Ob> {
        match self {
            Tree::Id(x) => vec![x.clone()],
            Tree::Node { root, branches } if branches.is_empty() => root.cod.clone(),
            Tree::Node { branches, .. } => branches.iter().flat_map(Tree::cod).collect(),
        }
    }

    pub fn is_id(&self) -> bool {
        matches!(self, Tree::Id(_))
    }

    /// Plugs `args` into the open slots of `self`, left to right.
    pub fn graft(&self, args: &[Tree]) -> Result<Tree> {
        let cod = self.cod();
        let doms: Vec<Ob> = args.iter().map(|t| t.dom().clone()).collect();
        if cod != doms {
            return Err(Error::ArityMismatch {
                expected: obs_to_string(&cod),
                got: obs_to_string(&doms),
            });
        }
        if args.iter().all(Tree::is_id) {
            return Ok(self.clone());
        }
        match self {
            Tree::Id(_) => Ok(args[0].clone()),
            Tree::Node { root, branches } if branches.is_empty() => Ok(Tree::Node {
                root: root.clone(),
                branches: args.to_vec(),
            }),
            Tree::Node { root, branches } => {
                let mut rest = args;
                let mut grafted = Vec::with_capacity(branches.len());
                for branch in branches {
                    let k = branch.cod().len();
                    let (now, later) = rest.split_at(k);
                    grafted.push(branch.graft(now)?);
                    rest = later;
                }
                Ok(Tree::Node {
                    root: root.clone(),
                    branches: grafted,
                })
            }
        }
    }

    /// Names of the leaf nodes, left to right.
    pub fn fringe(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_fringe(&mut out);
        out
    }

    fn collect_fringe(&self, out: &mut Vec<String>) {
        match self {
            Tree::Id(_) => {}
            Tree::Node { root, branches } => {
                if root.is_leaf() {
                    out.push(root.name.clone());
                }
                for b in branches {
                    b.collect_fringe(out);
                }
            }
        }
    }

    /// Number of nodes, identities excluded.
    pub fn size(&self) -> usize {
        match self {
            Tree::Id(_) => 0,
            Tree::Node { branches, .. } => 1 + branches.iter().map(Tree::size).sum::<usize>(),
        }
    }

    /// Reads the `name(branch, ..., branch)` format, resolving names
    /// against `sig`. `Id(x)` denotes an identity unless `sig` has a node
    /// called `Id`.
    pub fn parse(src: &str, sig: &[Node]) -> Result<Tree> {
        let mut parser = TreeParser { src, pos: 0, sig };
        let tree = parser.tree()?;
        parser.skip_ws();
        if parser.pos != src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(tree)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Id(x) => write!(f, "Id({x})"),
            Tree::Node { root, branches } if branches.is_empty() => f.write_str(&root.name),
            Tree::Node { root, branches } => {
                write!(f, "{}(", root.name)?;
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{b}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct TreeParser<'a> {
    src: &'a str,
    pos: usize,
    sig: &'a [Node],
}

impl TreeParser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            line: 1,
            column: self.src[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let end = rest.find(['(', ')', ',']).unwrap_or(rest.len());
        let name = rest[..end].trim();
        if name.is_empty() {
            return Err(self.error("expected a node name"));
        }
        self.pos += end;
        Ok(name.to_string())
    }

    fn tree(&mut self) -> Result<Tree> {
        let start = self.pos;
        let name = self.name()?;
        self.skip_ws();
        if name == "Id" && self.peek() == Some('(') && !self.sig.iter().any(|n| n.name == "Id") {
            self.pos += 1;
            let ob = self.name()?;
            self.skip_ws();
            if self.peek() != Some(')') {
                return Err(self.error("unbalanced parentheses"));
            }
            self.pos += 1;
            return Ok(Tree::Id(Ob::new(ob)));
        }
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.tree()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("unbalanced parentheses")),
                }
            }
        }
        let candidates: Vec<&Node> = self
            .sig
            .iter()
            .filter(|n| {
                n.name == name
                    && (children.is_empty()
                        || (n.cod.len() == children.len()
                            && n.cod.iter().zip(&children).all(|(o, c)| o == c.dom())))
            })
            .collect();
        let node = match candidates.as_slice() {
            [node] => (*node).clone(),
            [] => return Err(Error::UnknownNode(name)),
            _ => {
                self.pos = start;
                return Err(self.error(&format!("ambiguous node name `{name}`")));
            }
        };
        if children.is_empty() {
            Ok(node.tree())
        } else {
            node.tree().graft(&children)
        }
    }
}

/// A target for operad algebras: something with identities and
/// many-input composition.
pub trait OperadTarget: Clone {
    type Ob;
    fn identity(ob: &Self::Ob) -> Result<Self>;
    /// Composes `self` with one argument per open input.
    fn compose(&self, args: &[Self]) -> Result<Self>;
}

impl OperadTarget for Tree {
    type Ob = Ob;

    fn identity(ob: &Ob) -> Result<Self> {
        Ok(Tree::Id(ob.clone()))
    }

    fn compose(&self, args: &[Self]) -> Result<Self> {
        self.graft(args)
    }
}

/// A multiplicative weight, the semantics of weighted grammars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight(pub f64);

impl OperadTarget for Weight {
    type Ob = ();

    fn identity(_: &()) -> Result<Self> {
        Ok(Weight(1.0))
    }

    fn compose(&self, args: &[Self]) -> Result<Self> {
        Ok(Weight(args.iter().fold(self.0, |acc, w| acc * w.0)))
    }
}

type DefaultAr<T> = std::sync::Arc<dyn Fn(&Node) -> Option<T> + Send + Sync>;

/// An algebra of the free operad: images for objects and nodes.
#[derive(Clone)]
pub struct Algebra<T: OperadTarget> {
    ob: HashMap<Ob, T::Ob>,
    ar: HashMap<Node, T>,
    default_ar: Option<DefaultAr<T>>,
}

impl<T: OperadTarget> Algebra<T> {
    pub fn new(ob: HashMap<Ob, T::Ob>, ar: HashMap<Node, T>) -> Self {
        Algebra {
            ob,
            ar,
            default_ar: None,
        }
    }

    /// An algebra whose node images are computed by `f`; `ob` still
    /// supplies the images of identities.
    pub fn from_fn(
        ob: HashMap<Ob, T::Ob>,
        f: impl Fn(&Node) -> Option<T> + Send + Sync + 'static,
    ) -> Self {
        Algebra {
            ob,
            ar: HashMap::new(),
            default_ar: Some(std::sync::Arc::new(f)),
        }
    }

    fn node(&self, n: &Node) -> Result<T> {
        if let Some(image) = self.ar.get(n) {
            return Ok(image.clone());
        }
        self.default_ar
            .as_ref()
            .and_then(|f| f(n))
            .ok_or_else(|| Error::MissingMapping(n.name.clone()))
    }

    pub fn apply(&self, t: &Tree) -> Result<T> {
        match t {
            Tree::Id(x) => {
                let image = self
                    .ob
                    .get(x)
                    .ok_or_else(|| Error::MissingMapping(x.to_string()))?;
                T::identity(image)
            }
            Tree::Node { root, branches } if branches.is_empty() => self.node(root),
            Tree::Node { root, branches } => {
                let args = branches
                    .iter()
                    .map(|b| self.apply(b))
                    .collect::<Result<Vec<_>>>()?;
                self.node(root)?.compose(&args)
            }
        }
    }
}

/// A context-free grammar whose rules are operad nodes: binary rules
/// `A -> B C` are nodes named `A`, lexical rules `A -> 'w'` are leaves
/// named `w` with domain `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    pub sentence: Ob,
    pub rules: Vec<Node>,
}

impl Cfg {
    pub fn new(sentence: Ob, rules: Vec<Node>) -> Self {
        Cfg { sentence, rules }
    }

    pub fn nonterminals(&self) -> Vec<Ob> {
        let mut out = vec![self.sentence.clone()];
        for r in &self.rules {
            for x in std::iter::once(&r.dom).chain(&r.cod) {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        }
        out
    }

    pub fn terminals(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in self.rules.iter().filter(|r| r.is_leaf()) {
            if !out.contains(&r.name) {
                out.push(r.name.clone());
            }
        }
        out
    }

    /// Reads `SENTENCE S`, `S -> VP NP` and `N -> 'Caesar'` lines.
    pub fn from_text(src: &str) -> Result<Self> {
        let mut sentence = None;
        let mut rules = Vec::new();
        for line in text::lines(src) {
            let toks = text::tokens(line.content);
            if toks[0].1 == "SENTENCE" {
                if toks.len() != 2 {
                    return Err(line.error(0, "expected `SENTENCE <symbol>`"));
                }
                sentence = Some(Ob::new(toks[1].1));
                continue;
            }
            if toks.len() < 3 || toks[1].1 != "->" {
                return Err(line.error(0, "expected `<lhs> -> <rhs>`"));
            }
            let lhs = toks[0].1;
            let arrow_end = toks[1].0 + 2;
            let rhs = line.content[arrow_end..].trim();
            if toks.len() > 3 {
                if let Some((off, _)) = toks[2..].iter().find(|(_, t)| t.contains('\'')) {
                    return Err(Error::NotCnf(format!(
                        "line {}, column {}: terminals mixed with nonterminals",
                        line.number,
                        line.start + off
                    )));
                }
            }
            if let Some(quoted) = rhs.strip_prefix('\'') {
                let word = quoted
                    .strip_suffix('\'')
                    .filter(|w| !w.contains('\''))
                    .ok_or_else(|| {
                        line.error(arrow_end + 1, "lexical rules take exactly one quoted word")
                    })?;
                rules.push(Node::leaf(word, lhs));
            } else {
                let cod = toks[2..].iter().map(|(_, t)| Ob::new(*t)).collect();
                rules.push(Node::new(lhs, lhs, cod));
            }
        }
        let sentence = sentence.ok_or_else(|| Error::Syntax {
            line: src.lines().count().max(1),
            column: 1,
            message: "missing SENTENCE declaration".into(),
        })?;
        Ok(Cfg { sentence, rules })
    }

    fn check_cnf(&self) -> Result<()> {
        for r in &self.rules {
            if !(r.is_leaf() || r.cod.len() == 2) {
                return Err(Error::NotCnf(format!(
                    "{} -> {}",
                    r.dom,
                    obs_to_string(&r.cod)
                )));
            }
        }
        Ok(())
    }

    /// CYK parsing. Each chart cell keeps, per nonterminal, the first
    /// derivation found when rules are tried in index order and split
    /// points from left to right.
    pub fn parse(&self, tokens: &[&str]) -> Result<Option<Tree>> {
        self.check_cnf()?;
        let n = tokens.len();
        if n == 0 {
            return Ok(None);
        }
        // chart[i][len - 1]: nonterminal -> (rule index, split point)
        let mut chart: Vec<Vec<HashMap<&Ob, (usize, usize)>>> = vec![vec![HashMap::new(); n]; n];
        for (i, tok) in tokens.iter().enumerate() {
            for (r, rule) in self.rules.iter().enumerate() {
                if rule.is_leaf() && rule.name == *tok {
                    chart[i][0].entry(&rule.dom).or_insert((r, i + 1));
                }
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                let mut cell: HashMap<&Ob, (usize, usize)> = HashMap::new();
                for (r, rule) in self.rules.iter().enumerate() {
                    if rule.is_leaf() || cell.contains_key(&rule.dom) {
                        continue;
                    }
                    let found = (1..len).find(|&k| {
                        chart[i][k - 1].contains_key(&rule.cod[0])
                            && chart[i + k][len - k - 1].contains_key(&rule.cod[1])
                    });
                    if let Some(k) = found {
                        cell.insert(&rule.dom, (r, i + k));
                    }
                }
                chart[i][len - 1] = cell;
            }
        }
        if !chart[0][n - 1].contains_key(&self.sentence) {
            return Ok(None);
        }
        let build = |sym: &Ob, i: usize, j: usize| self.rebuild(&chart, sym, i, j);
        Ok(Some(build(&self.sentence, 0, n)))
    }

    fn rebuild(
        &self,
        chart: &[Vec<HashMap<&Ob, (usize, usize)>>],
        sym: &Ob,
        i: usize,
        j: usize,
    ) -> Tree {
        let (r, k) = chart[i][j - i - 1][sym];
        let rule = &self.rules[r];
        if rule.is_leaf() {
            return rule.tree();
        }
        Tree::Node {
            root: rule.clone(),
            branches: vec![
                self.rebuild(chart, &rule.cod[0], i, k),
                self.rebuild(chart, &rule.cod[1], k, j),
            ],
        }
    }
}
