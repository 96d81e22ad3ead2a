//! Pregroup grammars: lexical type assignment and parsing by contractions.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::monoidal::{Diagram, DiagramBox, Ty};
use crate::rigid::{parse_rigid_ty, RBox, RDiagram, RigidOb, RigidTy};
use crate::text;

/// A lexicon of pregroup types, induced steps between basic types and a
/// sentence type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PregroupGrammar {
    /// Lexical entries in declaration order; a word may have several.
    pub lexicon: Vec<(String, RigidTy)>,
    /// Induced steps `a -> b` between basic type names.
    pub induced: Vec<(String, String)>,
    pub sentence: RigidOb,
}

/// The name of the unary box realising an induced step.
pub fn induced_name(a: &str, b: &str) -> String {
    format!("induced:{a}->{b}")
}

impl PregroupGrammar {
    pub fn new(
        lexicon: Vec<(String, RigidTy)>,
        induced: Vec<(String, String)>,
        sentence: RigidOb,
    ) -> Self {
        PregroupGrammar {
            lexicon,
            induced,
            sentence,
        }
    }

    /// Reads `word : n.r s n.l`, `INDUCED n1 -> n` and `SENTENCE s` lines.
    /// Words may contain spaces.
    pub fn from_text(src: &str) -> Result<Self> {
        let mut lexicon = Vec::new();
        let mut induced = Vec::new();
        let mut sentence = None;
        for line in text::lines(src) {
            let toks = text::tokens(line.content);
            match toks[0].1 {
                "SENTENCE" => {
                    let ob = (toks.len() == 2)
                        .then(|| RigidOb::parse(toks[1].1))
                        .flatten()
                        .ok_or_else(|| line.error(0, "expected `SENTENCE <type>`"))?;
                    sentence = Some(ob);
                }
                "INDUCED" => {
                    if toks.len() != 4 || toks[2].1 != "->" {
                        return Err(line.error(0, "expected `INDUCED <a> -> <b>`"));
                    }
                    induced.push((toks[1].1.to_string(), toks[3].1.to_string()));
                }
                _ => {
                    let colon = line
                        .content
                        .rfind(':')
                        .ok_or_else(|| line.error(0, "expected `<word> : <type>`"))?;
                    let word = line.content[..colon].trim();
                    if word.is_empty() {
                        return Err(line.error(0, "empty word"));
                    }
                    let ty = parse_rigid_ty(&line.content[colon + 1..])
                        .filter(|t| !t.is_empty())
                        .ok_or_else(|| line.error(colon + 1, "malformed pregroup type"))?;
                    lexicon.push((word.to_string(), ty));
                }
            }
        }
        let sentence = sentence.ok_or_else(|| Error::Syntax {
            line: src.lines().count().max(1),
            column: 1,
            message: "missing SENTENCE declaration".into(),
        })?;
        Ok(PregroupGrammar {
            lexicon,
            induced,
            sentence,
        })
    }

    /// The words of the lexicon, in order of first appearance.
    pub fn vocab(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for (w, _) in &self.lexicon {
            if !out.contains(&w.as_str()) {
                out.push(w);
            }
        }
        out
    }

    /// Shortest chain of induced steps from `a` to `b`, as the list of
    /// visited names (empty when unreachable, `[a]` when `a == b`).
    fn chain(&self, a: &str, b: &str) -> Vec<String> {
        let mut prev: HashMap<&str, &str> = HashMap::new();
        let mut queue = VecDeque::from([a]);
        let mut seen = vec![a];
        while let Some(x) = queue.pop_front() {
            if x == b {
                let mut path = vec![b.to_string()];
                let mut cur = b;
                while let Some(&p) = prev.get(cur) {
                    path.push(p.to_string());
                    cur = p;
                }
                path.reverse();
                return path;
            }
            for (from, to) in &self.induced {
                if from == x && !seen.contains(&to.as_str()) {
                    seen.push(to);
                    prev.insert(to, x);
                    queue.push_back(to);
                }
            }
        }
        Vec::new()
    }

    /// How position `p` must be rewritten so that it contracts with `q`
    /// (`p < q`): `None` if they cannot contract, otherwise the chain of
    /// induced steps to apply at `p` or `q` first.
    fn contraction(&self, a: &RigidOb, b: &RigidOb) -> Option<Rewrite> {
        if b.z != a.z + 1 {
            return None;
        }
        if a.name == b.name {
            return Some(Rewrite::None);
        }
        if a.z == 0 {
            let chain = self.chain(&a.name, &b.name);
            if !chain.is_empty() {
                return Some(Rewrite::Left(chain));
            }
        }
        if b.z == 0 {
            let chain = self.chain(&b.name, &a.name);
            if !chain.is_empty() {
                return Some(Rewrite::Right(chain));
            }
        }
        None
    }

    /// Parses `words`, trying lexical assignments in declaration order and
    /// returning the first reduction found. The diagram stacks the word
    /// states, then induced steps on single wires, then cups, then the
    /// induced steps leading to the sentence type.
    pub fn parse(&self, words: &[&str]) -> Option<RDiagram> {
        let options: Vec<Vec<&RigidTy>> = words
            .iter()
            .map(|w| {
                self.lexicon
                    .iter()
                    .filter(|(word, _)| word == w)
                    .map(|(_, t)| t)
                    .collect()
            })
            .collect();
        if words.is_empty() || options.iter().any(Vec::is_empty) {
            return None;
        }
        let mut choice = vec![0usize; words.len()];
        loop {
            let types: Vec<&RigidTy> = choice.iter().zip(&options).map(|(&c, o)| o[c]).collect();
            if let Some(d) = self.parse_assignment(words, &types) {
                return Some(d);
            }
            // Advance the odometer, last word fastest.
            let mut i = words.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    fn parse_assignment(&self, words: &[&str], types: &[&RigidTy]) -> Option<RDiagram> {
        let string: Vec<RigidOb> = types.iter().flat_map(|t| t.iter().cloned()).collect();
        let m = string.len();
        // partner[i][j]: for the span i..j, the partner of i in the chosen
        // reduction to the empty type, if there is one.
        let mut reducible = vec![vec![false; m + 1]; m + 1];
        let mut partner = vec![vec![usize::MAX; m + 1]; m + 1];
        for (i, row) in reducible.iter_mut().enumerate() {
            row[i] = true;
        }
        for len in (2..=m).step_by(2) {
            for i in 0..=m - len {
                let j = i + len;
                for k in (i + 1..j).step_by(2) {
                    if reducible[i + 1][k]
                        && reducible[k + 1][j]
                        && self.contraction(&string[i], &string[k]).is_some()
                    {
                        reducible[i][j] = true;
                        partner[i][j] = k;
                        break;
                    }
                }
            }
        }
        let root = (0..m).step_by(2).find(|&r| {
            reducible[0][r]
                && reducible[r + 1][m]
                && string[r].z == self.sentence.z
                && (string[r].name == self.sentence.name
                    || (string[r].z == 0
                        && !self.chain(&string[r].name, &self.sentence.name).is_empty()))
        })?;
        let mut pairs = Vec::new();
        collect_pairs(&partner, 0, root, &mut pairs);
        collect_pairs(&partner, root + 1, m, &mut pairs);

        let mut d = word_states(words, types);
        let mut wires = string.clone();
        for &(p, q) in &pairs {
            match self
                .contraction(&string[p], &string[q])
                .expect("pairs contract")
            {
                Rewrite::None => {}
                Rewrite::Left(chain) => d = apply_chain(&d, &mut wires, p, &chain),
                Rewrite::Right(chain) => d = apply_chain(&d, &mut wires, q, &chain),
            }
        }
        let mut d = emit_cups(&d, &pairs);
        if string[root].name != self.sentence.name {
            let chain = self.chain(&string[root].name, &self.sentence.name);
            let mut single = vec![string[root].clone()];
            d = apply_chain(&d, &mut single, 0, &chain);
        }
        Some(d)
    }
}

enum Rewrite {
    None,
    Left(Vec<String>),
    Right(Vec<String>),
}

fn collect_pairs(partner: &[Vec<usize>], i: usize, j: usize, out: &mut Vec<(usize, usize)>) {
    if i >= j {
        return;
    }
    let k = partner[i][j];
    out.push((i, k));
    collect_pairs(partner, i + 1, k, out);
    collect_pairs(partner, k + 1, j, out);
}

/// The tensor of one state `word: unit -> type` per word.
pub fn word_states(words: &[&str], types: &[&RigidTy]) -> RDiagram {
    words
        .iter()
        .zip(types)
        .fold(Diagram::id(Ty::unit()), |acc, (w, t)| {
            acc.tensor(&RBox::gen(*w, Ty::unit(), (*t).clone()).diagram())
        })
}

/// Appends induced-step boxes rewriting the wire at `pos` along `chain`.
fn apply_chain(d: &RDiagram, wires: &mut [RigidOb], pos: usize, chain: &[String]) -> RDiagram {
    let mut d = d.clone();
    for step in chain.windows(2) {
        let (a, b) = (RigidOb::new(&step[0]), RigidOb::new(&step[1]));
        let bx = RBox::gen(
            induced_name(&step[0], &step[1]),
            Ty::new(vec![a]),
            Ty::new(vec![b.clone()]),
        );
        let left: RigidTy = wires[..pos].iter().cloned().collect();
        let right: RigidTy = wires[pos + 1..].iter().cloned().collect();
        d = d
            .then(&bx.diagram().whisker(&left, &right))
            .expect("induced step fits");
        wires[pos] = b;
    }
    d
}

/// Appends one cup per pair of positions of `d.cod()`, each time taking
/// the leftmost pair whose wires have become adjacent.
pub fn emit_cups(d: &RDiagram, pairs: &[(usize, usize)]) -> RDiagram {
    let mut alive: Vec<usize> = (0..d.cod().len()).collect();
    let mut todo: Vec<(usize, usize)> = pairs.to_vec();
    let mut d = d.clone();
    while !todo.is_empty() {
        let (idx, at) = todo
            .iter()
            .enumerate()
            .filter_map(|(idx, &(p, q))| {
                let at = alive.iter().position(|&w| w == p)?;
                (alive.get(at + 1) == Some(&q)).then_some((idx, at))
            })
            .min_by_key(|&(_, at)| at)
            .expect("pairs form a planar matching");
        todo.remove(idx);
        let cod = d.cod().clone();
        let cup = RBox::cup(&cod[at], &cod[at + 1]).expect("paired wires are adjoint");
        let layer = cup
            .diagram()
            .whisker(&cod.slice(0..at), &cod.slice(at + 2..cod.len()));
        d = d.then(&layer).expect("cup fits");
        alive.drain(at..at + 2);
    }
    d
}

/// Whether a diagram only uses word states, induced steps and cups.
pub fn is_contraction_only(d: &RDiagram) -> bool {
    d.boxes().iter().all(|b| {
        b.is_cup()
            || (matches!(b.kind(), crate::rigid::RKind::Gen(_))
                && (b.dom().is_empty() || b.name().starts_with("induced:")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CAESAR: &str =
        "Caesar : n\ncrossed : n.r s n.l\nthe : d\nRubicon : d.r n\nSENTENCE s\n";

    #[test]
    fn caesar_parses_with_three_cups() {
        let g = PregroupGrammar::from_text(CAESAR).unwrap();
        let d = g.parse(&["Caesar", "crossed", "the", "Rubicon"]).unwrap();
        assert_eq!(d.boxes().iter().filter(|b| b.is_cup()).count(), 3);
        assert_eq!(d.cod().to_string(), "s");
        assert!(d.dom().is_empty());
        assert!(is_contraction_only(&d));
        assert!(g.parse(&["the", "Caesar"]).is_none());
        assert!(g.parse(&["Brutus"]).is_none());
    }

    #[test]
    fn questions() {
        let g = PregroupGrammar::from_text(
            "Who : q s.l n\nread : n.r s n.l\nDe Causa : n\nSENTENCE q\n",
        )
        .unwrap();
        let d = g.parse(&["Who", "read", "De Causa"]).unwrap();
        assert_eq!(d.cod().to_string(), "q");
        assert_eq!(d.boxes().iter().filter(|b| b.is_cup()).count(), 3);
    }

    #[test]
    fn induced_steps() {
        let g = PregroupGrammar::from_text(
            "old : n1 n.l\nlovers : n2\nINDUCED n2 -> n\nINDUCED n1 -> n\nSENTENCE n\n",
        )
        .unwrap();
        let d = g.parse(&["old", "lovers"]).unwrap();
        let names: Vec<String> = d.boxes().iter().map(|b| b.name()).collect();
        assert!(names.contains(&"induced:n2->n".to_string()));
        assert!(names.contains(&"induced:n1->n".to_string()));
        assert_eq!(d.cod().to_string(), "n");
        assert!(is_contraction_only(&d));
    }

    #[test]
    fn ambiguous_words_follow_declaration_order() {
        let g = PregroupGrammar::from_text("saw : n\nsaw : n.r s\nI : n\nSENTENCE s\n").unwrap();
        let d = g.parse(&["I", "saw"]).unwrap();
        assert_eq!(d.boxes()[1].cod().to_string(), "n.r @ s");
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            PregroupGrammar::from_text("w : n.x\nSENTENCE s\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(PregroupGrammar::from_text("w : n\n").is_err());
    }
}
