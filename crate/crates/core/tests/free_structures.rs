//! Laws of free categories and free operads on random inputs.

mod common;

use common::*;
use diagrammar::cat::{Arrow, CatBox, Ob};
use diagrammar::operad::Tree;
use proptest::prelude::*;

fn arrow(names: &[(u8, u8)]) -> Option<Arrow> {
    let mut a: Option<Arrow> = None;
    for (k, &(s, t)) in names.iter().enumerate() {
        let b = CatBox::new(
            format!("b{k}"),
            Ob::new(format!("o{s}")),
            Ob::new(format!("o{t}")),
        )
        .arrow();
        a = Some(match a {
            None => b,
            Some(a) => a.then(&b).ok()?,
        });
    }
    a
}

fn path(from: u8, steps: Vec<u8>) -> Vec<(u8, u8)> {
    let mut at = from;
    steps
        .into_iter()
        .map(|to| {
            let e = (at, to);
            at = to;
            e
        })
        .collect()
}

proptest! {
    #[test]
    fn composition_is_associative(
        start in 0u8..3,
        xs in prop::collection::vec(0u8..3, 1..4),
        ys in prop::collection::vec(0u8..3, 1..4),
        zs in prop::collection::vec(0u8..3, 1..4),
    ) {
        let all: Vec<u8> = xs.iter().chain(&ys).chain(&zs).copied().collect();
        let edges = path(start, all);
        let (a, rest) = edges.split_at(xs.len());
        let (b, c) = rest.split_at(ys.len());
        let (a, b, c) = (arrow(a).unwrap(), arrow(b).unwrap(), arrow(c).unwrap());
        prop_assert_eq!(a.then(&b).unwrap().then(&c).unwrap(), a.then(&b.then(&c).unwrap()).unwrap());
    }

    #[test]
    fn identities_are_units(start in 0u8..3, xs in prop::collection::vec(0u8..3, 1..5)) {
        let a = arrow(&path(start, xs)).unwrap();
        prop_assert_eq!(&Arrow::id(a.dom().clone()).then(&a).unwrap(), &a);
        prop_assert_eq!(&a.then(&Arrow::id(a.cod().clone())).unwrap(), &a);
    }

    #[test]
    fn mismatched_composition_is_rejected(a in 0u8..3, b in 0u8..3, c in 0u8..3) {
        prop_assume!(b != c);
        let f = arrow(&[(a, b)]).unwrap();
        let g = arrow(&[(c, a)]).unwrap();
        prop_assert!(f.then(&g).is_err());
    }

    #[test]
    fn grafting_identities_is_neutral(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = random_tree(&mut rng, "x", 4);
        let ids: Vec<Tree> = t.cod().iter().map(|o| Tree::id(o.clone())).collect();
        prop_assert_eq!(&t.graft(&ids).unwrap(), &t);
        prop_assert_eq!(&Tree::id("x").graft(std::slice::from_ref(&t)).unwrap(), &t);
    }

    #[test]
    fn grafting_is_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = random_tree(&mut rng, "x", 3);
        let args: Vec<Tree> = t.cod().iter().map(|o| random_tree(&mut rng, o.name(), 2)).collect();
        let grafted = t.graft(&args).unwrap();
        let more: Vec<Tree> = grafted.cod().iter().map(|o| random_tree(&mut rng, o.name(), 2)).collect();
        let mut offset = 0;
        let nested: Vec<Tree> = args
            .iter()
            .map(|a| {
                let k = a.cod().len();
                offset += k;
                a.graft(&more[offset - k..offset]).unwrap()
            })
            .collect();
        prop_assert_eq!(grafted.graft(&more).unwrap(), t.graft(&nested).unwrap());
    }

    #[test]
    fn grafting_keeps_the_root_type(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let t = random_tree(&mut rng, "y", 4);
        prop_assert_eq!(t.dom().name(), "y");
    }
}
