//! Cartesian closed structure of functions and laws of hypergraph diagrams.

mod common;

use common::*;
use diagrammar::biclosed::{basic, BTy};
use diagrammar::function::{FnMorphism, Value};
use diagrammar::hypergraph::HyperDiagram;
use proptest::prelude::*;

fn n() -> BTy {
    basic("N")
}

/// `(x, y, z) -> (x - 2y + 3z, x * y)`, sensitive to argument order.
fn sample() -> FnMorphism {
    let n3 = n().tensor(&n()).tensor(&n());
    FnMorphism::new(n3, n().tensor(&n()), |xs| {
        let (x, y, z) = (xs[0].as_int()?, xs[1].as_int()?, xs[2].as_int()?);
        Ok(vec![Value::Int(x - 2 * y + 3 * z), Value::Int(x * y)])
    })
}

fn ints(xs: &[i64]) -> Vec<Value> {
    xs.iter().map(|&x| Value::Int(x)).collect()
}

proptest! {
    #[test]
    fn currying_round_trips(x in -100i64..100, y in -100i64..100, z in -100i64..100, k in 0usize..=3, left: bool) {
        let f = sample();
        let round = f.curry(k, left).unwrap().uncurry();
        let args = ints(&[x, y, z]);
        match round {
            Ok(g) => prop_assert_eq!(g.call(&args).unwrap(), f.call(&args).unwrap()),
            // Currying everything into a plain output is not closed on one side only.
            Err(_) => prop_assert!(k == 0 || k == 3),
        }
    }

    #[test]
    fn cartesian_structure(x in -100i64..100, y in -100i64..100) {
        let (n, f) = (n(), sample());
        let copy = FnMorphism::copy(&n);
        prop_assert_eq!(copy.call(&ints(&[x])).unwrap(), ints(&[x, x]));
        let discard = FnMorphism::delete(&n).tensor(&FnMorphism::id(&n));
        prop_assert_eq!(copy.then(&discard).unwrap().call(&ints(&[x])).unwrap(), ints(&[x]));
        let swap = FnMorphism::swap(&n, &n);
        prop_assert_eq!(swap.then(&swap).unwrap().call(&ints(&[x, y])).unwrap(), ints(&[x, y]));
        let g = FnMorphism::id(&n).tensor(&copy).then(&f).unwrap();
        prop_assert_eq!(g.call(&ints(&[x, y])).unwrap(), f.call(&ints(&[x, y, y])).unwrap());
    }

    #[test]
    fn function_composition_is_associative(x in -100i64..100, y in -100i64..100, z in -100i64..100) {
        let n = n();
        let f = sample();
        let g = FnMorphism::swap(&n, &n);
        let h = FnMorphism::copy(&n).tensor(&FnMorphism::delete(&n));
        let args = ints(&[x, y, z]);
        prop_assert_eq!(
            f.then(&g).unwrap().then(&h).unwrap().call(&args).unwrap(),
            f.then(&g.then(&h).unwrap()).unwrap().call(&args).unwrap()
        );
    }

    #[test]
    fn hypergraph_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let h = random_hyper(&mut rng, (seed % 3) as usize, (seed / 3 % 3) as usize, 4);
        prop_assert_eq!(HyperDiagram::upgrade(&h.downgrade()).unwrap(), h);
    }

    #[test]
    fn hypergraph_identities(seed in any::<u64>()) {
        let h = random_hyper(&mut rng(seed), 2, 1, 4);
        prop_assert_eq!(&HyperDiagram::id(h.dom()).then(&h).unwrap(), &h);
        prop_assert_eq!(&h.then(&HyperDiagram::id(h.cod())).unwrap(), &h);
    }

    #[test]
    fn planar_diagrams_embed_functorially(a in any::<u64>(), b in any::<u64>()) {
        let (d, e) = (random_diagram(&mut rng(a), 4), random_diagram(&mut rng(b), 4));
        let (hd, he) = (HyperDiagram::from_monoidal(&d).unwrap(), HyperDiagram::from_monoidal(&e).unwrap());
        prop_assert!(HyperDiagram::from_monoidal(&d.tensor(&e)).unwrap().is_isomorphic(&hd.tensor(&he)));
        prop_assert!(HyperDiagram::from_monoidal(&d.normal_form()).unwrap().is_isomorphic(&hd));
        if d.cod() == e.dom() {
            prop_assert!(HyperDiagram::from_monoidal(&d.then(&e).unwrap()).unwrap().is_isomorphic(&hd.then(&he).unwrap()));
        }
    }

    #[test]
    fn isomorphism_ignores_box_order(seed in any::<u64>()) {
        let h = random_hyper(&mut rng(seed), 1, 1, 4);
        let k = random_hyper(&mut rng(seed ^ 1), 1, 1, 4);
        prop_assert!(h.tensor(&k).is_isomorphic(&h.tensor(&k)));
        // Parallel diagrams with no boundary commute.
        let (a, b) = (random_hyper(&mut rng(seed), 0, 0, 3), random_hyper(&mut rng(seed ^ 2), 0, 0, 3));
        prop_assert!(a.tensor(&b).is_isomorphic(&b.tensor(&a)));
        prop_assert!(h != k || h.is_isomorphic(&k));
    }
}
