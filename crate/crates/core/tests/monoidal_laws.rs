//! Properties of planar monoidal diagrams and their normal forms.

mod common;

use common::*;
use diagrammar::monoidal::{Diagram, Functor, MonBox, Side};
use diagrammar::operad::Weight;
use proptest::prelude::*;

proptest! {
    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 6);
        let nf = d.normal_form();
        prop_assert_eq!(nf.normal_form(), nf.clone());
        prop_assert_eq!((nf.dom(), nf.cod()), (d.dom(), d.cod()));
        prop_assert_eq!(nf.len(), d.len());
    }

    #[test]
    fn interchange_preserves_the_normal_form(seed in any::<u64>(), picks in prop::collection::vec((0usize..8, any::<bool>()), 1..6)) {
        let d = random_diagram(&mut rng(seed), 6);
        let mut e = d.clone();
        for (i, left) in picks {
            if e.len() < 2 {
                break;
            }
            let side = if left { Side::Left } else { Side::Right };
            if let Ok(next) = e.interchange_with(i % (e.len() - 1), side) {
                e = next;
            }
        }
        prop_assert!(d.nf_equal(&e));
    }

    #[test]
    fn normal_form_is_irreducible(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 6);
        prop_assert!(irreducible(&d.normal_form()));
    }

    #[test]
    fn composition_with_identities(seed in any::<u64>()) {
        let d = random_diagram(&mut rng(seed), 5);
        prop_assert_eq!(&Diagram::id(d.dom().clone()).then(&d).unwrap(), &d);
        prop_assert_eq!(&d.then(&Diagram::id(d.cod().clone())).unwrap(), &d);
    }

    #[test]
    fn tensor_is_associative_and_interchanges(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (random_diagram(&mut rng(a), 3), random_diagram(&mut rng(b), 3), random_diagram(&mut rng(c), 3));
        prop_assert_eq!(f.tensor(&g).tensor(&h), f.tensor(&g.tensor(&h)));
        // f @ g equals both ways of running them one after the other.
        let left_first = f.whisker(&ty(&[]), g.dom()).then(&g.whisker(f.cod(), &ty(&[]))).unwrap();
        let right_first = g.whisker(f.dom(), &ty(&[])).then(&f.whisker(&ty(&[]), g.cod())).unwrap();
        prop_assert_eq!(&f.tensor(&g), &left_first);
        prop_assert!(left_first.nf_equal(&right_first));
    }

    #[test]
    fn functors_preserve_structure(a in any::<u64>(), b in any::<u64>(), w in prop::collection::vec(1u32..5, 5)) {
        let sig = signature();
        let weights: Vec<(String, f64)> = sig.iter().zip(&w).map(|(b, &w)| (b.name.clone(), f64::from(w))).collect();
        let f = Functor::<MonBox, Weight>::new(|_| Ok(()), move |b: &MonBox| {
            Ok(Weight(weights.iter().find(|(n, _)| *n == b.name).map_or(1.0, |x| x.1)))
        });
        let (d, e) = (random_diagram(&mut rng(a), 4), random_diagram(&mut rng(b), 4));
        let product = f.apply(&d).unwrap().0 * f.apply(&e).unwrap().0;
        prop_assert_eq!(f.apply(&d.tensor(&e)).unwrap().0, product);
        prop_assert_eq!(f.apply(&d.normal_form()).unwrap(), f.apply(&d).unwrap());
    }
}
