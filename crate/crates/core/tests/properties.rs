mod common;

use forkcalc::elementary::{self, ElementaryKind, Support};
use forkcalc::farey::{self, MappingClass, Slope};
use forkcalc::forking;
use forkcalc::freewords::{Letter, Word};
use forkcalc::io;
use forkcalc::stallings::CoreGraph;
use forkcalc::whitehead::{self, solve_common_conjugator, FnAutomorphism, WhiteheadAut};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;

fn word(rank: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank as Letter, any::<bool>()), 0..=max_len)
        .prop_map(move |v| Word::from_letters(rank, v.into_iter().map(|(x, s)| if s { x } else { -x })).unwrap())
}

fn slope() -> impl Strategy<Value = Slope> {
    (-30i128..=30, 0i128..=30)
        .prop_filter("coprime", |(p, q)| gcd(*p, *q) == 1)
        .prop_map(|(p, q)| Slope::new(p, q).unwrap())
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn random_automorphism(rank: u32, steps: usize, rng: &mut impl Rng) -> FnAutomorphism {
    let cuts = WhiteheadAut::all_cuts(rank);
    (0..steps).fold(FnAutomorphism::identity(rank), |acc, _| {
        cuts.choose(rng).unwrap().to_automorphism().compose(&acc)
    })
}

fn restricts_to_conjugations(g: &forkcalc::graphofgroups::MarkedGraphOfGroups, a: &elementary::ElementaryAut) -> bool {
    let skip = match a.support() {
        Some(Support::Vertex(v)) => Some(v),
        _ => None,
    };
    g.vertices.iter().filter(|v| Some(v.id) != skip).all(|v| {
        let pairs: Vec<(Word, Word)> = v.generators.iter().map(|x| (x.clone(), a.realization().apply(x))).collect();
        solve_common_conjugator(&pairs).is_some()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_inverse(u in word(3, 12), v in word(3, 12)) {
        prop_assert_eq!((&u * &v).inverse(), &v.inverse() * &u.inverse());
        prop_assert!((&u * &u.inverse()).is_identity());
    }

    #[test]
    fn product_associative(u in word(2, 8), v in word(2, 8), x in word(2, 8)) {
        prop_assert_eq!(&(&u * &v) * &x, &u * &(&v * &x));
    }

    #[test]
    fn conjugator_solves(u in word(3, 10), g in word(3, 6)) {
        let v = u.conjugate_by(&g);
        prop_assert!(u.is_conjugate(&v));
        let h = u.conjugator_to(&v).unwrap();
        prop_assert_eq!(u.conjugate_by(&h), v);
    }

    #[test]
    fn root_power(u in word(2, 6), k in 1i64..4) {
        prop_assume!(!u.is_identity());
        let w = u.pow(k);
        let (r, e) = w.max_root().unwrap();
        prop_assert_eq!(r.pow(e as i64), w.clone());
        prop_assert!(e as i64 % k == 0);
        prop_assert!(r.commutes_with(&u));
    }

    #[test]
    fn core_graph_express(gens in prop::collection::vec(word(3, 5), 1..4), idx in prop::collection::vec((0usize..4, any::<bool>()), 0..6)) {
        let h = CoreGraph::from_generators(3, &gens);
        let mut w = Word::identity(3);
        for (i, s) in idx {
            let x = &gens[i % gens.len()];
            w = &w * &if s { x.clone() } else { x.inverse() };
        }
        prop_assert!(h.contains(&w));
        let formal = h.express(&w).unwrap();
        prop_assert_eq!(h.evaluate(&formal), w);
        prop_assert!(h.same_subgroup(&CoreGraph::from_generators(3, &h.free_basis())));
        prop_assert!(h.rank() <= gens.len());
    }

    #[test]
    fn intersection_is_contained(g1 in prop::collection::vec(word(2, 4), 1..3), g2 in prop::collection::vec(word(2, 4), 1..3)) {
        let (h, k) = (CoreGraph::from_generators(2, &g1), CoreGraph::from_generators(2, &g2));
        let i = h.intersect(&k);
        for x in i.free_basis() {
            prop_assert!(h.contains(&x) && k.contains(&x));
        }
    }

    #[test]
    fn minimize_never_grows(t in prop::collection::vec(word(3, 6), 1..3), seed in any::<u64>()) {
        let phi = random_automorphism(3, 3, &mut rng(seed));
        let image = phi.apply_tuple(&t);
        let (m, psi) = whitehead::minimize(3, &image).unwrap();
        prop_assert!(forkcalc::freewords::total_cyclic_len(&m) <= forkcalc::freewords::total_cyclic_len(&image));
        prop_assert!(psi.compose(&psi.inverse()).is_identity());
        let (m0, _) = whitehead::minimize(3, &t).unwrap();
        prop_assert_eq!(forkcalc::freewords::total_cyclic_len(&m), forkcalc::freewords::total_cyclic_len(&m0));
    }

    #[test]
    fn basis_membership_is_invariant(t in prop::collection::vec(word(2, 4), 1..3), seed in any::<u64>()) {
        let phi = random_automorphism(2, 3, &mut rng(seed));
        let before = whitehead::is_part_of_basis(2, &t).unwrap();
        let after = whitehead::is_part_of_basis(2, &phi.apply_tuple(&t)).unwrap();
        prop_assert_eq!(before.is_some(), after.is_some());
        if let Some(psi) = before {
            let img = psi.apply_tuple(&t);
            prop_assert!(img.iter().all(|w| w.len() == 1));
        }
    }

    #[test]
    fn split_search_symmetric(b in word(3, 3), c in word(3, 3), a in prop::option::of(word(3, 2))) {
        prop_assume!(!b.is_identity() && !c.is_identity());
        let a: Vec<Word> = a.into_iter().filter(|x| !x.is_identity()).collect();
        prop_assume!(a.is_empty() || whitehead::is_part_of_basis(3, &a).unwrap().is_some());
        let d1 = whitehead::independent_split_search(3, &a, std::slice::from_ref(&b), std::slice::from_ref(&c), 3).unwrap();
        let d2 = whitehead::independent_split_search(3, &a, std::slice::from_ref(&c), std::slice::from_ref(&b), 3).unwrap();
        prop_assert_eq!(d1.verdict(), d2.verdict());
        if matches!(d1, whitehead::SplitDecision::Independent(_)) {
            prop_assert!(whitehead::verify_split_witness(3, &d1, &a, &[b], &[c]));
        }
    }

    #[test]
    fn farey_metric(s in slope(), t in slope(), u in slope()) {
        let d = farey::distance;
        prop_assert_eq!(d(s, t), d(t, s));
        prop_assert_eq!(d(s, t) == 0, s == t);
        prop_assert!(d(s, u) <= d(s, t) + d(t, u));
        prop_assert_eq!(d(s, t) == 1, farey::adjacent(s, t));
    }

    #[test]
    fn farey_isometry(s in slope(), t in slope(), k in 0u32..4, l in 0u32..4) {
        let m = MappingClass::new([[1, 1], [0, 1]]).unwrap().pow(k).mul(&MappingClass::new([[1, 0], [1, 1]]).unwrap().pow(l));
        prop_assert_eq!(farey::distance(farey::act(&m, s), farey::act(&m, t)), farey::distance(s, t));
    }

    #[test]
    fn farey_witnesses_separate(s in slope(), r in 0u32..3, n in 1u32..5) {
        let ws = farey::disjoint_ball_witnesses(s, r, n);
        prop_assert_eq!(ws.len(), n as usize);
        let imgs: Vec<Slope> = ws.iter().map(|m| farey::act(m, s)).collect();
        for i in 0..imgs.len() {
            for j in i + 1..imgs.len() {
                prop_assert!(farey::distance(imgs[i], imgs[j]) > 2 * r);
            }
        }
    }

    #[test]
    fn express_round_trip(seed in any::<u64>(), len in 0usize..10) {
        let mut r = rng(seed);
        let g = decomposition(&mut r);
        let w = random_word(g.rank, len, &mut r);
        let nf = g.express(&w).unwrap();
        prop_assert_eq!(nf.evaluate(&g), w);
    }

    #[test]
    fn cylinders_validate(seed in any::<u64>()) {
        let g = decomposition(&mut rng(seed)).tree_of_cylinders().unwrap();
        prop_assert!(g.validate().all_passed());
        let again = g.tree_of_cylinders().unwrap();
        prop_assert_eq!(again.vertices.len(), g.vertices.len());
        prop_assert_eq!(again.edges.len(), g.edges.len());
    }

    #[test]
    fn elementary_restricts_to_conjugation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = decomposition(&mut r);
        let a = random_elementary(&g, &mut r);
        prop_assert!(restricts_to_conjugations(&g, &a));
        if let ElementaryKind::DehnTwist { .. } = a.kind() {
            let inv = a.realization().inverse();
            prop_assert!(a.realization().compose(&inv).is_identity());
        }
    }

    #[test]
    fn twist_exponents_add(seed in any::<u64>(), j in -3i64..=3, k in -3i64..=3) {
        let mut r = rng(seed);
        let g = decomposition(&mut r);
        let e = g.edges.choose(&mut r).unwrap().id;
        let (root, _) = g.edge(e).unwrap().image_from.max_root().unwrap();
        let tw = |n: i64| elementary::dehn_twist(&g, e, &root.pow(n)).unwrap();
        let lhs = tw(j).realization().compose(tw(k).realization());
        prop_assert_eq!(lhs, tw(j + k).realization().clone());
    }

    #[test]
    fn normal_form_is_canonical_on_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = decomposition(&mut r);
        let a = random_elementary(&g, &mut r);
        let b = random_elementary(&g, &mut r);
        let (z, f) = elementary::normal_form(&g, &[a.clone(), b.clone()]).unwrap();
        let rebuilt = FnAutomorphism::inner(&z).compose(&elementary::compose(g.rank, &f));
        prop_assert_eq!(rebuilt, elementary::compose(g.rank, &[a, b]));
        let (z2, f2) = elementary::normal_form(&g, &f).unwrap();
        prop_assert!(z2.is_identity());
        prop_assert_eq!(f2.len(), f.len());
    }

    #[test]
    fn jsj_verdict_symmetric(b in word(4, 3), c in word(4, 3)) {
        prop_assume!(!b.is_identity() && !c.is_identity());
        let g = f4_pointed();
        let a = vec![w(4, "abAB"), w(4, "cdCD")];
        let v1 = forking::independent_over_jsj(&g, &a, std::slice::from_ref(&b), std::slice::from_ref(&c)).unwrap();
        let v2 = forking::independent_over_jsj(&g, &a, &[c], &[b]).unwrap();
        prop_assert_eq!(v1.verdict, v2.verdict);
    }

    #[test]
    fn acl_idempotent(u in word(3, 5), k in 1i64..4) {
        prop_assume!(!u.is_identity());
        let r = forking::acl_cyclic(&[u.pow(k)]).unwrap();
        let again = forking::acl_cyclic(std::slice::from_ref(&r)).unwrap();
        prop_assert!(again == r || again == r.inverse());
        prop_assert!(u.commutes_with(&r));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = decomposition(&mut r);
        let v = io::graph_to_json(&g);
        prop_assert_eq!(&io::graph_from_json(&v).unwrap(), &g);
        let a = random_elementary(&g, &mut r);
        let j = io::elementary_to_json(&a);
        let back = io::elementary_from_json(&g, &j, "$").unwrap();
        prop_assert_eq!(back.realization(), a.realization());
        let x = random_word(g.rank, 5, &mut r);
        prop_assert_eq!(io::word_from_json(g.rank, &io::word_to_json(&x), "$").unwrap(), x);
    }
}
