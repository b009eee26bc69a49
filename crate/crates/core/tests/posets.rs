use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use workbench_core::exactla::{rank, FieldKind, Matrix, Scalar};
use workbench_core::posets::*;

/// Reduced Betti numbers over ℚ from dense boundary matrices of the order
/// complex, enumerating chains directly from the order relation.
fn dense_betti(p: &FinitePoset) -> Vec<usize> {
    let n = p.len();
    let mut chains: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    loop {
        let last = chains.last().unwrap();
        let mut next = Vec::new();
        for c in last {
            for v in 0..n {
                if c.last().is_none_or(|&u| p.lt(u, v)) {
                    let mut d = c.clone();
                    d.push(v);
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        chains.push(next);
    }
    // chains[j] holds the (j−1)-simplices.
    let ranks: Vec<usize> = (0..chains.len())
        .map(|j| {
            if j == 0 {
                return 0;
            }
            let mut m = Matrix::zeros(FieldKind::Rational, chains[j].len(), chains[j - 1].len());
            for (r, c) in chains[j].iter().enumerate() {
                for i in 0..c.len() {
                    let mut face = c.clone();
                    face.remove(i);
                    let col = chains[j - 1].iter().position(|f| *f == face).unwrap();
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    m.set(r, col, Scalar::from_int(FieldKind::Rational, sign)).unwrap();
                }
            }
            rank(&m)
        })
        .collect();
    (0..chains.len())
        .map(|j| chains[j].len() - ranks[j] - ranks.get(j + 1).copied().unwrap_or(0))
        .collect()
}

fn rational_betti(p: &FinitePoset) -> Vec<usize> {
    p.reduced_homology(Coefficients::Field(FieldKind::Rational)).groups.iter().map(|g| g.rank).collect()
}

/// Nonzero reduced homology groups and connectivity.
fn homology(p: &FinitePoset) -> (String, Connectivity) {
    let h = p.reduced_homology(Coefficients::Integers);
    (h.summary(), h.connectivity)
}

fn arb_poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (0..=max, 0.0f64..0.8, any::<u64>()).prop_map(|(n, d, seed)| random_poset(&mut ChaCha8Rng::seed_from_u64(seed), n, d, "p"))
}

/// The 6-vertex triangulation of ℝP², as the face poset of its simplices.
fn rp2() -> FinitePoset {
    let tris = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
    ];
    let mut faces: Vec<u32> = Vec::new();
    for t in tris {
        let mask = t.iter().map(|&v| 1u32 << v).sum::<u32>();
        for sub in 1..8u32 {
            let f = (0..3).filter(|i| sub >> i & 1 == 1).map(|i| 1u32 << t[i]).sum::<u32>();
            debug_assert!(f & mask == f);
            if !faces.contains(&f) {
                faces.push(f);
            }
        }
    }
    faces.sort_unstable();
    let names = faces.iter().map(|f| format!("{f:06b}")).collect();
    FinitePoset::from_order(names, |a, b| faces[a] & !faces[b] == 0).unwrap()
}

#[test]
fn boundary_of_simplex_is_a_sphere() {
    for p in 1..=5usize {
        let poset = FinitePoset::proper_subsets(p + 1);
        let h = poset.reduced_homology(Coefficients::Integers);
        for g in &h.groups {
            let expected = usize::from(g.degree == p as i64 - 1);
            assert_eq!((g.rank, g.torsion.len()), (expected, 0), "p = {p}, degree {}", g.degree);
        }
        assert_eq!(h.connectivity, Connectivity::Finite(p as i64 - 2));
    }
}

#[test]
fn triangle_boundary_matches_dense_oracle() {
    let p = FinitePoset::proper_subsets(3);
    assert_eq!(dense_betti(&p), vec![0, 0, 1]);
    assert_eq!(rational_betti(&p), vec![0, 0, 1]);
}

#[test]
fn projective_plane_has_two_torsion() {
    let p = rp2();
    assert_eq!(p.len(), 31);
    let z = p.reduced_homology(Coefficients::Integers);
    assert_eq!(z.summary(), "H1=Z/2");
    assert_eq!(z.connectivity, Connectivity::Finite(0));
    assert_eq!(p.reduced_homology(Coefficients::Field(FieldKind::Rational)).connectivity, Connectivity::Acyclic);
    let f2 = p.reduced_homology(Coefficients::Field(FieldKind::Prime(2)));
    assert_eq!(f2.summary(), "H1=Z, H2=Z");
    assert_eq!(z.euler_characteristic(), p.order_complex().reduced_euler_characteristic());
}

#[test]
fn point_into_two_points_fails_both_sides() {
    let f = PosetMap::new(FinitePoset::antichain(1), FinitePoset::antichain(2), vec![0]).unwrap();
    let r = check_poset_map_theorem(&f, &WeightFunction::constant(f.target(), 1), 0, Variant::I).unwrap();
    assert_eq!(r.map_connectivity, Connectivity::Finite(-1));
    assert!(!r.conclusion_holds);
    assert!(!r.hypotheses_hold);
    // The empty fiber over the second point needs t ≤ 0, its empty link needs t ≥ 1.
    let bad: Vec<&str> = r.violations().map(|e| e.element.as_str()).collect();
    assert_eq!(bad, vec!["1"]);
}

#[test]
fn nerve_with_a_point_cover() {
    let x = FinitePoset::chain(4);
    let a = FinitePoset::antichain(1);
    let f = CoverFunctor::new(&x, &a, vec![(0..4).collect()]).unwrap();
    for n in -1..=3 {
        let r = check_nerve_theorem(&x, &a, &f, n, &WeightFunction::constant(&x, 0), &WeightFunction::constant(&a, 0)).unwrap();
        assert!(r.hypotheses_hold, "n = {n}");
        assert!(r.conclusion_holds);
    }
}

#[test]
fn nerve_of_two_contractible_pieces() {
    // X is two chains a0 < a1 and b0 < b1 glued along nothing; covering it
    // by the two pieces makes 𝒜 two points, which is not 0-connected.
    let x = FinitePoset::parse("a0 < a1\nb0 < b1").unwrap();
    let a = FinitePoset::antichain(2);
    let f = parse_cover(&x, &a, "0 : a0 a1\n1 : b0 b1").unwrap();
    let tx = WeightFunction::constant(&x, 0);
    let ta = WeightFunction::constant(&a, 0);
    let r = check_nerve_theorem(&x, &a, &f, 1, &tx, &ta).unwrap();
    assert!(!r.hypothesis_i_holds);
    assert!(!r.conclusion_holds);
    let r = check_nerve_theorem(&x, &a, &f, 0, &tx, &ta).unwrap();
    assert!(r.hypotheses_hold && r.conclusion_holds);
}

#[test]
fn full_map_campaign() {
    let s = run_campaign(FuzzConfig {
        campaign: Campaign::PosetMap,
        count: 10_000,
        max_size: 12,
        seed: 20_240_601,
    });
    assert!(s.passed(), "{:#?}", s.counterexamples);
    assert!(s.hypotheses_held >= 2_000, "only {} instances met the hypotheses", s.hypotheses_held);
}

#[test]
fn full_nerve_campaign() {
    let s = run_campaign(FuzzConfig {
        campaign: Campaign::Nerve,
        count: 10_000,
        max_size: 12,
        seed: 20_240_602,
    });
    assert!(s.passed(), "{:#?}", s.counterexamples);
    assert!(s.hypotheses_held >= 2_000, "only {} instances met the hypotheses", s.hypotheses_held);
}

fn arb_cover() -> impl Strategy<Value = (FinitePoset, FinitePoset, CoverFunctor)> {
    any::<u64>().prop_map(|seed| {
        let inst = NerveInstance::random(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        let f = inst.functor();
        (inst.x, inst.a, f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cones_are_acyclic(p in arb_poset(9), top in any::<bool>()) {
        let n = p.len();
        let mut names: Vec<String> = p.names().to_vec();
        names.push("apex".into());
        let cone = FinitePoset::from_order(names, |a, b| {
            if a == n || b == n { (a == n) != top || a == b } else { p.le(a, b) }
        }).unwrap();
        let extreme = if top { cone.maximum() } else { cone.minimum() };
        prop_assert_eq!(extreme, Some(n));
        prop_assert_eq!(cone.connectivity(), Connectivity::Acyclic);
    }

    #[test]
    fn euler_characteristic_matches_chain_count(p in arb_poset(10)) {
        let h = p.reduced_homology(Coefficients::Integers);
        prop_assert_eq!(h.euler_characteristic(), p.order_complex().reduced_euler_characteristic());
    }

    #[test]
    fn sparse_homology_matches_dense_oracle(p in arb_poset(7)) {
        prop_assert_eq!(rational_betti(&p), dense_betti(&p));
    }

    #[test]
    fn integral_ranks_match_rational(p in arb_poset(9)) {
        let z: Vec<usize> = p.reduced_homology(Coefficients::Integers).groups.iter().map(|g| g.rank).collect();
        prop_assert_eq!(z, rational_betti(&p));
    }

    #[test]
    fn text_round_trip(p in arb_poset(10)) {
        prop_assert_eq!(FinitePoset::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn wreath_counts_and_projections((x, a, f) in arb_cover()) {
        let w = wreath_poset(&x, &a, &f);
        let total: usize = (0..a.len()).map(|i| f.image(i).len()).sum();
        prop_assert_eq!(w.poset.len(), total);
        // PosetMap::new re-validates order preservation.
        prop_assert!(PosetMap::new(w.poset.clone(), a.opposite(), w.pi1.values().to_vec()).is_ok());
        prop_assert!(PosetMap::new(w.poset.clone(), x.clone(), w.pi2.values().to_vec()).is_ok());
    }

    #[test]
    fn wreath_fibers_have_the_homology_of_their_retracts((x, a, f) in arb_cover()) {
        let w = wreath_poset(&x, &a, &f);
        for ai in 0..a.len() {
            let fiber = w.poset.induced(&w.pi1_fiber(ai));
            prop_assert_eq!(homology(&fiber), homology(&x.induced(f.image(ai))));
        }
        for xi in 0..x.len() {
            let fiber = w.poset.induced(&w.pi2_fiber(xi));
            prop_assert_eq!(homology(&fiber), homology(&a.induced(&f.a_x(xi)).opposite()));
        }
    }

    #[test]
    fn identity_maps_are_acyclic(p in arb_poset(9)) {
        prop_assert_eq!(PosetMap::identity(&p).connectivity(), Connectivity::Acyclic);
    }
}

#[test]
fn wreath_over_point_is_the_image() {
    let x = FinitePoset::proper_subsets(3);
    let a = FinitePoset::antichain(1);
    let f = CoverFunctor::new(&x, &a, vec![(0..x.len()).collect()]).unwrap();
    let w = wreath_poset(&x, &a, &f);
    assert_eq!(
        w.poset.reduced_homology(Coefficients::Integers),
        x.reduced_homology(Coefficients::Integers)
    );
    assert_eq!(w.poset.name(0), format!("(0,{})", x.name(0)));
}
