use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use workbench_core::exactla::{rank, FieldKind, Matrix, Scalar};
use workbench_core::freealg::*;
use workbench_core::grading::Bidegree;

#[path = "support/lie_oracle.rs"]
mod lie_oracle;

use lie_oracle::{relation_quotient, Bd};

fn basis_counts(gens: &[Generator], bounds: BoxBounds) -> BTreeMap<Bd, usize> {
    let mut out = BTreeMap::new();
    for w in free_graded_lie_basis(gens, bounds).unwrap() {
        *out.entry((w.bidegree.g, w.bidegree.d)).or_insert(0) += 1;
    }
    out
}

fn figure_generators() -> Vec<Generator> {
    vec![Generator::new("σ", 1, 0), Generator::new("λ", 3, 2), Generator::new("ρ", 2, 2)]
}

fn compare_with_oracle(gens: &[Generator], g_max: u32, d_max: u32) {
    let bd: Vec<Bd> = gens.iter().map(|x| (x.g, x.d)).collect();
    assert_eq!(basis_counts(gens, BoxBounds::new(g_max, d_max)), relation_quotient(&bd, g_max, d_max));
}

#[test]
fn figure_generators_match_relation_quotient() {
    compare_with_oracle(&figure_generators(), 6, 6);
}

#[test]
fn figure_box_words() {
    let names: Vec<String> = free_graded_lie_basis(&figure_generators(), BoxBounds::new(4, 3))
        .unwrap()
        .into_iter()
        .map(|w| w.name)
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    let mut want = ["σ", "[σ,σ]", "ρ", "λ", "[ρ,σ]", "[λ,σ]"].map(String::from).to_vec();
    want.sort();
    assert_eq!(sorted, want);
    assert!(!names.iter().any(|n| n == "[σ,[σ,σ]]"));
    // Only λ survives at (3,2): the triple self-bracket of σ vanishes.
    assert_eq!(relation_quotient(&[(1, 0), (3, 2), (2, 2)], 4, 3).get(&(3, 2)), Some(&1));
}

#[test]
fn single_generators_match_relation_quotient() {
    let sigma = [Generator::new("σ", 1, 0)];
    compare_with_oracle(&sigma, 8, 8);
    assert_eq!(relation_quotient(&[(1, 0)], 8, 8), BTreeMap::from([((1, 0), 1), ((2, 1), 1)]));
    let tau = [Generator::new("τ", 1, 1)];
    compare_with_oracle(&tau, 3, 4);
    assert_eq!(relation_quotient(&[(1, 1)], 3, 4), BTreeMap::from([((1, 1), 1)]));
}

#[test]
fn sigma_tau_match_relation_quotient() {
    compare_with_oracle(&[Generator::new("σ", 1, 0), Generator::new("τ", 1, 1)], 6, 6);
}

/// The basis words, expanded in the tensor algebra, are linearly independent.
#[test]
fn basis_words_are_independent_in_the_tensor_algebra() {
    let gens = figure_generators();
    let words = free_graded_lie_basis(&gens, BoxBounds::new(6, 6)).unwrap();
    let mut by_degree: BTreeMap<Bidegree, Vec<LiePoly>> = BTreeMap::new();
    for w in &words {
        by_degree.entry(w.bidegree).or_default().push(w.tree.to_poly(&gens));
    }
    for (bd, polys) in by_degree {
        let mut monomials: Vec<Vec<u16>> = polys.iter().flat_map(|p| p.terms().map(|t| t.0.clone())).collect();
        monomials.sort();
        monomials.dedup();
        let mut m = Matrix::zeros(FieldKind::Rational, polys.len(), monomials.len());
        for (r, p) in polys.iter().enumerate() {
            for (word, c) in p.terms() {
                let col = monomials.binary_search(word).unwrap();
                m.set(r, col, Scalar::Rational(c.clone())).unwrap();
            }
        }
        assert_eq!(rank(&m), polys.len(), "dependent basis words at {bd:?}");
    }
}

/// Count monomials in the given generators by enumerating exponent vectors.
/// Generators flagged exterior get exponent at most one.
fn enumerate_monomials(gens: &[(Bd, bool)], g_max: u32, d_max: u32) -> BTreeMap<Bd, u64> {
    fn go(gens: &[(Bd, bool)], k: usize, g: u32, d: u32, bounds: Bd, out: &mut BTreeMap<Bd, u64>) {
        if k == gens.len() {
            if g > 0 {
                *out.entry((g, d)).or_insert(0) += 1;
            }
            return;
        }
        let ((gg, gd), exterior) = gens[k];
        let mut e = 0;
        loop {
            let (ng, nd) = (g + e * gg, d + e * gd);
            if ng > bounds.0 || nd > bounds.1 || (exterior && e > 1) {
                break;
            }
            go(gens, k + 1, ng, nd, bounds, out);
            e += 1;
        }
    }
    let mut out = BTreeMap::new();
    go(gens, 0, 0, 0, (g_max, d_max), &mut out);
    out
}

fn nonzero(dims: &BTreeMap<Bidegree, u64>) -> BTreeMap<Bd, u64> {
    dims.iter().filter(|e| *e.1 > 0).map(|(b, v)| ((b.g, b.d), *v)).collect()
}

#[test]
fn rational_betti_by_monomial_enumeration() {
    for (gens, g_max, d_max) in [
        (figure_generators(), 6, 6),
        (vec![Generator::new("σ", 1, 0), Generator::new("τ", 1, 1)], 6, 4),
    ] {
        let bounds = BoxBounds::new(g_max, d_max);
        let table = free_gerstenhaber_betti(&gens, bounds).unwrap();
        let lie: Vec<(Bd, bool)> = free_graded_lie_basis(&gens, bounds)
            .unwrap()
            .iter()
            .map(|w| ((w.bidegree.g, w.bidegree.d), w.bidegree.d % 2 == 1))
            .collect();
        assert_eq!(nonzero(&table.dims), enumerate_monomials(&lie, g_max, d_max));
    }
}

#[test]
fn free_algebra_degree_one_row() {
    let gens = [Generator::new("σ", 1, 0), Generator::new("τ", 1, 1)];
    let t = free_gerstenhaber_betti(&gens, BoxBounds::new(6, 1)).unwrap();
    let row: Vec<u64> = (1..=6).map(|g| t.get(Bidegree::new(g, 1)).unwrap()).collect();
    assert_eq!(row, vec![1, 2, 2, 2, 2, 2]);
}

#[test]
fn f2_betti_by_monomial_enumeration() {
    for gens in [vec![Generator::new("σ", 1, 0)], figure_generators(), vec![Generator::new("σ", 1, 0), Generator::new("τ", 1, 1)]] {
        let bounds = BoxBounds::new(5, 5);
        let table = betti_table_f2(&gens, bounds).unwrap();
        let towers: Vec<(Bd, bool)> = cohen_generators_f2(&gens, bounds)
            .unwrap()
            .iter()
            .map(|c| ((c.bidegree.g, c.bidegree.d), false))
            .collect();
        assert_eq!(nonzero(&table.dims), enumerate_monomials(&towers, 5, 5));
    }
    let t = betti_table_f2(&[Generator::new("σ", 1, 0)], BoxBounds::new(5, 5)).unwrap();
    assert_eq!(t.get(Bidegree::new(2, 1)), Some(1));
    assert_eq!(t.get(Bidegree::new(2, 0)), Some(1));
}

#[test]
fn steep_generators_certify_in_a_large_box() {
    let gens = [Generator::new("a", 4, 3), Generator::new("b", 5, 4), Generator::new("c", 8, 6)];
    let xi = OperationSignature::new("ξ", 2, 1).unwrap();
    let c = slope_certify(&gens, &[xi], &BigRational::new(3.into(), 4.into()), BoxBounds::new(10, 10)).unwrap();
    assert!(c.is_certified());
}

/// slope(a) ≥ slope(b) for bidegrees with positive genus, without division.
fn slope_ge(a: Bidegree, b: Bidegree) -> bool {
    u64::from(a.d) * u64::from(b.g) >= u64::from(b.d) * u64::from(a.g)
}

fn arb_generators() -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec((1u32..4, 0u32..4), 1..4).prop_map(|v| {
        v.into_iter().enumerate().map(|(i, (g, d))| Generator::new(format!("x{i}"), g, d)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn random_generators_match_relation_quotient(gens in arb_generators()) {
        let bd: Vec<Bd> = gens.iter().map(|x| (x.g, x.d)).collect();
        prop_assert_eq!(basis_counts(&gens, BoxBounds::new(5, 5)), relation_quotient(&bd, 5, 5));
    }

    #[test]
    fn brackets_do_not_lower_slope(gens in arb_generators()) {
        for w in free_graded_lie_basis(&gens, BoxBounds::new(8, 8)).unwrap() {
            if let LieTree::Bracket(a, b) = &w.tree {
                let (ba, bb) = (a.bidegree(&gens), b.bidegree(&gens));
                let lower = if slope_ge(ba, bb) { bb } else { ba };
                prop_assert!(slope_ge(w.bidegree, lower), "{} at {:?}", w.name, w.bidegree);
            }
        }
    }

    #[test]
    fn operations_do_not_lower_slope(m in 1i64..5, a in 0i64..5, g in 1u32..20, d in 0u32..20) {
        let op = OperationSignature::new("op", m, a).unwrap();
        let bd = Bidegree::new(g, d);
        prop_assert!(slope_ge(op.apply(bd), bd));
    }

    #[test]
    fn certificates_are_sound(gens in arb_generators(), num in 0i64..4, den in 1i64..5) {
        let min = BigRational::new(num.into(), den.into());
        let ops = [OperationSignature::new("ξ", 2, 1).unwrap()];
        let cert = slope_certify(&gens, &ops, &min, BoxBounds::new(8, 8)).unwrap();
        let all_steep = gens.iter().all(|x| BigRational::new(i64::from(x.d).into(), i64::from(x.g).into()) >= min);
        prop_assert_eq!(cert.is_certified(), all_steep);
        if let SlopeCertificate::Certified { classes } = cert {
            for (bd, _) in classes {
                prop_assert!(BigRational::new(i64::from(bd.d).into(), i64::from(bd.g).into()) >= min);
            }
        }
    }

    #[test]
    fn towers_keep_dimension_above_weight(spec in prop::collection::vec((1u32..4, 0u32..4, 0u32..4), 1..4)) {
        let gens: Vec<Generator> = spec
            .iter()
            .enumerate()
            .map(|(i, &(g, d, r))| Generator::weighted(format!("x{i}"), g, d, r.min(d)))
            .collect();
        for c in cohen_generators_f2(&gens, BoxBounds::new(8, 8)).unwrap() {
            prop_assert!(c.bidegree.d >= c.weight, "{} at {:?} with weight {}", c.name, c.bidegree, c.weight);
            let mut bd = c.base.bidegree;
            for _ in 0..c.tower {
                bd = Bidegree::new(2 * bd.g, 2 * bd.d + 1);
            }
            prop_assert_eq!(bd, c.bidegree);
        }
    }
}
