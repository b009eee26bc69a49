use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use workbench_core::cdga::*;
use workbench_core::exactla::{FieldKind, Matrix, Scalar};
use workbench_core::freealg::{BoxBounds, Generator};
use workbench_core::grading::{Bidegree, VanishingLine};

fn value(s: &Scalar) -> BigRational {
    match s {
        Scalar::Rational(q) => q.clone(),
        Scalar::Residue { value, .. } => BigRational::from_integer(BigInt::from(*value)),
    }
}

/// Zero in the field: exactly over ℚ, as an integer divisible by ℓ over 𝔽ℓ.
fn vanishes(field: FieldKind, q: &BigRational) -> bool {
    match field {
        FieldKind::Rational => q.is_zero(),
        FieldKind::Prime(p) => q.is_integer() && q.numer().mod_floor(&BigInt::from(p)).is_zero(),
    }
}

/// Product of two exponent vectors by sorting the concatenated letter lists,
/// one sign flip per transposition of two odd letters.
fn multiply(a: &[u32], b: &[u32], odd: &[bool], exterior: bool) -> Option<(i64, Vec<u32>)> {
    let letters = |e: &[u32]| -> Vec<usize> { e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect() };
    let mut word = letters(a);
    word.extend(letters(b));
    let mut sign = 1;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                if odd[word[j]] && odd[word[j + 1]] {
                    sign = -sign;
                }
                word.swap(j, j + 1);
            }
        }
    }
    let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
    if exterior && prod.iter().zip(odd).any(|(&e, &o)| o && e > 1) {
        return None;
    }
    Some((sign, prod))
}

/// Column `col` of δ at `bd`, as monomial → coefficient.
fn delta_of(a: &Cdga, bd: Bidegree, col: usize) -> BTreeMap<Vec<u32>, BigRational> {
    if bd.d == 0 {
        return BTreeMap::new();
    }
    let m = a.differential_matrix(bd).unwrap();
    let dst = a.monomial_basis(Bidegree::new(bd.g, bd.d - 1));
    (0..m.rows()).map(|r| (dst[r].clone(), value(&m.get(r, col)))).filter(|e| !e.1.is_zero()).collect()
}

fn add_product(
    acc: &mut BTreeMap<Vec<u32>, BigRational>,
    c: &BigRational,
    a: &[u32],
    b: &[u32],
    odd: &[bool],
    exterior: bool,
) {
    if let Some((s, p)) = multiply(a, b, odd, exterior) {
        *acc.entry(p).or_insert_with(BigRational::zero) += c * BigRational::from_integer(s.into());
    }
}

fn odd_flags(a: &Cdga) -> Vec<bool> {
    a.generators().iter().map(|g| g.d % 2 == 1).collect()
}

/// δ(m·n) = δm·n + (−1)^{d(m)} m·δn for the i-th and j-th monomials of two bidegrees.
fn leibniz_holds(a: &Cdga, b1: Bidegree, i: usize, b2: Bidegree, j: usize) -> bool {
    let field = a.field();
    let exterior = field != FieldKind::Prime(2);
    let odd = odd_flags(a);
    let (m, n) = (&a.monomial_basis(b1)[i], &a.monomial_basis(b2)[j]);
    let Some((s, prod)) = multiply(m, n, &odd, exterior) else { return true };
    let total = Bidegree::new(b1.g + b2.g, b1.d + b2.d);
    let col = a.monomial_basis(total).iter().position(|x| *x == prod).unwrap();
    let mut lhs: BTreeMap<Vec<u32>, BigRational> = delta_of(a, total, col);
    for v in lhs.values_mut() {
        *v *= BigRational::from_integer(s.into());
    }
    let mut rhs = BTreeMap::new();
    for (x, c) in delta_of(a, b1, i) {
        add_product(&mut rhs, &c, &x, n, &odd, exterior);
    }
    let koszul = BigRational::from_integer(if b1.d.is_multiple_of(2) { 1.into() } else { (-1).into() });
    for (y, c) in delta_of(a, b2, j) {
        add_product(&mut rhs, &(&c * &koszul), m, &y, &odd, exterior);
    }
    for (k, v) in rhs {
        *lhs.entry(k).or_insert_with(BigRational::zero) -= v;
    }
    lhs.values().all(|v| vanishes(field, v))
}

fn leibniz_algebras() -> &'static Vec<Cdga> {
    static CELL: OnceLock<Vec<Cdga>> = OnceLock::new();
    CELL.get_or_init(|| {
        let b = BoxBounds::new(6, 6);
        vec![
            vanish_a(FieldKind::Rational, b).unwrap().base().clone(),
            vanish_b(FieldKind::Rational, b).unwrap().base().clone(),
            a_algebra(3, b).unwrap(),
            a_algebra(5, b).unwrap(),
            a_algebra(2, b).unwrap(),
        ]
    })
}

fn nonempty_cells(a: &Cdga, g_max: u32, d_max: u32) -> Vec<(Bidegree, usize)> {
    let mut out = Vec::new();
    for g in 1..=g_max {
        for d in 0..=d_max {
            let n = a.monomial_basis(Bidegree::new(g, d)).len();
            if n > 0 {
                out.push((Bidegree::new(g, d), n));
            }
        }
    }
    out
}

fn matmul_is_zero(field: FieldKind, a: &Matrix, b: &Matrix) -> bool {
    (0..a.rows()).all(|i| {
        (0..b.cols()).all(|j| {
            let s: BigRational = (0..a.cols()).map(|k| value(&a.get(i, k)) * value(&b.get(k, j))).sum();
            vanishes(field, &s)
        })
    })
}

#[test]
fn differential_squares_to_zero_on_every_preset() {
    for name in ["vanishA", "vanishB", "intstab-f2", "intstab-fl(3)", "intstab-fl(5)", "A-algebra-fl(2)", "A-algebra-fl(3)", "koszul-q", "koszul-f2", "koszul-fl(3)"] {
        let p = build_preset(name, None, None).unwrap();
        let b = p.default_box;
        for g in 0..=b.g_max {
            for d in 2..=b.d_max {
                let hi = p.complex.differential_matrix(Bidegree::new(g, d)).unwrap();
                let lo = p.complex.differential_matrix(Bidegree::new(g, d - 1)).unwrap();
                assert!(matmul_is_zero(p.complex.field(), &lo, &hi), "{name} at ({g},{d})");
            }
        }
    }
}

#[test]
fn euler_characteristic_of_complete_columns() {
    // A tall box holds every Lie word of genus ≤ 6, so each genus column is a
    // whole complex and the truncation at the top row is empty.
    let bounds = BoxBounds::new(6, 24);
    for m in [vanish_a(FieldKind::Rational, bounds).unwrap(), vanish_b(FieldKind::Rational, bounds).unwrap(), intstab(3, bounds).unwrap()] {
        let chains = m.chain_dims(bounds);
        let homology = m.homology_table(bounds).unwrap();
        for g in 0..=6 {
            assert_eq!(chains[&Bidegree::new(g, 24)], 0);
            assert_eq!(chains[&Bidegree::new(g, 23)], 0);
            let chi = |f: &dyn Fn(Bidegree) -> u64| (0..=24).map(|d| if d % 2 == 0 { f(Bidegree::new(g, d)) as i64 } else { -(f(Bidegree::new(g, d)) as i64) }).sum::<i64>();
            assert_eq!(chi(&|b| chains[&b]), chi(&|b| homology.get(b).unwrap()), "genus {g}");
        }
    }
}

#[test]
fn zero_differential_homology_is_the_monomial_count() {
    let gens = vec![
        Generator::new("a", 1, 0),
        Generator::new("b", 1, 1),
        Generator::new("c", 2, 1),
        Generator::new("e", 2, 2),
    ];
    for field in [FieldKind::Rational, FieldKind::Prime(2), FieldKind::Prime(7)] {
        let exterior = field != FieldKind::Prime(2);
        let bounds = BoxBounds::new(5, 5);
        let table = DgModule::free(Cdga::new(field, gens.clone()).unwrap()).homology_table(bounds).unwrap();
        // Oracle: count exponent vectors directly.
        let mut counts: BTreeMap<Bidegree, u64> = BTreeMap::new();
        for e0 in 0..=5u32 {
            for e1 in 0..=5u32 {
                for e2 in 0..=5u32 {
                    for e3 in 0..=5u32 {
                        if exterior && (e1 > 1 || e2 > 1) {
                            continue;
                        }
                        let bd = Bidegree::new(e0 + e1 + 2 * e2 + 2 * e3, e1 + e2 + 2 * e3);
                        if bd.g <= 5 && bd.d <= 5 {
                            *counts.entry(bd).or_insert(0) += 1;
                        }
                    }
                }
            }
        }
        for (bd, dim) in &table.dims {
            assert_eq!(*dim, counts.get(bd).copied().unwrap_or(0), "{field} at {bd:?}");
        }
    }
}

#[test]
fn vanish_a_certification_is_field_independent_away_from_small_primes() {
    let line = VanishingLine::through_origin(BigRational::new(3.into(), 4.into())).unwrap();
    let b = BoxBounds::new(8, 8);
    let q = vanish_a(FieldKind::Rational, b).unwrap().verify_vanishing(&line, b).unwrap();
    assert!(q.is_certified());
    for l in [5u64, 7, 11] {
        let r = vanish_a(FieldKind::Prime(l), b).unwrap().verify_vanishing(&line, b).unwrap();
        assert_eq!(r.is_certified(), q.is_certified(), "𝔽{l}");
        assert_eq!(r.table.dims, q.table.dims, "𝔽{l}");
    }
}

#[test]
fn a_algebra_first_rows() {
    for (l, h21) in [(2u64, 1u64), (3, 0), (5, 1)] {
        let p = build_preset(&format!("A-algebra-fl({l})"), None, None).unwrap();
        let t = p.complex.homology_table(p.default_box).unwrap();
        assert_eq!(t.get(Bidegree::new(2, 1)), Some(h21), "𝔽{l}");
        for g in 3..=6 {
            assert_eq!(t.get(Bidegree::new(g, 1)), Some(0), "𝔽{l} at ({g},1)");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn leibniz_rule(which in 0usize..5, c1 in any::<prop::sample::Index>(), c2 in any::<prop::sample::Index>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let a = &leibniz_algebras()[which];
        let cells = nonempty_cells(a, 5, 5);
        let (b1, n1) = cells[c1.index(cells.len())];
        let fits: Vec<(Bidegree, usize)> = cells.iter().copied().filter(|(b, _)| b.g + b1.g <= 6 && b.d + b1.d <= 6).collect();
        prop_assume!(!fits.is_empty());
        let (b2, n2) = fits[c2.index(fits.len())];
        prop_assert!(leibniz_holds(a, b1, i.index(n1), b2, j.index(n2)), "{:?} · {:?}", b1, b2);
    }
}
