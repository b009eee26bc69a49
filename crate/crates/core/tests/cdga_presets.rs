use num_rational::BigRational;
use workbench_core::cdga::build_preset;
use workbench_core::exactla::FieldKind;
use workbench_core::freealg::BoxBounds;
use workbench_core::grading::{Bidegree, VanishingLine};

fn line(n: i64, d: i64) -> VanishingLine {
    VanishingLine::through_origin(BigRational::new(n.into(), d.into())).unwrap()
}

fn certify(name: &str, slope: (i64, i64)) {
    let p = build_preset(name, None, None).unwrap();
    let r = p.complex.verify_vanishing(&line(slope.0, slope.1), p.default_box).unwrap();
    assert!(r.is_certified(), "{name}: {:?}", r.certificate);
}

#[test]
fn vanish_a_below_three_quarters() {
    certify("vanishA", (3, 4));
}

#[test]
fn vanish_b_below_four_fifths() {
    certify("vanishB", (4, 5));
}

#[test]
fn intstab_modules_below_three_quarters() {
    for name in ["intstab-f2", "intstab-fl(3)", "intstab-fl(5)"] {
        certify(name, (3, 4));
    }
}

#[test]
fn koszul_factors() {
    let f2 = build_preset("koszul-f2", None, None).unwrap();
    let t = f2.complex.homology_table(BoxBounds::new(8, 8)).unwrap();
    let nz: Vec<(Bidegree, u64)> = t.nonzero().collect();
    assert_eq!(nz, vec![(Bidegree::new(0, 0), 1), (Bidegree::new(4, 4), 1), (Bidegree::new(8, 8), 1)]);

    let q = build_preset("koszul-q", None, None).unwrap();
    let t = q.complex.homology_table(BoxBounds::new(8, 8)).unwrap();
    assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(Bidegree::new(0, 0), 1)]);

    for (l, first) in [(3u32, Bidegree::new(6, 5)), (5, Bidegree::new(10, 9))] {
        let p = build_preset(&format!("koszul-fl({l})"), None, None).unwrap();
        assert_eq!(p.complex.field(), FieldKind::Prime(l as u64));
        let t = p.complex.homology_table(p.default_box).unwrap();
        let lowest = t.nonzero().map(|e| e.0).filter(|b| b.g > 0).min_by_key(|b| (b.d * 1000 / b.g, b.g));
        assert_eq!(lowest, Some(first));
    }
}
