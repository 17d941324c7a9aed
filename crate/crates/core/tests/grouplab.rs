use wordmaplab::grouplab::*;
use wordmaplab::words::parse;
use wordmaplab::Budget;

const GROUPS: [&str; 12] = [
    "A4", "A5", "S4", "S5", "C6", "SL2(3)", "SL2(4)", "SL2(5)", "GL2(3)", "PSL2(7)", "PSL2(9)", "SL3(2)",
];

#[test]
fn class_data_invariants() {
    let b = Budget::default();
    for spec in GROUPS {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &b).unwrap();
        assert_eq!(c.sizes.iter().sum::<usize>(), g.order());
        for (i, (&s, &z)) in c.sizes.iter().zip(&c.centralizers).enumerate() {
            assert_eq!(g.order() % s, 0);
            assert_eq!(s * z, g.order());
            assert_eq!(centralizer_order(&g, c.reps[i], &b).unwrap(), z);
        }
        for m in [-1, 2, 3, 5, 6] {
            power_class_map(&g, &c, m).unwrap();
        }
    }
}

#[test]
fn fiber_routes_agree() {
    let b = Budget::default();
    for spec in ["SL2(3)", "SL2(5)", "SL2(7)", "A5", "A6"] {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &b).unwrap();
        for m in [2, 3, 4, 6] {
            let h = fiber_histogram(&g, &c, m, &b).unwrap();
            assert_eq!(h.mass(), g.order());
        }
    }
}

#[test]
fn single_letter_uniform_everywhere() {
    let b = Budget::default();
    for spec in GROUPS {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &b).unwrap();
        for text in ["x1", "x2", "x1^-1"] {
            let d = word_distribution(&g, &c, &parse(text).unwrap(), &b).unwrap();
            assert!(d.l1_to_uniform() == num_rational::BigRational::from_integer(0.into()), "{spec} {text}");
        }
    }
}

#[test]
fn commutator_identity_mass_is_class_count() {
    let b = Budget::default();
    for spec in ["A5", "S4", "SL2(3)", "PSL2(7)"] {
        let g = Group::parse(spec).unwrap();
        let c = conjugacy_classes(&g, &b).unwrap();
        let d = word_distribution(&g, &c, &parse("x1 x2 x1^-1 x2^-1").unwrap(), &b).unwrap();
        assert_eq!(d.counts[0], (g.order() * c.len()).into());
    }
}
