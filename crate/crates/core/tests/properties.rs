use cuspgamma::characters::{gauss_sum, AddChar, MultChar};
use cuspgamma::{FieldTower, TowerOptions};
use proptest::prelude::*;

fn towers() -> Vec<FieldTower> {
    [(2, 1, 6), (3, 1, 4), (5, 1, 2), (2, 2, 3)]
        .into_iter()
        .map(|(p, f, l)| FieldTower::build(p, f, l, &TowerOptions::default()).unwrap())
        .collect()
}

fn elem(t: &FieldTower, k: u64) -> cuspgamma::FqElem {
    if k % (t.order() + 1) == t.order() {
        t.zero()
    } else {
        t.from_index(k % t.order())
    }
}

proptest! {
    #[test]
    fn field_axioms(which in 0usize..4, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let t = &towers()[which];
        let (a, b, c) = (elem(t, a), elem(t, b), elem(t, c));
        prop_assert_eq!(t.mul(t.add(a, b), c), t.add(t.mul(a, c), t.mul(b, c)));
        prop_assert_eq!(t.add(t.add(a, b), c), t.add(a, t.add(b, c)));
        prop_assert_eq!(t.sub(t.add(a, b), b), a);
        prop_assert_eq!(t.frobenius(t.add(a, b), 1), t.add(t.frobenius(a, 1), t.frobenius(b, 1)));
        if let Some(inv) = t.inv(a) {
            prop_assert_eq!(t.mul(a, inv), t.one());
        }
    }

    #[test]
    fn characters_are_multiplicative(which in 0usize..4, k in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let t = &towers()[which];
        let chi = MultChar::new(t.q(), t.degree(), k % t.order());
        let (a, b) = (t.from_index(a % t.order()), t.from_index(b % t.order()));
        let lhs = chi.eval(t, t.mul(a, b)).unwrap();
        let rhs = chi.eval(t, a).unwrap() * chi.eval(t, b).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9);
        let psi = AddChar::standard(t).lift(t, t.degree()).unwrap();
        let sum = psi.eval(t, t.add(a, b));
        prop_assert!((sum - psi.eval(t, a) * psi.eval(t, b)).norm() < 1e-9);
    }

    #[test]
    fn gauss_sum_modulus(which in 0usize..4, k in 1u64..u64::MAX) {
        let t = &towers()[which];
        let k = k % t.order();
        prop_assume!(k != 0);
        let psi = AddChar::standard(t).lift(t, t.degree()).unwrap();
        let g = gauss_sum(t, &MultChar::new(t.q(), t.degree(), k), &psi);
        let expected = (t.order() as f64 + 1.0).sqrt();
        prop_assert!((g.norm() - expected).abs() < 1e-9 * expected);
    }
}
