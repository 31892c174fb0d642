use num_complex::Complex64;
use proptest::prelude::*;

use clifwave::clifford::{spin_act, Multivector, SpinElement};

fn multivector(n: usize) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1 << n).prop_map(move |c| {
        let c: Vec<Complex64> = c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        Multivector::from_coeffs(n, &c).unwrap()
    })
}

fn close(a: &Multivector, b: &Multivector) -> bool {
    a.max_abs_diff(b) <= 1e-12 * (1.0 + a.module().max(b.module()))
}

proptest! {
    #[test]
    fn product_is_associative(
        (x, y, z) in (1usize..=3).prop_flat_map(|n| (multivector(n), multivector(n), multivector(n)))
    ) {
        prop_assert!(close(&(&(&x * &y) * &z), &(&x * &(&y * &z))));
    }

    #[test]
    fn involutions_reverse_or_preserve_products(x in multivector(3), y in multivector(3)) {
        let xy = &x * &y;
        prop_assert!(close(&xy.reversion(), &(&y.reversion() * &x.reversion())));
        prop_assert!(close(&xy.conjugate(), &(&y.conjugate() * &x.conjugate())));
        prop_assert!(close(&xy.main_involution(), &(&x.main_involution() * &y.main_involution())));
        prop_assert!(close(&xy.dagger(), &(&y.dagger() * &x.dagger())));
    }

    #[test]
    fn involutions_are_involutive(x in multivector(3)) {
        prop_assert_eq!(x.reversion().reversion(), x.clone());
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!(x.dagger().dagger(), x);
    }

    #[test]
    fn scalar_part_of_x_dagger_x_is_module_squared(x in multivector(3)) {
        let p = &x * &x.dagger();
        prop_assert!((p.scalar_part().re - x.module_sqr()).abs() <= 1e-12 * (1.0 + x.module_sqr()));
        prop_assert!(p.scalar_part().im.abs() <= 1e-12 * (1.0 + x.module_sqr()));
    }

    #[test]
    fn planar_rotor_preserves_length(theta in -10.0f64..10.0, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let s = SpinElement::planar(theta);
        let v = Multivector::vector(&[a, b]);
        let y = spin_act(&s, &v).unwrap();
        prop_assert!((y.module() - v.module()).abs() <= 1e-12 * (1.0 + v.module()));
        prop_assert!(y.is_homogeneous(1));
    }

    #[test]
    fn quaternion_rotors_compose_like_rotations(
        q in prop::array::uniform4(-1.0f64..1.0),
        p in prop::array::uniform4(-1.0f64..1.0),
        x in prop::array::uniform3(-3.0f64..3.0),
    ) {
        let nq = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let np = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(nq > 0.1 && np > 0.1);
        let s = SpinElement::from_quaternion(q.map(|v| v / nq)).unwrap();
        let t = SpinElement::from_quaternion(p.map(|v| v / np)).unwrap();
        let v = Multivector::vector(&x);
        let sequential = spin_act(&t, &spin_act(&s, &v).unwrap()).unwrap();
        let composed = spin_act(&s.compose(&t), &v).unwrap();
        prop_assert!(close(&sequential, &composed));
    }
}
