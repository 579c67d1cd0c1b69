use proptest::prelude::*;
use torsion_core::exalg::{standard, Blade, Form, Frame};
use torsion_core::linalg::QMatrix;
use torsion_core::ring::{q, qi, Rational, RingElement};
use torsion_core::stable::{lambda_of, stable_data};

const F6: Frame = Frame::SPATIAL6;

/// Pullback of a 3-form under `e^i -> sum_j a[i][j] e^j`.
fn act(a: &QMatrix, psi: &Form) -> Form {
    let image = |i: u8| {
        let row = a.row(i as usize - 1);
        Form::from_terms(
            F6,
            1,
            (1..=6u8)
                .zip(row)
                .map(|(j, c)| (Blade::from_mask(1 << j), RingElement::constant(c))),
        )
    };
    psi.terms().fold(Form::zero(F6, 3), |acc, (b, c)| {
        let idx = b.indices();
        let w = image(idx[0])
            .wedge(&image(idx[1]))
            .unwrap()
            .wedge(&image(idx[2]))
            .unwrap();
        acc + w.scale(c)
    })
}

fn matrix() -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-2i64..=2, 36).prop_map(|v| {
        let rows: Vec<Vec<Rational>> = v.chunks(6).map(|r| r.iter().map(|x| qi(*x)).collect()).collect();
        QMatrix::from_rows(&rows)
    })
}

fn three_form() -> impl Strategy<Value = Form> {
    let blades = F6.blades(3);
    prop::collection::vec(-2i64..=2, blades.len()).prop_map(move |cs| {
        Form::from_terms(
            F6,
            3,
            blades
                .iter()
                .zip(cs)
                .filter(|(_, c)| *c != 0)
                .map(|(b, c)| (*b, RingElement::constant(qi(c)))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lambda_is_equivariant(a in matrix(), psi in three_form()) {
        let det = a.determinant();
        let lhs = lambda_of(&act(&a, &psi)).unwrap();
        let rhs = lambda_of(&psi).unwrap() * det.clone() * det;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rotation_of_the_standard_pair(n in -6i64..=6, m in 1i64..=6) {
        // (1 - u^2, 2u) / (1 + u^2) with u = n/m lies on the unit circle
        let u = q(n, m);
        let d = qi(1) + u.clone() * u.clone();
        let a = (qi(1) - u.clone() * u.clone()) / d.clone();
        let b = qi(2) * u / d;
        let (pp, pm) = (standard::psi_plus(F6), standard::psi_minus(F6));
        let sd = stable_data(&(pp.scale_q(&a) + pm.scale_q(&b))).unwrap();
        let expect = pp.scale_q(&-b) + pm.scale_q(&a);
        prop_assert_eq!(sd.psi_minus, Some(expect));
    }

    #[test]
    fn lambda_is_homogeneous_of_degree_four(psi in three_form(), c in 1i64..=4) {
        let l = lambda_of(&psi).unwrap();
        let l2 = lambda_of(&psi.scale_int(c)).unwrap();
        prop_assert_eq!(l2, l * qi(c.pow(4)));
    }
}
