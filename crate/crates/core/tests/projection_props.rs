use std::sync::OnceLock;

use proptest::prelude::*;
use torsion_core::exalg::{Form, Frame};
use torsion_core::g2::G2Structure;
use torsion_core::model::FrameModel;
use torsion_core::ring::{qi, RingElement};
use torsion_core::su3::SU3Structure;

fn flat_g2() -> &'static G2Structure {
    static G: OnceLock<G2Structure> = OnceLock::new();
    G.get_or_init(|| G2Structure::standard(FrameModel::flat(Frame::CIRCLE7), 7).unwrap())
}

fn flat_su3() -> &'static SU3Structure {
    static S: OnceLock<SU3Structure> = OnceLock::new();
    S.get_or_init(|| SU3Structure::standard(FrameModel::flat(Frame::SPATIAL6)).unwrap())
}

fn form_in(frame: Frame, degree: usize) -> impl Strategy<Value = Form> {
    let blades = frame.blades(degree);
    prop::collection::vec(-4i64..=4, blades.len()).prop_map(move |cs| {
        Form::from_terms(
            frame,
            degree,
            blades
                .iter()
                .zip(cs)
                .filter(|(_, c)| *c != 0)
                .map(|(b, c)| (*b, RingElement::constant(qi(c)))),
        )
    })
}

fn g2_form() -> impl Strategy<Value = Form> {
    (2..=5usize).prop_flat_map(|k| form_in(Frame::CIRCLE7, k))
}

fn su3_form() -> impl Strategy<Value = Form> {
    (0..=6usize).prop_flat_map(|k| form_in(Frame::SPATIAL6, k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn g2_projections_are_complete_and_orthogonal(a in g2_form()) {
        let g = flat_g2();
        let parts = g.irrep_project(&a).unwrap();
        let sum = parts.values().fold(Form::zero(a.frame(), a.degree()), |acc, p| acc + p.clone());
        prop_assert_eq!(&sum, &a);
        let ps: Vec<&Form> = parts.values().collect();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                prop_assert!(ps[i].inner(ps[j]).is_zero());
            }
        }
        for (n, p) in &parts {
            prop_assert_eq!(&g.irrep_project(p).unwrap()[n], p);
        }
    }

    #[test]
    fn type_split_reconstructs(a in su3_form()) {
        let s = flat_su3();
        let split = s.type_split(&a);
        let sum = split.values().fold(Form::zero(a.frame(), a.degree()), |acc, (re, _)| acc + re.clone());
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn j_is_an_orthogonal_complex_structure(a in form_in(Frame::SPATIAL6, 1)) {
        let s = flat_su3();
        let ja = s.apply_j(&a);
        prop_assert_eq!(ja.inner(&ja), a.inner(&a));
        prop_assert!(ja.inner(&a).is_zero());
        prop_assert_eq!(s.apply_j(&ja), -a);
    }
}
