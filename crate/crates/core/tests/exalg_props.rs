use proptest::prelude::*;
use torsion_core::catalog;
use torsion_core::exalg::{Form, Frame};
use torsion_core::model::FrameModel;
use torsion_core::ring::{qi, RingElement};

fn frames() -> impl Strategy<Value = Frame> {
    prop_oneof![Just(Frame::SPATIAL6), Just(Frame::INTERVAL7), Just(Frame::CIRCLE7)]
}

fn form_in(frame: Frame, degree: usize, laurent: bool) -> impl Strategy<Value = Form> {
    let blades = frame.blades(degree);
    let n = blades.len();
    let k = if laurent { -2..=2i32 } else { 0..=0 };
    prop::collection::vec((-3i64..=3, k), n).prop_map(move |cs| {
        Form::from_terms(
            frame,
            degree,
            blades
                .iter()
                .zip(cs)
                .filter(|(_, (c, _))| *c != 0)
                .map(|(b, (c, k))| (*b, RingElement::monomial(qi(c), k))),
        )
    })
}

fn triple() -> impl Strategy<Value = (Form, Form, Form)> {
    (frames(), 0..=3usize, 0..=3usize, 0..=2usize)
        .prop_flat_map(|(f, p, q, r)| (form_in(f, p, false), form_in(f, q, false), form_in(f, r, false)))
}

fn same_degree() -> impl Strategy<Value = (Form, Form)> {
    (frames(), 0..=4usize).prop_flat_map(|(f, p)| (form_in(f, p, false), form_in(f, p, false)))
}

fn adjoint_triple() -> impl Strategy<Value = (Form, Form, Form)> {
    (frames(), 0..=3usize, 0..=3usize)
        .prop_flat_map(|(f, p, q)| (form_in(f, p, false), form_in(f, q, false), form_in(f, p + q, false)))
}

fn sign(p: usize, q: usize) -> i64 {
    if p * q % 2 == 0 {
        1
    } else {
        -1
    }
}

fn models() -> Vec<FrameModel> {
    let mut out: Vec<FrameModel> = Vec::new();
    for e in catalog::all() {
        for m in std::iter::once(e.su3.model()).chain(e.g2.as_ref().map(|g| g.model())) {
            if !out.contains(m) {
                out.push(m.clone());
            }
        }
    }
    out
}

fn model_pair() -> impl Strategy<Value = (FrameModel, Form, Form)> {
    let ms = models();
    (0..ms.len(), 0..=3usize, 0..=3usize).prop_flat_map(move |(i, p, q)| {
        let m = ms[i].clone();
        let f = m.frame();
        let laurent = m.time().is_some();
        (Just(m), form_in(f, p, laurent), form_in(f, q, laurent))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wedge_is_associative((a, b, c) in triple()) {
        prop_assert_eq!(a.wedge(&b).unwrap().wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
    }

    #[test]
    fn wedge_is_graded_commutative((a, b, _c) in triple()) {
        let s = sign(a.degree(), b.degree());
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().scale_int(s));
    }

    #[test]
    fn hodge_squares_to_a_sign((a, _b, _c) in triple()) {
        let n = a.frame().dim();
        prop_assert_eq!(a.hodge().hodge(), a.scale_int(sign(a.degree(), n - a.degree())));
    }

    #[test]
    fn hodge_pairs_with_inner_product((a, b) in same_degree()) {
        prop_assert_eq!(a.wedge(&b.hodge()).unwrap(), Form::volume(a.frame()).scale(&a.inner(&b)));
    }

    #[test]
    fn contraction_is_adjoint_to_wedge((a, b, d) in adjoint_triple()) {
        prop_assert_eq!(a.wedge(&b).unwrap().inner(&d), b.inner(&a.contract(&d).unwrap()));
    }

    #[test]
    fn leibniz_and_d_squared((m, a, b) in model_pair()) {
        let lhs = m.differential(&a.wedge(&b).unwrap());
        let rhs = m.differential(&a).wedge(&b).unwrap()
            + a.wedge(&m.differential(&b)).unwrap().scale_int(sign(a.degree(), 1));
        prop_assert_eq!(lhs, rhs);
        prop_assert!(m.differential(&m.differential(&a)).is_zero());
    }
}
