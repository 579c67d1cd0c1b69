//! JSON rendering of reports. Rationals are strings `"p/q"`; Laurent
//! polynomials are objects `{"k": "p/q"}` keyed by the power of `t`; forms
//! are objects keyed by blade.

use serde_json::{json, Map, Value};

use crate::exalg::Form;
use crate::g2::{CorrespondenceReport, G2TorsionReport};
use crate::ring::{fmt_rational, RingElement};
use crate::su3::SU3TorsionReport;

pub fn ring_json(r: &RingElement) -> Value {
    let m: Map<String, Value> = r
        .terms()
        .map(|(k, c)| (k.to_string(), Value::String(fmt_rational(c))))
        .collect();
    Value::Object(m)
}

pub fn form_json(f: &Form) -> Value {
    let m: Map<String, Value> = f.terms().map(|(b, c)| (b.to_string(), ring_json(c))).collect();
    json!({ "degree": f.degree(), "terms": m })
}

pub fn su3_json(source: &str, r: &SU3TorsionReport) -> Value {
    let f = &r.flags;
    json!({
        "kind": "su3",
        "source": source,
        "fingerprint": r.fingerprint,
        "d_omega": form_json(&r.d_omega),
        "d_psi_plus": form_json(&r.d_psi_plus),
        "d_psi_minus": form_json(&r.d_psi_minus),
        "W1+": ring_json(&r.w1p),
        "W1-": ring_json(&r.w1m),
        "W2+": form_json(&r.w2p),
        "W2-": form_json(&r.w2m),
        "W3": form_json(&r.w3),
        "W4": form_json(&r.w4),
        "W5": form_json(&r.w5),
        "rank_W12": r.rank_w12,
        "classes": f.classes(),
        "flags": {
            "W1+": f.w1p, "W1-": f.w1m, "W2+": f.w2p, "W2-": f.w2m,
            "W3": f.w3, "W4": f.w4, "W5": f.w5,
            "half_flat": f.half_flat,
            "self_dual": f.self_dual,
            "anti_self_dual": f.anti_self_dual,
        },
    })
}

pub fn g2_json(source: &str, r: &G2TorsionReport) -> Value {
    let f = &r.flags;
    json!({
        "kind": "g2",
        "source": source,
        "base_fingerprint": r.base_fingerprint,
        "rho": r.rho.as_ref().map(form_json),
        "dphi": form_json(&r.dphi),
        "dstarphi": form_json(&r.dstarphi),
        "dphi_1": ring_json(&r.dphi_1),
        "dphi_7": form_json(&r.dphi_7),
        "dphi_27": form_json(&r.dphi_27),
        "dstarphi_7": form_json(&r.dstarphi_7),
        "dstarphi_14": form_json(&r.dstarphi_14),
        "dphi_7_vector": form_json(&r.dphi_7_vector),
        "dstarphi_7_vector": form_json(&r.dstarphi_7_vector),
        "X1": ring_json(&r.x1),
        "X3_invariant": ring_json(&r.x3_invariant),
        "X4_vector": form_json(&r.x4vec),
        "classes": f.classes(),
        "flags": {
            "calibrated": f.calibrated,
            "cocalibrated": f.cocalibrated,
            "nearly_parallel": f.nearly_parallel,
            "X1": f.x1, "X2": f.x2, "X3": f.x3, "X4": f.x4,
        },
    })
}

pub fn correspondence_json(source: &str, r: &CorrespondenceReport) -> Value {
    json!({
        "kind": "correspondence",
        "source": source,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed})).collect::<Vec<_>>(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exalg::Frame;

    #[test]
    fn laurent_and_form_encoding() {
        let f = Form::parse(Frame::INTERVAL7, "1/2*t^-3*e12 + 3*dt^e1").unwrap();
        let v = form_json(&f);
        assert_eq!(v["degree"], 2);
        assert_eq!(v["terms"]["e12"]["-3"], "1/2");
        assert_eq!(v["terms"]["dt^e1"]["0"], "3");
    }

    #[test]
    fn sec3ex2_report_has_one_class() {
        let e = crate::catalog::get_example("nil-sec3ex2").unwrap();
        let v = su3_json("nil-sec3ex2", &e.su3.torsion());
        assert_eq!(v["classes"], json!(["W2-"]));
        assert_eq!(v["W2-"]["terms"]["e34"]["0"], "1");
        assert_eq!(render(&v), render(&su3_json("nil-sec3ex2", &e.su3.torsion())));
    }
}
