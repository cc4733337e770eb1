use oscomp::comparison::{
    check_states_agreement, is_full_element, n_comparison, stable_dom_via_states, stably_dominated,
    state_cone, tail_property_check, Status,
};
use oscomp::completion::{
    check_cfp, largest_element, omega_comparison_check, property_q_check, CfpInstance, Completion,
    Interval, IntervalChain, QMode, SequenceDescriptor, XSide,
};
use oscomp::corpus::{family_wn, family_womega, run_report, Check, ReportBounds, ReportInput};
use oscomp::lp::rat;
use oscomp::reductions::{omega_to_cfp_grouping, sdom_common_k};
use oscomp::semigroup::Frobenius;
use oscomp::{Element, Error, SemigroupModel};

fn num(v: u64) -> Element {
    Element::Num(v)
}

fn p(v: u64) -> Interval {
    Interval::Principal(num(v))
}

fn zplus() -> SemigroupModel {
    SemigroupModel::numerical([1], 200).unwrap()
}

fn w11() -> SemigroupModel {
    SemigroupModel::direct_sum(vec![family_wn(1).unwrap(), family_wn(1).unwrap()], 40).unwrap()
}

fn pair(m: &SemigroupModel, a: u64, b: u64) -> Element {
    m.element_from_point(&[a, b])
}

#[test]
fn frobenius_of_two_generator_family() {
    let w2 = family_wn(2).unwrap();
    assert_eq!(w2.frobenius().unwrap(), Frobenius::Number { value: 5 });
    assert_eq!(family_wn(1).unwrap().frobenius().unwrap().value(), Some(1));
    assert!(!w2.member(&num(5)).unwrap().member);
}

#[test]
fn enumeration_order() {
    let w2 = family_wn(2).unwrap();
    let pts: Vec<u64> = w2
        .enumerate_points(8)
        .unwrap()
        .into_iter()
        .map(|p| p[0])
        .collect();
    assert_eq!(pts, [0, 3, 4, 6, 7, 8]);
    let z = SemigroupModel::numerical([1], 10).unwrap();
    assert_eq!(z.enumerate_points(3).unwrap().len(), 4);
    let s = w11();
    assert_eq!(
        s.enumerate_points(2).unwrap(),
        vec![vec![0, 0], vec![0, 2], vec![2, 0]]
    );
}

#[test]
fn stable_domination_examples() {
    let w2 = family_wn(2).unwrap();
    let c = stably_dominated(&w2, &num(3), &num(4), 100)
        .unwrap()
        .unwrap();
    assert_eq!(c.k, 3);
    assert!(c.replay(&w2, &num(3), &num(4)).unwrap());
    assert_eq!(
        stably_dominated(&w2, &num(0), &num(4), 100)
            .unwrap()
            .unwrap()
            .k,
        1
    );
    assert!(stably_dominated(&w2, &num(4), &num(3), 1000)
        .unwrap()
        .is_none());
}

#[test]
fn tail_examples() {
    let w1 = family_wn(1).unwrap();
    let c = stably_dominated(&w1, &num(2), &num(3), 10)
        .unwrap()
        .unwrap();
    assert_eq!(c.k, 2);
    assert!(tail_property_check(&w1, &num(2), &num(3), &c, 100).unwrap());
    // k = 3 is below the tail start and fails: 8 <= 9 needs 1 in W_1.
    assert!(!w1.leq(&num(8), &num(9)).unwrap().is_some());

    let w2 = family_wn(2).unwrap();
    let c = stably_dominated(&w2, &num(3), &num(4), 10)
        .unwrap()
        .unwrap();
    assert!(tail_property_check(&w2, &num(3), &num(4), &c, 100).unwrap());
}

#[test]
fn state_examples() {
    let w2 = family_wn(2).unwrap();
    let cone = state_cone(&w2, &num(4)).unwrap();
    assert_eq!(
        cone.unique_point().unwrap(),
        vec![oscomp::lp::Rational::new(1.into(), 4.into())]
    );
    let z = SemigroupModel::numerical([1], 20).unwrap();
    assert_eq!(
        state_cone(&z, &num(1)).unwrap().unique_point().unwrap(),
        vec![rat(1)]
    );
    assert_eq!(state_cone(&w2, &num(0)).unwrap_err(), Error::ZeroNormalizer);

    let v = stable_dom_via_states(&w2, &num(3), &num(4), 100).unwrap();
    assert!(v.holds);
    assert!(v
        .max_value
        .unwrap()
        .at_least(&oscomp::lp::Rational::new(3.into(), 4.into())));
    let v = stable_dom_via_states(&w2, &num(4), &num(3), 100).unwrap();
    assert!(!v.holds);
    let v = stable_dom_via_states(&w2, &num(7), &num(7), 100).unwrap();
    assert!(!v.holds);

    let induced = family_wn(2)
        .unwrap()
        .with_order_mode(oscomp::OrderMode::Induced);
    assert_eq!(
        state_cone(&induced, &num(4)).unwrap_err(),
        Error::UnsupportedOrderMode
    );
}

#[test]
fn states_agree_with_search_on_w2() {
    let w2 = family_wn(2).unwrap();
    let els = w2.enumerate_elements(20).unwrap();
    let pairs: Vec<_> = els
        .iter()
        .flat_map(|x| els.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    let r = check_states_agreement(&w2, &pairs, 200, 200).unwrap();
    assert_eq!(r.disagreements, 0);

    let w1 = family_wn(1).unwrap();
    let r = check_states_agreement(&w1, &[(num(2), num(3)), (num(0), num(3))], 50, 50).unwrap();
    assert_eq!(r.disagreements, 0);
    assert_eq!(r.rows[0].search_k, Some(2));
    assert_eq!(r.rows[0].states_hold, Some(true));
    assert_eq!(r.rows[1].states_hold, Some(true));
}

#[test]
fn comparison_examples() {
    let w2 = family_wn(2).unwrap();
    let v = n_comparison(&w2, 1, w2.element_bound(), false).unwrap();
    assert_eq!(v.status, Status::FailsWithWitness);
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w.x, num(3));
    assert_eq!(w.ys, vec![num(4), num(4)]);
    assert!(w.replay(&w2).unwrap());
    assert_eq!(
        n_comparison(&w2, 2, 40, false).unwrap().status,
        Status::Holds
    );

    let w1 = family_wn(1).unwrap();
    let v = n_comparison(&w1, 0, w1.element_bound(), false).unwrap();
    assert_eq!(v.status, Status::FailsWithWitness);
    let w = v.witness.unwrap();
    assert_eq!((w.x, w.ys), (num(2), vec![num(3)]));
}

#[test]
fn fullness_examples() {
    let w2 = family_wn(2).unwrap();
    assert!(is_full_element(&w2, &num(3), 40).unwrap());
    assert!(!is_full_element(&w2, &num(0), 40).unwrap());
    let s = w11();
    assert!(!is_full_element(&s, &pair(&s, 2, 0), 20).unwrap());
    assert!(is_full_element(&s, &pair(&s, 2, 2), 20).unwrap());
}

#[test]
fn interval_examples() {
    let c = Completion::new(zplus());
    assert!(c.interval_member(&p(2), &num(1)).unwrap());
    let chain = Interval::Chain {
        preamble: vec![num(1)],
        increment: num(1),
    };
    let big = SemigroupModel::numerical([1], 2_000_000).unwrap();
    let cb = Completion::new(big);
    assert!(cb.interval_member(&chain, &num(1_000_000)).unwrap());
    let w2 = Completion::new(family_wn(2).unwrap());
    assert!(!w2.interval_member(&p(4), &num(3)).unwrap());

    assert_eq!(
        c.canonical(&c.interval_add(&p(2), &p(3)).unwrap()).unwrap(),
        p(5)
    );
    assert_eq!(c.interval_add(&p(7), &p(0)).unwrap(), p(7));
    assert_eq!(
        c.interval_add(&Interval::Top, &p(3)).unwrap(),
        Interval::Top
    );

    let cert = w2.interval_leq(&p(3), &p(7)).unwrap().unwrap();
    assert!(w2.replay_inclusion(&cert, &p(3), &p(7)).unwrap());
    assert!(w2.interval_leq(&p(4), &p(4)).unwrap().is_some());
    assert!(c.interval_leq(&chain, &p(150)).unwrap().is_none());

    assert!(c.way_below(&p(2), &Interval::Top).unwrap());
    assert!(!c.way_below(&Interval::Top, &Interval::Top).unwrap());
    assert!(w2.way_below(&p(4), &p(4)).unwrap());
}

#[test]
fn suprema_and_largest_element() {
    let c = Completion::new(zplus());
    let sup = c
        .sup_chain(&IntervalChain {
            preamble: vec![],
            increment: p(1),
        })
        .unwrap();
    assert_eq!(sup, Interval::Top);
    let w2 = Completion::new(family_wn(2).unwrap());
    let sup = w2
        .sup_chain(&IntervalChain {
            preamble: vec![p(3)],
            increment: p(3),
        })
        .unwrap();
    assert_eq!(sup, Interval::Top);
    let constant = w2
        .sup_chain(&IntervalChain {
            preamble: vec![p(4)],
            increment: p(0),
        })
        .unwrap();
    assert_eq!(constant, p(4));

    for model in [zplus(), family_wn(2).unwrap(), w11()] {
        let c = Completion::new(model);
        let l = largest_element(&c).unwrap();
        assert_eq!(l.top, Interval::Top);
        assert!(l.properly_infinite);
    }
}

#[test]
fn q_examples() {
    for model in [zplus(), family_wn(2).unwrap()] {
        let c = Completion::new(model);
        assert_eq!(
            property_q_check(&c, QMode::Q, 6).unwrap().status,
            Status::Holds
        );
    }
    let c = Completion::new(zplus());
    assert_eq!(
        property_q_check(&c, QMode::Qq, 6).unwrap().status,
        Status::Holds
    );
}

#[test]
fn full_sequence_examples() {
    let w2 = Completion::new(family_wn(2).unwrap());
    assert!(w2
        .is_full_sequence(&SequenceDescriptor::constant(p(3)), 12)
        .unwrap());
    assert!(!w2
        .is_full_sequence(&SequenceDescriptor::constant(p(0)), 12)
        .unwrap());
    let m = w11();
    let s = Completion::new(m.clone());
    let seq = SequenceDescriptor::constant(Interval::Principal(pair(&m, 2, 0)));
    assert!(!s.is_full_sequence(&seq, 6).unwrap());
}

#[test]
fn omega_examples() {
    let z = Completion::new(zplus());
    // y_j = P(1) does not stably dominate x = P(1); the smallest valid
    // constant choice is P(2), which already covers x' at the first term.
    assert!(matches!(
        omega_comparison_check(
            &z,
            &p(1),
            &p(1),
            &SequenceDescriptor::constant(p(1)),
            50,
            false
        ),
        Err(Error::PreconditionViolated(_))
    ));
    let v = omega_comparison_check(
        &z,
        &p(1),
        &p(1),
        &SequenceDescriptor::constant(p(2)),
        50,
        false,
    )
    .unwrap();
    assert_eq!(v.n(), Some(0));

    let w2 = Completion::new(family_wn(2).unwrap());
    let ys = SequenceDescriptor::constant(p(4));
    assert!(matches!(
        omega_comparison_check(&w2, &p(3), &p(6), &ys, 50, false),
        Err(Error::PreconditionViolated(_))
    ));
    let v = omega_comparison_check(&w2, &p(3), &p(3), &ys, 50, false).unwrap();
    assert_eq!(v.n(), Some(2));
    let v = omega_comparison_check(&w2, &p(0), &p(3), &ys, 50, false).unwrap();
    assert_eq!(v.n(), Some(0));
}

#[test]
fn cfp_examples() {
    let z = Completion::new(zplus());
    let inst = CfpInstance {
        x_prime: p(4),
        x: XSide::Single(p(4)),
        y_seq: SequenceDescriptor::constant(p(2)),
        m: 2,
    };
    assert_eq!(check_cfp(&z, &inst, 500, true).unwrap().k(), Some(2));
    let zero = CfpInstance {
        x_prime: p(0),
        ..inst
    };
    assert_eq!(check_cfp(&z, &zero, 500, true).unwrap().k(), Some(1));

    let w2 = Completion::new(family_wn(2).unwrap());
    let inst = CfpInstance {
        x_prime: p(3),
        x: XSide::Sequence(SequenceDescriptor::constant(p(3))),
        y_seq: SequenceDescriptor::constant(p(3)),
        m: 1,
    };
    assert_eq!(check_cfp(&w2, &inst, 500, false).unwrap().k(), Some(1));

    let bad = CfpInstance {
        x: XSide::Sequence(SequenceDescriptor::constant(p(4))),
        ..inst
    };
    assert!(check_cfp(&w2, &bad, 500, false).is_err());
}

#[test]
fn grouping_examples() {
    let w2 = Completion::new(family_wn(2).unwrap());
    let inst = CfpInstance {
        x_prime: p(3),
        x: XSide::Sequence(SequenceDescriptor::constant(p(3))),
        y_seq: SequenceDescriptor::constant(p(3)),
        m: 1,
    };
    let zero = |_: &Interval, _: &Interval, _: &SequenceDescriptor<Interval>| Some(0);
    let cert = omega_to_cfp_grouping(&w2, &inst, &zero).unwrap();
    assert_eq!((cert.n, cert.k), (0, 2));
    assert!(cert.replay(&w2, &inst).unwrap());

    let z = Completion::new(zplus());
    let inst = CfpInstance {
        x_prime: p(1),
        x: XSide::Sequence(SequenceDescriptor::constant(p(2))),
        y_seq: SequenceDescriptor::constant(p(1)),
        m: 2,
    };
    let one = |_: &Interval, _: &Interval, _: &SequenceDescriptor<Interval>| Some(1);
    let cert = omega_to_cfp_grouping(&z, &inst, &one).unwrap();
    assert_eq!(cert.k, 6);
    assert_eq!(cert.blocks.len(), 2);
    assert!(cert.replay(&z, &inst).unwrap());
    let none = |_: &Interval, _: &Interval, _: &SequenceDescriptor<Interval>| None;
    assert_eq!(
        omega_to_cfp_grouping(&z, &inst, &none).unwrap_err(),
        Error::OracleFailure
    );
}

#[test]
fn common_multiplier_examples() {
    let w2 = family_wn(2).unwrap();
    let ck = sdom_common_k(&w2, &num(3), &num(4), &num(6), 100).unwrap();
    assert_eq!(ck.k, 12);
    assert!(ck.replay(&w2, &num(3), &num(4), &num(6)).unwrap());

    let ck = sdom_common_k(&w2, &num(0), &num(4), &num(6), 100).unwrap();
    assert!(ck.replay(&w2, &num(0), &num(4), &num(6)).unwrap());

    let w1 = family_wn(1).unwrap();
    let ck = sdom_common_k(&w1, &num(2), &num(3), &num(6), 100).unwrap();
    assert!(ck.replay(&w1, &num(2), &num(3), &num(6)).unwrap());
    assert!(sdom_common_k(&w1, &num(3), &num(2), &num(6), 100).is_err());
}

#[test]
fn family_and_report_examples() {
    assert_eq!(family_wn(5).unwrap().frobenius().unwrap().value(), Some(29));
    let one = family_womega(1).unwrap();
    let w1 = family_wn(1).unwrap();
    for n in 0..=1 {
        assert_eq!(
            n_comparison(&one, n, 30, false).unwrap().status,
            n_comparison(&w1, n, 30, false).unwrap().status
        );
    }

    let out = run_report(&[], &Check::all(), &ReportBounds::default());
    assert!(out.reports.is_empty());
    assert!(out.ok);

    let input = ReportInput {
        id: "W_omega[3]".into(),
        model: family_womega(3).unwrap(),
    };
    let bounds = ReportBounds {
        n_max: 2,
        ..Default::default()
    };
    let out = run_report(&[input], &[Check::NComparison], &bounds);
    assert!(out.ok);
    let checks = &out.reports[0].checks;
    for n in 1..=2 {
        let v = &checks[&format!("n_comparison[{n}]")];
        assert_eq!(v["status"], "fails_with_witness");
        // W_{n+1} sits at index n; the other components are zero.
        assert_eq!(
            v["witness"]["x"],
            serde_json::json!({ "sum": [[n, n + 2]] })
        );
    }
}
