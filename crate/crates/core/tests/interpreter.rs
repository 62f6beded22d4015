mod common;

use karel_core::exec::eval_condition;
use karel_core::{execute, trace, Action, Condition, ExecutionOutcome, Program, Statement, DEFAULT_STEP_LIMIT};

fn total_markers(w: &karel_core::World) -> i64 {
    w.markers().values().map(|&n| i64::from(n)).sum()
}

#[test]
fn negation_is_logical_not() {
    let mut r = common::rng(21);
    for _ in 0..1000 {
        let w = common::arbitrary_world(&mut r, 8);
        for c in Condition::BASE {
            let v = eval_condition(&c, &w);
            assert_eq!(eval_condition(&Condition::negate(c.clone()), &w), !v);
            assert_eq!(eval_condition(&Condition::negate(Condition::negate(c.clone())), &w), v);
        }
        assert_ne!(
            eval_condition(&Condition::MarkersPresent, &w),
            eval_condition(&Condition::NoMarkersPresent, &w)
        );
    }
}

#[test]
fn matches_reference_on_random_pairs() {
    let programs = common::programs(22, 10_000);
    let mut r = common::rng(23);
    let mut kinds = [0usize; 3];
    for p in &programs {
        let w = common::arbitrary_world(&mut r, 12);
        let got = execute(p, &w, DEFAULT_STEP_LIMIT);
        let want = common::reference_run(p, &w, DEFAULT_STEP_LIMIT);
        assert!(common::agrees(&got, &want), "{p:?}\n{w:?}\n{got:?}\n{want:?}");
        kinds[match got {
            ExecutionOutcome::Success { .. } => 0,
            ExecutionOutcome::Crash { .. } => 1,
            ExecutionOutcome::Timeout { .. } => 2,
        }] += 1;
    }
    // The corpus must actually exercise all three outcomes.
    assert!(kinds.iter().all(|&k| k > 0), "{kinds:?}");
}

#[test]
fn small_step_limits_match_reference() {
    let programs = common::programs(24, 2000);
    let mut r = common::rng(25);
    for (i, p) in programs.iter().enumerate() {
        let limit = i % 12;
        let w = common::arbitrary_world(&mut r, 6);
        let got = execute(p, &w, limit);
        let want = common::reference_run(p, &w, limit);
        assert!(common::agrees(&got, &want), "limit {limit}: {p:?}\n{got:?}\n{want:?}");
    }
}

#[test]
fn trace_agrees_with_execute() {
    let programs = common::programs(26, 1000);
    let mut r = common::rng(27);
    for p in &programs {
        let w = common::arbitrary_world(&mut r, 10);
        let t = trace(p, &w, DEFAULT_STEP_LIMIT);
        let outcome = execute(p, &w, DEFAULT_STEP_LIMIT);
        assert_eq!(t.outcome, outcome);
        match &outcome {
            ExecutionOutcome::Success { world, steps } => {
                assert_eq!(t.steps.len(), *steps);
                assert_eq!(t.steps.last().map_or(&w, |(_, s)| s), world);
            }
            ExecutionOutcome::Crash { step, .. } => assert_eq!(t.steps.len(), step - 1),
            ExecutionOutcome::Timeout { step_limit } => assert!(t.steps.len() <= *step_limit),
        }
        // Replaying the trace one action at a time reproduces each snapshot.
        let mut cur = w.clone();
        for (a, after) in &t.steps {
            cur = karel_core::exec::apply_action(*a, &cur).unwrap();
            assert_eq!(&cur, after);
        }
    }
}

#[test]
fn frame_and_marker_conservation() {
    let programs = common::programs(28, 1000);
    let mut r = common::rng(29);
    for p in &programs {
        let w = common::arbitrary_world(&mut r, 10);
        let t = trace(p, &w, DEFAULT_STEP_LIMIT);
        let mut balance = 0i64;
        for (a, after) in &t.steps {
            assert!(w.same_frame(after));
            assert!(!after.is_obstacle(after.agent()));
            match a {
                Action::PutMarker => balance += 1,
                Action::PickMarker => balance -= 1,
                _ => {}
            }
            assert_eq!(total_markers(after), total_markers(&w) + balance);
        }
    }
}

#[test]
fn input_world_is_not_mutated() {
    let p = Program::new(vec![Statement::Repeat {
        times: 3,
        body: vec![Action::PutMarker.into(), Action::Move.into()],
    }]);
    let mut r = common::rng(30);
    for _ in 0..200 {
        let w = common::arbitrary_world(&mut r, 6);
        let before = w.clone();
        let _ = execute(&p, &w, DEFAULT_STEP_LIMIT);
        assert_eq!(w, before);
    }
}
