use flownet_core::analysis::{classify_equilibrium, predict_convergence, Reason};
use flownet_core::cycles::minimal_cycle_cover;
use flownet_core::scenario::five_vertex_preset;
use flownet_core::sim::{integrate, Trajectory};

#[test]
fn settles_at_non_consensus_equilibrium() {
    let s = five_vertex_preset();
    let traj = integrate(&s).unwrap();
    assert!(traj.summary.steady && !traj.summary.consensus);
    assert!(traj.summary.max_rate < 1e-6);

    let x = traj.final_x();
    let spread =
        x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread >= 0.1);
    assert!((x[1] - x[2]).abs() < 1e-3);

    // u + xc_bar = T / 2
    let t = [1.0, 2.0, 3.0, 1.0, 1.0, 1.0, 1.0];
    for (j, &u) in traj.final_flow().iter().enumerate() {
        assert!((u + 0.5 - 0.5 * t[j]).abs() < 1e-3, "edge {j}: {u}");
    }

    let class = classify_equilibrium(x, traj.final_xc(), &s).unwrap();
    assert!(class.is_equilibrium && !class.gradient_aligned);

    // total storage is conserved: 1^T E d = 0
    let total0: f64 = s.x0.iter().sum();
    for xk in &traj.x {
        assert!((xk.iter().sum::<f64>() - total0).abs() < 1e-9);
    }
}

#[test]
fn cover_and_verdict() {
    let s = five_vertex_preset();
    let cover = minimal_cycle_cover(&s.graph).unwrap();
    assert_eq!(cover.len(), 3);
    assert_eq!(cover.multiplicity, vec![1, 2, 3, 1, 1, 1, 1]);
    let v = predict_convergence(&s).unwrap();
    assert_eq!(
        (v.consensus_expected, v.reason),
        (Some(false), Reason::Unbalanced)
    );
}

#[test]
fn lyapunov_non_increasing() {
    let traj = integrate(&five_vertex_preset()).unwrap();
    let v = traj.lyapunov.as_ref().unwrap();
    for w in v.windows(2) {
        assert!(
            w[1] <= w[0] + 1e-9 * (1.0 + w[0].abs()),
            "{} -> {}",
            w[0],
            w[1]
        );
    }
}

fn run(step: f64, horizon: f64) -> Trajectory {
    let mut s = five_vertex_preset();
    s.integrator.step = step;
    s.integrator.horizon = horizon;
    s.integrator.stride = 1;
    integrate(&s).unwrap()
}

fn status(flow: &[f64]) -> Vec<u8> {
    flow.iter()
        .map(|&u| {
            if u <= 0.0 {
                0
            } else if u >= 1.0 {
                2
            } else {
                1
            }
        })
        .collect()
}

#[test]
fn fourth_order_before_first_switch() {
    let (h, horizon) = (0.01, 2.0);
    let reference = run(h / 8.0, horizon);
    // no edge changes saturation state inside the window
    let first = status(&reference.flows[0]);
    assert!(reference.flows.iter().all(|f| status(f) == first));

    let err = |t: &Trajectory| {
        t.final_x()
            .iter()
            .zip(reference.final_x())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    };
    let ratio = err(&run(h, horizon)) / err(&run(h / 2.0, horizon));
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}
