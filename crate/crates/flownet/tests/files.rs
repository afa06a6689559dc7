use flownet::scenario_file::{parse_scenario, scenario_to_json};
use flownet::suites::SHIPPED;
use flownet::traj_csv::{read_csv, to_csv_string};
use flownet_core::scenario::five_vertex_preset;
use flownet_core::sim::integrate;

#[test]
fn shipped_preset_is_current() {
    let shipped = include_str!("../scenarios/five_vertex.json");
    assert_eq!(scenario_to_json(&five_vertex_preset()), shipped);
}

#[test]
fn shipped_scenarios_round_trip() {
    for (file, text) in SHIPPED {
        let s = parse_scenario(text).unwrap_or_else(|e| panic!("{file}: {e}"));
        let again = parse_scenario(&scenario_to_json(&s)).unwrap();
        assert_eq!(again, s, "{file}");
    }
}

#[test]
fn csv_reproduces_the_trajectory_summary() {
    let mut s = five_vertex_preset();
    s.integrator.horizon = 5.0;
    let traj = integrate(&s).unwrap();
    let text = to_csv_string(&traj, true);
    let back = read_csv(text.as_bytes())
        .unwrap()
        .into_trajectory(&s)
        .unwrap();
    assert_eq!(back.times, traj.times);
    assert_eq!(back.x, traj.x);
    assert_eq!(back.xc, traj.xc);
    assert_eq!(back.flows, traj.flows);
    assert_eq!(back.lyapunov, traj.lyapunov);
    assert_eq!(back.summary, traj.summary);
}
