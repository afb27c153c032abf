// Diagnostic: inspect a trained checkpoint's deterministic behaviour.
use swarmbeam_core::env::{Environment, SwarmEnv};
use swarmbeam_core::gdmtd3::GdmTd3;

fn main() {
    let path = std::env::args().nth(1).expect("checkpoint path");
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let env_cfg: swarmbeam_core::env::EnvConfig =
        serde_json::from_value(v["config"]["env"].clone()).unwrap();
    let agent: swarmbeam_core::gdmtd3::AgentSnapshot =
        serde_json::from_value(v["agent"].clone()).unwrap();
    let agent = GdmTd3::restore(agent, 5).unwrap();
    let mut env = SwarmEnv::new(env_cfg.clone()).unwrap();
    let mut total = 0.0;
    let episodes = 5;
    for ep in 0..episodes {
        let mut obs = env.reset(1234 + ep).unwrap();
        let mut mean_sec = 0.0;
        for step in 0..50 {
            let action = agent.deterministic_action(&obs);
            let out = env.step(&action).unwrap();
            obs = out.observation;
            mean_sec += out.info.secrecy_rate_bpshz / 50.0;
            if ep == 0 && step % 10 == 0 {
                let p = &env.swarm().positions;
                let e = &env.swarm().excitations;
                let center = swarmbeam_core::beamforming::swarm_center(p).unwrap();
                let spread: f64 = p.iter().map(|q| {
                    (0..3).map(|ax| (q[ax] - center[ax]).powi(2)).sum::<f64>().sqrt()
                }).sum::<f64>() / p.len() as f64;
                println!(
                    "step {step:2}: sec {:.3} G_S {:.2} G_E {:.3} r_S {:.2} r_E {:.2} | I [{:.2} {:.2} {:.2} {:.2}] spread {spread:.1} m eav ({:.0},{:.0})",
                    out.info.secrecy_rate_bpshz, out.info.gain_rbs, out.info.gain_eav,
                    out.info.rate_rbs_bpshz, out.info.rate_eav_bpshz,
                    e[0], e[1], e[2], e[3],
                    env.eavesdropper().position_xy[0], env.eavesdropper().position_xy[1],
                );
            }
        }
        total += mean_sec / episodes as f64;
        println!("episode {ep} mean secrecy {mean_sec:.4}");
    }
    println!("overall deterministic secrecy {total:.4}");
}
