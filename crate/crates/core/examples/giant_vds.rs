//! Giant-atom dressed states: where they exist and what they look like.
use fibwqed::bound_states::{allowed_positions, dressed_state, vds_verify};
use fibwqed::lattice::{build_coupled, EmitterSpec, WaveguideSpec};
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let n = 100;
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, n, 0.2);
    let seq = spec.hopping_sequence()?.expect("two-letter host");
    for d in 1..=14 {
        let pos = allowed_positions(&seq, d, n);
        println!("d={d:>2}: {:>2} positions {:?}", pos.len(), &pos[..pos.len().min(8)]);
    }

    for n0 in [5, 7] {
        let e = EmitterSpec::giant(n0, 6, 0.05);
        let st = dressed_state(&spec, &e)?;
        let rep = vds_verify(&st, &build_coupled(&spec, &[e])?)?;
        let amps: Vec<String> = st.photonic().iter().map(|(s, v)| format!("{s}:{v:+.4}")).collect();
        println!("n0={n0}: {}  residual {:.1e}", amps.join(" "), rep.residual);
    }
    Ok(())
}
