//! Dressed states of small emitters on a gapped (1,2) host.
use fibwqed::bound_states::{dressed_state, vds_verify};
use fibwqed::lattice::{build_coupled, EmitterSpec, WaveguideSpec};
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2)?, 144, 0.2);
    for n in [20, 21, 70, 71] {
        let e = EmitterSpec::local(n, 0.05);
        let st = dressed_state(&spec, &e)?;
        let rep = vds_verify(&st, &build_coupled(&spec, &[e])?)?;
        let ph = st.photonic();
        let head: Vec<String> = ph.iter().take(5).map(|(s, v)| format!("{s}:{v:+.2e}")).collect();
        println!(
            "n={n}: {} sites, ε={:.4}, residual {:.1e}, {} …",
            ph.len(),
            st.epsilon(),
            rep.residual,
            head.join(" ")
        );
    }
    Ok(())
}
