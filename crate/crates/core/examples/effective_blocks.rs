//! The emitter Hamiltonian of every allowed d = 6 giant atom, split into blocks.
use fibwqed::effective::{allowed_giant_roster, build_effective, effective_dos, fibonacci_block_structure};
use fibwqed::lattice::WaveguideSpec;
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let g = 0.05;
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, 996, 0.2);
    let k = build_effective(&allowed_giant_roster(&spec, 6, g)?, &spec)?;
    let rep = fibonacci_block_structure(&k)?;
    println!("{} emitters in {} blocks, orientation {}", k.dim(), rep.blocks.len(), rep.orientation);
    println!("t_a={:.4e} t_b={:.4e} t_c={:.4e}", rep.t_a, rep.t_b, rep.t_c);
    println!("block word {}", rep.word);

    let s = effective_dos(k.matrix(), 30)?;
    let e = s.decomposition.values();
    println!("spectrum in units of t_a: [{:.3}, {:.3}]", e[0] / rep.t_a, e[e.len() - 1] / rep.t_a);
    Ok(())
}
