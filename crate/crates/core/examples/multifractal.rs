//! Singularity spectrum of a central (1,1) eigenstate next to two limiting cases.
use fibwqed::lattice::{build_waveguide, WaveguideSpec};
use fibwqed::multifractal::{BoxCounting, ProbabilityMeasure};
use fibwqed::spectral::eigensolve;
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let n = 987;
    let spec = WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, n, 0.2);
    let d = eigensolve(&build_waveguide(&spec)?)?;
    let boxes = BoxCounting::for_size(n);

    let state = ProbabilityMeasure::from_state(d.vector(n / 2))?;
    let sp = boxes.spectrum(&state)?;
    println!("(1,1) state {} at E={:+.4}: width {:.3}", n / 2, d.values()[n / 2], sp.support_width());
    println!("{:>7} {:>9} {:>7} {:>7}", "q", "tau", "alpha", "f");
    for i in (1..sp.q.len() - 1).step_by(8) {
        println!("{:>7.2} {:>9.4} {:>7.4} {:>7.4}", sp.q[i], sp.tau[i], sp.alpha[i], sp.f[i]);
    }

    // a dyadic length so every box is full
    let flat = BoxCounting::for_size(1024).spectrum(&ProbabilityMeasure::uniform(1024))?;
    println!("uniform measure: width {:.2e}", flat.support_width());
    let mut point = vec![0.0; n];
    point[300] = 1.0;
    let spike = boxes.spectrum(&ProbabilityMeasure::from_state(&point)?)?;
    println!("single site: width {:.2e}", spike.support_width());
    Ok(())
}
