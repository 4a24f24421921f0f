//! Full waveguide dynamics against the emitter-only model for two trios.
use std::f64::consts::PI;

use fibwqed::dynamics::{compare, effective_grid, evolve_effective, evolve_exact, Initial};
use fibwqed::effective::build_effective;
use fibwqed::lattice::{build_coupled, EmitterSpec, WaveguideSpec};
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let g = 0.05;
    let t_a = g * g;
    let trios = [
        (
            "local 10,13,15 on (1,2)",
            WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2)?, 144, 0.2),
            [10, 13, 15].map(|n| EmitterSpec::local(n, g)),
        ),
        (
            "giant 34,39,40 on (1,1)",
            WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, 144, 0.2),
            [34, 39, 40].map(|n| EmitterSpec::giant(n, 6, g)),
        ),
    ];
    let times = effective_grid(t_a);
    for (name, spec, roster) in trios {
        let k = build_effective(&roster, &spec)?;
        let exact = evolve_exact(&build_coupled(&spec, k.emitters())?, &Initial::emitter(0), &times)?;
        let eff = evolve_effective(&k.normalized(), &Initial::emitter(0), &times)?;
        let dev = compare(&exact, &eff)?;
        println!("{name}: max deviation {:.4} at t={:.0}", dev.max, dev.time_of_max);
        let i = times.partition_point(|&t| t < PI / (2f64.sqrt() * t_a));
        let p: Vec<String> = (0..3).map(|j| format!("{:.3}/{:.3}", exact.populations[j][i], eff.populations[j][i])).collect();
        println!("  populations at t=π/(√2 t_a), exact/effective: {}", p.join("  "));
    }
    Ok(())
}
