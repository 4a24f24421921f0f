//! Spectra and densities of states of the host models.
use fibwqed::lattice::{build_waveguide, WaveguideSpec};
use fibwqed::spectral::{central_gap, dos, eigenvalues};
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let n = 610;
    let hosts = [
        ("uniform", WaveguideSpec::uniform(n)),
        ("SSH t_B=0.2", WaveguideSpec::ssh(n, 0.2)),
        ("AAH V=1", WaveguideSpec::aah(n, 1.0)),
        ("(1,1) t_B=0.2", WaveguideSpec::fibonacci(SubstitutionRule::FIBONACCI, n, 0.2)),
        ("(1,2) t_B=0.2", WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2)?, n, 0.2)),
    ];
    for (name, spec) in hosts {
        let e = eigenvalues(&build_waveguide(&spec)?)?;
        let curve = dos(&e, 40)?;
        // a crude sparkline of the histogram
        let peak = *curve.counts.iter().max().unwrap() as f64;
        let bars: String = curve
            .counts
            .iter()
            .map(|&c| [' ', '.', ':', '|', '#'][((c as f64 / peak) * 4.0).round() as usize])
            .collect();
        println!("{name:>14}  gap {:.4}  [{bars}]", central_gap(&e));
    }
    Ok(())
}
