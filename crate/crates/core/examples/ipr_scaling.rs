//! Mean IPR against system size: extended, critical and localized hosts.
use fibwqed::lattice::WaveguideSpec;
use fibwqed::spectral::ipr_scaling;
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    let sizes = [128, 256, 512, 1024];
    let hosts = [
        ("uniform (periodic)", WaveguideSpec::uniform(2).periodic()),
        ("AAH V=0.5", WaveguideSpec::aah(2, 0.5)),
        ("AAH V=1", WaveguideSpec::aah(2, 1.0)),
        ("AAH V=1.5", WaveguideSpec::aah(2, 1.5)),
        ("(1,2) t_B=0.2", WaveguideSpec::fibonacci(SubstitutionRule::new(1, 2)?, 2, 0.2)),
    ];
    for (name, spec) in hosts {
        let s = ipr_scaling(&spec, &sizes)?;
        let iprs: Vec<String> = s.mean_ipr.iter().map(|v| format!("{v:.2e}")).collect();
        println!("{name:>20}  slope {:+.3}  IPR {}", s.slope(), iprs.join(" "));
    }
    Ok(())
}
