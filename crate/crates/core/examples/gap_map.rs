//! Which (p, q) rules open a gap at zero energy.
use fibwqed::spectral::gap_map;

fn main() -> fibwqed::Result<()> {
    let cells = gap_map(1..=6, 1..=6, 0.2, 600)?;
    println!("threshold {:.4}", cells[0].threshold);
    print!("p\\q");
    for q in 1..=6 {
        print!("{q:>9}");
    }
    for c in &cells {
        if c.q == 1 {
            print!("\n{:<3}", c.p);
        }
        print!("{:>8.4}{}", c.gap, if c.gapped { "*" } else { " " });
    }
    println!();
    Ok(())
}
