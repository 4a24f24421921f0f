//! Lucas substitution words: lengths, letter balance and factor complexity.
use fibwqed::words::SubstitutionRule;

fn main() -> fibwqed::Result<()> {
    for (p, q) in [(1, 1), (1, 2), (2, 1), (3, 2)] {
        let rule = SubstitutionRule::new(p, q)?;
        let w = rule.generate(6)?;
        let prefix: String = w.to_string().chars().take(40).collect();
        println!("({p},{q}) gapped={} len={} {prefix}…", rule.is_gapped(), w.len());
    }

    let fib = SubstitutionRule::FIBONACCI;
    for len in [2, 4, 6, 8] {
        let c = fib.census(len)?;
        let f: Vec<String> = c.factors.iter().map(ToString::to_string).collect();
        println!("length {len}: {} factors {}", f.len(), f.join(" "));
    }
    Ok(())
}
