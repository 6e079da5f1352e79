// Build the standard flux models plus one outside the transport class and
// inspect their structural conditions.

use wavelab::{FluxModel, FluxSymbol, Result};

pub fn run_example() -> Result<()> {
    let models = [
        ("camassa-holm", FluxModel::camassa_holm(0.0, 0.5)),
        ("dispersive ch", FluxModel::camassa_holm(0.25, 0.5)),
        ("rod gamma=3", FluxModel::hyperelastic_rod(3.0, 0.5)?),
        // f''' != 0: outside the momentum-transport class
        ("cubic flux", FluxModel::new(&[0.0, 0.0, 0.5, 0.1], &[0.0, 0.0, 1.0], 0.5)?),
    ];
    for (name, m) in &models {
        let c = m.check_theorem_conditions(2.0);
        println!(
            "{name:<14} f'(1)={:+.3} f''(1)={:+.3} g(1)={:+.3}  f'''=0:{} gamma={:.3} g'=2f''u:{} all:{}",
            m.f_prime(1.0),
            m.f_second(1.0),
            m.eval(FluxSymbol::G, 1.0),
            c.f_triple_prime_zero,
            c.f_double_prime_lower_bound,
            c.g_prime_matches,
            c.all_hold()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
