//! Both Higgs-field tests on the catalogued projective-line fixtures:
//! containment T·W ⊆ W·Ω and the vanishing of the residual matrix.

use spectral_higgs::checker::{check_containment, residual_matrix, totally_ramified_residuals, CheckerConfig};
use spectral_higgs::fixtures::{projective_line_fixture, CATALOGUE};

fn main() {
    let cfg = CheckerConfig::default();
    for name in CATALOGUE {
        let f = projective_line_fixture(name).unwrap();
        let membership = check_containment(&f.w, &f.omega, &cfg).unwrap();
        let residual = residual_matrix(&f.w, &f.omega_inv, &cfg).unwrap();
        println!(
            "{name}: containment {}, residuals vanish {} ({} of {} nonzero), expected {:?}",
            membership.contained,
            residual.contained,
            residual.nonzero_residuals(),
            residual.residuals.len(),
            f.expected
        );
        match totally_ramified_residuals(&f.w, &f.omega_inv, &cfg) {
            Ok(tr) => println!("  power-trace expansion matches entrywise: {}", tr.consistent),
            Err(e) => println!("  power-trace expansion skipped: {e}"),
        }
    }
}
