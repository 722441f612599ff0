//! The Abel-pullback determinant of a windowed point, divided by the
//! Vandermonde of each branch.

use spectral_higgs::grassmann::{CoordinateAlgebra, GrassmannPoint};
use spectral_higgs::spectral::{AlgebraElement, SpectralPolynomial};
use spectral_higgs::tau::abel_tau_determinant;
use spectral_higgs::{LaurentSeries, EXACT};

fn main() {
    let z = LaurentSeries::z_pow;
    for (label, q) in [("T² − z", [0i64, 1]), ("T² − 1", [1, 0])] {
        let p = SpectralPolynomial::from_monic(vec![LaurentSeries::from_ints(0, &[-q[0], -q[1]], EXACT), LaurentSeries::zero(EXACT)])
            .unwrap();
        // W = z⁻¹·A{1 + z²T, T}
        let one = AlgebraElement::one(2).add(&AlgebraElement::basis(1, 2).scale(&z(2)));
        let gens = [one.scale(&z(-1)), AlgebraElement::basis(1, 2).scale(&z(-1))];
        let w = GrassmannPoint::in_spectral(&p, CoordinateAlgebra::affine_line(), &gens, (-6, 10)).unwrap();
        for n in 1..=2 {
            let report = abel_tau_determinant(&w, n, 6).unwrap();
            println!("{label}, partition {:?}, N = {n}: tau = {}", report.partition, report.tau);
        }
    }
}
