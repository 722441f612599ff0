//! Characteristic coefficients of a matrix over k((z)) and a change of
//! basis to companion form.

use spectral_higgs::checker::cyclic_trivialization;
use spectral_higgs::spectral::{matrix_char_coefficients, SeriesMatrix};
use spectral_higgs::{LaurentSeries, EXACT};

fn show(label: &str, m: &SeriesMatrix) {
    println!("{label}:");
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("  [{}]", cells.join(", "));
    }
}

fn main() {
    let z = |c: &[i64]| LaurentSeries::from_ints(0, c, EXACT);
    let a = SeriesMatrix::from_rows(vec![
        vec![z(&[1]), z(&[0, 1]), z(&[2])],
        vec![z(&[0]), z(&[2]), z(&[1, 1])],
        vec![z(&[0, 0, 1]), z(&[0]), z(&[3])],
    ])
    .unwrap();
    show("A", &a);

    let p = matrix_char_coefficients(&a).unwrap();
    for i in 1..=p.n() {
        println!("a_{i} = {}", p.a(i));
    }

    let (change, p) = cyclic_trivialization(&a, 12).unwrap();
    show("P", &change);
    let conj = change.mul(&a).unwrap().mul(&change.inverse(12).unwrap()).unwrap();
    println!("P·A·P⁻¹ is the companion matrix: {}", conj.agrees_with(&p.companion_matrix()));
}
