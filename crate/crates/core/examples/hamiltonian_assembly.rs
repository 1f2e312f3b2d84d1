//! Assembles both forms of the model in one sector and shows that their
//! spectra differ by U·N_Λ/4 at the symmetric point.

use pam_ed::fock::SectorBasis;
use pam_ed::hamiltonian::{build_hubbardized, build_original, dense_spectrum, hubbardized_shift, ModelParams};
use pam_ed::lattice::{build_chain, layer_double, Boundary};

fn main() -> pam_ed::Result<()> {
    let lattice = layer_double(&build_chain(2, Boundary::Open)?, 1.0, 1.0)?;
    let params = ModelParams::symmetric(1.0, 1.0, 4.0, 0.0);
    let basis = SectorBasis::new(lattice.num_sites(), 2, 2)?;

    let original = build_original(&params, &lattice, &basis)?;
    let hubbard = build_hubbardized(&params, &lattice, &basis)?;
    println!("dim {}, nonzeros {} / {}", original.dim(), original.nnz(), hubbard.nnz());

    let shift = hubbardized_shift(&params, &lattice);
    let a = dense_spectrum(original.to_dense());
    let b = dense_spectrum(hubbard.to_dense());
    let worst = a.iter().zip(&b).map(|(x, y)| (y - x - shift).abs()).fold(0.0, f64::max);
    println!("shift U·N/4 = {shift}, largest deviation {worst:.1e}");
    println!("lowest levels (original): {:?}", &a[..4]);

    let mut coo = Vec::new();
    hubbard.write_coordinate(&mut coo)?;
    let text = String::from_utf8_lossy(&coo);
    println!("first coordinate rows:\n{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));
    Ok(())
}
