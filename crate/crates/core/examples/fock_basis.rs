//! Sector bases, combinatorial ranking, and fermionic operator signs.

use std::sync::Arc;

use pam_ed::fock::{apply_string, rank, ConfigPair, LadderOp, SectorBasis, Spin};

fn main() -> pam_ed::Result<()> {
    let basis = Arc::new(SectorBasis::new(4, 2, 1)?);
    println!("M = 4, (n_up, n_down) = (2, 1): dim {} = {} x {}", basis.dim(), basis.dim_up(), basis.dim_down());
    for w in basis.up_configs() {
        println!("  up word {w:04b} has rank {}", rank(*w, 2)?);
    }

    // c†_{0↓} c_{1↑} on |up = 0b0011, down = 0b0100⟩: c_{1↑} passes the
    // electron in 0↑, then c†_{0↓} passes the one up electron left
    let ket = ConfigPair::new(0b0011, 0b0100);
    let ops = [LadderOp::create(Spin::Down, 0), LadderOp::annihilate(Spin::Up, 1)];
    match apply_string(&ops, ket) {
        Some((out, sign)) => println!("result {:04b}/{:04b} with sign {sign:+}", out.up, out.down),
        None => println!("annihilated"),
    }

    let i = basis.index_of(ket).expect("ket is in the sector");
    println!("ket has global index {i}, config {:?}", basis.config(i));
    Ok(())
}
