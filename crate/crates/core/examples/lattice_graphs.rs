//! Builds base lattices, doubles them into the two-layer lattice, and shows
//! the sublattice coloring and bond list.

use pam_ed::lattice::{build_chain, build_square, layer_double, Boundary, Layer};

fn main() -> pam_ed::Result<()> {
    let chain = build_chain(4, Boundary::Periodic)?;
    let doubled = layer_double(&chain, 1.0, 0.8)?;
    println!("periodic 4-site chain, doubled: {} sites, {} bonds", doubled.num_sites(), doubled.bonds().len());
    for site in 0..doubled.num_sites() {
        let layer = match doubled.layer(site) {
            Layer::Conduction => "c",
            Layer::Localized => "d",
        };
        println!(
            "  site {site} ({layer}) sublattice {:?} partner {:?}",
            doubled.sublattice(site),
            doubled.partner(site)
        );
    }

    println!("edge list (r h t_rh):");
    doubled.write_edge_list(std::io::stdout().lock())?;

    let square = layer_double(&build_square(2, 2, Boundary::Open)?, 1.0, 1.0)?;
    println!("2x2 square, doubled: {} sites, {} bonds", square.num_sites(), square.bonds().len());

    match build_chain(3, Boundary::Periodic) {
        Err(e) => println!("3-site ring: {e}"),
        Ok(_) => unreachable!("odd rings are not bipartite"),
    }
    Ok(())
}
