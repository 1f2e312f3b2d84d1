//! Drives a full run from a TOML config, as the `pam-ed` binary does, and
//! lists the files it wrote.

use pam_ed::cli::{self, Overrides};
use pam_ed::config::RunConfig;

const CONFIG: &str = r#"
tasks = ["spectrum", "correlations", "verify"]

[lattice]
kind = "square"
lx = 2
ly = 2

[model]
u = 4.0
eps_aux = 0.1
"#;

fn main() -> pam_ed::Result<()> {
    let config = RunConfig::from_toml_str(CONFIG)?;
    for d in config.validate() {
        println!("diagnostic: {d}");
    }
    let out = std::env::temp_dir().join("pam-ed-batch-example");
    let overrides = Overrides {
        output_dir: Some(out.clone()),
        ..Overrides::default()
    };
    let report = cli::run(config, &overrides);
    print!("{}", cli::summary(&report));
    let mut files: Vec<String> = std::fs::read_dir(&out)?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    files.sort();
    println!("wrote {} files to {}: {files:?}", files.len(), out.display());
    Ok(())
}
