//! Regenerates the files under `fixtures/`.

use std::path::PathBuf;

fn main() -> std::io::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));
    std::fs::create_dir_all(&dir)?;
    for (name, contents) in gbmr_session::fixtures::all() {
        std::fs::write(dir.join(&name), contents)?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
