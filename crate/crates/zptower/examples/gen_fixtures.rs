//! Regenerates the bundled corpus fixtures from the in-code definitions.

use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    std::fs::create_dir_all(&dir).unwrap();
    for entry in zptower::corpus::entries() {
        let path = dir.join(format!("{}.json", entry.name));
        std::fs::write(&path, entry.file.to_json()).unwrap();
        println!("wrote {}", path.display());
    }
}
