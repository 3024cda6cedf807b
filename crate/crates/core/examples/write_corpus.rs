//! Regenerates the shipped corpus: `cargo run --example write_corpus [dir]`.

use std::path::PathBuf;

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(steenweb::corpus::data_dir);
    match steenweb::corpus::write_corpus(&dir) {
        Ok(count) => println!("wrote {count} files to {}", dir.display()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
