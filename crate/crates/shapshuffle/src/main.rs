use std::process::exit;

fn main() {
    exit(shapshuffle::cli::run());
}
