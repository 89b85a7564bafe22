use std::process::exit;

fn main() {
    exit(cavity_anneal::cli::run(std::env::args_os()));
}
