use std::process::exit;

fn main() {
    exit(fracpart::cli::main_from_args(std::env::args_os()));
}
