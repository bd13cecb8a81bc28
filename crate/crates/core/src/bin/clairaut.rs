fn main() {
    std::process::exit(clairaut_core::cli::run_from_args(std::env::args_os()));
}
