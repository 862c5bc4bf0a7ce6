fn main() {
    std::process::exit(shallow_delay::cli::run(std::env::args_os()));
}
