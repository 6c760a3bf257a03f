fn main() {
    std::process::exit(eventodist::cli::run(std::env::args_os()));
}
