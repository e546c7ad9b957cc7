fn main() {
    std::process::exit(sigbary::cli::run(std::env::args_os()));
}
