fn main() {
    std::process::exit(nervecoh::cli::run(std::env::args()));
}
