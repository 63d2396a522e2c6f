fn main() {
    std::process::exit(wittsym::cli::run(std::env::args()));
}
