fn main() {
    std::process::exit(urbandtn::cli::cli_main(std::env::args()));
}
