fn main() {
    std::process::exit(hueckel::cli::main());
}
