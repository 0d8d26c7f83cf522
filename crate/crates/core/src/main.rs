fn main() {
    std::process::exit(tls_resonance::cli::main());
}
