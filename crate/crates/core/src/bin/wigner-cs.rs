fn main() {
    std::process::exit(wigner_cs::cli::run(std::env::args_os()));
}
