fn main() {
    std::process::exit(idemcore_cli::main_with(std::env::args_os()));
}
