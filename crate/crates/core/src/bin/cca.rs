fn main() {
    std::process::exit(cca_core::cli::main_with_args(std::env::args_os()));
}
