fn main() {
    std::process::exit(qnls_core::cli::main_with_args(std::env::args_os()));
}
