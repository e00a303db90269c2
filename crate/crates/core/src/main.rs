fn main() {
    std::process::exit(hankel_audit::cli::main_with_args(std::env::args_os()));
}
