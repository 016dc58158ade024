fn main() {
    std::process::exit(cascade_timing::cli::main_with_args(std::env::args_os()));
}
