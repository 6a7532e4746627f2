fn main() {
    std::process::exit(sharpcell::cli::main_with_args(std::env::args_os()));
}
