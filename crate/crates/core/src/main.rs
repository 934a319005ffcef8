fn main() {
    std::process::exit(ehpcert::cli::main_with_args(std::env::args_os()));
}
