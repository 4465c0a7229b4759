fn main() {
    std::process::exit(spheridir::cli::main_with_args(std::env::args_os()));
}
