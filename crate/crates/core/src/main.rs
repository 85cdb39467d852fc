fn main() {
    std::process::exit(genderbeam::cli::main_with_args(std::env::args_os()));
}
