fn main() {
    std::process::exit(defectfm::cli::main_with_args(std::env::args_os()));
}
