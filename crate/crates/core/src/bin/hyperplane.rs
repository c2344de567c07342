fn main() {
    std::process::exit(hyperplane::cli::run(std::env::args_os()));
}
