fn main() {
    std::process::exit(probvar::cli::run(std::env::args_os()));
}
