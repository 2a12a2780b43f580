fn main() {
    std::process::exit(leibniz::cli::run(std::env::args_os()));
}
