fn main() {
    std::process::exit(tka::cli::run(std::env::args_os()));
}
