fn main() {
    std::process::exit(smalltc::cli::run(std::env::args_os()));
}
