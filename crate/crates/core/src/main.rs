fn main() {
    std::process::exit(witnesskit::cli::run(std::env::args_os()));
}
