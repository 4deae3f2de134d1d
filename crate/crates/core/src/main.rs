fn main() {
    std::process::exit(cqual::cli::run(std::env::args_os()));
}
