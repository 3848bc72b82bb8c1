fn main() {
    std::process::exit(choreo8::cli::run());
}
