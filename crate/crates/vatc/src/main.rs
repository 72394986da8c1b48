fn main() {
    std::process::exit(vatc::cli::run());
}
