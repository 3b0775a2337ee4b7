fn main() {
    std::process::exit(gbo::cli::run());
}
