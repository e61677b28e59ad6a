fn main() {
    std::process::exit(girth::cli::run());
}
