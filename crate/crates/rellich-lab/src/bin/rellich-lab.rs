fn main() {
    std::process::exit(rellich_lab::cli::run());
}
