fn main() {
    std::process::exit(schmidtlab_cli::run());
}
