fn main() {
    std::process::exit(gabor_dpp::cli::run());
}
