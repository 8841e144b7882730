fn main() {
    std::process::exit(weightgr::cli::run());
}
