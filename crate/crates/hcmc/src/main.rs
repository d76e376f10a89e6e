fn main() {
    std::process::exit(hcmc::cli::run());
}
