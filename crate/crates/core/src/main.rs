fn main() {
    std::process::exit(pseudoregulus::run_cli());
}
