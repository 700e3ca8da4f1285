fn main() {
    std::process::exit(ampgap::cli::run());
}
