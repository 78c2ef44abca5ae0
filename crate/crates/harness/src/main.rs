fn main() {
    std::process::exit(aheft_harness::cli::main());
}
