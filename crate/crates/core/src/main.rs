fn main() {
    std::process::exit(dicke_core::cli::main());
}
