fn main() {
    std::process::exit(graphcut::harness::run(std::env::args_os()));
}
