fn main() {
    std::process::exit(interlock_truss::cli::run(std::env::args_os()));
}
