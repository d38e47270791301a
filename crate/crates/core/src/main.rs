fn main() {
    let code = chaoscomp::cli::run(std::env::args_os());
    std::process::exit(code);
}
