fn main() {
    let code = protection::cli::run(std::env::args_os());
    std::process::exit(code);
}
