fn main() {
    std::process::exit(tgirg::cli::run(std::env::args_os()));
}
