fn main() {
    std::process::exit(fpt_cli::run(std::env::args_os()));
}
