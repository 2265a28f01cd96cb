fn main() {
    std::process::exit(wfsaw_cli::run(std::env::args_os()));
}
