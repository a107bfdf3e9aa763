fn main() {
    std::process::exit(facebound::cli::cli_main(std::env::args_os()));
}
