fn main() {
    std::process::exit(igt_cli::run(std::env::args_os()));
}
