fn main() {
    std::process::exit(qrelax::cli::run(std::env::args_os()));
}
