fn main() {
    std::process::exit(langmix::cli::run(std::env::args_os()).code());
}
