fn main() {
    env_logger::init();
    std::process::exit(pkcpc::cli::run(std::env::args_os()));
}
