fn main() {
    std::process::exit(rgg_faultnet::cli::run(std::env::args_os()));
}
