fn main() {
    std::process::exit(tauforms::exprcli::cli_main(std::env::args_os()));
}
