fn main() {
    std::process::exit(acet_lab::harness::cli_main(std::env::args_os()));
}
