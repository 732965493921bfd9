fn main() {
    std::process::exit(randcal::main_with_args(std::env::args_os()));
}
