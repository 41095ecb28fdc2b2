fn main() {
    std::process::exit(riemann::run(std::env::args_os()));
}
