fn main() {
    std::process::exit(nlburgers::app::run(std::env::args_os()));
}
