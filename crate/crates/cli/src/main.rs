fn main() {
    std::process::exit(tweetstat::run(std::env::args_os()));
}
