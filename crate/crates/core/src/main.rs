fn main() {
    std::process::exit(gbdecide::cli::main_entry());
}
