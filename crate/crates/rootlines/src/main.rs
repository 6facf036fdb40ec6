fn main() { rootlines::cli::main(); }
