fn main() { std::process::exit(bowtie::cli::run_cli(std::env::args_os())); }
