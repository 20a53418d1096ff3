fn main() -> std::process::ExitCode {
    zerodiff::cli::main()
}
