fn main() -> std::process::ExitCode {
    ccpolar::cli::main()
}
