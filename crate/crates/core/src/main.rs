fn main() -> std::process::ExitCode {
    monospec::cli::main()
}
