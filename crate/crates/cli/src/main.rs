fn main() {
    let out_dir = std::env::var_os(quanton_cli::OUTPUT_DIR_VAR).map(std::path::PathBuf::from);
    let code = quanton_cli::main_with(
        std::env::args_os(),
        out_dir,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
