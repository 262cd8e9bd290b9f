use clap::Parser;

fn main() {
    let cli = lgl::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result = lgl::run(&cli, std::env::var_os("LGL_OUT"), &mut stdout);
    if let Err(e) = &result {
        eprintln!("lgl: {e}");
    }
    std::process::exit(lgl::exit_code(&result));
}
