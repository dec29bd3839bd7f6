use std::io::IsTerminal;

use qwpps::fmt::Style;

fn main() {
    let stdout = std::io::stdout();
    let style = Style::detect(stdout.is_terminal());
    let code = qwpps::run_with(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut std::io::stderr().lock(),
        style,
    );
    std::process::exit(code);
}
