fn main() {
    let (status, out) = integrabilis::run(std::env::args_os());
    if status == 2 && !out.trim_start().starts_with('{') {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(status);
}
