fn main() {
    eprintln!("nilgeo CLI: under construction");
}
