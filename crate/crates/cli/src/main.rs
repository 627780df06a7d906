fn main() {
    println!("occ");
}
