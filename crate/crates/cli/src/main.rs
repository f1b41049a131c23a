fn main() {
    println!("binode: placeholder");
}
