use newton_shape::pipeline::b16_witness;
use newton_shape::rational::qi;
use newton_shape::text::render_poly;
fn main() {
    let (p, q) = b16_witness(7, 5, &qi(1), &qi(2), &qi(1), &qi(1));
    std::fs::write("witness_p.txt", render_poly(&p)).unwrap();
    std::fs::write("witness_q.txt", render_poly(&q)).unwrap();
}
