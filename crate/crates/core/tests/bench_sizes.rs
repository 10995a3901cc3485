// scratch timing probe; removed later
use algent::ring::DEFAULT_PRIME;
use algent::uni::ModPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[test]
#[ignore]
fn timing_probe() {
    let p = DEFAULT_PRIME;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for d in [24201usize, 63363, 95000] {
        let a = ModPoly::random(p, d, &mut rng);
        let b = ModPoly::random(p, d, &mut rng);
        let t = Instant::now();
        let c = a.mul(&b);
        println!("mul deg {d}: {:?} (out deg {})", t.elapsed(), c.deg());
    }
    // gcd shaped like the HV step 11 reduction: two deg-72603 with gcd deg 9240
    let g = ModPoly::random(p, 9240, &mut rng);
    let a = ModPoly::random(p, 72603 - 9240, &mut rng).mul(&g);
    let b = ModPoly::random(p, 72603 - 9240, &mut rng).mul(&g);
    let t = Instant::now();
    let gg = a.gcd(&b);
    println!("gcd deg 72603 (g 9240): {:?} -> deg {}", t.elapsed(), gg.deg());
    assert_eq!(gg.deg(), 9240);
}
