use hardedge::fixtures;
fn main() {
    let leg = fixtures::legendre(16, 6);
    let b = &leg.branches[0];
    println!("z_of_s: low {} order {}", b.z_of_s.low, b.z_of_s.order);
    println!("y_local: low {} order {}", b.y_local.low, b.y_local.order);
    let zp = b.z_of_s.derivative();
    println!("zp: low {} order {}", zp.low, zp.order);
    for m in 0..12 {
        for mp in 0..12 {
            if let Ok(c) = leg.bergman_coeff(0,0,m,mp) { if m+mp<2 {println!("B[{m}][{mp}] = {c}");} }
            else { println!("B bound hit at ({m},{mp})"); break; }
        }
        if leg.bergman_coeff(0,0,m,0).is_err() { break; }
    }
}
