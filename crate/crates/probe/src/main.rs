fn main() {
    use bessel_fpt::special::*;
    println!("K(0,1)   = {:.17}  want 0.42102443824070833", bessel_k(0.0, 1.0).unwrap());
    println!("K(1,1)   = {:.17}  want 0.60190723019723457", bessel_k(1.0, 1.0).unwrap());
    println!("K(0.5,1) = {:.17}  want 0.46106850444789456", bessel_k(0.5, 1.0).unwrap());
    println!("K(1.5,2) = {:.17}  want 0.17990665795209217", bessel_k(1.5, 2.0).unwrap());
    println!("K(3,2.7) = {:.17}  want 0.19407111796105780", bessel_k(3.0, 2.7).unwrap());
    println!("K(2.5,0.3)={:.17}  want 75.152140164374890", bessel_k(2.5, 0.3).unwrap());
    println!("K(0.3,25)s={:.17} want 0.24987736080151553", bessel_k_scaled(0.3, 25.0).unwrap());
    println!("K(2,5)   = {:.17}  (CF2+rec)", bessel_k(2.0, 5.0).unwrap());
    // wronskian at nu=0, z=0.1
    let w = bessel_i(0.0, 0.1).unwrap().value * bessel_k(1.0, 0.1).unwrap()
        + bessel_i(1.0, 0.1).unwrap().value * bessel_k(0.0, 0.1).unwrap();
    println!("wronskian z=0.1: {w:.17} want 10");
    // inversion of 1/(1+lambda) at t = 1
    let v = bessel_fpt::inversion::stehfest_sum(&|l| Ok(1.0/(l+1.0)), 1.0, 14).unwrap();
    println!("stehfest e^-1: {v:.17} err {:.3e}", v - 0.36787944117144233);
    let v12 = bessel_fpt::inversion::stehfest_sum(&|l| Ok(1.0/(l+1.0)), 1.0, 12).unwrap();
    println!("order12:       {v12:.17} err {:.3e}", v12 - 0.36787944117144233);
    let v16 = bessel_fpt::inversion::stehfest_sum(&|l| Ok(1.0/(l+1.0)), 1.0, 16).unwrap();
    println!("order16:       {v16:.17} err {:.3e}", v16 - 0.36787944117144233);
}
