use blindsim::security::{
    instance_seed, parallel_composition, random_construction, random_serial_instance, serial_composition,
};

fn main() -> blindsim::Result<()> {
    for i in 0..3 {
        let seed = instance_seed(11, i);
        let t = random_serial_instance(seed)?;
        let m = serial_composition(&t.pi, &t.r, &t.s, &t.pi2, &t.t, &t.sigma, &t.sigma2, seed)?;
        println!("serial   #{i}: eps {:.4} + eps' {:.4} >= composed {:.4}: {}", m.eps, m.eps_prime, m.composed, m.holds());

        let (real, ideal) = random_construction(seed)?;
        let (real2, ideal2) = random_construction(seed + 1)?;
        let m = parallel_composition(&real, &ideal, &real2, &ideal2, seed)?;
        println!("parallel #{i}: eps {:.4} + eps' {:.4} >= composed {:.4}: {}", m.eps, m.eps_prime, m.composed, m.holds());
    }
    Ok(())
}
