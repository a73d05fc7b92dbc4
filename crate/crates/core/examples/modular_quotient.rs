//! PSL2(Z) reduction, the covers X_q, quotient distances and injectivity.
//!
//!     cargo run --release --example modular_quotient

use hypercut::modular::{
    closed_form_order, coset_index, reduce_fundamental, CosetModQ, QuotientGeometry, QuotientPoint,
};
use hypercut::PointH;

fn main() -> hypercut::Result<()> {
    let z = PointH::new(7.31, 0.02)?;
    let (w, g) = reduce_fundamental(&z)?;
    println!("{:.4} + {:.4}i reduces to {:.6} + {:.6}i by {:?}", z.x(), z.y(), w.x(), w.y(), g.entries());

    for q in 2..=7 {
        println!("q={q}: [PSL2(Z) : Γ(q)] = {} (closed form {})", coset_index(q)?.len(), closed_form_order(q));
    }

    let q = 5;
    let geo = QuotientGeometry::new(q, 6.0, 3.0)?;
    let a = QuotientPoint::new(PointH::new(0.2, 1.1)?, CosetModQ::identity(q))?;
    let b = QuotientPoint::new(PointH::new(-0.4, 1.7)?, geo.table().element(17))?;
    let c = QuotientPoint::new(PointH::new(0.1, 2.4)?, geo.table().element(40))?;
    let d = |p: &QuotientPoint, p2: &QuotientPoint| geo.distance(p, p2, 6.0);
    println!("X_{q}: degree {}, area {:.4}", geo.degree(), geo.area());
    println!("d(a,b) = {:?}, d(b,a) = {:?}", d(&a, &b)?, d(&b, &a)?);
    println!("d(a,c) = {:?}, d(b,c) = {:?}", d(&a, &c)?, d(&b, &c)?);

    // deck transformations act by isometries
    let h = geo.table().element(3);
    println!("d(ha, hb) = {:?}", d(&a.deck(&h), &b.deck(&h))?);

    let inj = geo.injectivity_radius(&a, 6.0)?;
    println!("injectivity radius at a: {:.6} (stabilizer order {})", inj.radius, inj.stabilizer_order);
    Ok(())
}
