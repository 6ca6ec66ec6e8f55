//! Modules of Kähler differentials, distributions as quotient
//! presentations, module Gröbner bases, rank/corank, torsion saturation and
//! the foliated exterior derivative.

pub(crate) mod modvec;
mod oneform;
mod distribution;

pub use distribution::Distribution;
pub use oneform::{OneForm, VectorField};

pub(crate) use distribution::combinations;
pub(crate) use oneform::relation_unit_vectors;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Poly, PolyRing};

    fn parabola() -> (std::sync::Arc<PolyRing>, Distribution) {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        // N = (dy - 2x dx)
        let form = OneForm::new(
            &ring,
            vec![ring.parse("-2*x").unwrap(), Poly::one(&ring)],
        )
        .unwrap();
        let dist = Distribution::new(&ring, vec![form]).unwrap();
        (ring, dist)
    }

    fn radii() -> (std::sync::Arc<PolyRing>, Distribution) {
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        // N = (x dy - y dx)
        let form = OneForm::new(
            &ring,
            vec![ring.parse("-y").unwrap(), ring.parse("x").unwrap()],
        )
        .unwrap();
        let dist = Distribution::new(&ring, vec![form]).unwrap();
        (ring, dist)
    }

    #[test]
    fn module_normal_forms() {
        let (ring, dist) = parabola();
        // NF(dy) = 2x dx
        let dy = OneForm::new(&ring, vec![Poly::zero(&ring), Poly::one(&ring)]).unwrap();
        let nf = dist.module_normal_form(&dy).unwrap();
        assert_eq!(nf.coeff(0), &ring.parse("2*x").unwrap());
        assert!(nf.coeff(1).is_zero());

        let (ring, dist) = radii();
        // NF(x dy) = y dx
        let xdy = OneForm::new(&ring, vec![Poly::zero(&ring), ring.parse("x").unwrap()]).unwrap();
        let nf = dist.module_normal_form(&xdy).unwrap();
        assert_eq!(nf.coeff(0), &ring.parse("y").unwrap());
        assert!(nf.coeff(1).is_zero());

        // NF(0) = 0
        assert!(dist
            .module_normal_form(&OneForm::zero(&ring))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn foliated_d_detects_first_integrals() {
        let (ring, dist) = parabola();
        assert!(dist
            .foliated_d(&ring.parse("y - x^2").unwrap())
            .unwrap()
            .is_zero());
        assert!(dist.foliated_d(&Poly::int(&ring, 5)).unwrap().is_zero());
        assert!(!dist.foliated_d(&ring.parse("x").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn foliated_d_on_localized_chart() {
        // y/x is a first integral of the radii foliation over D(x)
        let (ring, dist) = radii();
        let dx_ring = ring.localize(&ring.parse("x").unwrap()).unwrap();
        let forms: Vec<OneForm> = dist
            .relations()
            .iter()
            .map(|f| f.embed(&dx_ring).unwrap())
            .collect();
        let dist_x = Distribution::new(&dx_ring, forms).unwrap();
        let y_over_x =
            &Poly::var(&dx_ring, "y").unwrap() * &Poly::inverse_var(&dx_ring, 0);
        assert!(dist_x.foliated_d(&y_over_x).unwrap().is_zero());
        // but x itself is not
        assert!(!dist_x
            .foliated_d(&Poly::var(&dx_ring, "x").unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn rank_corank_examples() {
        let (_, dist) = radii();
        assert_eq!(dist.rank_corank(), (1, 1));

        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let zero = Distribution::new(&ring, vec![]).unwrap();
        assert_eq!(zero.rank_corank(), (2, 0));

        // contact: N = (dz - y dx) on Q[x,y,z]
        let ring3 = PolyRing::new(&["x", "y", "z"]).unwrap();
        let contact = OneForm::new(
            &ring3,
            vec![
                ring3.parse("-y").unwrap(),
                Poly::zero(&ring3),
                Poly::one(&ring3),
            ],
        )
        .unwrap();
        let dist = Distribution::new(&ring3, vec![contact]).unwrap();
        assert_eq!(dist.rank_corank(), (2, 1));
    }

    #[test]
    fn saturation_examples() {
        // N = (x dx): saturation is (dx)
        let ring = PolyRing::new(&["x", "y"]).unwrap();
        let xdx = OneForm::new(&ring, vec![ring.parse("x").unwrap(), Poly::zero(&ring)]).unwrap();
        let dist = Distribution::new(&ring, vec![xdx]).unwrap();
        assert!(!dist.is_saturated());
        let sat = dist.saturate_torsion();
        assert!(sat.is_saturated());
        assert_eq!(sat.rank_corank(), dist.rank_corank());
        let dx = OneForm::new(&ring, vec![Poly::one(&ring), Poly::zero(&ring)]).unwrap();
        assert!(sat.module_normal_form(&dx).unwrap().is_zero());

        // radii is already saturated: saturation returns the same module
        let (ring, dist) = radii();
        let sat = dist.saturate_torsion();
        let gen = OneForm::new(
            &ring,
            vec![ring.parse("-y").unwrap(), ring.parse("x").unwrap()],
        )
        .unwrap();
        assert!(sat.module_normal_form(&gen).unwrap().is_zero());
        let dx = OneForm::new(&ring, vec![Poly::one(&ring), Poly::zero(&ring)]).unwrap();
        assert!(!sat.module_normal_form(&dx).unwrap().is_zero());

        // N = 0 stays 0
        let zero = Distribution::new(&ring, vec![]).unwrap();
        assert!(zero.saturate_torsion().relations().is_empty());
    }

    #[test]
    fn dual_vector_fields_examples() {
        // parabola: dual is d/dx + 2x d/dy
        let (ring, dist) = parabola();
        let duals = dist.dual_vector_fields();
        assert_eq!(duals.len(), 1);
        let v = &duals[0];
        for rel in dist.relations() {
            assert!(rel.pair(v).is_zero());
        }
        assert_eq!(v.coeff(0), &Poly::one(&ring));
        assert_eq!(v.coeff(1), &ring.parse("2*x").unwrap());

        // radii: dual is x d/dx + y d/dy
        let (ring, dist) = radii();
        let duals = dist.dual_vector_fields();
        assert_eq!(duals.len(), 1);
        assert_eq!(duals[0].coeff(0), &ring.parse("x").unwrap());
        assert_eq!(duals[0].coeff(1), &ring.parse("y").unwrap());

        // zero distribution: the full tangent module
        let zero = Distribution::new(&ring, vec![]).unwrap();
        let duals = zero.dual_vector_fields();
        assert_eq!(duals.len(), 2);
    }
}
