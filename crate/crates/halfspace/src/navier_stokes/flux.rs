use crate::core::{TensorField, VectorField};

/// Convective flux `𝓕_{ki} = −u_k u_i`, so that `div 𝓕 = −(u·∇)u` for
/// solenoidal `u`.
pub fn nonlinear_flux(u: &VectorField) -> TensorField {
    let n = u.grid().n();
    let comps = (0..n)
        .map(|k| (0..n).map(|i| -(u.comp(k) * u.comp(i))).collect())
        .collect();
    TensorField::new(u.grid().clone(), u.domain(), comps).expect("flux shape follows u")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Domain, HalfSpaceGrid};

    #[test]
    fn flux_is_symmetric_outer_product() {
        let g = HalfSpaceGrid::uniform(3, 4, 1.0, 3, 1.0, 2).unwrap();
        let u = VectorField::from_fn(&g, Domain::HalfSpace, |x, t| [x[0] + t, 2.0 * x[1], x[2] - 1.0]);
        let f = nonlinear_flux(&u);
        for k in 0..3 {
            for i in 0..3 {
                assert_eq!(f.comp(k, i), f.comp(i, k));
                let want = -(u.comp(k) * u.comp(i));
                assert_eq!(f.comp(k, i), &want);
            }
        }
    }
}
