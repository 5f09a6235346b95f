use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{FieldElement, NumberFieldDesc};
use crate::error::{Error, Result};

/// Verified Galois group of `K/Q`: images of `θ` plus the composition table
/// `table[i][j] = index of σ_i ∘ σ_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisData {
    maps: Vec<Vec<BigRational>>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl GaloisData {
    pub fn maps(&self) -> &[Vec<BigRational>] {
        &self.maps
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Index of `σ_i⁻¹`.
    pub fn inverse(&self, i: usize) -> usize {
        self.table[i]
            .iter()
            .position(|&k| k == self.identity)
            .expect("group table has inverses")
    }
}

fn theta_coeffs(n: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    if n > 1 {
        v[1] = BigRational::one();
    }
    v
}

/// Checks that the supplied images of `θ` form the full Galois group of the
/// field: every image is a root of the defining polynomial, images are
/// distinct, there are exactly `[K:Q]` of them, and the set is closed under
/// composition. A missing identity map is inserted at index 0.
pub fn verify_galois_group(
    field: &Arc<NumberFieldDesc>,
    images: Vec<Vec<BigRational>>,
) -> Result<GaloisData> {
    let n = field.degree();
    let theta = FieldElement::theta(field);
    let mut elems = Vec::with_capacity(images.len() + 1);
    for (k, img) in images.into_iter().enumerate() {
        if img.len() > n {
            return Err(Error::InvalidGaloisData(format!(
                "map {k}: image has {} coefficients, field degree is {n}",
                img.len()
            )));
        }
        elems.push(FieldElement::from_poly_coeffs(field, img));
    }
    if n == 1 {
        // θ is rational, the only automorphism is the identity
        elems.retain(|e| e == &theta);
    }
    if !elems.contains(&theta) {
        elems.insert(0, theta.clone());
    }
    let f = field.defining_poly();
    for (k, g) in elems.iter().enumerate() {
        let val = f.coeffs().iter().rev().fold(FieldElement::zero(field), |acc, c| {
            &(&acc * g) + &FieldElement::from_rational(field, BigRational::from_integer(c.clone()))
        });
        if !val.is_zero() {
            return Err(Error::InvalidGaloisData(format!(
                "map {k} (θ ↦ {g}): image is not a root of {f}"
            )));
        }
    }
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if elems[i] == elems[j] {
                return Err(Error::InvalidGaloisData(format!("maps {i} and {j} coincide")));
            }
        }
    }
    if elems.len() != n {
        return Err(Error::InvalidGaloisData(format!(
            "expected {n} automorphisms, got {}",
            elems.len()
        )));
    }
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            // σ_i(σ_j(θ)) = P_j(σ_i(θ))
            let comp = elems[j].substitute(&elems[i]);
            table[i][j] = elems.iter().position(|e| e == &comp).ok_or_else(|| {
                Error::InvalidGaloisData(format!(
                    "composition of maps {i} and {j} (θ ↦ {comp}) is not in the set"
                ))
            })?;
        }
    }
    let identity = elems.iter().position(|e| e == &theta).unwrap();
    let maps = if n == 1 {
        vec![theta_coeffs(1)]
    } else {
        elems.iter().map(|e| e.coeffs().to_vec()).collect()
    };
    Ok(GaloisData {
        maps,
        table,
        identity,
    })
}

/// Applies `σ_index` to `a`.
pub fn apply_galois(sigma_index: usize, a: &FieldElement) -> Result<FieldElement> {
    let field = a.field();
    let g = field.require_galois()?;
    let img = g.maps.get(sigma_index).ok_or_else(|| {
        Error::BadInput(format!(
            "Galois map index {sigma_index} out of range ({} maps)",
            g.maps.len()
        ))
    })?;
    if sigma_index == g.identity || field.degree() == 1 {
        return Ok(a.clone());
    }
    let image = FieldElement::from_coeffs(field, img.clone())?;
    Ok(a.substitute(&image))
}

/// All distinct images of `a` under the Galois group, in map order.
pub fn galois_orbit(a: &FieldElement) -> Result<Vec<FieldElement>> {
    let g = a.field().require_galois()?;
    let mut out: Vec<FieldElement> = Vec::new();
    for k in 0..g.len() {
        let img = apply_galois(k, a)?;
        if !out.contains(&img) {
            out.push(img);
        }
    }
    Ok(out)
}
