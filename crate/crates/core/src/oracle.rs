//! Explicit coincident tuples for the local models: Morin canonical forms
//! and the moment-curve map. Works in exact rationals or in `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Number type the oracles compute in.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
}

impl Scalar for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    /// Rationals are written as strings, `"p"` or `"p/q"`.
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

fn pow<T: Scalar>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

/// `L∞` distance.
fn distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// Morin model `Σ^{1^k}` from `R^m` to `R^n`, with the free coordinates
/// `x_1..x_{m-1}` fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct MorinModel<T> {
    pub k: u32,
    pub m: usize,
    pub n: usize,
    pub coords: Vec<T>,
}

impl<T: Scalar> MorinModel<T> {
    pub fn new(k: u32, m: usize, n: usize, coords: Vec<T>) -> Result<Self> {
        check_morin(k, m, n)?;
        if coords.len() != m - 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} free coordinates, got {}",
                m - 1,
                coords.len()
            )));
        }
        Ok(Self { k, m, n, coords })
    }

    /// Index (0-based into `coords`) of the coefficient of `x_m^l` in the
    /// last output coordinate.
    pub fn last_coefficient_index(&self, l: u32) -> Option<usize> {
        (1..self.k).contains(&l).then(|| (self.n - self.m) * self.k as usize + l as usize - 1)
    }

    /// The source point with `x_m = s`.
    pub fn point(&self, s: T) -> Vec<T> {
        let mut p = self.coords.clone();
        p.push(s);
        p
    }
}

fn check_morin(k: u32, m: usize, n: usize) -> Result<()> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("need k >= 1 and m >= 1".into()));
    }
    if n < m {
        return Err(Error::InvalidParameter(format!("need n >= m, got m = {m}, n = {n}")));
    }
    if k as usize * (n - m + 1) > m {
        return Err(Error::InvalidParameter(format!(
            "k(n - m + 1) <= m fails: {} > {m}",
            k as usize * (n - m + 1)
        )));
    }
    Ok(())
}

/// Image of `point` under the canonical form of `model`.
pub fn morin_eval<T: Scalar>(point: &[T], model: &MorinModel<T>) -> Result<Vec<T>> {
    let (k, m, n) = (model.k as usize, model.m, model.n);
    if point.len() != m {
        return Err(Error::InvalidParameter(format!("point has {} coordinates, expected {m}", point.len())));
    }
    let x = |i: usize| point[i - 1].clone();
    let xm = x(m);
    let mut y: Vec<T> = point[..m - 1].to_vec();
    for i in m..n {
        let mut s = T::zero();
        for l in 1..=k {
            s = s + x((i - m) * k + l) * pow(&xm, l as u32);
        }
        y.push(s);
    }
    let mut last = pow(&xm, k as u32 + 1);
    for l in 1..k {
        last = last + x((n - m) * k + l) * pow(&xm, l as u32);
    }
    y.push(last);
    Ok(y)
}

/// `q` pairwise distinct source points with a common image.
#[derive(Debug, Clone, PartialEq)]
pub struct CoincidentTuple<T> {
    pub points: Vec<Vec<T>>,
    pub images: Vec<Vec<T>>,
    /// Largest pairwise distance between images.
    pub residual: T,
    /// Smallest pairwise distance between points.
    pub min_separation: T,
}

impl<T: Scalar> CoincidentTuple<T> {
    pub fn from_points<F>(points: Vec<Vec<T>>, f: F) -> Result<Self>
    where
        F: Fn(&[T]) -> Result<Vec<T>>,
    {
        let images = points.iter().map(|p| f(p)).collect::<Result<Vec<_>>>()?;
        let mut residual = T::zero();
        let mut min_separation: Option<T> = None;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let r = distance(&images[i], &images[j]);
                if r > residual {
                    residual = r;
                }
                let s = distance(&points[i], &points[j]);
                if min_separation.as_ref().is_none_or(|m| s < *m) {
                    min_separation = Some(s);
                }
            }
        }
        Ok(Self { points, images, residual, min_separation: min_separation.unwrap_or_else(T::zero) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn image(&self) -> &[T] {
        &self.images[0]
    }

    /// Residual within `tol` and points separated by more than `sep`.
    pub fn verify(&self, tol: &T, sep: &T) -> bool {
        self.residual <= *tol && self.min_separation > *sep
    }

    pub fn to_json(&self) -> Value {
        let vecs = |v: &[Vec<T>]| -> Value {
            Value::Array(v.iter().map(|p| Value::Array(p.iter().map(Scalar::to_json).collect())).collect())
        };
        json!({
            "points": vecs(&self.points),
            "image": Value::Array(self.image().iter().map(Scalar::to_json).collect()),
            "residual": self.residual.to_json(),
            "min_separation": self.min_separation.to_json(),
        })
    }
}

/// `k + 1` equally spaced roots `j - k/2`, summing to zero.
pub fn default_roots<T: Scalar>(k: u32) -> Vec<T> {
    (0..=k as i64).map(|j| T::from_ratio(2 * j - k as i64, 2)).collect()
}

/// Coefficients `c_0..c_{k+1}` of `∏ (x - r_j)`, lowest first.
pub fn monic_from_roots<T: Scalar>(roots: &[T]) -> Vec<T> {
    let mut c = vec![T::one()];
    for r in roots {
        let mut next = vec![T::zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].clone() + ci.clone();
            next[i] = next[i].clone() - ci.clone() * r.clone();
        }
        c = next;
    }
    c
}

/// [`morin_tuple_with_roots`] with [`default_roots`].
pub fn morin_tuple<T: Scalar>(k: u32, m: usize, n: usize) -> Result<(MorinModel<T>, CoincidentTuple<T>)> {
    morin_tuple_with_roots(k, m, n, &default_roots(k))
}

/// Builds a Morin model whose last output restricted to the `x_m` axis is
/// `∏ (x - r_j)` up to a constant, and the `k + 1` points `x_m = r_j`.
pub fn morin_tuple_with_roots<T: Scalar>(
    k: u32,
    m: usize,
    n: usize,
    roots: &[T],
) -> Result<(MorinModel<T>, CoincidentTuple<T>)> {
    check_morin(k, m, n)?;
    if roots.len() != k as usize + 1 {
        return Err(Error::InvalidParameter(format!("need {} roots, got {}", k + 1, roots.len())));
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                return Err(Error::InvalidParameter(format!("repeated root {:?}", roots[i])));
            }
        }
    }
    let sum = roots.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !sum.is_zero() {
        return Err(Error::InvalidParameter(format!("roots must sum to zero, sum is {sum:?}")));
    }
    let c = monic_from_roots(roots);
    let mut model = MorinModel::new(k, m, n, vec![T::zero(); m - 1])?;
    for l in 1..k {
        let idx = model.last_coefficient_index(l).expect("l in range");
        model.coords[idx] = c[l as usize].clone();
    }
    let points: Vec<Vec<T>> = roots.iter().map(|r| model.point(r.clone())).collect();
    let tuple = CoincidentTuple::from_points(points, |p| morin_eval(p, &model))?;
    Ok((model, tuple))
}

/// Re-evaluates `tuple` after adding `eps` to the coefficient of `x_m^l` in
/// the last output, returning the new residual.
pub fn perturbed_residual<T: Scalar>(
    model: &MorinModel<T>,
    tuple: &CoincidentTuple<T>,
    l: u32,
    eps: T,
) -> Result<T> {
    let idx = model
        .last_coefficient_index(l)
        .ok_or_else(|| Error::InvalidParameter(format!("no coefficient of x_m^{l} for k = {}", model.k)))?;
    let mut shifted = model.clone();
    shifted.coords[idx] = shifted.coords[idx].clone() + eps.clone();
    let points = tuple
        .points
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p[idx] = p[idx].clone() + eps.clone();
            p
        })
        .collect();
    Ok(CoincidentTuple::from_points(points, |p| morin_eval(p, &shifted))?.residual)
}

/// The map `x ↦ (x_1 - x_N^2, …, x_{N-1} - x_N^N)` with `N = len(x)`.
pub fn moment_map<T: Scalar>(x: &[T]) -> Vec<T> {
    let (last, head) = x.split_last().expect("nonempty point");
    head.iter().enumerate().map(|(j, xj)| xj.clone() - pow(last, j as u32 + 2)).collect()
}

/// The point `(c_1 + t^2, …, c_{N-1} + t^N, t)` of the moment curve.
pub fn moment_point<T: Scalar>(c: &[T], t: &T) -> Vec<T> {
    let mut p: Vec<T> = c.iter().enumerate().map(|(j, cj)| cj.clone() + pow(t, j as u32 + 2)).collect();
    p.push(t.clone());
    p
}

/// `q` points of the moment curve through `c` in `R^{n+d+1}`.
pub fn moment_tuple<T: Scalar>(n: usize, d: usize, q: usize, c: &[T], t: &[T]) -> Result<CoincidentTuple<T>> {
    if c.len() != n + d {
        return Err(Error::InvalidParameter(format!("c must have n + d = {} entries, got {}", n + d, c.len())));
    }
    if t.len() != q || q < 2 {
        return Err(Error::InvalidParameter(format!("need q >= 2 parameters, got q = {q}, {} values", t.len())));
    }
    for i in 0..q {
        for j in i + 1..q {
            if t[i] == t[j] {
                return Err(Error::InvalidParameter(format!("repeated parameter t = {:?}", t[i])));
            }
        }
    }
    let points = t.iter().map(|ti| moment_point(c, ti)).collect();
    CoincidentTuple::from_points(points, |p| Ok(moment_map(p)))
}

/// Random instance with entries `a/b`, `|a| <= 20`, `1 <= b <= 6`, and
/// distinct parameters.
pub fn random_moment_tuple<T: Scalar, R: Rng>(n: usize, d: usize, q: usize, rng: &mut R) -> Result<(Vec<T>, Vec<T>, CoincidentTuple<T>)> {
    let draw = |rng: &mut R| T::from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6));
    let c: Vec<T> = (0..n + d).map(|_| draw(rng)).collect();
    let mut t: Vec<T> = Vec::with_capacity(q);
    while t.len() < q {
        let v = draw(rng);
        if !t.contains(&v) {
            t.push(v);
        }
    }
    let tuple = moment_tuple(n, d, q, &c, &t)?;
    Ok((c, t, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn fold() {
        let model = MorinModel::<BigRational>::new(1, 1, 1, vec![]).unwrap();
        assert_eq!(morin_eval(&[q(3, 1)], &model).unwrap(), vec![q(9, 1)]);
        let (_, t) = morin_tuple_with_roots(1, 1, 1, &[q(-1, 1), q(1, 1)]).unwrap();
        assert_eq!(t.image(), &[q(1, 1)]);
        assert!(t.residual.is_zero());
    }

    #[test]
    fn zero_maps_to_zero() {
        let model = MorinModel::<BigRational>::new(2, 6, 7, vec![q(0, 1); 5]).unwrap();
        assert!(morin_eval(&vec![q(0, 1); 6], &model).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn quartic_roots() {
        let roots: Vec<BigRational> = default_roots(3);
        assert_eq!(roots, vec![q(-3, 2), q(-1, 2), q(1, 2), q(3, 2)]);
        let c = monic_from_roots(&roots);
        assert_eq!(c, vec![q(9, 16), q(0, 1), q(-5, 2), q(0, 1), q(1, 1)]);
        let (model, t) = morin_tuple::<BigRational>(3, 3, 3).unwrap();
        assert_eq!(model.coords, vec![q(0, 1), q(-5, 2)]);
        assert_eq!(t.len(), 4);
        assert!(t.residual.is_zero());
        assert_eq!(t.min_separation, q(1, 1));
    }

    #[test]
    fn constraint_enforced() {
        assert!(morin_tuple::<f64>(2, 4, 6).is_err());
        assert!(morin_tuple::<f64>(2, 4, 5).is_ok());
        assert!(morin_tuple::<f64>(2, 4, 3).is_err());
        assert!(morin_tuple::<f64>(2, 4, 4).is_ok());
        assert!(morin_tuple_with_roots::<f64>(1, 2, 2, &[1.0, 2.0]).is_err());
        assert!(morin_tuple_with_roots::<f64>(1, 2, 2, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn perturbation_breaks_coincidence() {
        let (model, t) = morin_tuple::<BigRational>(3, 3, 3).unwrap();
        let r1 = perturbed_residual(&model, &t, 1, q(1, 1000)).unwrap();
        let r2 = perturbed_residual(&model, &t, 1, q(2, 1000)).unwrap();
        assert!(r1.is_positive());
        assert_eq!(r2, r1.clone() * q(2, 1));
        assert!(perturbed_residual(&model, &t, 3, q(1, 10)).is_err());
    }

    #[test]
    fn moment_examples() {
        let t = moment_tuple(1, 1, 2, &[q(1, 1), q(2, 1)], &[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(t.image(), &[q(1, 1), q(2, 1)]);
        assert!(t.residual.is_zero());
        let roots: Vec<BigRational> = default_roots(3);
        let t = moment_tuple(2, 1, 4, &vec![q(0, 1); 3], &roots).unwrap();
        assert!(t.image().iter().all(|v| v.is_zero()));
        assert!(t.min_separation.is_positive());
        assert!(moment_tuple(1, 1, 2, &[q(1, 1), q(2, 1)], &[q(1, 1), q(1, 1)]).is_err());
    }
}
