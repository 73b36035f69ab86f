//! Splittings `P·A = E·I_m − F` of a preconditioned tensor.
//!
//! All variants except the `Diagonal*` family assume `A` has a unit diagonal,
//! so that `A = I_m − L·I_m − F` with `L` the negated strict lower triangle of
//! the majorization. Every constructed pair is checked to reconstruct `P·A`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::precond::{
    build_preconditioner, require_unit_diagonal, PrecondKind, PreconditionerSpec,
};
use crate::tensor::{
    majorization, matrix_tensor_product, split_dlf, split_parts, DenseTensor, SquareMatrix,
};

/// Relative tolerance of the reconstruction check.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplittingVariant {
    /// `E = P`, Jacobi-type.
    JacobiE1,
    /// `E = I`, full band.
    JacobiE2,
    /// `E = I`, upper band only.
    JacobiE3,
    /// `E = I`, lower band only.
    JacobiE4,
    /// `E = I − S·K₁ − K·S₁`, adjacent bands only.
    JacobiE5,
    /// `E = P(I − L)`, Gauss–Seidel-type.
    GaussSeidelM1,
    /// Lower-triangular part of `P·A`, full band.
    GaussSeidelM2,
    /// As M2 with the upper band only.
    GaussSeidelM3,
    /// As M2 with the lower band only.
    GaussSeidelM4,
    /// Adjacent bands only.
    GaussSeidelM5,
    /// Classical SOR on the unpreconditioned tensor.
    Sor { omega: f64 },
    /// SOR built on the M2 decomposition of `P·A`.
    PrecondSor { omega: f64 },
    /// `E = D` on the diagonal of `P·A`; no unit diagonal needed.
    DiagonalJacobi,
    /// `E = D − L` on `P·A`.
    DiagonalGaussSeidel,
    /// `E = (D − ωL)/ω` on `P·A`.
    DiagonalSor { omega: f64 },
}

impl SplittingVariant {
    pub const NAMES: [&'static str; 15] = [
        "e1f1",
        "e2f2",
        "e3f3",
        "e4f4",
        "e5f5",
        "m1n1",
        "m2n2",
        "m3n3",
        "m4n4",
        "m5n5",
        "sor",
        "psor",
        "diag-jacobi",
        "diag-gs",
        "diag-sor",
    ];

    /// Parses a variant name; `omega` is used only by the SOR-type variants.
    pub fn from_name(name: &str, omega: f64) -> Result<Self> {
        let v = match name.to_ascii_lowercase().as_str() {
            "e1f1" => Self::JacobiE1,
            "e2f2" => Self::JacobiE2,
            "e3f3" => Self::JacobiE3,
            "e4f4" => Self::JacobiE4,
            "e5f5" => Self::JacobiE5,
            "m1n1" => Self::GaussSeidelM1,
            "m2n2" => Self::GaussSeidelM2,
            "m3n3" => Self::GaussSeidelM3,
            "m4n4" => Self::GaussSeidelM4,
            "m5n5" => Self::GaussSeidelM5,
            "sor" => Self::Sor { omega },
            "psor" => Self::PrecondSor { omega },
            "diag-jacobi" => Self::DiagonalJacobi,
            "diag-gs" => Self::DiagonalGaussSeidel,
            "diag-sor" => Self::DiagonalSor { omega },
            other => {
                return Err(Error::Config(format!(
                    "unknown splitting '{other}', expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        v.validate()?;
        Ok(v)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::JacobiE1 => "e1f1",
            Self::JacobiE2 => "e2f2",
            Self::JacobiE3 => "e3f3",
            Self::JacobiE4 => "e4f4",
            Self::JacobiE5 => "e5f5",
            Self::GaussSeidelM1 => "m1n1",
            Self::GaussSeidelM2 => "m2n2",
            Self::GaussSeidelM3 => "m3n3",
            Self::GaussSeidelM4 => "m4n4",
            Self::GaussSeidelM5 => "m5n5",
            Self::Sor { .. } => "sor",
            Self::PrecondSor { .. } => "psor",
            Self::DiagonalJacobi => "diag-jacobi",
            Self::DiagonalGaussSeidel => "diag-gs",
            Self::DiagonalSor { .. } => "diag-sor",
        }
    }

    pub fn omega(&self) -> Option<f64> {
        match self {
            Self::Sor { omega } | Self::PrecondSor { omega } | Self::DiagonalSor { omega } => {
                Some(*omega)
            }
            _ => None,
        }
    }

    /// True for variants that read the raw diagonal of `P·A` instead of
    /// assuming a unit diagonal.
    pub fn is_diagonal_based(&self) -> bool {
        matches!(
            self,
            Self::DiagonalJacobi | Self::DiagonalGaussSeidel | Self::DiagonalSor { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self.omega() {
            Some(w) if !(w > 0.0 && w < 2.0) => {
                Err(Error::Config(format!("omega = {w} must lie in (0, 2)")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SplittingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.omega() {
            Some(w) => write!(f, "{}(omega={w})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

impl Serialize for SplittingVariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A splitting `preconditioned = E·I_m − F`.
#[derive(Debug, Clone)]
pub struct SplitPair {
    pub e_matrix: SquareMatrix,
    pub f_tensor: DenseTensor,
    pub variant: SplittingVariant,
    /// The preconditioner actually applied (identity for plain SOR).
    pub preconditioner: SquareMatrix,
    /// `P·A`.
    pub preconditioned: DenseTensor,
}

impl SplitPair {
    /// `max |E·I_m − F − P·A|`.
    pub fn reconstruction_error(&self) -> Result<f64> {
        let order = self.f_tensor.order();
        let rebuilt = &self.e_matrix.times_identity(order)? - &self.f_tensor;
        Ok(rebuilt.max_abs_diff(&self.preconditioned))
    }
}

/// The upper (`S`) and lower (`K`) band matrices of a preconditioner.
fn bands(p: &SquareMatrix) -> (SquareMatrix, SquareMatrix) {
    (p.strict_upper(), p.strict_lower())
}

/// Builds the splitting `variant` of `P·A` with `P` from `spec`.
pub fn make_splitting(
    a: &DenseTensor,
    spec: &PreconditionerSpec,
    variant: SplittingVariant,
) -> Result<SplitPair> {
    variant.validate()?;
    let n = a.dim();
    let order = a.order();
    if !variant.is_diagonal_based() {
        require_unit_diagonal(a)?;
    }
    let adjacent_only = matches!(
        variant,
        SplittingVariant::JacobiE5 | SplittingVariant::GaussSeidelM5
    );
    if adjacent_only
        && (spec.kind == PrecondKind::BaselineColumn
            || spec.effective_s() != 1
            || spec.effective_k() != 1)
    {
        return Err(Error::VariantDomain(format!(
            "{} is defined only for adjacent bands (s = k = 1)",
            variant.name()
        )));
    }

    let mut p = match variant {
        SplittingVariant::Sor { .. } => SquareMatrix::identity(n),
        _ => build_preconditioner(spec, a)?,
    };
    let (mut s, mut k) = bands(&p);
    match variant {
        SplittingVariant::JacobiE3 | SplittingVariant::GaussSeidelM3 => {
            k = SquareMatrix::zeros(n);
            p = &SquareMatrix::identity(n) + &s;
        }
        SplittingVariant::JacobiE4 | SplittingVariant::GaussSeidelM4 => {
            s = SquareMatrix::zeros(n);
            p = &SquareMatrix::identity(n) + &k;
        }
        _ => {}
    }
    let pa = matrix_tensor_product(&p, a)?;
    let id = SquareMatrix::identity(n);
    let ti = |m: &SquareMatrix| m.times_identity(order);

    let (e, f) = if variant.is_diagonal_based() {
        let parts = split_parts(&pa);
        let (d, lt, r) = (parts.diagonal, parts.lower, parts.rest);
        match variant {
            SplittingVariant::DiagonalJacobi => (d, -&(&ti(&lt)? + &r)),
            SplittingVariant::DiagonalGaussSeidel => (&d + &lt, -&r),
            SplittingVariant::DiagonalSor { omega } => {
                let e = &(&d + &(&lt * omega)) * (1.0 / omega);
                let f = &(&(&ti(&d)? * (1.0 - omega)) - &(&r * omega)) * (1.0 / omega);
                (e, f)
            }
            _ => unreachable!(),
        }
    } else {
        let dlf = split_dlf(a);
        let (l, fa) = (&dlf.l, &dlf.f);
        let lf = &ti(l)? + fa;
        match variant {
            SplittingVariant::JacobiE1 => (p.clone(), matrix_tensor_product(&p, &lf)?),
            SplittingVariant::JacobiE2
            | SplittingVariant::JacobiE3
            | SplittingVariant::JacobiE4 => {
                let f = &matrix_tensor_product(&p, &lf)? - &ti(&(&s + &k))?;
                (id.clone(), f)
            }
            SplittingVariant::JacobiE5 => {
                let ones = PreconditionerSpec::full_band(1.0, 1.0, 1, 1);
                let (s1, k1) = bands(&build_preconditioner(&ones, a)?);
                let e = &(&id - &(&s * &k1)) - &(&k * &s1);
                let l_prime = l - &k1;
                let f_prime = fa - &ti(&s1)?;
                let f = &(&(&lf - &ti(&(&s + &k))?)
                    + &matrix_tensor_product(&s, &(&ti(&l_prime)? + fa))?)
                    + &matrix_tensor_product(&k, &(&ti(l)? + &f_prime))?;
                (e, f)
            }
            SplittingVariant::GaussSeidelM1 => (&p * &(&id - l), matrix_tensor_product(&p, fa)?),
            SplittingVariant::GaussSeidelM5 => {
                let ones = PreconditionerSpec::full_band(1.0, 1.0, 1, 1);
                let (s1, _) = bands(&build_preconditioner(&ones, a)?);
                let e = &(&(&(&id + &k) * &(&id - l)) - &(&s * l)) - &(&k * &s1);
                let f_prime = fa - &ti(&s1)?;
                let f = &(&matrix_tensor_product(&(&id + &s), fa)? - &ti(&s)?)
                    + &matrix_tensor_product(&k, &f_prime)?;
                (e, f)
            }
            SplittingVariant::GaussSeidelM2
            | SplittingVariant::GaussSeidelM3
            | SplittingVariant::GaussSeidelM4
            | SplittingVariant::PrecondSor { .. } => {
                let sl = &s * l;
                let kf = split_parts(&matrix_tensor_product(&k, fa)?);
                let d_ab = &(&id - &sl.diagonal_part()) - &kf.diagonal;
                let l_ab = &(&(&(l - &k) + &(&k * l)) + &sl.strict_lower()) + &kf.lower;
                let f_ab = &(&(&(fa - &ti(&s)?) + &matrix_tensor_product(&s, fa)?)
                    + &ti(&sl.strict_upper())?)
                    + &kf.rest;
                let omega = variant.omega().unwrap_or(1.0);
                if omega == 1.0 {
                    (&d_ab - &l_ab, f_ab)
                } else {
                    let e = &(&d_ab - &(&l_ab * omega)) * (1.0 / omega);
                    let f = &(&(&ti(&d_ab)? * (1.0 - omega)) + &(&f_ab * omega)) * (1.0 / omega);
                    (e, f)
                }
            }
            SplittingVariant::Sor { omega } => {
                let e = &(&id - &(l * omega)) * (1.0 / omega);
                let f = &(&(&ti(&id)? * (1.0 - omega)) + &(fa * omega)) * (1.0 / omega);
                (e, f)
            }
            _ => unreachable!(),
        }
    };

    let split = SplitPair {
        e_matrix: e,
        f_tensor: f,
        variant,
        preconditioner: p,
        preconditioned: pa,
    };
    let max_diff = split.reconstruction_error()?;
    if max_diff > RECONSTRUCTION_TOL * split.preconditioned.max_abs().max(1.0) {
        return Err(Error::Reconstruction { max_diff });
    }
    Ok(split)
}

/// The iteration tensor `M(E)^{-1}·F`, computed by solving `E t = f` for
/// every mode-1 fiber `f` of `F`.
pub fn iteration_tensor(split: &SplitPair) -> Result<DenseTensor> {
    let lu = split.e_matrix.lu()?;
    let f = &split.f_tensor;
    let n = f.dim();
    let len = f.slice_len();
    let src = f.as_slice();
    let mut out = vec![0.0; src.len()];
    let mut fiber = vec![0.0; n];
    for c in 0..len {
        for (i, v) in fiber.iter_mut().enumerate() {
            *v = src[i * len + c];
        }
        lu.solve_in_place(&mut fiber);
        for (i, v) in fiber.iter().enumerate() {
            out[i * len + c] = *v;
        }
    }
    DenseTensor::new(f.order(), n, out)
}

/// Regular splitting: `M(E)^{-1} ≥ 0` and `F ≥ 0`, up to `-tol·scale`.
pub fn is_regular(split: &SplitPair, tol: f64) -> Result<bool> {
    let inv = split.e_matrix.inverse()?;
    let floor_e = -tol * inv.as_slice().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let floor_f = -tol * split.f_tensor.max_abs().max(1.0);
    Ok(inv.min_entry() >= floor_e && split.f_tensor.min_entry() >= floor_f)
}

/// Weak regular splitting: `M(E)^{-1} ≥ 0` and `M(E)^{-1}F ≥ 0`.
pub fn is_weak_regular(split: &SplitPair, tol: f64) -> Result<bool> {
    let inv = split.e_matrix.inverse()?;
    let floor_e = -tol * inv.as_slice().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let t = iteration_tensor(split)?;
    Ok(inv.min_entry() >= floor_e && t.min_entry() >= -tol * t.max_abs().max(1.0))
}

/// Majorization of `P·A`, handy for diagnostics.
pub fn preconditioned_majorization(split: &SplitPair) -> SquareMatrix {
    majorization(&split.preconditioned)
}
