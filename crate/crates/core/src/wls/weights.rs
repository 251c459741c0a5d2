use crate::{Error, Result, Vec3};

/// Weighting scheme for stencil points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightScheme {
    #[default]
    Wendland,
    InverseDistance,
}

impl std::str::FromStr for WeightScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wendland" => Ok(WeightScheme::Wendland),
            "invdist" | "inverse-distance" => Ok(WeightScheme::InverseDistance),
            _ => Err(Error::Argument(format!("unknown weight scheme '{s}'"))),
        }
    }
}

impl std::fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WeightScheme::Wendland => "wendland",
            WeightScheme::InverseDistance => "invdist",
        })
    }
}

/// Compactly supported Wendland function for degree `p`: ψ₃,₁ for p ≤ 2,
/// ψ₄,₂ for p ≤ 4 and ψ₅,₃ above. Zero for `r >= 1`.
pub fn wendland_weight(r: f64, p: usize) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    let s = 1.0 - r;
    if p <= 2 {
        s.powi(4) * (4.0 * r + 1.0)
    } else if p <= 4 {
        s.powi(6) * (35.0 * r * r + 18.0 * r + 3.0)
    } else {
        s.powi(8) * (((32.0 * r + 25.0) * r + 8.0) * r + 1.0)
    }
}

/// Index (1-based) of the nearest neighbor whose distance sets ρ.
pub fn rho_neighbor_index(p: usize) -> usize {
    (0.75 * ((p + 1) * (p + 2)) as f64).ceil() as usize
}

/// Multiplier `c` in ρ = c·‖u_k‖.
pub fn rho_constant(p: usize) -> f64 {
    match p {
        0..=2 => 1.15,
        3 | 4 => 1.2,
        _ => 1.25,
    }
}

/// Support radius ρ from the uv-plane distances of the stencil points to
/// the origin.
pub fn stencil_radius_rho(local_uv: &[[f64; 2]], p: usize) -> Result<f64> {
    if local_uv.is_empty() {
        return Err(Error::Argument("empty stencil".into()));
    }
    let mut d: Vec<f64> = local_uv.iter().map(|u| u[0].hypot(u[1])).collect();
    d.sort_by(f64::total_cmp);
    let k = rho_neighbor_index(p).min(d.len());
    Ok(rho_constant(p) * d[k - 1])
}

/// θ⁺ = max(0, a·b).
pub fn safeguard_theta(dir_i: &Vec3, dir_0: &Vec3) -> f64 {
    dir_i.dot(dir_0).max(0.0)
}

/// Safeguarded inverse distance weight θ⁺ / (‖u‖² + ε)^(p/4), with ε = 0.1
/// and `scaled_dist` in units of the stencil length scale.
pub fn inverse_distance_weight(theta: f64, scaled_dist: f64, p: usize) -> f64 {
    let q = p as f64 / 2.0;
    theta / (scaled_dist * scaled_dist + 0.1).sqrt().powf(q)
}
