//! Built-in surfaces with closed-form parametrizations.

use std::f64::consts::PI;

use crate::series::Taylor;
use crate::surface::{Domain, FrameRule, SurfacePatch};

fn k(v: f64) -> Taylor {
    Taylor::constant(v)
}

fn zero() -> Taylor {
    k(0.0)
}

/// Unit sphere map `omega(u1, u2)` in spherical coordinates.
fn omega(u1: &Taylor, u2: &Taylor) -> [Taylor; 3] {
    let (s1, c1) = (u1.sin(), u1.cos());
    [s1 * u2.cos(), s1 * u2.sin(), c1]
}

/// `f = g` graph `(f, f, u1, u2)`; it lies in the lightlike hyperplane
/// `x0 = x1`.
fn lightlike_graph(name: &str, domain: Domain, f: fn(&Taylor, &Taylor) -> Taylor) -> SurfacePatch {
    SurfacePatch::closed_form(name, domain, move |u1, u2| {
        let v = f(u1, u2);
        [v, v, *u1, *u2]
    })
}

/// Description of a catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Name of the optional real parameter and its default.
    pub parameter: Option<(&'static str, f64)>,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry { name: "plane", description: "spacelike plane (0, 0, u1, u2)", parameter: None },
    CatalogEntry { name: "sphere", description: "round sphere in the slice x0 = 0", parameter: Some(("radius", 1.0)) },
    CatalogEntry {
        name: "mercator_sphere",
        description: "unit sphere in isothermal Mercator coordinates",
        parameter: None,
    },
    CatalogEntry { name: "catenoid", description: "catenoid in the slice x0 = 0", parameter: None },
    CatalogEntry { name: "torus", description: "torus of revolution in the slice x0 = 0", parameter: None },
    CatalogEntry {
        name: "euclidean_graph",
        description: "graph (0, u1, u2, h) with h = sin(u1) cos(u2) / 2",
        parameter: None,
    },
    CatalogEntry { name: "graph_harmonic", description: "(f, f, u1, u2) with f = u1^2 - u2^2", parameter: None },
    CatalogEntry { name: "graph_nonharmonic", description: "(f, f, u1, u2) with f = u1^2", parameter: None },
    CatalogEntry {
        name: "graph_exp_harmonic",
        description: "(f, f, u1, u2) with f = exp(u1) cos(u2)",
        parameter: None,
    },
    CatalogEntry {
        name: "graph_cubic_harmonic",
        description: "(f, f, u1, u2) with f = u1^3 - 3 u1 u2^2",
        parameter: None,
    },
    CatalogEntry {
        name: "generic_spacelike",
        description: "graph (sin(u1) sinh(u2) / 3, u1 u2 / 5, u1, u2) with no special structure",
        parameter: None,
    },
    CatalogEntry {
        name: "hyperbolic_plane",
        description: "totally geodesic plane of hyperbolic 3-space",
        parameter: None,
    },
    CatalogEntry { name: "hyperbolic_horosphere", description: "horosphere of hyperbolic 3-space", parameter: None },
    CatalogEntry {
        name: "hyperbolic_sphere",
        description: "geodesic sphere of hyperbolic 3-space",
        parameter: Some(("radius", 0.8)),
    },
    CatalogEntry {
        name: "desitter_equator",
        description: "round 2-sphere x0 = 0 of de Sitter 3-space",
        parameter: None,
    },
    CatalogEntry {
        name: "desitter_horosphere",
        description: "intersection of de Sitter 3-space with the hyperplane -x0 + x1 = c",
        parameter: Some(("c", 1.0)),
    },
    CatalogEntry { name: "lightcone_sphere", description: "section (1, omega) of the lightcone", parameter: None },
    CatalogEntry {
        name: "lightcone_paraboloid",
        description: "flat section ((1 + s) / 2, (s - 1) / 2, u1, u2) of the lightcone, s = u1^2 + u2^2",
        parameter: None,
    },
    CatalogEntry {
        name: "lightcone_warped",
        description: "section rho (1, omega) of the lightcone with rho = exp(sin(u1) cos(u2) / 4)",
        parameter: None,
    },
    CatalogEntry { name: "minkowski_plane", description: "spacelike plane of the slice x3 = 0", parameter: None },
    CatalogEntry {
        name: "minkowski_hyperboloid",
        description: "hyperbolic plane inside the slice x3 = 0",
        parameter: None,
    },
    CatalogEntry {
        name: "minkowski_graph",
        description: "spacelike graph (h, u1, u2, 0), h = sin(u1) cos(u2) / 5 + u1 u2 / 10",
        parameter: None,
    },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.name)
}

/// Looks a catalog surface up by name. `param` overrides the entry's
/// parameter where it has one.
pub fn lookup(name: &str, param: Option<f64>) -> Option<SurfacePatch> {
    let entry = ENTRIES.iter().find(|e| e.name == name)?;
    let p = param.or(entry.parameter.map(|p| p.1)).unwrap_or(0.0);
    Some(match name {
        "plane" => plane(),
        "sphere" => sphere(p),
        "mercator_sphere" => mercator_sphere(),
        "catenoid" => catenoid(),
        "torus" => torus(),
        "euclidean_graph" => euclidean_graph(),
        "graph_harmonic" => graph_harmonic(),
        "graph_nonharmonic" => graph_nonharmonic(),
        "graph_exp_harmonic" => graph_exp_harmonic(),
        "graph_cubic_harmonic" => graph_cubic_harmonic(),
        "generic_spacelike" => generic_spacelike(),
        "hyperbolic_plane" => hyperbolic_plane(),
        "hyperbolic_horosphere" => hyperbolic_horosphere(),
        "hyperbolic_sphere" => hyperbolic_sphere(p),
        "desitter_equator" => desitter_equator(),
        "desitter_horosphere" => desitter_horosphere(p),
        "lightcone_sphere" => lightcone_sphere(),
        "lightcone_paraboloid" => lightcone_paraboloid(),
        "lightcone_warped" => lightcone_warped(),
        "minkowski_plane" => minkowski_plane(),
        "minkowski_hyperboloid" => minkowski_hyperboloid(),
        "minkowski_graph" => minkowski_graph(),
        _ => return None,
    })
}

pub fn sphere_domain() -> Domain {
    Domain::new(0.1, PI - 0.1, 0.0, 2.0 * PI)
}

pub fn plane() -> SurfacePatch {
    SurfacePatch::closed_form("plane", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| [zero(), zero(), *u1, *u2])
}

pub fn sphere(r: f64) -> SurfacePatch {
    SurfacePatch::closed_form("sphere", sphere_domain(), move |u1, u2| {
        let w = omega(u1, u2);
        [zero(), w[0] * r, w[1] * r, w[2] * r]
    })
}

pub fn mercator_sphere() -> SurfacePatch {
    SurfacePatch::closed_form("mercator_sphere", Domain::new(0.0, 2.0 * PI, -2.0, 2.0), |u1, u2| {
        let sech = u2.cosh().recip();
        [zero(), sech * u1.cos(), sech * u1.sin(), u2.tanh()]
    })
}

pub fn catenoid() -> SurfacePatch {
    SurfacePatch::closed_form("catenoid", Domain::new(0.0, 2.0 * PI, -1.0, 1.0), |u1, u2| {
        let ch = u2.cosh();
        [zero(), ch * u1.cos(), ch * u1.sin(), *u2]
    })
}

pub fn torus() -> SurfacePatch {
    SurfacePatch::closed_form("torus", Domain::new(0.0, 2.0 * PI, 0.0, 2.0 * PI), |u1, u2| {
        let r = u1.cos() + 2.0;
        [zero(), r * u2.cos(), r * u2.sin(), u1.sin()]
    })
}

pub fn euclidean_graph() -> SurfacePatch {
    SurfacePatch::closed_form("euclidean_graph", Domain::new(-1.5, 1.5, -1.5, 1.5), |u1, u2| {
        [zero(), *u1, *u2, u1.sin() * u2.cos() * 0.5]
    })
}

pub fn graph_harmonic() -> SurfacePatch {
    lightlike_graph("graph_harmonic", Domain::new(-1.0, 1.0, -1.0, 1.0), |a, b| *a * *a - *b * *b)
}

pub fn graph_nonharmonic() -> SurfacePatch {
    lightlike_graph("graph_nonharmonic", Domain::new(-1.0, 1.0, -1.0, 1.0), |a, _| *a * *a)
}

pub fn graph_exp_harmonic() -> SurfacePatch {
    lightlike_graph("graph_exp_harmonic", Domain::new(-1.0, 1.0, -1.0, 1.0), |a, b| a.exp() * b.cos())
}

pub fn graph_cubic_harmonic() -> SurfacePatch {
    lightlike_graph("graph_cubic_harmonic", Domain::new(-1.0, 1.0, -1.0, 1.0), |a, b| *a * *a * *a - *a * *b * *b * 3.0)
}

pub fn generic_spacelike() -> SurfacePatch {
    SurfacePatch::closed_form("generic_spacelike", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| {
        [u1.sin() * u2.sinh() / 3.0, *u1 * *u2 / 5.0, *u1, *u2]
    })
}

pub fn hyperbolic_plane() -> SurfacePatch {
    SurfacePatch::closed_form("hyperbolic_plane", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| {
        let c2 = u2.cosh();
        [u1.cosh() * c2, u1.sinh() * c2, u2.sinh(), zero()]
    })
    .with_frame_rule(FrameRule::TimelikePosition)
}

pub fn hyperbolic_horosphere() -> SurfacePatch {
    SurfacePatch::closed_form("hyperbolic_horosphere", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| {
        let s = (*u1 * *u1 + *u2 * *u2) * 0.5;
        [s + 1.0, s, *u1, *u2]
    })
    .with_frame_rule(FrameRule::TimelikePosition)
}

pub fn hyperbolic_sphere(rho: f64) -> SurfacePatch {
    SurfacePatch::closed_form("hyperbolic_sphere", sphere_domain(), move |u1, u2| {
        let w = omega(u1, u2);
        let sh = rho.sinh();
        [k(rho.cosh()), w[0] * sh, w[1] * sh, w[2] * sh]
    })
    .with_frame_rule(FrameRule::TimelikePosition)
}

pub fn desitter_equator() -> SurfacePatch {
    SurfacePatch::closed_form("desitter_equator", sphere_domain(), |u1, u2| {
        let w = omega(u1, u2);
        [zero(), w[0], w[1], w[2]]
    })
    .with_frame_rule(FrameRule::SpacelikePosition)
}

/// `HP((1, 1, 0, 0), c) ∩ S^3_1` as the graph over `(x2, x3)`:
/// `x0 = (1 - c^2 - s) / 2c`, `x1 = x0 + c`.
pub fn desitter_horosphere(c: f64) -> SurfacePatch {
    SurfacePatch::closed_form("desitter_horosphere", Domain::new(-1.0, 1.0, -1.0, 1.0), move |u1, u2| {
        let s = *u1 * *u1 + *u2 * *u2;
        let x0 = (-s + (1.0 - c * c)) / (2.0 * c);
        [x0, x0 + c, *u1, *u2]
    })
    .with_frame_rule(FrameRule::SpacelikePosition)
}

pub fn lightcone_sphere() -> SurfacePatch {
    SurfacePatch::closed_form("lightcone_sphere", sphere_domain(), |u1, u2| {
        let w = omega(u1, u2);
        [k(1.0), w[0], w[1], w[2]]
    })
}

pub fn lightcone_paraboloid() -> SurfacePatch {
    SurfacePatch::closed_form("lightcone_paraboloid", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| {
        let s = *u1 * *u1 + *u2 * *u2;
        [(s + 1.0) * 0.5, (s - 1.0) * 0.5, *u1, *u2]
    })
}

pub fn lightcone_warped() -> SurfacePatch {
    SurfacePatch::closed_form("lightcone_warped", sphere_domain(), |u1, u2| {
        let rho = (u1.sin() * u2.cos() * 0.25).exp();
        let w = omega(u1, u2);
        [rho, rho * w[0], rho * w[1], rho * w[2]]
    })
}

pub fn minkowski_plane() -> SurfacePatch {
    SurfacePatch::closed_form("minkowski_plane", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| [zero(), *u1, *u2, zero()])
}

pub fn minkowski_hyperboloid() -> SurfacePatch {
    SurfacePatch::closed_form("minkowski_hyperboloid", Domain::new(0.2, 1.5, 0.0, 2.0 * PI), |u1, u2| {
        let sh = u1.sinh();
        [u1.cosh(), sh * u2.cos(), sh * u2.sin(), zero()]
    })
}

pub fn minkowski_graph() -> SurfacePatch {
    SurfacePatch::closed_form("minkowski_graph", Domain::new(-1.0, 1.0, -1.0, 1.0), |u1, u2| {
        [u1.sin() * u2.cos() / 5.0 + *u1 * *u2 / 10.0, *u1, *u2, zero()]
    })
}
