use std::fmt;

/// Variable pair used by a plane map.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PlaneVars {
    /// `(z0, z1)`: the plane of the form `dz0^dz1`.
    Z0Z1,
    /// `(z1, z2)`: the plane fed to the Klein embedding.
    Z1Z2,
}

/// Coordinate system an object lives in.
///
/// `Affine(k)` is the chart `z_k = 1` of projective 3-space with the other
/// three variables as coordinates; `Affine(3)` is the standard chart.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Chart {
    Plane(PlaneVars),
    Affine(u8),
    Homogeneous,
}

impl Chart {
    pub const AFFINE: Chart = Chart::Affine(3);
    pub const PLANE01: Chart = Chart::Plane(PlaneVars::Z0Z1);
    pub const PLANE12: Chart = Chart::Plane(PlaneVars::Z1Z2);

    /// Coordinate variables in order.
    pub fn vars(&self) -> Vec<usize> {
        match self {
            Chart::Plane(PlaneVars::Z0Z1) => vec![0, 1],
            Chart::Plane(PlaneVars::Z1Z2) => vec![1, 2],
            Chart::Affine(k) => (0..4).filter(|&i| i != *k as usize).collect(),
            Chart::Homogeneous => vec![0, 1, 2, 3],
        }
    }

    pub fn mask(&self) -> u8 {
        self.vars().iter().fold(0, |m, &v| m | (1 << v))
    }

    pub fn dim(&self) -> usize {
        self.vars().len()
    }

    pub fn is_standard_affine(&self) -> bool {
        *self == Chart::AFFINE
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Chart::Plane(PlaneVars::Z0Z1) => "plane01",
            Chart::Plane(PlaneVars::Z1Z2) => "plane12",
            Chart::Affine(0) => "z0",
            Chart::Affine(1) => "z1",
            Chart::Affine(2) => "z2",
            Chart::Affine(_) => "z3",
            Chart::Homogeneous => "homogeneous",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Chart> {
        Some(match tag {
            "plane01" => Chart::PLANE01,
            "plane12" => Chart::PLANE12,
            "z0" => Chart::Affine(0),
            "z1" => Chart::Affine(1),
            "z2" => Chart::Affine(2),
            "z3" | "affine" => Chart::AFFINE,
            "homogeneous" => Chart::Homogeneous,
            _ => return None,
        })
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
