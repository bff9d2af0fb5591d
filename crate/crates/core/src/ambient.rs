//! Average ambient power available to green power beacons, modelled as a
//! weighted sum of isotropic Gaussian bumps over a rectangular area.

use alloc::vec::Vec;

use crate::channel::Position2D;
use crate::error::{ensure, Error, Result};

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Position2D,
    pub max: Position2D,
}

impl Rect {
    pub const fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Self {
            min: Position2D::new(min_x, min_y),
            max: Position2D::new(max_x, max_y),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.min.is_finite() && self.max.is_finite(),
            "area",
            "corners must be finite",
        )?;
        ensure(
            self.max.x > self.min.x && self.max.y > self.min.y,
            "area",
            "must have positive width and height",
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: &Position2D) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn clamp(&self, p: Position2D) -> Position2D {
        Position2D::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    /// Peak available power in watts.
    pub weight: f64,
    pub center: Position2D,
    /// Isotropic standard deviation in meters.
    pub width: f64,
}

impl GaussianComponent {
    pub fn at(&self, pos: &Position2D) -> f64 {
        let d2 = pos.distance_sqr(&self.center);
        self.weight * libm::exp(-d2 / (2.0 * self.width * self.width))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientMap {
    components: Vec<GaussianComponent>,
    area: Rect,
}

impl AmbientMap {
    pub fn new(components: Vec<GaussianComponent>, area: Rect) -> Result<Self> {
        ensure(
            !components.is_empty(),
            "map.components",
            "must not be empty",
        )?;
        for c in &components {
            ensure(
                c.weight >= 0.0 && c.weight.is_finite(),
                "map.components.weight",
                "must be non-negative and finite",
            )?;
            ensure(
                c.width > 0.0 && c.width.is_finite(),
                "map.components.width",
                "must be positive and finite",
            )?;
            ensure(
                c.center.is_finite(),
                "map.components.center",
                "must be finite",
            )?;
        }
        area.validate()?;
        Ok(Self { components, area })
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    pub fn area(&self) -> &Rect {
        &self.area
    }

    /// Mixture value without the area check.
    pub fn power_unchecked(&self, pos: &Position2D) -> f64 {
        self.components.iter().map(|c| c.at(pos)).sum()
    }

    /// Average ambient power (W) at `pos`.
    pub fn ambient_power(&self, pos: &Position2D) -> Result<f64> {
        self.check(pos)?;
        Ok(self.power_unchecked(pos))
    }

    /// Power a green beacon at `pos` can radiate: the ambient power, capped.
    pub fn transmit_power(&self, pos: &Position2D, cap: f64) -> Result<f64> {
        self.check(pos)?;
        Ok(self.power_unchecked(pos).min(cap))
    }

    fn check(&self, pos: &Position2D) -> Result<()> {
        if self.area.contains(pos) {
            Ok(())
        } else {
            Err(Error::OutsideArea { x: pos.x, y: pos.y })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn single(weight: f64) -> AmbientMap {
        AmbientMap::new(
            vec![GaussianComponent {
                weight,
                center: Position2D::new(5.0, 5.0),
                width: 2.0,
            }],
            Rect::new(0.0, 0.0, 10.0, 10.0),
        )
        .unwrap()
    }

    #[test]
    fn closed_forms() {
        let m = single(3.0);
        assert_eq!(m.ambient_power(&Position2D::new(5.0, 5.0)).unwrap(), 3.0);
        let v = m.ambient_power(&Position2D::new(7.0, 5.0)).unwrap();
        assert!((v - 3.0 * libm::exp(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn two_components_midway() {
        let m = AmbientMap::new(
            vec![
                GaussianComponent {
                    weight: 2.0,
                    center: Position2D::new(2.0, 5.0),
                    width: 1.0,
                },
                GaussianComponent {
                    weight: 3.0,
                    center: Position2D::new(8.0, 5.0),
                    width: 2.0,
                },
            ],
            Rect::new(0.0, 0.0, 10.0, 10.0),
        )
        .unwrap();
        // Midpoint (5, 5): distance 3 to both centres.
        let expected = 2.0 * libm::exp(-9.0 / 2.0) + 3.0 * libm::exp(-9.0 / 8.0);
        let v = m.ambient_power(&Position2D::new(5.0, 5.0)).unwrap();
        assert!((v - expected).abs() < 1e-15);
    }

    #[test]
    fn transmit_power_caps() {
        assert_eq!(
            single(3.7)
                .transmit_power(&Position2D::new(5.0, 5.0), 1.0)
                .unwrap(),
            1.0
        );
        assert_eq!(
            single(0.0)
                .transmit_power(&Position2D::new(5.0, 5.0), 1.0)
                .unwrap(),
            0.0
        );
        assert_eq!(
            single(0.4)
                .transmit_power(&Position2D::new(5.0, 5.0), 1.0)
                .unwrap(),
            0.4
        );
    }

    #[test]
    fn outside_area_is_rejected() {
        let m = single(1.0);
        assert!(matches!(
            m.ambient_power(&Position2D::new(-0.1, 5.0)),
            Err(Error::OutsideArea { .. })
        ));
        assert!(m.transmit_power(&Position2D::new(5.0, 10.5), 1.0).is_err());
    }

    #[test]
    fn invalid_maps() {
        let area = Rect::new(0.0, 0.0, 1.0, 1.0);
        assert!(AmbientMap::new(vec![], area).is_err());
        let bad = GaussianComponent {
            weight: 1.0,
            center: Position2D::ORIGIN,
            width: 0.0,
        };
        assert!(AmbientMap::new(vec![bad], area).is_err());
        let ok = GaussianComponent { width: 1.0, ..bad };
        assert!(AmbientMap::new(vec![ok], Rect::new(0.0, 0.0, 0.0, 1.0)).is_err());
    }
}
