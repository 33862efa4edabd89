//! Deterministic SVG export of covers and exact attractor points.
//!
//! Coordinates are written in world units (the SVG user space is the plane
//! itself, flipped so the y axis points up). Every coordinate whose decimal
//! expansion terminates within twelve digits is written exactly; each
//! element also carries its exact rational corners in a `data-exact`
//! attribute.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::AxisBox;
use crate::ifs::Ifs;
use crate::rational::{format_rational, rat, to_decimal, Rational};

const DIGITS: usize = 12;
const PIXELS: u32 = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureStyle {
    Boxes,
    Points,
}

impl std::str::FromStr for FigureStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boxes" => Ok(FigureStyle::Boxes),
            "points" => Ok(FigureStyle::Points),
            other => Err(Error::Parse(format!("unknown style {other:?}"))),
        }
    }
}

fn num(r: &Rational) -> String {
    to_decimal(r, DIGITS)
}

/// `(x0, x1, y0, y1)` of a box in the plane; 1D boxes become a thin band.
fn planar(b: &AxisBox, band: &Rational) -> (Rational, Rational, Rational, Rational) {
    if b.dim() == 1 {
        (
            b.lower().0[0].clone(),
            b.upper().0[0].clone(),
            Rational::zero(),
            band.clone(),
        )
    } else {
        (
            b.lower().0[0].clone(),
            b.upper().0[0].clone(),
            b.lower().0[1].clone(),
            b.upper().0[1].clone(),
        )
    }
}

pub fn export_figure(ifs: &Ifs, depth: usize, style: FigureStyle) -> Result<String> {
    if ifs.dim() > 2 {
        return Err(Error::Invalid(format!(
            "figures support dimension 1 or 2, got {}",
            ifs.dim()
        )));
    }
    let outer = ifs.invariant_box();
    let extent = (0..outer.dim())
        .map(|j| &outer.upper().0[j] - &outer.lower().0[j])
        .max()
        .unwrap();
    let band = &extent / rat(20, 1);
    let (ox0, ox1, oy0, oy1) = planar(outer, &band);
    let margin = &extent / rat(20, 1);
    let stroke = &extent / rat(300, 1);
    let vx = &ox0 - &margin;
    let vy = -(&oy1 + &margin);
    let vw = &ox1 - &ox0 + &margin * rat(2, 1);
    let vh = &oy1 - &oy0 + &margin * rat(2, 1);
    let height_px = (rat(PIXELS as i64, 1) * &vh / &vw).round();

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{PIXELS}" height="{}" viewBox="{} {} {} {}">"#,
        height_px.numer(),
        num(&vx),
        num(&vy),
        num(&vw),
        num(&vh)
    )
    .unwrap();
    writeln!(
        out,
        r#"<g transform="scale(1,-1)" fill="none" stroke="black" stroke-width="{}">"#,
        num(&stroke)
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect class="invariant" x="{}" y="{}" width="{}" height="{}" stroke-dasharray="{} {}" data-exact="{}"/>"#,
        num(&ox0),
        num(&oy0),
        num(&(&ox1 - &ox0)),
        num(&(&oy1 - &oy0)),
        num(&(&stroke * rat(6, 1))),
        num(&(&stroke * rat(4, 1))),
        exact_corners(outer)
    )
    .unwrap();
    match style {
        FigureStyle::Boxes => {
            for (w, b) in ifs.cover(depth)? {
                let (x0, x1, y0, y1) = planar(&b, &band);
                writeln!(
                    out,
                    r#"<rect class="cell" data-word="{}" x="{}" y="{}" width="{}" height="{}" data-exact="{}"/>"#,
                    w,
                    num(&x0),
                    num(&y0),
                    num(&(&x1 - &x0)),
                    num(&(&y1 - &y0)),
                    exact_corners(&b)
                )
                .unwrap();
            }
        }
        FigureStyle::Points => {
            let radius = &extent / rat(400, 1);
            for (w, p) in ifs.attractor_points(depth)? {
                let y = if p.dim() == 1 {
                    Rational::zero()
                } else {
                    p.0[1].clone()
                };
                writeln!(
                    out,
                    r#"<circle class="point" data-word="{}" cx="{}" cy="{}" r="{}" fill="black" stroke="none"/>"#,
                    w,
                    num(&p.0[0]),
                    num(&y),
                    num(&radius)
                )
                .unwrap();
            }
        }
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

fn exact_corners(b: &AxisBox) -> String {
    let fmt = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
    format!("{};{}", fmt(&b.lower().0), fmt(&b.upper().0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn depth_zero_is_one_cell() {
        let svg = export_figure(&fixtures::example25(), 0, FigureStyle::Boxes).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 1);
        assert_eq!(svg.matches(r#"class="invariant""#).count(), 1);
    }

    #[test]
    fn cantor_points_count() {
        let svg = export_figure(&fixtures::cantor(), 6, FigureStyle::Points).unwrap();
        assert_eq!(svg.matches("<circle").count(), 128);
    }

    #[test]
    fn deterministic() {
        let a = export_figure(&fixtures::example25(), 2, FigureStyle::Boxes).unwrap();
        let b = export_figure(&fixtures::example25(), 2, FigureStyle::Boxes).unwrap();
        assert_eq!(a, b);
    }
}
