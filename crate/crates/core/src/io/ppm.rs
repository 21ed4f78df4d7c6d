use super::IoError;
use crate::graph::SinkedGraph;
use crate::sandpile::Configuration;

pub const DEFAULT_WIDTH: u32 = 1024;

fn shade(grains: u64) -> [u8; 3] {
    match grains {
        0 => [255, 255, 255],
        1 => [200, 200, 200],
        2 => [140, 140, 140],
        3 => [70, 70, 70],
        _ => [0, 0, 0],
    }
}

/// Binary PPM (`P6`) with one filled disk per vertex on a white field.
pub fn render(g: &SinkedGraph, c: &Configuration, width: u32) -> Result<Vec<u8>, IoError> {
    if !g.has_coords() {
        return Err(IoError::MissingCoords);
    }
    if c.len() != g.n_vertices() {
        return Err(IoError::Format(format!("configuration has {} entries for {} vertices", c.len(), g.n_vertices())));
    }
    if width < 8 {
        return Err(IoError::Format(format!("width {width} is too small")));
    }
    let pts = g.coords();
    let min_x = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = max_y - min_y;
    let margin = f64::from(width) * 0.04;
    let scale = (f64::from(width) - 2.0 * margin) / span_x;
    let height = ((span_y * scale + 2.0 * margin).ceil() as u32).max(1);
    let shortest = g
        .edges()
        .iter()
        .map(|&(u, v)| ((pts[u][0] - pts[v][0]).powi(2) + (pts[u][1] - pts[v][1]).powi(2)).sqrt())
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let radius = if shortest.is_finite() { (0.4 * shortest * scale).max(1.0) } else { margin * 0.5 };
    let (w, h) = (width as usize, height as usize);
    let mut pixels = vec![255u8; w * h * 3];
    for (v, p) in pts.iter().enumerate() {
        let cx = margin + (p[0] - min_x) * scale;
        // image rows grow downward
        let cy = f64::from(height) - margin - (p[1] - min_y) * scale;
        let color = shade(c.get(v));
        let x0 = (cx - radius).floor().max(0.0) as usize;
        let x1 = ((cx + radius).ceil() as usize).min(w - 1);
        let y0 = (cy - radius).floor().max(0.0) as usize;
        let y1 = ((cy + radius).ceil() as usize).min(h - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let dx = x as f64 + 0.5 - cx;
                let dy = y as f64 + 0.5 - cy;
                if dx * dx + dy * dy <= radius * radius {
                    let i = (y * w + x) * 3;
                    pixels[i..i + 3].copy_from_slice(&color);
                }
            }
        }
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build, Family, FamilySpec};

    fn body(bytes: &[u8]) -> &[u8] {
        // skip the three header lines
        let mut newlines = 0;
        let start = bytes.iter().position(|&b| {
            newlines += usize::from(b == b'\n');
            newlines == 3
        });
        &bytes[start.unwrap() + 1..]
    }

    #[test]
    fn zero_config_is_all_white() {
        let g = build(FamilySpec::sinked(Family::Sg, 3)).unwrap();
        let img = render(&g, &Configuration::zeros(g.n_vertices()), 256).unwrap();
        assert!(img.starts_with(b"P6\n256 "));
        assert!(body(&img).iter().all(|&b| b == 255));
    }

    #[test]
    fn identity_render_uses_medium_gray() {
        let g = build(FamilySpec::sinked(Family::Sgc, 3)).unwrap();
        let img = render(&g, &Configuration::constant(g.n_vertices(), 2), 300).unwrap();
        let px = body(&img);
        assert!(px.chunks(3).all(|p| p == [255, 255, 255] || p == [140, 140, 140]));
        assert!(px.chunks(3).any(|p| p == [140, 140, 140]));
        assert_eq!(img, render(&g, &Configuration::constant(g.n_vertices(), 2), 300).unwrap());
    }

    #[test]
    fn missing_coords() {
        let g = SinkedGraph::from_edges(1, &[], vec![1], vec![]).unwrap();
        assert!(matches!(render(&g, &Configuration::zeros(1), 64), Err(IoError::MissingCoords)));
    }

    #[test]
    fn header_and_size() {
        let g = build(FamilySpec::sinked(Family::Sg, 2)).unwrap();
        let img = render(&g, &Configuration::zeros(g.n_vertices()), DEFAULT_WIDTH).unwrap();
        let header = String::from_utf8_lossy(&img[..20]).to_string();
        let dims: Vec<u32> = header.lines().nth(1).unwrap().split(' ').map(|s| s.parse().unwrap()).collect();
        assert_eq!(dims[0], 1024);
        assert_eq!(body(&img).len(), (dims[0] * dims[1] * 3) as usize);
    }
}
