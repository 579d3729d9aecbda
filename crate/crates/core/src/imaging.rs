//! Raster primitives: depth maps, binary masks, flow fields, morphology,
//! connected components.
//!
//! Invalid depth is NaN in memory and 0.0 on disk; the io module converts at
//! the boundary.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-pixel float32 depth in meters, row-major. NaN marks invalid pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    pub width: u32,
    pub height: u32,
    pub data: Vec<f32>,
}

impl DepthImage {
    pub fn new_invalid(width: u32, height: u32) -> Self {
        DepthImage {
            width,
            height,
            data: vec![f32::NAN; (width * height) as usize],
        }
    }

    pub fn from_data(width: u32, height: u32, data: Vec<f32>) -> Result<Self> {
        if data.len() != (width * height) as usize {
            return Err(Error::malformed(
                "<memory>",
                format!("depth buffer length {} != {}x{}", data.len(), width, height),
            ));
        }
        Ok(DepthImage {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.data[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, d: f32) {
        self.data[(y * self.width + x) as usize] = d;
    }

    /// Valid means finite and strictly positive.
    #[inline]
    pub fn is_valid(&self, x: u32, y: u32) -> bool {
        let d = self.get(x, y);
        d.is_finite() && d > 0.0
    }
}

/// Binary image; `true` = set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskImage {
    pub width: u32,
    pub height: u32,
    pub data: Vec<bool>,
}

impl MaskImage {
    pub fn new(width: u32, height: u32) -> Self {
        MaskImage {
            width,
            height,
            data: vec![false; (width * height) as usize],
        }
    }

    pub fn from_data(width: u32, height: u32, data: Vec<bool>) -> Result<Self> {
        if data.len() != (width * height) as usize {
            return Err(Error::malformed(
                "<memory>",
                format!("mask buffer length {} != {}x{}", data.len(), width, height),
            ));
        }
        Ok(MaskImage {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        self.data[(y * self.width + x) as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    fn check_dims(&self, other: &MaskImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// Per-pixel (du, dv) float32 displacement toward the next frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub width: u32,
    pub height: u32,
    /// Interleaved (du, dv), row-major.
    pub data: Vec<[f32; 2]>,
}

impl FlowField {
    pub fn zero(width: u32, height: u32) -> Self {
        FlowField {
            width,
            height,
            data: vec![[0.0, 0.0]; (width * height) as usize],
        }
    }

    pub fn from_data(width: u32, height: u32, data: Vec<[f32; 2]>) -> Result<Self> {
        if data.len() != (width * height) as usize {
            return Err(Error::malformed(
                "<memory>",
                format!("flow buffer length {} != {}x{}", data.len(), width, height),
            ));
        }
        Ok(FlowField {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [f32; 2] {
        self.data[(y * self.width + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, f: [f32; 2]) {
        self.data[(y * self.width + x) as usize] = f;
    }
}

/// Inclusive pixel bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBox {
    pub u_min: u32,
    pub v_min: u32,
    pub u_max: u32,
    pub v_max: u32,
}

impl BBox {
    pub fn width(&self) -> u32 {
        self.u_max - self.u_min + 1
    }

    pub fn height(&self) -> u32 {
        self.v_max - self.v_min + 1
    }

    pub fn area(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    /// Grows by `margin` on every side, clamped to `[0, width) x [0, height)`.
    pub fn expand_clamped(&self, margin: u32, width: u32, height: u32) -> BBox {
        BBox {
            u_min: self.u_min.saturating_sub(margin),
            v_min: self.v_min.saturating_sub(margin),
            u_max: (self.u_max + margin).min(width - 1),
            v_max: (self.v_max + margin).min(height - 1),
        }
    }

    pub fn contains(&self, other: &BBox) -> bool {
        self.u_min <= other.u_min
            && self.v_min <= other.v_min
            && self.u_max >= other.u_max
            && self.v_max >= other.v_max
    }

    /// Intersection-over-union on inclusive pixel counts.
    pub fn iou(&self, other: &BBox) -> f64 {
        let iu_min = self.u_min.max(other.u_min);
        let iv_min = self.v_min.max(other.v_min);
        let iu_max = self.u_max.min(other.u_max);
        let iv_max = self.v_max.min(other.v_max);
        if iu_min > iu_max || iv_min > iv_max {
            return 0.0;
        }
        let inter = (iu_max - iu_min + 1) as f64 * (iv_max - iv_min + 1) as f64;
        let union = self.area() as f64 + other.area() as f64 - inter;
        inter / union
    }
}

/// Thresholds flow magnitude: pixel set iff `sqrt(du² + dv²) >= tau_f`.
pub fn flow_magnitude_mask(flow: &FlowField, tau_f: f64) -> MaskImage {
    let mut mask = MaskImage::new(flow.width, flow.height);
    for (dst, f) in mask.data.iter_mut().zip(flow.data.iter()) {
        let mag = (f[0] as f64).hypot(f[1] as f64);
        *dst = mag >= tau_f;
    }
    mask
}

/// Pixelwise `a ∧ ¬b`.
pub fn mask_subtract(a: &MaskImage, b: &MaskImage) -> Result<MaskImage> {
    a.check_dims(b)?;
    let data = a
        .data
        .iter()
        .zip(b.data.iter())
        .map(|(&x, &y)| x && !y)
        .collect();
    Ok(MaskImage {
        width: a.width,
        height: a.height,
        data,
    })
}

/// Pixelwise `a ∨ b`.
pub fn mask_union(a: &MaskImage, b: &MaskImage) -> Result<MaskImage> {
    a.check_dims(b)?;
    let data = a
        .data
        .iter()
        .zip(b.data.iter())
        .map(|(&x, &y)| x || y)
        .collect();
    Ok(MaskImage {
        width: a.width,
        height: a.height,
        data,
    })
}

/// Pixelwise `a ∧ b`.
pub fn mask_intersect(a: &MaskImage, b: &MaskImage) -> Result<MaskImage> {
    a.check_dims(b)?;
    let data = a
        .data
        .iter()
        .zip(b.data.iter())
        .map(|(&x, &y)| x && y)
        .collect();
    Ok(MaskImage {
        width: a.width,
        height: a.height,
        data,
    })
}

/// Erosion with a square structuring element of side `2k+1`.
///
/// Pixels outside the image count as unset, so the border erodes.
pub fn erode(m: &MaskImage, k: u32) -> MaskImage {
    if k == 0 {
        return m.clone();
    }
    separable_pass(m, k, true)
}

/// Dilation with a square structuring element of side `2k+1`.
pub fn dilate(m: &MaskImage, k: u32) -> MaskImage {
    if k == 0 {
        return m.clone();
    }
    separable_pass(m, k, false)
}

/// Erosion followed by dilation with the same square element.
pub fn morphological_open(m: &MaskImage, k: u32) -> MaskImage {
    if k == 0 {
        return m.clone();
    }
    dilate(&erode(m, k), k)
}

/// Square-element morphology is separable: a horizontal 1D pass then a
/// vertical one. `require_all` selects erosion (AND) vs dilation (OR).
fn separable_pass(m: &MaskImage, k: u32, require_all: bool) -> MaskImage {
    let (w, h) = (m.width as i64, m.height as i64);
    let k = k as i64;
    let mut horiz = MaskImage::new(m.width, m.height);
    for y in 0..h {
        for x in 0..w {
            let mut acc = require_all;
            for dx in -k..=k {
                let xx = x + dx;
                let v = xx >= 0 && xx < w && m.get(xx as u32, y as u32);
                if require_all {
                    acc &= v;
                } else {
                    acc |= v;
                }
            }
            horiz.set(x as u32, y as u32, acc);
        }
    }
    let mut out = MaskImage::new(m.width, m.height);
    for y in 0..h {
        for x in 0..w {
            let mut acc = require_all;
            for dy in -k..=k {
                let yy = y + dy;
                let v = yy >= 0 && yy < h && horiz.get(x as u32, yy as u32);
                if require_all {
                    acc &= v;
                } else {
                    acc |= v;
                }
            }
            out.set(x as u32, y as u32, acc);
        }
    }
    out
}

/// One 8-connected region of a mask.
#[derive(Debug, Clone)]
pub struct Component {
    pub mask: MaskImage,
    /// Number of set pixels.
    pub area: usize,
    pub bbox: BBox,
}

/// 8-connected components, sorted by area descending, ties by bbox
/// (v_min, u_min) ascending. The component masks partition the input.
pub fn connected_components(m: &MaskImage) -> Vec<Component> {
    let (w, h) = (m.width, m.height);
    let mut labels = vec![0u32; (w * h) as usize];
    let mut comps: Vec<Component> = Vec::new();
    let mut stack: Vec<(u32, u32)> = Vec::new();

    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            if !m.data[idx] || labels[idx] != 0 {
                continue;
            }
            let label = comps.len() as u32 + 1;
            let mut comp_mask = MaskImage::new(w, h);
            let (mut area, mut u_min, mut v_min, mut u_max, mut v_max) = (0usize, x, y, x, y);
            labels[idx] = label;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                comp_mask.set(cx, cy, true);
                area += 1;
                u_min = u_min.min(cx);
                u_max = u_max.max(cx);
                v_min = v_min.min(cy);
                v_max = v_max.max(cy);
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let nx = cx as i64 + dx;
                        let ny = cy as i64 + dy;
                        if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                            continue;
                        }
                        let nidx = (ny as u32 * w + nx as u32) as usize;
                        if m.data[nidx] && labels[nidx] == 0 {
                            labels[nidx] = label;
                            stack.push((nx as u32, ny as u32));
                        }
                    }
                }
            }
            comps.push(Component {
                mask: comp_mask,
                area,
                bbox: BBox {
                    u_min,
                    v_min,
                    u_max,
                    v_max,
                },
            });
        }
    }
    comps.sort_by(|a, b| {
        b.area
            .cmp(&a.area)
            .then(a.bbox.v_min.cmp(&b.bbox.v_min))
            .then(a.bbox.u_min.cmp(&b.bbox.u_min))
    });
    comps
}

/// Minimal bbox containing all set pixels; `None` for an empty mask.
pub fn tight_bbox(m: &MaskImage) -> Option<BBox> {
    let (mut u_min, mut v_min, mut u_max, mut v_max) = (u32::MAX, u32::MAX, 0u32, 0u32);
    let mut any = false;
    for y in 0..m.height {
        for x in 0..m.width {
            if m.get(x, y) {
                any = true;
                u_min = u_min.min(x);
                v_min = v_min.min(y);
                u_max = u_max.max(x);
                v_max = v_max.max(y);
            }
        }
    }
    any.then_some(BBox {
        u_min,
        v_min,
        u_max,
        v_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub(crate) fn random_mask(rng: &mut impl Rng, w: u32, h: u32, density: f64) -> MaskImage {
        let data = (0..w * h).map(|_| rng.gen_bool(density)).collect();
        MaskImage::from_data(w, h, data).unwrap()
    }

    #[test]
    fn flow_mask_zero_flow_is_empty() {
        let flow = FlowField::zero(8, 6);
        assert!(flow_magnitude_mask(&flow, 0.5).is_empty());
    }

    #[test]
    fn flow_mask_exact_threshold_boundary() {
        let mut flow = FlowField::zero(4, 4);
        for y in 0..4 {
            for x in 0..4 {
                flow.set(x, y, [3.0, 4.0]);
            }
        }
        // magnitude is exactly 5
        assert_eq!(flow_magnitude_mask(&flow, 5.0).count(), 16);
        assert_eq!(flow_magnitude_mask(&flow, 5.0001).count(), 0);
    }

    #[test]
    fn flow_mask_translating_disk_matches_analytic_support() {
        // Disk of radius 10 centered at (20, 20), uniform flow (4, 3) inside.
        let (w, h) = (48u32, 40u32);
        let (cx, cy, r) = (20.0f64, 20.0f64, 10.0f64);
        let mut flow = FlowField::zero(w, h);
        for y in 0..h {
            for x in 0..w {
                let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                if d <= r {
                    flow.set(x, y, [4.0, 3.0]);
                }
            }
        }
        let mask = flow_magnitude_mask(&flow, 1.5);
        for y in 0..h {
            for x in 0..w {
                let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                if d <= r - 1.0 {
                    assert!(mask.get(x, y), "interior pixel ({x},{y}) unset");
                }
                if d >= r + 1.0 {
                    assert!(!mask.get(x, y), "exterior pixel ({x},{y}) set");
                }
            }
        }
    }

    #[test]
    fn mask_algebra_basics() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = random_mask(&mut rng, 16, 12, 0.4);
        let empty = MaskImage::new(16, 12);
        assert!(mask_subtract(&a, &a).unwrap().is_empty());
        assert_eq!(mask_union(&a, &empty).unwrap(), a);
        assert_eq!(mask_intersect(&a, &a).unwrap(), a);
    }

    #[test]
    fn mask_ops_reject_dimension_mismatch() {
        let a = MaskImage::new(4, 4);
        let b = MaskImage::new(5, 4);
        assert!(matches!(
            mask_subtract(&a, &b),
            Err(Error::DimensionMismatch(4, 4, 5, 4))
        ));
        assert!(mask_union(&a, &b).is_err());
        assert!(mask_intersect(&a, &b).is_err());
    }

    #[test]
    fn subtract_then_union_covers_original() {
        let mut rng = StdRng::seed_from_u64(12);
        for _ in 0..20 {
            let a = random_mask(&mut rng, 12, 10, 0.5);
            let b = random_mask(&mut rng, 12, 10, 0.5);
            let rebuilt = mask_union(&mask_subtract(&a, &b).unwrap(), &b).unwrap();
            for (ra, rb) in a.data.iter().zip(rebuilt.data.iter()) {
                assert!(!ra | rb, "subtract-then-union lost a pixel of a");
            }
        }
    }

    #[test]
    fn open_k0_is_identity() {
        let mut rng = StdRng::seed_from_u64(13);
        let m = random_mask(&mut rng, 10, 10, 0.4);
        assert_eq!(morphological_open(&m, 0), m);
    }

    #[test]
    fn open_removes_isolated_pixel() {
        let mut m = MaskImage::new(9, 9);
        m.set(4, 4, true);
        assert!(morphological_open(&m, 1).is_empty());
    }

    #[test]
    fn open_preserves_large_block_interior() {
        let mut m = MaskImage::new(20, 20);
        for y in 5..15 {
            for x in 5..15 {
                m.set(x, y, true);
            }
        }
        assert_eq!(morphological_open(&m, 2), m);
    }

    #[test]
    fn open_is_idempotent_on_random_masks() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..10 {
            let m = random_mask(&mut rng, 24, 18, 0.45);
            for k in [1u32, 2] {
                let once = morphological_open(&m, k);
                let twice = morphological_open(&once, k);
                assert_eq!(once, twice, "opening not idempotent at k={k}");
            }
        }
    }

    #[test]
    fn components_empty_mask() {
        assert!(connected_components(&MaskImage::new(6, 6)).is_empty());
    }

    #[test]
    fn components_two_disjoint_blocks() {
        let mut m = MaskImage::new(12, 6);
        for y in 1..4 {
            for x in 1..4 {
                m.set(x, y, true);
            }
            for x in 8..11 {
                m.set(x, y, true);
            }
        }
        let comps = connected_components(&m);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].area, 9);
        assert_eq!(comps[1].area, 9);
        // Equal areas: tie broken by bbox (v_min, u_min) ascending.
        assert!(comps[0].bbox.u_min < comps[1].bbox.u_min);
    }

    #[test]
    fn components_partition_random_masks() {
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..10 {
            let m = random_mask(&mut rng, 20, 16, 0.5);
            let comps = connected_components(&m);
            let total: usize = comps.iter().map(|c| c.area).sum();
            assert_eq!(total, m.count());
            let mut union = MaskImage::new(20, 16);
            for c in &comps {
                for (u, cv) in union.data.iter_mut().zip(c.mask.data.iter()) {
                    assert!(!(*u && *cv), "components overlap");
                    *u |= *cv;
                }
            }
            assert_eq!(union, m);
        }
    }

    #[test]
    fn diagonal_pixels_are_one_component() {
        let mut m = MaskImage::new(4, 4);
        m.set(0, 0, true);
        m.set(1, 1, true);
        m.set(2, 2, true);
        assert_eq!(connected_components(&m).len(), 1);
    }

    #[test]
    fn tight_bbox_single_pixel() {
        let mut m = MaskImage::new(16, 16);
        m.set(7, 9, true);
        assert_eq!(
            tight_bbox(&m),
            Some(BBox {
                u_min: 7,
                v_min: 9,
                u_max: 7,
                v_max: 9
            })
        );
    }

    #[test]
    fn tight_bbox_empty_is_none() {
        assert_eq!(tight_bbox(&MaskImage::new(4, 4)), None);
    }

    #[test]
    fn tight_bbox_touches_every_edge() {
        let mut rng = StdRng::seed_from_u64(16);
        for _ in 0..20 {
            let m = random_mask(&mut rng, 15, 11, 0.1);
            let Some(bb) = tight_bbox(&m) else { continue };
            let mut edge_touched = [false; 4];
            for y in 0..m.height {
                for x in 0..m.width {
                    if m.get(x, y) {
                        assert!(x >= bb.u_min && x <= bb.u_max && y >= bb.v_min && y <= bb.v_max);
                        edge_touched[0] |= x == bb.u_min;
                        edge_touched[1] |= x == bb.u_max;
                        edge_touched[2] |= y == bb.v_min;
                        edge_touched[3] |= y == bb.v_max;
                    }
                }
            }
            assert_eq!(edge_touched, [true; 4]);
        }
    }

    #[test]
    fn bbox_iou_and_expand() {
        let a = BBox {
            u_min: 0,
            v_min: 0,
            u_max: 9,
            v_max: 9,
        };
        assert_eq!(a.iou(&a), 1.0);
        let b = BBox {
            u_min: 20,
            v_min: 20,
            u_max: 29,
            v_max: 29,
        };
        assert_eq!(a.iou(&b), 0.0);
        let c = a.expand_clamped(10, 15, 15);
        assert_eq!(
            c,
            BBox {
                u_min: 0,
                v_min: 0,
                u_max: 14,
                v_max: 14
            }
        );
    }
}
