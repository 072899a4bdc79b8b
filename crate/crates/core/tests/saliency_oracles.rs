use gazekit::saliency::{itti_koch_conspicuity, itti_koch_saliency, IttiKochConfig, Plane};
use gazekit::SaliencyMap;
use image::{Rgb, RgbImage};

fn disk(colored: bool) -> RgbImage {
    let (fg, bg) = if colored {
        (Rgb([220, 30, 30]), Rgb([30, 200, 30]))
    } else {
        (Rgb([93, 93, 93]), Rgb([87, 87, 87]))
    };
    RgbImage::from_fn(128, 128, |x, y| {
        let (dx, dy) = (x as f64 - 64.0, y as f64 - 64.0);
        if dx * dx + dy * dy < 16.0 * 16.0 {
            fg
        } else {
            bg
        }
    })
}

/// Red-green opponency at one center-surround pair (center 2, surround 5),
/// computed directly from the pixels.
fn direct_rg_contrast(img: &RgbImage) -> f64 {
    let rg = Plane::from_fn(img.width() as usize, img.height() as usize, |x, y| {
        let p = img.get_pixel(x as u32, y as u32).0.map(|c| c as f64 / 255.0);
        let red = (p[0] - (p[1] + p[2]) / 2.0).max(0.0);
        let green = (p[1] - (p[0] + p[2]) / 2.0).max(0.0);
        red - green
    });
    let mut levels = vec![rg];
    for _ in 0..5 {
        let next = levels.last().unwrap().pyr_down();
        levels.push(next);
    }
    let center = &levels[2];
    let surround = levels[5].resize(center.width, center.height);
    center.zip_with(&surround, |c, s| (c - s).abs()).sum()
}

#[test]
fn chromatic_disk_has_more_color_conspicuity() {
    let cfg = IttiKochConfig::default();
    let chroma = itti_koch_conspicuity(&disk(true), &cfg).unwrap();
    let gray = itti_koch_conspicuity(&disk(false), &cfg).unwrap();
    assert!(chroma.color_energy > gray.color_energy);
    assert!(chroma.color.sum() > gray.color.sum());

    let (dc, dg) = (direct_rg_contrast(&disk(true)), direct_rg_contrast(&disk(false)));
    assert!(dc > 0.0);
    assert_eq!(dg, 0.0);
}

fn square_at(x0: u32, y0: u32) -> RgbImage {
    RgbImage::from_fn(192, 192, |x, y| {
        if (x0..x0 + 16).contains(&x) && (y0..y0 + 16).contains(&y) {
            Rgb([255, 255, 255])
        } else {
            Rgb([0, 0, 0])
        }
    })
}

fn argmax(m: &SaliencyMap) -> (i64, i64) {
    let i = m
        .values()
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > m.values()[best] { i } else { best });
    ((i % m.width()) as i64, (i / m.width()) as i64)
}

#[test]
fn argmax_follows_a_shifted_square() {
    let cfg = IttiKochConfig::default();
    let a = argmax(&itti_koch_saliency(&square_at(64, 64), &cfg).unwrap());
    let b = argmax(&itti_koch_saliency(&square_at(80, 80), &cfg).unwrap());
    assert!(((b.0 - a.0) - 16).abs() <= 2, "{a:?} -> {b:?}");
    assert!(((b.1 - a.1) - 16).abs() <= 2, "{a:?} -> {b:?}");
}
