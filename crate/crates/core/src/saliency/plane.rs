//! Single-channel float image with the few filters the conspicuity pipeline needs.

#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), width * height);
        Self {
            width,
            height,
            data,
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::new(width, height, vec![0.0; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane::new(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Plane, f: impl Fn(f64, f64) -> f64) -> Plane {
        assert_eq!((self.width, self.height), (other.width, other.height));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Plane::new(self.width, self.height, data)
    }

    pub fn add_assign(&mut self, other: &Plane) {
        assert_eq!((self.width, self.height), (other.width, other.height));
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
    }

    /// Separable convolution with a symmetric kernel given as its
    /// non-negative half `taps[0..=r]`; borders replicate the edge pixel.
    pub fn convolve_symmetric(&self, taps: &[f64]) -> Plane {
        let r = taps.len() as isize - 1;
        let (w, h) = (self.width as isize, self.height as isize);
        let mut tmp = vec![0.0; self.data.len()];
        for y in 0..h {
            let row = &self.data[(y * w) as usize..((y + 1) * w) as usize];
            for x in 0..w {
                let mut acc = taps[0] * row[x as usize];
                for k in 1..=r {
                    let left = (x - k).clamp(0, w - 1) as usize;
                    let right = (x + k).clamp(0, w - 1) as usize;
                    acc += taps[k as usize] * (row[left] + row[right]);
                }
                tmp[(y * w + x) as usize] = acc;
            }
        }
        let mut out = vec![0.0; self.data.len()];
        for y in 0..h {
            for x in 0..w {
                let mut acc = taps[0] * tmp[(y * w + x) as usize];
                for k in 1..=r {
                    let up = (y - k).clamp(0, h - 1);
                    let down = (y + k).clamp(0, h - 1);
                    acc += taps[k as usize] * (tmp[(up * w + x) as usize] + tmp[(down * w + x) as usize]);
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        Plane::new(self.width, self.height, out)
    }

    /// Normalized Gaussian blur, support truncated at 3 sigma.
    pub fn gaussian_blur(&self, sigma: f64) -> Plane {
        if sigma <= 0.0 {
            return self.clone();
        }
        let r = (3.0 * sigma).ceil() as usize;
        let mut taps: Vec<f64> = (0..=r)
            .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
            .collect();
        let total = taps[0] + 2.0 * taps[1..].iter().sum::<f64>();
        taps.iter_mut().for_each(|t| *t /= total);
        self.convolve_symmetric(&taps)
    }

    /// Blur with the 5-tap binomial kernel and keep every other pixel.
    pub fn pyr_down(&self) -> Plane {
        const TAPS: [f64; 3] = [6.0 / 16.0, 4.0 / 16.0, 1.0 / 16.0];
        let blurred = self.convolve_symmetric(&TAPS);
        let w = self.width.div_ceil(2);
        let h = self.height.div_ceil(2);
        Plane::from_fn(w, h, |x, y| blurred.at(2 * x, 2 * y))
    }

    /// Bilinear resampling with pixel centers aligned.
    pub fn resize(&self, width: usize, height: usize) -> Plane {
        if (width, height) == (self.width, self.height) {
            return self.clone();
        }
        let sx = self.width as f64 / width as f64;
        let sy = self.height as f64 / height as f64;
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (self.height - 1) as f64);
            let y0 = fy.floor() as usize;
            let y1 = (y0 + 1).min(self.height - 1);
            let ty = fy - y0 as f64;
            for x in 0..width {
                let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (self.width - 1) as f64);
                let x0 = fx.floor() as usize;
                let x1 = (x0 + 1).min(self.width - 1);
                let tx = fx - x0 as f64;
                let top = self.at(x0, y0) * (1.0 - tx) + self.at(x1, y0) * tx;
                let bottom = self.at(x0, y1) * (1.0 - tx) + self.at(x1, y1) * tx;
                data.push(top * (1.0 - ty) + bottom * ty);
            }
        }
        Plane::new(width, height, data)
    }

    /// Full 2-D convolution with an odd square kernel, replicated borders.
    pub fn convolve2d(&self, kernel: &[f64], size: usize) -> Plane {
        let r = (size / 2) as isize;
        let (w, h) = (self.width as isize, self.height as isize);
        Plane::from_fn(self.width, self.height, |x, y| {
            let mut acc = 0.0;
            for ky in -r..=r {
                let sy = (y as isize + ky).clamp(0, h - 1) as usize;
                for kx in -r..=r {
                    let sx = (x as isize + kx).clamp(0, w - 1) as usize;
                    acc += kernel[((ky + r) as usize) * size + (kx + r) as usize] * self.at(sx, sy);
                }
            }
            acc
        })
    }
}
