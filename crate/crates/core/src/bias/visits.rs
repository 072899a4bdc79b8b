use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::types::{ElementBox, ElementCategory, Scanpath};

/// Minimum fixations on an element before it can count as revisited.
pub const REVISIT_MIN_FIXATIONS: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CategoryVisits {
    pub elements: u64,
    pub visited: u64,
    pub revisited: u64,
    pub visit_ratio: f64,
    pub revisit_ratio: f64,
}

impl CategoryVisits {
    fn refresh(&mut self) {
        let (v, r) = if self.elements == 0 {
            (0.0, 0.0)
        } else {
            let n = self.elements as f64;
            (self.visited as f64 / n, self.revisited as f64 / n)
        };
        self.visit_ratio = v;
        self.revisit_ratio = r;
    }
}

/// Element counts per category. Every (scanpath, element) pair counts as one
/// element, so ratios are fractions of element views.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisitStats {
    pub categories: BTreeMap<ElementCategory, CategoryVisits>,
}

impl Default for VisitStats {
    fn default() -> Self {
        Self {
            categories: ElementCategory::ALL
                .iter()
                .map(|&c| (c, CategoryVisits::default()))
                .collect(),
        }
    }
}

impl VisitStats {
    pub fn get(&self, category: ElementCategory) -> CategoryVisits {
        self.categories.get(&category).copied().unwrap_or_default()
    }

    pub fn merge(mut self, other: &VisitStats) -> Self {
        for (cat, o) in &other.categories {
            let mine = self.categories.entry(*cat).or_default();
            mine.elements += o.elements;
            mine.visited += o.visited;
            mine.revisited += o.revisited;
            mine.refresh();
        }
        self
    }
}

/// Smallest-area box containing the pixel point; ties go to the earlier box.
pub fn element_at(boxes: &[ElementBox], x: f64, y: f64) -> Option<usize> {
    boxes
        .iter()
        .enumerate()
        .filter(|(_, b)| b.rect.contains(x, y))
        .fold(None, |best: Option<(usize, f64)>, (i, b)| match best {
            Some((_, a)) if a <= b.rect.area() => best,
            _ => Some((i, b.rect.area())),
        })
        .map(|(i, _)| i)
}

/// Visited and revisited elements for scanpaths over one image whose boxes
/// are in pixels of an image `dims = (width, height)`. Fixations outside
/// every box are skipped without breaking the predecessor chain.
pub fn visit_revisit(scanpaths: &[Scanpath], boxes: &[ElementBox], dims: (u32, u32)) -> VisitStats {
    let mut stats = VisitStats::default();
    let (w, h) = (dims.0 as f64, dims.1 as f64);
    for sp in scanpaths {
        let mut hits = vec![0usize; boxes.len()];
        let mut entered = vec![false; boxes.len()];
        let mut prev: Option<usize> = None;
        for f in sp.fixations() {
            let Some(e) = element_at(boxes, f.x * w, f.y * h) else {
                continue;
            };
            hits[e] += 1;
            if prev.is_some_and(|p| p != e) {
                entered[e] = true;
            }
            prev = Some(e);
        }
        for (i, b) in boxes.iter().enumerate() {
            let c = stats.categories.entry(b.category).or_default();
            c.elements += 1;
            if hits[i] > 0 {
                c.visited += 1;
            }
            if hits[i] >= REVISIT_MIN_FIXATIONS && entered[i] {
                c.revisited += 1;
            }
        }
    }
    for c in stats.categories.values_mut() {
        c.refresh();
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxes() -> Vec<ElementBox> {
        vec![
            ElementBox::new(ElementCategory::Text, 0.0, 0.0, 50.0, 50.0).unwrap(),
            ElementBox::new(ElementCategory::Image, 50.0, 0.0, 100.0, 50.0).unwrap(),
            ElementBox::new(ElementCategory::Face, 0.0, 50.0, 50.0, 100.0).unwrap(),
        ]
    }

    const A: (f64, f64) = (0.2, 0.2);
    const B: (f64, f64) = (0.7, 0.2);

    #[test]
    fn single_element_not_revisited() {
        let s = visit_revisit(&[Scanpath::from_points(&[A, A, A])], &boxes(), (100, 100));
        let t = s.get(ElementCategory::Text);
        assert_eq!((t.elements, t.visited, t.revisited), (1, 1, 0));
    }

    #[test]
    fn return_after_other_element() {
        let s = visit_revisit(&[Scanpath::from_points(&[A, B, A, A])], &boxes(), (100, 100));
        let t = s.get(ElementCategory::Text);
        assert_eq!((t.visited, t.revisited), (1, 1));
        let i = s.get(ElementCategory::Image);
        assert_eq!((i.visited, i.revisited), (1, 0));
        let f = s.get(ElementCategory::Face);
        assert_eq!((f.elements, f.visited, f.visit_ratio), (1, 0, 0.0));
    }

    #[test]
    fn empty_boxes_give_zero_counts() {
        let s = visit_revisit(&[Scanpath::from_points(&[A, B])], &[], (100, 100));
        for &c in ElementCategory::ALL {
            assert_eq!(s.get(c), CategoryVisits::default());
        }
    }

    #[test]
    fn smallest_box_wins() {
        let b = vec![
            ElementBox::new(ElementCategory::Image, 0.0, 0.0, 100.0, 100.0).unwrap(),
            ElementBox::new(ElementCategory::Face, 10.0, 10.0, 30.0, 30.0).unwrap(),
        ];
        assert_eq!(element_at(&b, 20.0, 20.0), Some(1));
        assert_eq!(element_at(&b, 50.0, 50.0), Some(0));
        assert_eq!(element_at(&b, 100.0, 50.0), None);
    }

    #[test]
    fn merge_adds_counts() {
        let a = visit_revisit(&[Scanpath::from_points(&[A, B, A, A])], &boxes(), (100, 100));
        let b = visit_revisit(&[Scanpath::from_points(&[B])], &boxes(), (100, 100));
        let m = a.clone().merge(&b);
        let t = m.get(ElementCategory::Text);
        assert_eq!((t.elements, t.visited, t.revisited), (2, 1, 1));
        assert_eq!((t.visit_ratio, t.revisit_ratio), (0.5, 0.5));
        assert_eq!(m, b.merge(&a));
    }
}
