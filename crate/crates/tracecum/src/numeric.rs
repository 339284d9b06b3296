use num_complex::Complex64;

/// Compensated (Neumaier) summation of complex terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

fn step(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl NeumaierSum {
    pub fn add(&mut self, z: Complex64) {
        step(&mut self.re, &mut self.re_c, z.re);
        step(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

impl std::iter::FromIterator<Complex64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Relative closeness with an absolute floor.
pub fn close(a: Complex64, b: Complex64, rel: f64, floor: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()) + floor
}
