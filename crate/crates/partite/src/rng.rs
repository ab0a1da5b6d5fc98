//! Counter-based splittable randomness. Every draw is a hash of
//! (seed, stream, counter), so parallel consumers produce identical values
//! regardless of scheduling or worker count.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A derivation key; `derive` splits off independent streams.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Key(u64);

impl Key {
    pub fn new(seed: u64) -> Key {
        Key(mix(seed ^ 0xA076_1D64_78BD_642F))
    }

    pub fn derive(self, index: u64) -> Key {
        Key(mix(self.0 ^ index.wrapping_mul(GOLDEN)))
    }

    pub fn value(self, counter: u64) -> u64 {
        mix(self.0 ^ counter.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}

/// A sequential stream over a key.
#[derive(Debug, Clone)]
pub(crate) struct Stream {
    key: Key,
    counter: u64,
}

impl Stream {
    pub fn new(key: Key) -> Stream {
        Stream { key, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = self.key.value(self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1].
    pub fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n).
    pub fn next_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_f64() * n as f64) as usize % n
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.next_f64_open();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Marsaglia-Tsang gamma sampler (any shape > 0).
    pub fn gamma(&mut self, shape: f64) -> f64 {
        if shape < 1.0 {
            let g = self.gamma(shape + 1.0);
            return g * self.next_f64_open().powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let v = (1.0 + c * x).powi(3);
            if v <= 0.0 {
                continue;
            }
            let u = self.next_f64_open();
            if u < 1.0 - 0.0331 * x.powi(4) {
                return d * v;
            }
            if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Dirichlet draw with symmetric concentration.
    pub fn dirichlet(&mut self, k: usize, concentration: f64) -> Vec<f64> {
        let mut g: Vec<f64> = (0..k).map(|_| self.gamma(concentration)).collect();
        let sum: f64 = g.iter().sum();
        if sum <= 0.0 || !sum.is_finite() {
            return vec![1.0 / k as f64; k];
        }
        for v in &mut g {
            *v /= sum;
        }
        g
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.next_below(i + 1);
            xs.swap(i, j);
        }
    }
}
