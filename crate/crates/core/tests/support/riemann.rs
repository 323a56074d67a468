//! Exact solution of the 1-D Riemann problem for an ideal gas.
//!
//! Pressure in the star region by Newton iteration on the two-rarefaction /
//! two-shock pressure function, then self-similar sampling at `x / t`.

#[derive(Clone, Copy, Debug)]
pub struct Side {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

pub struct Riemann {
    l: Side,
    r: Side,
    gamma: f64,
    p_star: f64,
    u_star: f64,
}

fn sound(s: &Side, g: f64) -> f64 {
    (g * s.p / s.rho).sqrt()
}

/// Pressure function of one side and its derivative.
fn f_side(p: f64, s: &Side, g: f64) -> (f64, f64) {
    let c = sound(s, g);
    if p > s.p {
        let a = 2.0 / ((g + 1.0) * s.rho);
        let b = (g - 1.0) / (g + 1.0) * s.p;
        let q = (a / (p + b)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (b + p)))
    } else {
        let e = (g - 1.0) / (2.0 * g);
        let f = 2.0 * c / (g - 1.0) * ((p / s.p).powf(e) - 1.0);
        (f, (p / s.p).powf(-(g + 1.0) / (2.0 * g)) / (s.rho * c))
    }
}

impl Riemann {
    pub fn new(l: Side, r: Side, gamma: f64) -> Self {
        let du = r.u - l.u;
        let mut p = 0.5 * (l.p + r.p);
        for _ in 0..100 {
            let (fl, dl) = f_side(p, &l, gamma);
            let (fr, dr) = f_side(p, &r, gamma);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-12);
            let done = (next - p).abs() < 1e-14 * (next + p);
            p = next;
            if done {
                break;
            }
        }
        let u = 0.5 * (l.u + r.u) + 0.5 * (f_side(p, &r, gamma).0 - f_side(p, &l, gamma).0);
        Riemann { l, r, gamma, p_star: p, u_star: u }
    }

    pub fn star(&self) -> (f64, f64) {
        (self.p_star, self.u_star)
    }

    /// Density at similarity coordinate `xi = x / t`.
    pub fn density(&self, xi: f64) -> f64 {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        let gm = (g - 1.0) / (g + 1.0);
        if xi <= us {
            let s = self.l;
            let c = sound(&s, g);
            if ps > s.p {
                let speed = s.u - c * ((g + 1.0) / (2.0 * g) * ps / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi < speed {
                    s.rho
                } else {
                    s.rho * (ps / s.p + gm) / (gm * ps / s.p + 1.0)
                }
            } else {
                let head = s.u - c;
                let c_star = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                let tail = us - c_star;
                if xi < head {
                    s.rho
                } else if xi > tail {
                    s.rho * (ps / s.p).powf(1.0 / g)
                } else {
                    s.rho * (2.0 / (g + 1.0) + gm / c * (s.u - xi)).powf(2.0 / (g - 1.0))
                }
            }
        } else {
            let s = self.r;
            let c = sound(&s, g);
            if ps > s.p {
                let speed = s.u + c * ((g + 1.0) / (2.0 * g) * ps / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi > speed {
                    s.rho
                } else {
                    s.rho * (ps / s.p + gm) / (gm * ps / s.p + 1.0)
                }
            } else {
                let head = s.u + c;
                let c_star = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                let tail = us + c_star;
                if xi > head {
                    s.rho
                } else if xi < tail {
                    s.rho * (ps / s.p).powf(1.0 / g)
                } else {
                    s.rho * (2.0 / (g + 1.0) - gm / c * (s.u - xi)).powf(2.0 / (g - 1.0))
                }
            }
        }
    }

    /// Mean density over `[x0, x1]` at time `t` (diaphragm at `x_d`),
    /// by midpoint sampling.
    pub fn mean_density(&self, x0: f64, x1: f64, x_d: f64, t: f64) -> f64 {
        const SAMPLES: usize = 32;
        let h = (x1 - x0) / SAMPLES as f64;
        (0..SAMPLES).map(|k| self.density((x0 + (k as f64 + 0.5) * h - x_d) / t)).sum::<f64>() / SAMPLES as f64
    }
}

/// The classic Sod tube at gamma = 1.4.
pub fn sod() -> Riemann {
    Riemann::new(Side { rho: 1.0, u: 0.0, p: 1.0 }, Side { rho: 0.125, u: 0.0, p: 0.1 }, 1.4)
}
