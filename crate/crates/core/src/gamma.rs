//! Complex log-Gamma via the Lanczos approximation (g = 7, 9 terms),
//! with the reflection formula covering Re z < 1/2. Accuracy is ~1e-13
//! relative over the strip used here (arguments i nu with |nu| <= 1).

use crate::Cx;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch ln Gamma(z).
pub fn ln_gamma(z: Cx) -> Cx {
    if z.re < 0.5 {
        // Reflection: ln Gamma(z) = ln(pi / sin(pi z)) - ln Gamma(1 - z).
        let pi = std::f64::consts::PI;
        let s = (pi * z).sin();
        return Cx::new(pi, 0.0).ln() - s.ln() - ln_gamma(Cx::new(1.0, 0.0) - z);
    }
    let zm = z - Cx::new(1.0, 0.0);
    let mut acc = Cx::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += Cx::new(c, 0.0) / (zm + Cx::new(i as f64, 0.0));
    }
    let t = zm + Cx::new(G + 0.5, 0.0);
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Cx::new(half_ln_2pi, 0.0) + (zm + Cx::new(0.5, 0.0)) * t.ln() - t + acc.ln()
}

/// arg Gamma(i nu), the piece the long-time phase needs.
pub fn arg_gamma_of_i_nu(nu: f64) -> f64 {
    ln_gamma(Cx::new(0.0, nu)).im
}
