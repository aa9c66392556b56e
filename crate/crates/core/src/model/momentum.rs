//! Auxiliary momenta `hP`, `hQ` from depth, velocity and bottom jets.

use super::{PhysParams, ScalarJet};

/// Pointwise `(hP, hQ)` with the outer divergence expanded by the product rule.
pub fn momentum_from_jets(h: &ScalarJet, u: &ScalarJet, v: &ScalarJet, b: &ScalarJet, p: &PhysParams) -> (f64, f64) {
    let a = p.alpha;
    let (hh, hx, hy) = (h.v, h.x, h.y);
    let h2 = hh * hh;
    let h3 = h2 * hh;
    let div = u.x + v.y;

    // hP = -(A)_x - (B)_y + f_u u + f_v v
    // A = a/3 h^3 div - a/2 h^2 v b_y,  B = a/2 h^2 v b_x
    let ax = a * h2 * hx * div + a / 3.0 * h3 * (u.xx + v.xy)
        - a * hh * hx * v.v * b.y
        - 0.5 * a * h2 * (v.x * b.y + v.v * b.xy);
    let by = a * hh * hy * v.v * b.x + 0.5 * a * h2 * (v.y * b.x + v.v * b.xy);
    let fu = hh * (1.0 + a * hx * b.x + 0.5 * a * hh * b.xx + a * b.x * b.x);
    let fv = hh * (a * hy * b.x + 0.5 * a * hh * b.xy + a * b.x * b.y);
    let hp = -ax - by + fu * u.v + fv * v.v;

    // hQ = -(A')_y - (B')_x + g_u u + g_v v
    // A' = a/3 h^3 div - a/2 h^2 u b_x,  B' = a/2 h^2 u b_y
    let ay = a * h2 * hy * div + a / 3.0 * h3 * (u.xy + v.yy)
        - a * hh * hy * u.v * b.x
        - 0.5 * a * h2 * (u.y * b.x + u.v * b.xy);
    let bx = a * hh * hx * u.v * b.y + 0.5 * a * h2 * (u.x * b.y + u.v * b.xy);
    let gu = hh * (a * hx * b.y + 0.5 * a * hh * b.xy + a * b.x * b.y);
    let gv = hh * (1.0 + a * hy * b.y + 0.5 * a * hh * b.yy + a * b.y * b.y);
    let hq = -ay - bx + gu * u.v + gv * v.v;
    (hp, hq)
}
