//! Formula corrections built into the models.
//!
//! Each entry records the printed form, the implemented form, and why.

use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Erratum {
    pub quantity: &'static str,
    pub printed: &'static str,
    pub implemented: &'static str,
    pub reason: &'static str,
}

pub const ERRATA: [Erratum; 4] = [
    Erratum {
        quantity: "total phase mismatch k",
        printed: "k = Δβ + γP",
        implemented: "k = Δβ + 2γP",
        reason: "only with the factor 2 do (γP)² − k²/4 and −Δβ(Δβ/4 + γP) agree identically",
    },
    Erratum {
        quantity: "peak gain coefficient g0",
        printed: "g0 = √(−Δβ² + 4ΔβγP0)/2",
        implemented: "g0 = √(−Δβ(Δβ/4 + γP0))",
        reason: "the printed radicand is negative everywhere in the gain band Δβ < 0",
    },
    Erratum {
        quantity: "FWM coupling in the signal and idler equations",
        printed: "A_i·A_p² and A_s·A_p²",
        implemented: "A_i*·A_p² and A_s*·A_p²",
        reason: "without the conjugate the three equations do not conserve total power",
    },
    Erratum {
        quantity: "per-user bandwidth denominator",
        printed: "N·M·(d·T + T_Laser)",
        implemented: "N·M·(T + T_Laser)",
        reason: "d·T (bits) cannot be added to T_Laser (seconds); this reading also makes BW·T_window = d·T hold",
    },
];

/// Plain-text rendering for the `errata` command.
pub fn render() -> String {
    let mut out = String::new();
    for (i, e) in ERRATA.iter().enumerate() {
        out.push_str(&format!(
            "{}. {}\n   printed:     {}\n   implemented: {}\n   reason:      {}\n",
            i + 1,
            e.quantity,
            e.printed,
            e.implemented,
            e.reason
        ));
    }
    out
}
