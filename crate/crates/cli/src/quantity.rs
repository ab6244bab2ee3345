//! Unit-tagged quantity parsing: every dimensioned config value is a string
//! `"<number> <unit>"` and is converted to SI base units on load. Canonical
//! re-emission uses the SI tag of each dimension, so `parse(emit(x)) == x`.

/// Physical dimension of a config field. Carries enough context to pick the
/// unit table and the canonical SI tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dim {
    /// J/b family (transceiver and wired per-bit energies).
    EnergyPerBit,
    /// W family.
    Power,
    /// W/Hz family plus dBm/Hz.
    NoiseDensity,
    /// Hz family (CPU frequencies and channel bandwidth).
    Frequency,
    /// b/s family (link rates and capacities).
    Rate,
    /// 1/s (request generation rates).
    PerSecond,
    /// Bits; byte units convert at 8 b/B with decimal prefixes.
    Size,
    /// Seconds family.
    Time,
    /// Plain dB figure, stored as-is.
    Decibel,
    /// Operations per bit; per-byte units divide by 8.
    Intensity,
    /// W/Hz^alpha; the exponent in the unit must match the model's alpha.
    Kappa { alpha: f64 },
}

impl Dim {
    fn what(&self) -> &'static str {
        match self {
            Dim::EnergyPerBit => "energy per bit",
            Dim::Power => "power",
            Dim::NoiseDensity => "noise density",
            Dim::Frequency => "frequency",
            Dim::Rate => "data rate",
            Dim::PerSecond => "rate",
            Dim::Size => "size",
            Dim::Time => "time",
            Dim::Decibel => "decibel",
            Dim::Intensity => "intensity",
            Dim::Kappa { .. } => "switching coefficient",
        }
    }

    fn table(&self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::EnergyPerBit => &[
                ("J/b", 1.0),
                ("mJ/b", 1e-3),
                ("uJ/b", 1e-6),
                ("nJ/b", 1e-9),
                ("pJ/b", 1e-12),
                ("fJ/b", 1e-15),
            ],
            Dim::Power => &[("W", 1.0), ("kW", 1e3), ("MW", 1e6), ("mW", 1e-3), ("uW", 1e-6)],
            Dim::NoiseDensity => &[("W/Hz", 1.0), ("mW/Hz", 1e-3)],
            Dim::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Dim::Rate => &[
                ("b/s", 1.0),
                ("kb/s", 1e3),
                ("Mb/s", 1e6),
                ("Gb/s", 1e9),
                ("Tb/s", 1e12),
            ],
            Dim::PerSecond => &[("1/s", 1.0), ("/s", 1.0)],
            Dim::Size => &[
                ("b", 1.0),
                ("kb", 1e3),
                ("Mb", 1e6),
                ("Gb", 1e9),
                ("B", 8.0),
                ("kB", 8e3),
                ("MB", 8e6),
                ("GB", 8e9),
            ],
            Dim::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9), ("min", 60.0)],
            Dim::Decibel => &[("dB", 1.0)],
            Dim::Intensity => &[
                ("op/b", 1.0),
                ("ops/b", 1.0),
                ("Flop/b", 1.0),
                ("op/B", 0.125),
                ("ops/B", 0.125),
                ("Flop/B", 0.125),
                ("FLOP/B", 0.125),
            ],
            Dim::Kappa { .. } => unreachable!("kappa units are parsed structurally"),
        }
    }

    /// Canonical unit tag used when a parsed config is re-emitted.
    pub fn si_tag(&self) -> String {
        match self {
            Dim::EnergyPerBit => "J/b".into(),
            Dim::Power => "W".into(),
            Dim::NoiseDensity => "W/Hz".into(),
            Dim::Frequency => "Hz".into(),
            Dim::Rate => "b/s".into(),
            Dim::PerSecond => "1/s".into(),
            Dim::Size => "b".into(),
            Dim::Time => "s".into(),
            Dim::Decibel => "dB".into(),
            Dim::Intensity => "op/b".into(),
            Dim::Kappa { alpha } => format!("W/Hz^{alpha}"),
        }
    }

    /// Converts `"<number> <unit>"` to SI base units.
    pub fn parse(&self, text: &str) -> Result<f64, String> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(format!(
                "expected \"<number> <unit>\" for a {} value, got \"{}\"",
                self.what(),
                text
            ));
        }
        let value: f64 = parts[0]
            .parse()
            .map_err(|_| format!("\"{}\" is not a number", parts[0]))?;
        if !value.is_finite() {
            return Err(format!("\"{}\" is not finite", parts[0]));
        }
        let unit = parts[1];
        match self {
            Dim::NoiseDensity if unit == "dBm/Hz" => Ok(10f64.powf(value / 10.0) * 1e-3),
            Dim::Kappa { alpha } => {
                let exp: f64 = unit
                    .strip_prefix("W/Hz^")
                    .ok_or_else(|| format!("expected a W/Hz^<alpha> unit, got \"{unit}\""))?
                    .parse()
                    .map_err(|_| format!("bad exponent in unit \"{unit}\""))?;
                if (exp - alpha).abs() > 1e-9 * alpha.abs().max(1.0) {
                    return Err(format!(
                        "kappa unit exponent {exp} does not match alpha {alpha}"
                    ));
                }
                Ok(value)
            }
            _ => {
                let table = self.table();
                match table.iter().find(|(u, _)| *u == unit) {
                    Some((_, scale)) => Ok(value * scale),
                    None => Err(format!(
                        "unknown {} unit \"{}\" (expected one of {})",
                        self.what(),
                        unit,
                        table.iter().map(|(u, _)| *u).collect::<Vec<_>>().join(", ")
                    )),
                }
            }
        }
    }

    /// SI value back to canonical text, e.g. `4.5e-8` -> `"0.000000045 J/b"`.
    /// The number uses Rust's shortest round-trip formatting, so re-parsing
    /// recovers the value exactly.
    pub fn emit(&self, si_value: f64) -> String {
        format!("{} {}", si_value, self.si_tag())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn common_conversions() {
        close(Dim::EnergyPerBit.parse("4.5e4 pJ/b").unwrap(), 4.5e-8);
        close(Dim::EnergyPerBit.parse("1030 pJ/b").unwrap(), 1.03e-9);
        close(Dim::Frequency.parse("20 MHz").unwrap(), 2e7);
        close(Dim::Frequency.parse("3 GHz").unwrap(), 3e9);
        close(Dim::Rate.parse("54 Mb/s").unwrap(), 5.4e7);
        close(Dim::Size.parse("2 MB").unwrap(), 1.6e7);
        close(Dim::Size.parse("100 kb").unwrap(), 1e5);
        close(Dim::Time.parse("1 ms").unwrap(), 1e-3);
        close(Dim::PerSecond.parse("67 /s").unwrap(), 67.0);
        close(Dim::PerSecond.parse("67 1/s").unwrap(), 67.0);
        close(Dim::Intensity.parse("100 op/b").unwrap(), 100.0);
        close(Dim::Intensity.parse("71 Flop/B").unwrap(), 8.875);
        close(Dim::Power.parse("300 mW").unwrap(), 0.3);
        close(Dim::Decibel.parse("83 dB").unwrap(), 83.0);
    }

    #[test]
    fn noise_density_accepts_dbm_per_hz() {
        close(Dim::NoiseDensity.parse("-174 dBm/Hz").unwrap(), 10f64.powf(-17.4) * 1e-3);
        close(Dim::NoiseDensity.parse("4e-21 W/Hz").unwrap(), 4e-21);
    }

    #[test]
    fn kappa_exponent_must_match_alpha() {
        close(Dim::Kappa { alpha: 3.0 }.parse("1e-27 W/Hz^3").unwrap(), 1e-27);
        assert!(Dim::Kappa { alpha: 3.0 }.parse("1e-27 W/Hz^2").is_err());
        assert!(Dim::Kappa { alpha: 3.0 }.parse("1e-27 W").is_err());
    }

    #[test]
    fn bad_inputs_are_rejected_with_context() {
        let err = Dim::Power.parse("10 W/Hz").unwrap_err();
        assert!(err.contains("unknown power unit"), "{err}");
        let err = Dim::Time.parse("10").unwrap_err();
        assert!(err.contains("expected"), "{err}");
        let err = Dim::Size.parse("ten Mb").unwrap_err();
        assert!(err.contains("not a number"), "{err}");
    }

    #[test]
    fn emit_round_trips_exactly() {
        for &v in &[4.5e-8, 1.380649e-23, 3e9, 0.125, 54e6, 1e-27] {
            for dim in [
                Dim::EnergyPerBit,
                Dim::Frequency,
                Dim::Rate,
                Dim::Time,
                Dim::Kappa { alpha: 3.0 },
            ] {
                let text = dim.emit(v);
                assert_eq!(dim.parse(&text).unwrap(), v, "{text}");
            }
        }
    }
}
