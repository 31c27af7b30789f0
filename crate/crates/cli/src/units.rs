//! SI-suffixed flag parsing: `--t-int 10ms`, `--f-rep 250MHz`,
//! `--wavelength 807nm`. Suffixes are case-sensitive; a bare number is
//! taken in the base unit.

fn parse_with(s: &str, suffixes: &[(&str, f64)], what: &str, base: &str) -> Result<f64, String> {
    let s = s.trim();
    for (suffix, mult) in suffixes {
        if let Some(num) = s.strip_suffix(suffix) {
            let num = num.trim();
            if num.is_empty() {
                break;
            }
            return num
                .parse::<f64>()
                .map(|v| v * mult)
                .map_err(|_| format!("bad {what} value {s:?}"));
        }
    }
    s.parse::<f64>()
        .map_err(|_| format!("bad {what} value {s:?}; expected a number with optional {base}"))
}

pub fn parse_time(s: &str) -> Result<f64, String> {
    parse_with(
        s,
        &[
            ("fs", 1e-15),
            ("ps", 1e-12),
            ("ns", 1e-9),
            ("us", 1e-6),
            ("ms", 1e-3),
            ("s", 1.0),
        ],
        "time",
        "suffix fs/ps/ns/us/ms/s",
    )
}

pub fn parse_freq(s: &str) -> Result<f64, String> {
    parse_with(
        s,
        &[
            ("THz", 1e12),
            ("GHz", 1e9),
            ("MHz", 1e6),
            ("kHz", 1e3),
            ("Hz", 1.0),
        ],
        "frequency",
        "suffix Hz/kHz/MHz/GHz/THz",
    )
}

pub fn parse_length(s: &str) -> Result<f64, String> {
    parse_with(
        s,
        &[
            ("pm", 1e-12),
            ("nm", 1e-9),
            ("um", 1e-6),
            ("mm", 1e-3),
            ("cm", 1e-2),
            ("m", 1.0),
        ],
        "length",
        "suffix pm/nm/um/mm/cm/m",
    )
}
