/// Flat `key = value` rendering of a report.
pub trait KeyValues {
    fn key_values(&self) -> Vec<(String, String)>;

    fn to_key_value_text(&self) -> String {
        format_key_values(&self.key_values())
    }
}

pub fn format_key_values(entries: &[(String, String)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    out
}

/// Fixed float formatting shared by all reports.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub(crate) fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
    format!("[{}]", items.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_lines_in_order() {
        let e = vec![("a".to_string(), "1".to_string()), ("b".to_string(), "x".to_string())];
        assert_eq!(format_key_values(&e), "a = 1\nb = x\n");
        assert_eq!(fmt_list(&[1.0, -0.5]), "[1.0000000000000000e0, -5.0000000000000000e-1]");
    }
}
