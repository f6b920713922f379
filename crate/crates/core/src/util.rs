//! Small shared helpers: percent encoding for slot keys and option values.

use std::fmt::Write;

/// Encodes a slot key into an IRI-safe local name: `[A-Za-z0-9_-]` pass
/// through, everything else becomes percent-encoded UTF-8 bytes.
pub fn encode_local_name(key: &str) -> String {
    let mut out = String::with_capacity(key.len());
    for b in key.bytes() {
        if b.is_ascii_alphanumeric() || b == b'_' || b == b'-' {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

/// Decodes exactly `%2C` and `%3D` (either hex case) to `,` and `=`.
/// Other percent sequences are left alone so URLs survive untouched.
pub fn decode_option_value(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    let bytes = value.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' && i + 2 < bytes.len() {
            match &value[i + 1..i + 3] {
                "2C" | "2c" => {
                    out.push(',');
                    i += 3;
                    continue;
                }
                "3D" | "3d" => {
                    out.push('=');
                    i += 3;
                    continue;
                }
                _ => {}
            }
        }
        let c = value[i..].chars().next().unwrap();
        out.push(c);
        i += c.len_utf8();
    }
    out
}

/// Escapes `,` and `=` as percent sequences, the inverse of
/// [`decode_option_value`].
pub fn encode_option_value(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            ',' => out.push_str("%2C"),
            '=' => out.push_str("%3D"),
            c => out.push(c),
        }
    }
    out
}

/// Percent-encodes a query-string component (RFC 3986 unreserved set).
pub fn encode_query_component(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for b in value.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_name_encoding() {
        assert_eq!(encode_local_name("accession_number"), "accession_number");
        assert_eq!(encode_local_name("a b"), "a%20b");
        assert_eq!(encode_local_name("a.b"), "a%2Eb");
        assert_eq!(encode_local_name("é"), "%C3%A9");
    }

    #[test]
    fn option_value_round_trip() {
        for v in ["a,b", "a=b", "plain", "100%", "a%20b"] {
            assert_eq!(decode_option_value(&encode_option_value(v)), v);
        }
        // Unrelated escapes stay encoded.
        assert_eq!(decode_option_value("a%20b"), "a%20b");
        assert_eq!(decode_option_value("a%2Cb"), "a,b");
        assert_eq!(decode_option_value("a%3db"), "a=b");
    }
}
