//! Retweet syntax detection.
//!
//! Matches the classic pattern
//! `(?:^|\W)(?:rt|retweet(?:ing)?|via)\s*:?\s*@\s*([a-zA-Z0-9_]{1,20})(?:$|\W)`
//! with an ASCII case-insensitive marker, scanning bytes directly instead of
//! pulling in a regex engine.

fn is_word(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

// Java's \s: space, \t, \n, \x0B, \f, \r.
fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | 0x0B | 0x0C | b'\r')
}

fn starts_with_ci(hay: &[u8], needle: &[u8]) -> bool {
    hay.len() >= needle.len() && hay[..needle.len()].eq_ignore_ascii_case(needle)
}

/// Everything after the marker word: `\s*:?\s*@\s*` then a 1–20 character
/// handle that ends at end of input or a non-word byte.
fn match_tail(b: &[u8], mut i: usize) -> Option<(usize, usize)> {
    while i < b.len() && is_space(b[i]) {
        i += 1;
    }
    if i < b.len() && b[i] == b':' {
        i += 1;
    }
    while i < b.len() && is_space(b[i]) {
        i += 1;
    }
    if i >= b.len() || b[i] != b'@' {
        return None;
    }
    i += 1;
    while i < b.len() && is_space(b[i]) {
        i += 1;
    }
    let start = i;
    while i < b.len() && is_word(b[i]) {
        i += 1;
    }
    // A shorter prefix of the run is always followed by a word byte, so only
    // the full run can satisfy the trailing `(?:$|\W)`.
    let len = i - start;
    if (1..=20).contains(&len) {
        Some((start, i))
    } else {
        None
    }
}

fn match_marker(b: &[u8], at: usize) -> Option<(usize, usize)> {
    let rest = &b[at..];
    if starts_with_ci(rest, b"rt") {
        return match_tail(b, at + 2);
    }
    if starts_with_ci(rest, b"retweet") {
        if starts_with_ci(rest, b"retweeting") {
            if let Some(m) = match_tail(b, at + 10) {
                return Some(m);
            }
        }
        return match_tail(b, at + 7);
    }
    if starts_with_ci(rest, b"via") {
        return match_tail(b, at + 3);
    }
    None
}

/// First retweeted handle named by retweet syntax in `text`, e.g.
/// `"RT @alice check this"` gives `alice`. The handle keeps its case.
pub fn detect_retweet(text: &str) -> Option<&str> {
    let b = text.as_bytes();
    for start in 0..b.len() {
        let hit = if start == 0 { match_marker(b, 0) } else { None }
            .or_else(|| if is_word(b[start]) { None } else { match_marker(b, start + 1) });
        if let Some((s, e)) = hit {
            return Some(&text[s..e]);
        }
    }
    None
}
