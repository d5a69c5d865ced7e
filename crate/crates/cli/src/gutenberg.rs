//! Project Gutenberg boilerplate removal.

/// Cut everything outside the `*** START OF ... ***` / `*** END OF ... ***`
/// markers. Texts without markers pass through unchanged.
pub fn strip_gutenberg(text: &str) -> String {
    let lines: Vec<&str> = text.split('\n').collect();
    let mut start = 0usize;
    let mut end = lines.len();
    let mut found = false;
    for (i, line) in lines.iter().enumerate() {
        let trimmed = line.trim_start();
        if !trimmed.starts_with("***") {
            continue;
        }
        let upper = trimmed.to_uppercase();
        if !upper.contains("PROJECT GUTENBERG") {
            continue;
        }
        if upper.contains("START OF") {
            start = i + 1;
            found = true;
        } else if upper.contains("END OF") {
            end = i;
            found = true;
            break;
        }
    }
    if !found {
        return text.to_string();
    }
    lines[start..end].join("\n")
}
