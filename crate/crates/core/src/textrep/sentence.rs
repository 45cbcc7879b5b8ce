//! Sentence segmentation.

/// Split text into sentences at '.', '!' or '?' followed by whitespace
/// and an uppercase letter. Segments are trimmed and empty segments
/// dropped, so abbreviations and decimal points ("v. 2.0") survive.
pub fn segment_sentences(text: &str) -> Vec<String> {
    let mut segments = Vec::new();
    let mut start = 0;
    for (i, c) in text.char_indices() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let rest = &text[i + c.len_utf8()..];
        let mut chars = rest.chars();
        let next = chars.next();
        if !next.is_some_and(char::is_whitespace) {
            continue;
        }
        let after_ws = rest.trim_start();
        if after_ws.chars().next().is_some_and(char::is_uppercase) {
            let end = i + c.len_utf8();
            push_trimmed(&mut segments, &text[start..end]);
            start = end;
        }
    }
    push_trimmed(&mut segments, &text[start..]);
    segments
}

fn push_trimmed(segments: &mut Vec<String>, raw: &str) {
    let trimmed = raw.trim();
    if !trimmed.is_empty() {
        segments.push(trimmed.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_period_whitespace_uppercase() {
        assert_eq!(segment_sentences("A b. C d."), vec!["A b.", "C d."]);
    }

    #[test]
    fn abbreviations_and_decimals_stay_whole() {
        assert_eq!(segment_sentences("v. 2.0 works"), vec!["v. 2.0 works"]);
    }

    #[test]
    fn empty_input_yields_no_segments() {
        assert!(segment_sentences("").is_empty());
        assert!(segment_sentences("   \n ").is_empty());
    }

    #[test]
    fn exclamation_and_question_split() {
        assert_eq!(
            segment_sentences("Really?! Yes! Sure? No."),
            vec!["Really?!", "Yes!", "Sure?", "No."]
        );
    }

    #[test]
    fn lowercase_continuation_is_not_a_boundary() {
        assert_eq!(
            segment_sentences("it works. really it does"),
            vec!["it works. really it does"]
        );
    }

    #[test]
    fn unicode_uppercase_counts() {
        assert_eq!(segment_sentences("Sì. È vero."), vec!["Sì.", "È vero."]);
    }

    #[test]
    fn joined_segments_keep_every_nonspace_char() {
        let inputs = [
            "A b. C d. E!",
            "Mixed? Yes! and no. More",
            "  padded .  Start here. ",
        ];
        for input in inputs {
            let joined = segment_sentences(input).join(" ");
            let squash = |s: &str| {
                s.chars()
                    .filter(|c| !c.is_whitespace())
                    .collect::<String>()
            };
            assert_eq!(squash(&joined), squash(input));
        }
    }
}
