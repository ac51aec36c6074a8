/// Suffixes removed by [`stem`], tried in this order.
pub const SUFFIXES: [&str; 6] = ["s", "es", "ed", "ing", "est", "er"];

const TRAILING_PUNCT: &[char] = &['.', ',', '?', '!', ';', ':'];

/// Lowercases and strips trailing punctuation: `State.` becomes `state`.
pub fn normalize_word(word: &str) -> String {
    word.trim().trim_end_matches(TRAILING_PUNCT).to_lowercase()
}

/// Normalizes, then strips the first matching suffix if at least three
/// characters remain: `longest` gives `long`, `flies` gives `flie`.
pub fn stem(word: &str) -> String {
    let w = normalize_word(word);
    for suf in SUFFIXES {
        if let Some(base) = w.strip_suffix(suf) {
            if base.chars().count() >= 3 {
                return base.to_string();
            }
        }
    }
    w
}

/// Whether `word` and the constant or predicate `name` share a stem.
/// Names shorter than two characters never match, so articles do not
/// collide with corpus variables.
pub fn involves(word: &str, name: &str) -> bool {
    let (nw, nn) = (normalize_word(word), normalize_word(name));
    if nw.chars().count() < 2 || nn.chars().count() < 2 {
        return false;
    }
    let (sw, sn) = (stem(word), stem(name));
    nw == nn || sw == sn || sw == nn || nw == sn
}

/// Splits on whitespace and normalizes each token, dropping tokens that
/// were pure punctuation.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(normalize_word)
        .filter(|t| !t.is_empty())
        .collect()
}

/// Name for `constant` after moving it from `source` word to `target` word.
pub(crate) fn transfer_name(constant: &str, source: &str, target: &str) -> String {
    let c = normalize_word(constant);
    let (ns, nt) = (normalize_word(source), normalize_word(target));
    let (ss, st) = (stem(source), stem(target));
    let renamed = if c == ns {
        nt
    } else if c == ss {
        let suffix = &ns[ss.len()..];
        match nt.strip_suffix(suffix) {
            Some(base) if !suffix.is_empty() && base.chars().count() >= 3 => base.to_string(),
            _ => nt,
        }
    } else if stem(&c) == ss && c.starts_with(&ss) {
        format!("{st}{}", &c[ss.len()..])
    } else {
        nt
    };
    if constant.chars().next().is_some_and(char::is_uppercase) {
        let mut chars = renamed.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => renamed,
        }
    } else {
        renamed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize_word("state."), "state");
        assert_eq!(normalize_word("Texas?"), "texas");
        assert_eq!(normalize_word("pt_-5_-23"), "pt_-5_-23");
        assert_eq!(
            tokenize("Give me the largest state ."),
            ["give", "me", "the", "largest", "state"]
        );
    }

    #[test]
    fn stems() {
        assert_eq!(stem("longest"), "long");
        assert_eq!(stem("largest"), "larg");
        assert_eq!(stem("states"), "state");
        assert_eq!(stem("crossed"), "cross");
        assert_eq!(stem("flying"), "fly");
        assert_eq!(stem("is"), "is");
        assert_eq!(stem("bed"), "bed");
    }

    #[test]
    fn involvement() {
        assert!(involves("fly", "fly"));
        assert!(involves("flying", "fly"));
        assert!(involves("state.", "state"));
        assert!(involves("rivers", "river"));
        assert!(involves("Texas", "texas"));
        assert!(!involves("the", "state"));
        assert!(!involves("a", "A"));
        assert!(!involves("me", "answer"));
    }

    #[test]
    fn name_transfer() {
        assert_eq!(transfer_name("longest", "longest", "largest"), "largest");
        assert_eq!(transfer_name("fly", "fly", "swim"), "swim");
        assert_eq!(transfer_name("river", "rivers", "lakes"), "lake");
        assert_eq!(transfer_name("river", "rivers", "river"), "river");
        assert_eq!(transfer_name("Texas", "texas", "ohio"), "Ohio");
        assert_eq!(transfer_name("longer", "longest", "largest"), "larger");
    }
}
