//! The handful of Turkish suffix rules the probe templates and the mock
//! backend need. This is not a morphological analyzer.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphError {
    #[error("{0:?} contains no vowel")]
    NoVowel(String),
}

/// Consonants after which a D-initial suffix surfaces with t.
pub const VOICELESS: &str = "fstkçşhp";

fn base_vowel(c: char) -> Option<char> {
    match c {
        'a' | 'â' => Some('a'),
        'e' => Some('e'),
        'ı' => Some('ı'),
        'i' | 'î' => Some('i'),
        'o' => Some('o'),
        'ö' => Some('ö'),
        'u' | 'û' => Some('u'),
        'ü' => Some('ü'),
        _ => None,
    }
}

pub fn last_vowel(word: &str) -> Option<char> {
    word.chars().rev().find_map(base_vowel)
}

pub fn vowel_count(word: &str) -> usize {
    word.chars().filter(|&c| base_vowel(c).is_some()).count()
}

/// High vowel selected by four-way harmony: a,ı→ı; e,i→i; o,u→u; ö,ü→ü.
pub fn high_vowel(last: char) -> char {
    match last {
        'a' | 'ı' => 'ı',
        'e' | 'i' => 'i',
        'o' | 'u' => 'u',
        _ => 'ü',
    }
}

/// Low vowel selected by two-way harmony: back → a, front → e.
pub fn low_vowel(last: char) -> char {
    match last {
        'a' | 'ı' | 'o' | 'u' => 'a',
        _ => 'e',
    }
}

fn ends_voiceless(word: &str) -> bool {
    word.chars().last().is_some_and(|c| VOICELESS.contains(c))
}

/// Appends the -DIr copula (`agresif` → `agresiftir`, `iyi` → `iyidir`).
pub fn attach_copula_suffix(word: &str) -> Result<String, MorphError> {
    let v = last_vowel(word).ok_or_else(|| MorphError::NoVowel(word.to_string()))?;
    let d = if ends_voiceless(word) { 't' } else { 'd' };
    let mut out = String::with_capacity(word.len() + 4);
    out.push_str(word);
    out.push(d);
    out.push(high_vowel(v));
    out.push('r');
    Ok(out)
}

/// Final stop softening before a vowel-initial suffix, for polysyllabic stems.
fn soften(word: &str) -> String {
    if vowel_count(word) < 2 {
        return word.to_string();
    }
    let mut chars: Vec<char> = word.chars().collect();
    if let Some(last) = chars.last_mut() {
        *last = match *last {
            'k' => 'ğ',
            'p' => 'b',
            'ç' => 'c',
            't' => 'd',
            other => other,
        };
    }
    chars.into_iter().collect()
}

/// First-person singular possessive (`kardeş` → `kardeşim`, `çocuk` → `çocuğum`).
pub fn possessive_1sg(noun: &str) -> Result<String, MorphError> {
    let v = last_vowel(noun).ok_or_else(|| MorphError::NoVowel(noun.to_string()))?;
    let ends_in_vowel = noun.chars().last().and_then(base_vowel).is_some();
    Ok(if ends_in_vowel {
        format!("{noun}m")
    } else {
        format!("{}{}m", soften(noun), high_vowel(v))
    })
}

/// Plural -lAr (`kardeş` → `kardeşler`).
pub fn plural(noun: &str) -> Result<String, MorphError> {
    let v = last_vowel(noun).ok_or_else(|| MorphError::NoVowel(noun.to_string()))?;
    Ok(format!("{noun}l{}r", low_vowel(v)))
}

/// Uppercases the first letter with Turkish dotted/dotless i rules.
pub fn capitalize_turkish(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        None => String::new(),
        Some('i') => format!("İ{}", chars.as_str()),
        Some('ı') => format!("I{}", chars.as_str()),
        Some(c) => c.to_uppercase().chain(chars).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copula_examples() {
        assert_eq!(attach_copula_suffix("agresif").unwrap(), "agresiftir");
        assert_eq!(attach_copula_suffix("güçsüz").unwrap(), "güçsüzdür");
        assert_eq!(attach_copula_suffix("iyi").unwrap(), "iyidir");
        assert_eq!(
            attach_copula_suffix("krk").unwrap_err(),
            MorphError::NoVowel("krk".into())
        );
    }

    #[test]
    fn possessive_and_plural() {
        assert_eq!(possessive_1sg("kardeş").unwrap(), "kardeşim");
        assert_eq!(possessive_1sg("yeğen").unwrap(), "yeğenim");
        assert_eq!(possessive_1sg("çocuk").unwrap(), "çocuğum");
        assert_eq!(possessive_1sg("torun").unwrap(), "torunum");
        assert_eq!(possessive_1sg("anne").unwrap(), "annem");
        assert_eq!(plural("kardeş").unwrap(), "kardeşler");
        assert_eq!(plural("çocuk").unwrap(), "çocuklar");
        assert_eq!(
            possessive_1sg(&plural("torun").unwrap()).unwrap(),
            "torunlarım"
        );
    }

    #[test]
    fn capitalization() {
        assert_eq!(capitalize_turkish("iyi"), "İyi");
        assert_eq!(capitalize_turkish("ılık"), "Ilık");
        assert_eq!(capitalize_turkish("kız"), "Kız");
        assert_eq!(capitalize_turkish(""), "");
    }
}
