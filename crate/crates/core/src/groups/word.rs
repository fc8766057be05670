use serde::{Deserialize, Serialize};

/// Generator `i` is letter `2i`, its inverse is `2i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u8);

impl Letter {
    pub fn generator(i: usize) -> Self {
        Letter((2 * i) as u8)
    }

    pub fn generator_inverse(i: usize) -> Self {
        Letter((2 * i + 1) as u8)
    }

    pub fn index(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

pub type Word = Vec<Letter>;

/// Free reduction.
pub fn reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn is_reduced(w: &[Letter]) -> bool {
    w.windows(2).all(|p| p[1] != p[0].inverse())
}

/// Strips matching inverse letters from both ends of a reduced word.
pub fn cyclic_reduce(w: &[Letter]) -> &[Letter] {
    let mut s = w;
    while s.len() >= 2 && s[s.len() - 1] == s[0].inverse() {
        s = &s[1..s.len() - 1];
    }
    s
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Smallest p dividing n with w = (w[..p])^{n/p}.
pub fn primitive_period(w: &[Letter]) -> usize {
    let n = w.len();
    (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| w[i] == w[i - p])).unwrap_or(n)
}

pub fn is_proper_power(w: &[Letter]) -> bool {
    !w.is_empty() && primitive_period(w) < w.len()
}

/// Lexicographically least rotation.
pub fn least_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    (0..n)
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Word>())
        .min()
        .unwrap_or_default()
}

/// Labels joined directly when all are single characters, with '.' otherwise.
pub fn format_word(w: &[Letter], labels: &[String]) -> String {
    if w.is_empty() {
        return "id".to_string();
    }
    let sep = if labels.iter().all(|l| l.chars().count() == 1) { "" } else { "." };
    w.iter()
        .map(|l| {
            let base = &labels[l.index()];
            if l.is_inverse() {
                format!("{base}^-1")
            } else {
                base.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(sep)
}

/// Parses the output of [`format_word`].
pub fn parse_word(s: &str, labels: &[String]) -> Option<Word> {
    let s = s.trim();
    if s == "id" || s.is_empty() {
        return Some(Vec::new());
    }
    let single = labels.iter().all(|l| l.chars().count() == 1);
    let tokens: Vec<String> = if single {
        let mut toks = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let c = rest.chars().next()?;
            let mut tok = c.to_string();
            rest = &rest[c.len_utf8()..];
            if let Some(r) = rest.strip_prefix("^-1") {
                tok.push_str("^-1");
                rest = r;
            }
            toks.push(tok);
        }
        toks
    } else {
        s.split('.').map(str::to_string).collect()
    };
    tokens
        .iter()
        .map(|t| {
            let (base, inv) = match t.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (t.as_str(), false),
            };
            let i = labels.iter().position(|l| l == base)?;
            Some(if inv { Letter::generator_inverse(i) } else { Letter::generator(i) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[u8]) -> Word {
        s.iter().map(|&x| Letter(x)).collect()
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce(&w(&[0, 2, 3, 1, 2])), w(&[2]));
        assert_eq!(cyclic_reduce(&w(&[1, 2, 0])), &w(&[2])[..]);
        assert!(is_proper_power(&w(&[0, 2, 0, 2])));
        assert!(!is_proper_power(&w(&[0, 2, 0, 3])));
        assert_eq!(least_rotation(&w(&[2, 0, 3])), w(&[0, 3, 2]));
    }

    #[test]
    fn formatting_round_trips() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let word = w(&[0, 3, 1, 2]);
        let s = format_word(&word, &labels);
        assert_eq!(s, "ab^-1a^-1b");
        assert_eq!(parse_word(&s, &labels).unwrap(), word);
        let long = vec!["g1".to_string(), "g2".to_string()];
        let s = format_word(&word, &long);
        assert_eq!(s, "g1.g2^-1.g1^-1.g2");
        assert_eq!(parse_word(&s, &long).unwrap(), word);
        assert_eq!(format_word(&[], &labels), "id");
    }
}
