//! Finite samples of languages.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::alphabet::{Alphabet, EventId};
use crate::error::Error;

/// Default bound on the length of enumerated strings.
pub const DEFAULT_DEPTH_CAP: usize = 12;

/// A string over an alphabet, as event indices.
pub type Word = Vec<EventId>;

/// A finite set of strings together with the length bound `depth` up to
/// which it is considered complete.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StringSample {
    pub strings: BTreeSet<Word>,
    pub depth: usize,
}

impl StringSample {
    pub fn new(strings: impl IntoIterator<Item = Word>, depth: usize) -> Self {
        Self {
            strings: strings.into_iter().collect(),
            depth,
        }
    }

    /// A finite language given by event names. `depth` is set to one more than
    /// the longest member, which makes the property checkers exact.
    pub fn from_names<S: AsRef<str>>(alphabet: &Alphabet, strings: &[&[S]]) -> Result<Self, Error> {
        let mut words = BTreeSet::new();
        for s in strings {
            let word = s
                .iter()
                .map(|n| alphabet.lookup(n.as_ref()))
                .collect::<Result<Word, _>>()?;
            words.insert(word);
        }
        let depth = words.iter().map(Vec::len).max().map_or(1, |l| l + 1);
        Ok(Self {
            strings: words,
            depth,
        })
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, word: &[EventId]) -> bool {
        self.strings.contains(word)
    }

    pub fn longest(&self) -> usize {
        self.strings.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All prefixes of all members.
    pub fn closure(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for s in &self.strings {
            for i in (0..=s.len()).rev() {
                // shorter prefixes are already present
                if !out.insert(s[..i].to_vec()) {
                    break;
                }
            }
        }
        out
    }

    pub fn is_prefix_closed(&self) -> bool {
        self.strings
            .iter()
            .all(|s| s.is_empty() || self.strings.contains(&s[..s.len() - 1]))
    }

    pub fn union(&self, other: &StringSample) -> StringSample {
        StringSample {
            strings: self.strings.union(&other.strings).cloned().collect(),
            depth: self.depth.min(other.depth),
        }
    }

    /// Members of length at most `depth`.
    pub fn truncate(&self, depth: usize) -> StringSample {
        StringSample {
            strings: self.strings.iter().filter(|s| s.len() <= depth).cloned().collect(),
            depth: depth.min(self.depth),
        }
    }

    pub fn to_names(&self, alphabet: &Alphabet) -> Vec<Vec<String>> {
        self.strings
            .iter()
            .map(|w| w.iter().map(|&e| String::from(alphabet.name(e))).collect())
            .collect()
    }

    /// Re-expresses the sample over another alphabet containing the same event names.
    pub fn translate(&self, from: &Alphabet, to: &Alphabet) -> Result<StringSample, Error> {
        let mut strings = BTreeSet::new();
        for w in &self.strings {
            let word = w
                .iter()
                .map(|&e| to.lookup(from.name(e)))
                .collect::<Result<Word, _>>()?;
            strings.insert(word);
        }
        Ok(StringSample {
            strings,
            depth: self.depth,
        })
    }
}

/// Renders a word as `a·b·c`, or `ε` when empty.
pub fn format_word(alphabet: &Alphabet, word: &[EventId]) -> String {
    if word.is_empty() {
        return String::from("ε");
    }
    let mut out = String::new();
    for (i, &e) in word.iter().enumerate() {
        if i > 0 {
            out.push('·');
        }
        out.push_str(alphabet.name(e));
    }
    out
}
