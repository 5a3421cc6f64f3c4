//! Declarative language and predictor files.
//!
//! A language file holds one line, `builtin NAME` or `bits 0110…` (the
//! characteristic prefix). A predictor file holds one predictor per line:
//! `builtin uniform`, `builtin constant 3/4`, `builtin perfect LANGUAGE`, or
//! `table NAME p_0 p_1 …` giving `P(s_n, 1)` with `1/2` past the end.
//! Blank lines and `#` comments are skipped.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;
use crate::pt::predictor::{predictor_corpus, ratio, Predictor};
use crate::pt::strings::index_of;
use crate::pt::Language;

use super::ToolkitError;

fn input(line: usize, msg: impl Into<String>) -> ToolkitError {
    ToolkitError::Input(format!("line {line}: {}", msg.into()))
}

pub fn builtin_language(name: &str) -> Option<Language> {
    Some(match name {
        "empty" => Language::empty(),
        "all" => Language::all(),
        "even-index" => Language::even_index(),
        "even-weight" => Language::even_weight(),
        "prime-index" => Language::prime_index(),
        _ => return None,
    })
}

fn meaningful(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, w)| !w.is_empty())
}

pub fn parse_language(text: &str) -> Result<Language, ToolkitError> {
    let mut lines = meaningful(text);
    let (n, words) = lines.next().ok_or_else(|| input(1, "empty language file"))?;
    if let Some((extra, _)) = lines.next() {
        return Err(input(extra, "a language file holds one line"));
    }
    match words.as_slice() {
        ["builtin", name] => builtin_language(name).ok_or_else(|| input(n, format!("unknown language {name:?}"))),
        ["bits", b] => {
            let chi: BitString = b.parse().map_err(|_| input(n, "bits must be 0s and 1s"))?;
            Ok(Language::from_table("table", chi))
        }
        _ => Err(input(n, "expected `builtin NAME` or `bits 0101…`")),
    }
}

fn parse_probability(line: usize, s: &str) -> Result<BigRational, ToolkitError> {
    let q: BigRational = s.parse().map_err(|_| input(line, format!("bad probability {s:?}")))?;
    if q < BigRational::zero() || q > BigRational::one() {
        return Err(input(line, format!("probability {s} outside [0, 1]")));
    }
    Ok(q)
}

pub fn parse_predictors(text: &str) -> Result<Vec<Predictor>, ToolkitError> {
    let mut out = Vec::new();
    for (n, words) in meaningful(text) {
        let p = match words.as_slice() {
            ["builtin", "corpus"] => {
                out.extend(predictor_corpus());
                continue;
            }
            ["builtin", "uniform"] => Predictor::uniform(),
            ["builtin", "last-bit"] => Predictor::last_bit(),
            ["builtin", "length-confident"] => Predictor::length_confident(),
            ["builtin", "dyadic-weight"] => Predictor::dyadic_weight(),
            ["builtin", "constant", p] => Predictor::constant(parse_probability(n, p)?),
            ["builtin", "perfect", lang] => {
                Predictor::perfect(&builtin_language(lang).ok_or_else(|| input(n, format!("unknown language {lang:?}")))?)
            }
            ["table", name, probs @ ..] => {
                let table = probs.iter().map(|p| parse_probability(n, p)).collect::<Result<Vec<_>, _>>()?;
                Predictor::new(name, "table", move |x| {
                    let i = if x.len() < 64 { index_of(x) as usize } else { usize::MAX };
                    table.get(i).cloned().unwrap_or_else(|| ratio(1, 2))
                })
            }
            _ => return Err(input(n, format!("cannot read predictor {:?}", words.join(" ")))),
        };
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::pt::strings::string_at;

    #[test]
    fn languages() {
        let l = parse_language("# a comment\nbits 0110\n").unwrap();
        assert_eq!(l.decide(&bits("0")), Some(true));
        assert!(parse_language("builtin prime-index").is_ok());
        assert!(parse_language("builtin nope").is_err());
        assert!(parse_language("bits 012").is_err());
        assert!(parse_language("bits 01\nbits 10").is_err());
    }

    #[test]
    fn predictors() {
        let ps = parse_predictors("builtin uniform\nbuiltin constant 1/3\ntable t 1 0 1/4\nbuiltin perfect even-weight").unwrap();
        assert_eq!(ps.len(), 4);
        assert_eq!(ps[1].prob(&bits("0"), 1), ratio(1, 3));
        assert_eq!(ps[2].prob(&string_at(1), 1), ratio(0, 1));
        assert_eq!(ps[2].prob(&string_at(2), 0), ratio(3, 4));
        assert_eq!(ps[2].prob(&string_at(9), 1), ratio(1, 2));
        assert_eq!(parse_predictors("builtin corpus").unwrap().len(), predictor_corpus().len());
        assert!(parse_predictors("builtin constant 3/2").is_err());
        assert!(parse_predictors("oracle").is_err());
    }
}
