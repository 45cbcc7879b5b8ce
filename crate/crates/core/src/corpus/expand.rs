//! Multilingual expansion: all four claim/text language combinations.

use std::collections::HashMap;

use crate::corpus::{LabeledPair, PairLabel};
use crate::error::{Error, Result};

/// Combination tags in emission order. A pair id `x` expands into
/// `x-aa`, `x-ab`, `x-ba`, `x-bb`.
pub(crate) const COMBINATION_TAGS: [&str; 4] = ["aa", "ab", "ba", "bb"];

/// Cross two aligned translations of the same dataset into all four
/// claim/text combinations: (A,A), (A,B), (B,A), (B,B).
///
/// Inputs must share the same id set and agree on every label. Output
/// order follows `pairs_a`, each source pair expanding into four
/// consecutive combinations tagged aa, ab, ba, bb.
pub fn expand_multilingual(
    pairs_a: &[LabeledPair],
    pairs_b: &[LabeledPair],
) -> Result<Vec<LabeledPair>> {
    let mut by_id: HashMap<&str, &LabeledPair> = HashMap::with_capacity(pairs_b.len());
    for b in pairs_b {
        if by_id.insert(&b.id, b).is_some() {
            return Err(Error::IdMismatch(format!(
                "duplicate id {:?} in second input",
                b.id
            )));
        }
    }
    if pairs_a.len() != pairs_b.len() {
        return Err(Error::IdMismatch(format!(
            "inputs differ in size: {} vs {}",
            pairs_a.len(),
            pairs_b.len()
        )));
    }

    let mut out = Vec::with_capacity(pairs_a.len() * 4);
    let mut seen_a: HashMap<&str, ()> = HashMap::with_capacity(pairs_a.len());
    for a in pairs_a {
        if seen_a.insert(&a.id, ()).is_some() {
            return Err(Error::IdMismatch(format!(
                "duplicate id {:?} in first input",
                a.id
            )));
        }
        let b = by_id.get(a.id.as_str()).ok_or_else(|| {
            Error::IdMismatch(format!("id {:?} missing from second input", a.id))
        })?;
        if a.label != b.label {
            return Err(Error::LabelDisagreement { id: a.id.clone() });
        }
        for tag in COMBINATION_TAGS {
            out.push(combine(a, b, tag, a.label));
        }
    }
    Ok(out)
}

fn combine(a: &LabeledPair, b: &LabeledPair, tag: &str, label: PairLabel) -> LabeledPair {
    let (claim_side, text_side) = match tag {
        "aa" => (a, a),
        "ab" => (a, b),
        "ba" => (b, a),
        _ => (b, b),
    };
    LabeledPair {
        id: format!("{}-{}", a.id, tag),
        claim: claim_side.claim.clone(),
        text: text_side.text.clone(),
        label,
        claim_lang: claim_side.claim_lang.clone(),
        text_lang: text_side.text_lang.clone(),
        source: a.source.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::EntailLabel;

    fn pair(id: &str, claim: &str, text: &str, lang: &str) -> LabeledPair {
        LabeledPair {
            id: id.to_string(),
            claim: claim.to_string(),
            text: text.to_string(),
            label: PairLabel::Entail(EntailLabel::Supported),
            claim_lang: lang.to_string(),
            text_lang: lang.to_string(),
            source: "test".to_string(),
        }
    }

    #[test]
    fn one_pair_expands_to_four_tagged() {
        let a = vec![pair("7", "claim en", "text en", "en")];
        let b = vec![pair("7", "claim it", "text it", "it")];
        let out = expand_multilingual(&a, &b).unwrap();
        assert_eq!(out.len(), 4);
        let ids: Vec<&str> = out.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, vec!["7-aa", "7-ab", "7-ba", "7-bb"]);

        assert_eq!(out[0].claim, "claim en");
        assert_eq!(out[0].text, "text en");
        assert_eq!(out[1].claim, "claim en");
        assert_eq!(out[1].text, "text it");
        assert_eq!(out[2].claim, "claim it");
        assert_eq!(out[2].text, "text en");
        assert_eq!(out[3].claim, "claim it");
        assert_eq!(out[3].text, "text it");

        assert_eq!(out[1].claim_lang, "en");
        assert_eq!(out[1].text_lang, "it");
        assert_eq!(out[2].claim_lang, "it");
        assert_eq!(out[2].text_lang, "en");
        assert!(out.iter().all(|p| p.label == a[0].label));
    }

    #[test]
    fn alignment_by_id_not_position() {
        let a = vec![pair("1", "c1", "t1", "en"), pair("2", "c2", "t2", "en")];
        let b = vec![
            pair("2", "c2-it", "t2-it", "it"),
            pair("1", "c1-it", "t1-it", "it"),
        ];
        let out = expand_multilingual(&a, &b).unwrap();
        assert_eq!(out[1].id, "1-ab");
        assert_eq!(out[1].text, "t1-it");
    }

    #[test]
    fn disjoint_ids_error() {
        let a = vec![pair("1", "c", "t", "en")];
        let b = vec![pair("9", "c", "t", "it")];
        assert!(matches!(
            expand_multilingual(&a, &b),
            Err(Error::IdMismatch(_))
        ));
    }

    #[test]
    fn label_disagreement_error() {
        let a = vec![pair("1", "c", "t", "en")];
        let mut b = vec![pair("1", "c", "t", "it")];
        b[0].label = PairLabel::Entail(EntailLabel::Refuted);
        match expand_multilingual(&a, &b) {
            Err(Error::LabelDisagreement { id }) => assert_eq!(id, "1"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    proptest::proptest! {
        #[test]
        fn output_is_always_four_times_input(n in 0usize..60) {
            let a: Vec<LabeledPair> =
                (0..n).map(|i| pair(&i.to_string(), "c", "t", "en")).collect();
            let b: Vec<LabeledPair> =
                (0..n).map(|i| pair(&i.to_string(), "c-b", "t-b", "it")).collect();
            let out = expand_multilingual(&a, &b).unwrap();
            proptest::prop_assert_eq!(out.len(), 4 * n);
        }
    }
}
