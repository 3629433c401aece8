//! The command-line expression syntax: terms joined by `+` and `-` (or `−`),
//! an optional scalar coefficient attached with `*`, tree factors in the
//! bracket grammar (`x[x,x[y]]`), and `·` joining factors into commutative
//! monomials or tensor words. `1` denotes the empty monomial.
//!
//! Over truncated polynomial rings the ring variables are reserved words:
//! an identifier naming a ring variable always parses as a scalar, so labels
//! and basis names must avoid them. Scalar coefficients follow the ring
//! syntax (`3/4`, `2`, `2*a*b + 1`), parenthesized when they contain a sum.

use crate::cursor::Cursor;
use crate::error::Error;
use crate::ghat::{GhatElement, GhatLetter};
use crate::lincomb::{LinComb, SymMonomial, TensorWord};
use crate::prelie::{PreLie, TablePreLie};
use crate::ring::{scalar_factor_at, RingSpec, Scalar};
use crate::tree::LabeledRootedTree;
use crate::Result;

struct ParsedTerm {
    coeff: Scalar,
    factors: Vec<LabeledRootedTree>,
}

fn is_ring_var(ring: &RingSpec, name: &str) -> bool {
    match ring {
        RingSpec::TruncatedPoly { vars, .. } => vars.iter().any(|v| v == name),
        _ => false,
    }
}

fn parse_term(ring: &RingSpec, cur: &mut Cursor, mut negate: bool) -> Result<ParsedTerm> {
    loop {
        cur.skip_ws();
        match cur.peek_char() {
            Some('-') | Some('−') => {
                cur.bump_char();
                negate = !negate;
            }
            _ => break,
        }
    }
    let mut coeff = Scalar::one(ring);
    let mut factors = Vec::new();
    loop {
        cur.skip_ws();
        let start = cur.pos();
        let scalarish = match cur.peek() {
            Some(c) if c.is_ascii_digit() || c == b'(' => true,
            Some(c) if (c as char).is_ascii_alphabetic() => {
                let name = cur.identifier().expect("alphabetic start");
                cur.restore(start);
                is_ring_var(ring, &name)
            }
            _ => return Err(cur.err("expected a scalar or a tree term")),
        };
        if !scalarish {
            loop {
                factors.push(LabeledRootedTree::parse_at(cur)?);
                cur.skip_ws();
                if cur.peek_char() == Some('·') {
                    cur.bump_char();
                    cur.skip_ws();
                } else {
                    break;
                }
            }
            break;
        }
        coeff = coeff.mul(&scalar_factor_at(ring, cur)?)?;
        cur.skip_ws();
        if cur.peek() == Some(b'*') {
            cur.bump();
        } else {
            break;
        }
    }
    if negate {
        coeff = coeff.neg();
    }
    Ok(ParsedTerm { coeff, factors })
}

fn parse_terms(ring: &RingSpec, src: &str) -> Result<Vec<ParsedTerm>> {
    let mut cur = Cursor::new(src);
    cur.skip_ws();
    if cur.at_end() {
        return Err(cur.err("empty expression"));
    }
    let mut out = Vec::new();
    let mut negate = false;
    loop {
        out.push(parse_term(ring, &mut cur, negate)?);
        cur.skip_ws();
        match cur.peek_char() {
            None => return Ok(out),
            Some('+') => {
                cur.bump_char();
                negate = false;
            }
            Some('-') | Some('−') => {
                cur.bump_char();
                negate = true;
            }
            Some(c) => {
                return Err(cur.err(format!("expected '+', '-', or end of input, found {c:?}")))
            }
        }
    }
}

/// Parses a combination of single trees; `·` and the empty monomial are
/// rejected. Suits the grafting product.
pub fn parse_tree_comb(ring: &RingSpec, src: &str) -> Result<LinComb<LabeledRootedTree>> {
    let mut out = LinComb::zero(ring);
    for term in parse_terms(ring, src)? {
        match <[LabeledRootedTree; 1]>::try_from(term.factors) {
            Ok([tree]) => out.add_term(tree, &term.coeff)?,
            Err(factors) => {
                return Err(Error::Invalid(format!(
                    "expected one tree per term, found {}",
                    factors.len()
                )))
            }
        }
    }
    Ok(out)
}

/// Parses a combination of forest monomials; `·` separates the trees of a
/// monomial and `1` is the unit.
pub fn parse_forest_comb(
    ring: &RingSpec,
    src: &str,
) -> Result<LinComb<SymMonomial<LabeledRootedTree>>> {
    let mut out = LinComb::zero(ring);
    for term in parse_terms(ring, src)? {
        out.add_term(SymMonomial::from_factors(term.factors), &term.coeff)?;
    }
    Ok(out)
}

/// Labels occurring in a combination of trees, sorted and deduplicated.
pub fn tree_labels(comb: &LinComb<LabeledRootedTree>) -> Vec<String> {
    let mut set = std::collections::BTreeSet::new();
    for (t, _) in comb.terms() {
        collect_labels(t, &mut set);
    }
    set.into_iter().collect()
}

/// Labels occurring in a combination of forest monomials, sorted and
/// deduplicated.
pub fn forest_labels(comb: &LinComb<SymMonomial<LabeledRootedTree>>) -> Vec<String> {
    let mut set = std::collections::BTreeSet::new();
    for (m, _) in comb.terms() {
        for t in m.factors() {
            collect_labels(t, &mut set);
        }
    }
    set.into_iter().collect()
}

fn collect_labels(t: &LabeledRootedTree, set: &mut std::collections::BTreeSet<String>) {
    set.insert(t.label().to_string());
    for c in t.children() {
        collect_labels(c, set);
    }
}

fn basis_index(table: &TablePreLie, t: &LabeledRootedTree) -> Result<usize> {
    if !t.children().is_empty() {
        return Err(Error::Invalid(format!(
            "{t} has children; elements of a structure-constant algebra are plain basis names"
        )));
    }
    table.name_index(t.label())
}

/// Parses a combination of basis names of a structure-constant algebra.
pub fn parse_table_comb(table: &TablePreLie, src: &str) -> Result<LinComb<usize>> {
    let ring = table.ring().clone();
    let mut out = LinComb::zero(&ring);
    for term in parse_terms(&ring, src)? {
        let [tree] = <[LabeledRootedTree; 1]>::try_from(term.factors).map_err(|factors| {
            Error::Invalid(format!("expected one basis name per term, found {}", factors.len()))
        })?;
        out.add_term(basis_index(table, &tree)?, &term.coeff)?;
    }
    Ok(out)
}

/// Parses a combination of commutative monomials in the basis names of a
/// structure-constant algebra.
pub fn parse_table_monomial_comb(
    table: &TablePreLie,
    src: &str,
) -> Result<LinComb<SymMonomial<usize>>> {
    let ring = table.ring().clone();
    let mut out = LinComb::zero(&ring);
    for term in parse_terms(&ring, src)? {
        let mut keys = Vec::with_capacity(term.factors.len());
        for t in &term.factors {
            keys.push(basis_index(table, t)?);
        }
        out.add_term(SymMonomial::from_factors(keys), &term.coeff)?;
    }
    Ok(out)
}

/// Parses a combination of tensor words over a structure-constant algebra
/// extended by the central letter `t`; `·` concatenates letters in order and
/// the name `t` is reserved for the extra letter.
pub fn parse_ghat_comb(table: &TablePreLie, src: &str) -> Result<GhatElement<usize>> {
    let ring = table.ring().clone();
    let mut out = LinComb::zero(&ring);
    for term in parse_terms(&ring, src)? {
        let mut letters = Vec::with_capacity(term.factors.len());
        for t in &term.factors {
            if !t.children().is_empty() {
                return Err(Error::Invalid(format!(
                    "{t} has children; word letters are basis names or t"
                )));
            }
            if t.label() == "t" {
                letters.push(GhatLetter::T);
            } else {
                letters.push(GhatLetter::Gen(table.name_index(t.label())?));
            }
        }
        out.add_term(TensorWord(letters), &term.coeff)?;
    }
    Ok(out)
}

/// Renders a combination of basis-index monomials with the table's names.
pub fn format_table_monomial_comb(
    table: &TablePreLie,
    comb: &LinComb<SymMonomial<usize>>,
) -> String {
    comb.map_keys(|m| SymMonomial::from_factors(
        m.factors().iter().map(|i| table.names()[*i].clone()).collect(),
    ))
    .map(|named| named.to_string())
    .unwrap_or_else(|e| e.to_string())
}

/// Renders a word combination over a table algebra with the table's names.
pub fn format_ghat_comb(table: &TablePreLie, comb: &GhatElement<usize>) -> String {
    comb.map_keys(|w| {
        TensorWord(
            w.0.iter()
                .map(|l| match l {
                    GhatLetter::T => GhatLetter::T,
                    GhatLetter::Gen(i) => GhatLetter::Gen(table.names()[*i].clone()),
                })
                .collect::<Vec<GhatLetter<String>>>(),
        )
    })
    .map(|named| named.to_string())
    .unwrap_or_else(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::chain_3dim;
    use crate::tree::trees_up_to;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> RingSpec {
        RingSpec::rational()
    }

    #[test]
    fn trees_with_coefficients_parse() {
        let comb = parse_tree_comb(&q(), "x[x] + 2*x").unwrap();
        let mut expected = LinComb::zero(&q());
        expected
            .add_term(LabeledRootedTree::parse("x[x]").unwrap(), &Scalar::one(&q()))
            .unwrap();
        expected
            .add_term(
                LabeledRootedTree::parse("x").unwrap(),
                &Scalar::from_integer(&q(), 2),
            )
            .unwrap();
        assert_eq!(comb, expected);
        assert_eq!(tree_labels(&comb), vec!["x".to_string()]);
    }

    #[test]
    fn forests_split_on_the_middle_dot() {
        let comb = parse_forest_comb(&q(), "x · x[y]").unwrap();
        let m = SymMonomial::from_factors(vec![
            LabeledRootedTree::parse("x").unwrap(),
            LabeledRootedTree::parse("x[y]").unwrap(),
        ]);
        assert_eq!(comb, LinComb::single(&q(), m));
        assert_eq!(forest_labels(&comb), vec!["x".to_string(), "y".to_string()]);
        let unit = parse_forest_comb(&q(), "2*1").unwrap();
        assert_eq!(
            unit,
            LinComb::single(&q(), SymMonomial::unit()).scale(&Scalar::from_integer(&q(), 2)).unwrap()
        );
    }

    #[test]
    fn unclosed_bracket_points_at_column_two() {
        match parse_tree_comb(&q(), "x[").unwrap_err() {
            Error::SyntaxError { line, column, .. } => {
                assert_eq!((line, column), (1, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn signs_combine() {
        let ring = q();
        let comb = parse_tree_comb(&ring, "-x + y − 2*y[x]").unwrap();
        let t = |s: &str| LabeledRootedTree::parse(s).unwrap();
        let mut expected = LinComb::zero(&ring);
        expected.add_term(t("x"), &Scalar::from_integer(&ring, -1)).unwrap();
        expected.add_term(t("y"), &Scalar::one(&ring)).unwrap();
        expected.add_term(t("y[x]"), &Scalar::from_integer(&ring, -2)).unwrap();
        assert_eq!(comb, expected);
    }

    #[test]
    fn table_names_resolve_to_indices() {
        let alg = chain_3dim(&RingSpec::prime_field(5).unwrap()).unwrap();
        let comb = parse_table_comb(&alg, "e1 + 2*e3").unwrap();
        let mut expected = LinComb::zero(alg.ring());
        expected.add_term(0usize, &Scalar::one(alg.ring())).unwrap();
        expected.add_term(2usize, &Scalar::from_integer(alg.ring(), 2)).unwrap();
        assert_eq!(comb, expected);
        assert!(matches!(
            parse_table_comb(&alg, "e9"),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            parse_table_comb(&alg, "e1[e2]"),
            Err(Error::Invalid(_))
        ));
        let mono = parse_table_monomial_comb(&alg, "e2·e1 + 1").unwrap();
        let mut expected = LinComb::zero(alg.ring());
        expected
            .add_term(SymMonomial::from_factors(vec![0usize, 1]), &Scalar::one(alg.ring()))
            .unwrap();
        expected.add_term(SymMonomial::unit(), &Scalar::one(alg.ring())).unwrap();
        assert_eq!(mono, expected);
        assert_eq!(format_table_monomial_comb(&alg, &mono), "1 + e1·e2");
    }

    #[test]
    fn ghat_words_keep_letter_order() {
        let alg = chain_3dim(&RingSpec::prime_field(5).unwrap()).unwrap();
        let comb = parse_ghat_comb(&alg, "e2·t·e1 - t").unwrap();
        let mut expected = LinComb::zero(alg.ring());
        expected
            .add_term(
                TensorWord(vec![GhatLetter::Gen(1usize), GhatLetter::T, GhatLetter::Gen(0)]),
                &Scalar::one(alg.ring()),
            )
            .unwrap();
        expected
            .add_term(TensorWord(vec![GhatLetter::T]), &Scalar::from_integer(alg.ring(), -1))
            .unwrap();
        assert_eq!(comb, expected);
        assert_eq!(format_ghat_comb(&alg, &comb), "4*t + e2·t·e1");
    }

    #[test]
    fn truncated_poly_coefficients_parse() {
        let ring = RingSpec::truncated_poly(3, &["a", "b"]).unwrap();
        let comb = parse_forest_comb(&ring, "(2*a + 1)*x·x + a*x + b^2*y").unwrap();
        assert_eq!(comb.terms().count(), 3);
        // Ring variables are reserved: 'a' alone is a scalar, not a label.
        let scalar_only = parse_forest_comb(&ring, "a").unwrap();
        assert_eq!(
            scalar_only,
            LinComb::single(&ring, SymMonomial::unit())
                .scale(&Scalar::parse(&ring, "a").unwrap())
                .unwrap()
        );
    }

    fn random_scalar(ring: &RingSpec, rng: &mut ChaCha8Rng) -> Scalar {
        match ring {
            RingSpec::Rational => {
                let num = rng.gen_range(-6i64..=6);
                let den = rng.gen_range(1i64..=4);
                Scalar::from_integer(ring, num)
                    .mul(&Scalar::from_integer(ring, den).inv().unwrap())
                    .unwrap()
            }
            RingSpec::PrimeField { p } => {
                Scalar::from_integer(ring, rng.gen_range(0..*p) as i64)
            }
            RingSpec::TruncatedPoly { .. } => {
                let width = ring.fp_dimension().unwrap();
                let coords: Vec<u64> =
                    (0..width).map(|_| rng.gen_range(0..ring.characteristic())).collect();
                Scalar::from_fp_coordinates(ring, &coords).unwrap()
            }
        }
    }

    #[test]
    fn printing_then_parsing_is_the_identity() {
        let rings = [
            RingSpec::rational(),
            RingSpec::prime_field(5).unwrap(),
            RingSpec::truncated_poly(3, &["a", "b"]).unwrap(),
        ];
        let pool = trees_up_to(&["x", "y"], 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for round in 0..1000 {
            let ring = &rings[round % rings.len()];
            let mut comb = LinComb::zero(ring);
            for _ in 0..rng.gen_range(0..4usize) {
                let n_factors = rng.gen_range(0..3usize);
                let factors: Vec<LabeledRootedTree> = (0..n_factors)
                    .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                    .collect();
                comb.add_term(SymMonomial::from_factors(factors), &random_scalar(ring, &mut rng))
                    .unwrap();
            }
            let printed = comb.to_string();
            if comb.is_zero() {
                assert_eq!(printed, "0");
                continue;
            }
            let reparsed = parse_forest_comb(ring, &printed)
                .unwrap_or_else(|e| panic!("failed to reparse {printed:?}: {e}"));
            assert_eq!(reparsed, comb, "round-trip failed for {printed:?}");
        }
    }
}
