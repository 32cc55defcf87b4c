import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rougewe.textpipe import (
    NGram,
    NGramMultiset,
    TokenizeConfig,
    TokenSequence,
    extract_ngrams,
    extract_skip_bigrams,
    load_stopwords,
    tokenize,
)


class TestTokenize:
    def test_default_lowercase_and_punctuation(self):
        assert tokenize("It is raining heavily.").tokens == ("it", "is", "raining", "heavily")

    def test_empty_input(self):
        assert tokenize("").tokens == ()
        assert tokenize("   \t\n ").tokens == ()

    def test_plain_words(self):
        assert tokenize("It is pouring").tokens == ("it", "is", "pouring")

    def test_strips_wrapping_punctuation_keeps_inner(self):
        assert tokenize('("Hello," she said -- don\'t!)').tokens == ("hello", "she", "said", "don't")

    def test_pure_punctuation_chunks_vanish(self):
        assert tokenize("a -- b ... !!").tokens == ("a", "b")

    def test_no_lowercase(self):
        config = TokenizeConfig(lowercase=False)
        assert tokenize("It IS", config).tokens == ("It", "IS")

    def test_stopword_removal(self):
        config = TokenizeConfig(stopwords=frozenset({"it", "is"}))
        assert tokenize("It is raining heavily.", config).tokens == ("raining", "heavily")

    def test_stemming(self):
        config = TokenizeConfig(stem=True)
        assert tokenize("running dogs pounced", config).tokens == ("run", "dog", "pounc")

    def test_source_id_carried(self):
        assert tokenize("x", source_id="sys1").source_id == "sys1"

    def test_load_stopwords(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("The\nis\n\n  a\n", encoding="utf-8")
        assert load_stopwords(path) == frozenset({"the", "is", "a"})

    @given(st.text(max_size=200))
    def test_idempotent_on_own_output(self, raw):
        first = tokenize(raw)
        again = tokenize(" ".join(first.tokens))
        assert again.tokens == first.tokens

    @given(st.text(max_size=200))
    def test_tokens_are_clean(self, raw):
        for token in tokenize(raw):
            assert token
            assert not any(ch.isspace() for ch in token)

    def test_idempotent_with_stopwords(self):
        config = TokenizeConfig(stopwords=frozenset({"the"}))
        first = tokenize("The cat, the hat.", config)
        assert tokenize(" ".join(first.tokens), config).tokens == first.tokens


class TestExtractNgrams:
    def test_bigrams(self):
        ms = extract_ngrams(TokenSequence(("it", "is", "pouring")), 2)
        assert ms.entries == {NGram(("it", "is")): 1, NGram(("is", "pouring")): 1}

    def test_multiplicity(self):
        ms = extract_ngrams(TokenSequence(("a", "a", "a")), 1)
        assert ms.entries == {NGram(("a",)): 3}
        assert ms.total == 3

    def test_four_token_bigrams(self):
        ms = extract_ngrams(TokenSequence(("police", "killed", "the", "gunman")), 2)
        assert ms.entries == {
            NGram(("police", "killed")): 1,
            NGram(("killed", "the")): 1,
            NGram(("the", "gunman")): 1,
        }

    def test_too_short_sequence(self):
        assert extract_ngrams(TokenSequence(("a",)), 2).total == 0
        assert extract_ngrams(TokenSequence(()), 1).total == 0

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            extract_ngrams(TokenSequence(("a",)), 0)

    @given(st.lists(st.sampled_from("abcde"), max_size=30), st.integers(1, 5))
    def test_total_formula(self, tokens, n):
        seq = TokenSequence(tuple(tokens))
        assert extract_ngrams(seq, n).total == max(0, len(tokens) - n + 1)


class TestExtractSkipBigrams:
    def test_all_pairs_within_skip(self):
        ms = extract_skip_bigrams(TokenSequence(("police", "killed", "the", "gunman")), 4)
        assert ms.total == 6
        assert ms.entries == {
            NGram(("police", "killed"), gap=0): 1,
            NGram(("police", "the"), gap=1): 1,
            NGram(("police", "gunman"), gap=2): 1,
            NGram(("killed", "the"), gap=0): 1,
            NGram(("killed", "gunman"), gap=1): 1,
            NGram(("the", "gunman"), gap=0): 1,
        }

    def test_adjacent_only(self):
        ms = extract_skip_bigrams(TokenSequence(("a", "b")), 0)
        assert ms.entries == {NGram(("a", "b"), gap=0): 1}

    def test_single_token_no_pairs(self):
        assert extract_skip_bigrams(TokenSequence(("a",)), 4).total == 0

    def test_invalid_max_skip(self):
        with pytest.raises(ValueError):
            extract_skip_bigrams(TokenSequence(("a", "b")), -1)

    @given(st.lists(st.sampled_from("abc"), min_size=2, max_size=20))
    def test_unbounded_skip_total(self, tokens):
        seq = TokenSequence(tuple(tokens))
        n = len(tokens)
        assert extract_skip_bigrams(seq, n - 2).total == n * (n - 1) // 2

    @given(st.lists(st.sampled_from("abc"), max_size=20))
    def test_zero_skip_equals_bigrams_modulo_gap(self, tokens):
        seq = TokenSequence(tuple(tokens))
        skip = extract_skip_bigrams(seq, 0)
        bigrams = extract_ngrams(seq, 2)
        assert skip.by_words() == bigrams.by_words()

    @settings(max_examples=30)
    @given(st.lists(st.sampled_from("abcd"), max_size=15), st.integers(0, 6))
    def test_gaps_within_bound(self, tokens, max_skip):
        for gram in extract_skip_bigrams(TokenSequence(tuple(tokens)), max_skip).entries:
            assert 0 <= gram.gap <= max_skip
            assert len(gram.words) == 2


class TestNGramMultiset:
    def test_by_words_merges_gaps(self):
        ms = NGramMultiset()
        ms.add(NGram(("a", "b"), gap=0), 2)
        ms.add(NGram(("a", "b"), gap=3))
        assert ms.by_words() == {("a", "b"): 3}
        assert ms.total == 3

    def test_union_sums_counts(self):
        left = extract_ngrams(TokenSequence(("a", "b")), 1)
        right = extract_ngrams(TokenSequence(("b", "c")), 1)
        merged = left.union(right)
        assert merged.by_words() == {("a",): 1, ("b",): 2, ("c",): 1}
        assert merged.total == 4
