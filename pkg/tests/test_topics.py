from __future__ import annotations

import math
import string

import numpy as np
import pytest
from hypothesis import given, strategies as st

from retrace.errors import SelectionError, ValidationError
from retrace.topics import (
    Corpus,
    Dictionary,
    StopwordConfig,
    lemmatize,
    preprocess,
    sweep_select_k,
    tokenize,
    topic_coherence,
    train_lda,
    vectorize_tfidf,
)
from retrace.topics.coherence import (
    CoherenceCurve,
    cooccurrence_counts,
    select_plateau,
)
from retrace.topics.lda import LdaModel, doc_topic_table, top_terms


class TestTokenize:
    def test_alpha_runs_only(self):
        assert tokenize("Vaccines, 1998-2004 (n=12)!") == ["vaccines", "n"]

    def test_lowercases(self):
        assert tokenize("MMR Vaccine") == ["mmr", "vaccine"]


class TestLemmatize:
    @pytest.mark.parametrize("form,lemma", [
        ("vaccines", "vaccine"),
        ("studies", "study"),
        ("carried", "carry"),
        ("boxes", "box"),
        ("churches", "church"),
        ("stopped", "stop"),
        ("running", "run"),
        ("retracted", "retract"),
        ("children", "child"),
        ("analysis", "analysis"),
        ("virus", "virus"),
        ("press", "press"),
    ])
    def test_forms(self, form, lemma):
        assert lemmatize(form) == lemma


class TestStopwordConfig:
    def test_lowercase_enforced(self):
        with pytest.raises(ValueError):
            StopwordConfig(structural=frozenset({"Background"}))

    def test_abstract_config_blocks_structural_headings(self):
        tokens = preprocess("BACKGROUND: vaccines work. CONCLUSIONS: they do.",
                            StopwordConfig.for_abstracts())
        assert "background" not in tokens
        assert "conclusion" not in tokens
        assert "vaccine" in tokens

    def test_context_config_blocks_reference_tokens(self):
        config = StopwordConfig.for_contexts(frozenset({"wakefield", "lancet"}))
        tokens = preprocess("Wakefield published in the Lancet about vaccines.",
                            config)
        assert tokens == ["publish", "vaccine"]


class TestPreprocess:
    def test_stopwords_filtered_before_and_after_lemmatization(self):
        # "vaccines" lemmatizes to "vaccine"; a post-lemma stopword must
        # still be filtered
        config = StopwordConfig(reference=frozenset({"vaccine"}))
        assert "vaccine" not in preprocess("vaccines everywhere", config)

    def test_short_tokens_dropped(self):
        # "an"/"to"/"me" are stopwords, "ox" is too short, "ran" lemmatizes
        # to the irregular base "run"
        assert preprocess("an ox ran to me") == ["run"]

    @given(st.text(alphabet=string.ascii_letters + " .,;!", max_size=120))
    def test_output_is_clean(self, text):
        out = preprocess(text)
        stops = StopwordConfig().all()
        for token in out:
            assert token == token.lower()
            assert len(token) >= 3
            assert token not in stops


class TestDictionaryAndCorpus:
    def test_dense_append_only_ids(self):
        d = Dictionary()
        ids_a = d.add_document(["alpha", "beta", "alpha"])
        ids_b = d.add_document(["beta", "gamma"])
        assert ids_a == [0, 1, 0]
        assert ids_b == [1, 2]
        assert d.doc_freq == {0: 1, 1: 2, 2: 1}
        assert d.num_docs == 2

    def test_save_load_roundtrip(self, tmp_path):
        d = Dictionary()
        d.add_document(["alpha", "beta"])
        d.save(tmp_path / "dict.csv")
        loaded = Dictionary.load(tmp_path / "dict.csv", num_docs=1)
        assert loaded.doc_freq == d.doc_freq
        assert len(loaded) == 2

    def test_corpus_token_ids_and_validate(self):
        corpus = Corpus()
        corpus.add("d1", "context", ["alpha", "beta"])
        corpus.add("d2", "context", ["beta"])
        assert corpus.token_ids() == [[0, 1], [1]]
        corpus.validate()
        corpus.documents[0].tokens.append("ghost")
        with pytest.raises(ValidationError):
            corpus.validate()


class TestTfidf:
    def make_corpus(self):
        corpus = Corpus()
        corpus.add("d0", "context", ["apple", "apple", "banana"])
        corpus.add("d1", "context", ["banana", "cherry"])
        corpus.add("d2", "context", ["banana", "date"])
        return corpus

    def test_matches_hand_computation(self):
        matrix, flagged = vectorize_tfidf(self.make_corpus())
        assert flagged == []
        # ids: apple=0 banana=1 cherry=2 date=3; df: 1, 3, 1, 1; D=3
        idf_rare = math.log2(3 / 1)
        raw_d0 = np.array([2 * idf_rare, 0.0, 0.0, 0.0])  # banana df=D -> 0
        np.testing.assert_allclose(matrix[0], raw_d0 / np.linalg.norm(raw_d0),
                                   atol=1e-12)
        raw_d1 = np.array([0.0, 0.0, idf_rare, 0.0])
        np.testing.assert_allclose(matrix[1], raw_d1 / np.linalg.norm(raw_d1),
                                   atol=1e-12)

    def test_ubiquitous_only_document_flagged(self):
        corpus = Corpus()
        corpus.add("d0", "context", ["banana"])
        corpus.add("d1", "context", ["banana", "cherry"])
        matrix, flagged = vectorize_tfidf(corpus)
        assert flagged == [0]
        np.testing.assert_array_equal(matrix[0], 0.0)

    def test_rows_unit_norm(self):
        matrix, flagged = vectorize_tfidf(self.make_corpus())
        norms = np.linalg.norm(matrix, axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValidationError):
            vectorize_tfidf(Corpus())


def random_vectors(rng, docs=20, vocab=12):
    return rng.random((docs, vocab)) * (rng.random((docs, vocab)) > 0.3)


class TestLda:
    def test_distributions_valid(self):
        rng = np.random.default_rng(1)
        model = train_lda(random_vectors(rng), K=3, iterations=30, seed=5)
        np.testing.assert_allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(model.phi >= 0) and np.all(model.theta >= 0)

    def test_seed_determinism(self):
        rng = np.random.default_rng(2)
        vectors = random_vectors(rng)
        a = train_lda(vectors, K=3, iterations=20, seed=9)
        b = train_lda(vectors, K=3, iterations=20, seed=9)
        np.testing.assert_array_equal(a.phi, b.phi)
        np.testing.assert_array_equal(a.theta, b.theta)
        c = train_lda(vectors, K=3, iterations=20, seed=10)
        assert not np.array_equal(a.phi, c.phi)

    def test_default_hyperparameters(self):
        rng = np.random.default_rng(3)
        model = train_lda(random_vectors(rng), K=4, iterations=5)
        assert model.alpha == pytest.approx(0.25)
        assert model.eta == pytest.approx(0.25)

    def test_k_one_supported(self):
        rng = np.random.default_rng(4)
        model = train_lda(random_vectors(rng), K=1, iterations=5)
        assert model.theta.shape[1] == 1
        np.testing.assert_allclose(model.theta[:, 0], 1.0, atol=1e-9)

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            train_lda(np.zeros((0, 4)), K=2)
        with pytest.raises(ValidationError):
            train_lda(np.ones((3, 4)), K=0)

    def test_top_terms_tie_break_by_id(self):
        phi = np.array([[0.25, 0.25, 0.3, 0.2]])
        theta = np.ones((2, 1))
        model = LdaModel(K=1, phi=phi, theta=theta, alpha=1.0, eta=1.0,
                         seed=0, iterations=0)
        assert top_terms(model, 0, 4) == [2, 0, 1, 3]

    def test_save_load_roundtrip(self, tmp_path):
        rng = np.random.default_rng(6)
        model = train_lda(random_vectors(rng), K=2, iterations=10, seed=3)
        model.save(tmp_path / "model")
        loaded = LdaModel.load(tmp_path / "model")
        np.testing.assert_allclose(loaded.phi, model.phi, atol=1e-12)
        np.testing.assert_allclose(loaded.theta, model.theta, atol=1e-12)
        assert loaded.seed == 3

    def test_doc_topic_table(self):
        rng = np.random.default_rng(7)
        model = train_lda(random_vectors(rng, docs=4), K=2, iterations=5)
        table = doc_topic_table(model, ["a", "b", "c", "d"])
        assert [row[0] for row in table] == ["a", "b", "c", "d"]
        with pytest.raises(ValidationError):
            doc_topic_table(model, ["too", "few"])


def words_corpus(docs: list[list[str]]) -> Corpus:
    corpus = Corpus()
    for i, tokens in enumerate(docs):
        corpus.add(f"d{i}", "context", tokens)
    return corpus


class TestCoherence:
    def test_cooccurrence_counts(self):
        corpus = words_corpus([["a", "b"], ["a", "b", "c"], ["c"]])
        single, pair = cooccurrence_counts(corpus)
        assert single == {0: 2, 1: 2, 2: 2}
        assert pair == {(0, 1): 2, (0, 2): 1, (1, 2): 1}

    def test_matches_manual_value(self):
        corpus = words_corpus([["a", "b"], ["a", "b"], ["a"], ["b", "c"]])
        # force the topic's top words to be b(id 1), a(id 0), c(id 2)
        phi = np.array([[0.3, 0.5, 0.2]])
        model = LdaModel(K=1, phi=phi, theta=np.ones((4, 1)), alpha=1.0,
                         eta=1.0, seed=0, iterations=0)
        scores, mean = topic_coherence(model, corpus, top_n=3)
        # pairs (a|b), (c|b), (c|a) with D(b)=3, D(a)=3, D(ab)=2, D(bc)=1,
        # D(ac)=0
        expected = (math.log(3 / 3) + math.log(2 / 3) + math.log(1 / 3))
        assert scores[0] == pytest.approx(expected, abs=1e-12)
        assert mean == pytest.approx(expected, abs=1e-12)

    def test_top_n_larger_than_vocab_rejected(self):
        corpus = words_corpus([["a", "b"]])
        model = LdaModel(K=1, phi=np.array([[0.5, 0.5]]), theta=np.ones((1, 1)),
                         alpha=1.0, eta=1.0, seed=0, iterations=0)
        with pytest.raises(ValidationError):
            topic_coherence(model, corpus, top_n=5)


class TestPlateauSelection:
    def curve(self, values, start_k=1):
        return CoherenceCurve([(start_k + i, v) for i, v in enumerate(values)])

    def test_flat_from_five_selects_five(self):
        values = [0.1, 0.2, 0.3, 0.4, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]
        assert select_plateau(self.curve(values)) == 5

    def test_strictly_increasing_errors(self):
        values = [0.02 * i for i in range(12)]
        with pytest.raises(SelectionError):
            select_plateau(self.curve(values))

    def test_too_short_curve_errors(self):
        with pytest.raises(SelectionError):
            select_plateau(self.curve([0.1, 0.2, 0.3]))

    def test_non_increasing_ks_rejected(self):
        with pytest.raises(ValidationError):
            CoherenceCurve([(2, 0.1), (2, 0.2)])

    def test_sweep_with_override_skips_selection(self):
        corpus = words_corpus([["alpha", "beta"], ["beta", "gamma"],
                               ["gamma", "delta"], ["delta", "alpha"]])
        curve, selected = sweep_select_k(corpus, range(1, 4), runs_per_k=1,
                                         iterations=5, k_override=13)
        assert selected == 13
        assert [k for k, _ in curve.points] == [1, 2, 3]

    def test_sweep_returns_none_without_plateau(self):
        corpus = words_corpus([["alpha", "beta"], ["beta", "gamma"],
                               ["gamma", "delta"]])
        curve, selected = sweep_select_k(corpus, range(1, 4), runs_per_k=1,
                                         iterations=5)
        # a 3-point curve is too short for the plateau rule
        assert selected is None
