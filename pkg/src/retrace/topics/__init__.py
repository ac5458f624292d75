from .preprocess import StopwordConfig, lemmatize, preprocess, tokenize
from .corpus import Corpus, Dictionary
from .tfidf import vectorize_tfidf
from .lda import LdaModel, train_lda
from .coherence import CoherenceCurve, topic_coherence, sweep_select_k

__all__ = [
    "StopwordConfig", "lemmatize", "preprocess", "tokenize",
    "Corpus", "Dictionary",
    "vectorize_tfidf",
    "LdaModel", "train_lda",
    "CoherenceCurve", "topic_coherence", "sweep_select_k",
]
