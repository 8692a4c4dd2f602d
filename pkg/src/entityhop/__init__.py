"""Entity-centric multi-hop passage retrieval.

A first-pass retriever (BM25 or Dirichlet-smoothed query likelihood) pulls
an initial passage set; entity mentions in those passages are linked to
entity-describing passages through an alias table; length-2 chains
(including self-links) are scored by a trainable feed-forward re-ranker
over query-aware representations. Classical PRF baselines (Rocchio, RM3),
a pointwise re-ranker, strict multi-evidence metrics, and a synthetic
bridge-entity benchmark generator round out the comparison harness.
"""

__version__ = "0.1.0"

from .chains import Chain, ChainCaps, ChainSet, enumerate_chains, gold_label
from .corpus import (
    Corpus,
    MentionSpan,
    Passage,
    Question,
    TokenizerConfig,
    corpus_from_passages,
    heuristic_tag_mentions,
    ingest_corpus,
    load_questions,
    tokenize,
    write_corpus,
)
from .encoder import EncoderConfig, LexicalEncoder, QueryAwareRepr, RemoteEncoder, make_encoder
from .errors import DataError, DegenerateTrainingSetError, RemoteEncoderError
from .evaluation import (
    EvalResult,
    accuracy_at_k,
    average_precision,
    classify_hop,
    evaluate,
)
from .index import (
    Bm25Params,
    DirichletParams,
    InvertedIndex,
    RankedList,
    bm25_score,
    build_index,
    load_index,
    ql_dirichlet_score,
    retrieve,
    save_index,
    tfidf_vector,
)
from .linker import (
    AliasTable,
    LinkAnnotation,
    build_alias_table,
    build_exclusion_set,
    first_mention_descriptions,
    link,
    load_links,
    string_match_link,
)
from .prf import Rm3Params, RocchioParams, retrieve_weighted, rm3_expand, rocchio_expand
from .reranker import (
    ChainScore,
    FfnParams,
    TrainConfig,
    gradient_check,
    load_model,
    rank_passages,
    save_model,
    score_chain,
    score_entity_only,
    score_pointwise,
    train,
)
from .synth import SynthBundle, SynthConfig, generate, write_bundle
