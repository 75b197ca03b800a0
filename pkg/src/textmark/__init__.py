"""Lexical text watermarking with hash-keyed synonym substitution.

Inject a statistical watermark into existing text by replacing words whose
context-keyed bit is 0 with synonyms whose bit is 1, then detect it with a
one-sided Z-test on the bit-1 proportion. Includes an attack harness and
evaluation metrics.
"""

from .attacks import (
    AttackSpec,
    ExternalTransformerHandle,
    TapeTransformer,
    TransformerClient,
    attack_delete,
    attack_external,
    attack_synonym,
    run_attack,
)
from .config import WatermarkConfig
from .detect import (
    DetectionReport,
    binomial_z,
    detect_fast,
    detect_precise,
    normal_cdf,
    z_critical,
)
from .encoding import (
    EncodedToken,
    WordHash,
    encode_pair,
    encode_stream,
    hash_word,
    random_binary,
)
from .errors import (
    AttackAborted,
    ConfigError,
    ProtocolError,
    ProviderError,
    TextmarkError,
    UndecidableError,
)
from .evaluation import (
    FidelityScores,
    RocPoint,
    f1_at_alpha,
    fidelity_scores,
    length_sweep,
    meteor_lite,
    roc_auc,
)
from .inject import InjectionReport, inject
from .providers import (
    Candidate,
    CandidateSet,
    Lexicon,
    LexiconProvider,
    RemoteProvider,
    candidates,
    lexicon_scores,
)
from .textmodel import (
    Casing,
    Document,
    ExclusionList,
    Pos,
    Token,
    analyze,
    apply_filter,
    bundled_exclusions,
    load_exclusions,
    pos_tag,
    recase,
    render,
    tokenize,
)

__version__ = "0.1.0"
