"""Watermark detection: a one-sided Z-test on the bit-1 proportion.

Fast mode tests the bits of every filter-passing token; precise mode first
drops tokens whose filtered candidate set is empty, since those could never
have been touched by injection. A document with no testable bits raises
``UndecidableError`` rather than returning a confident verdict.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

from .config import WatermarkConfig
from .encoding import encode_stream
from .errors import UndecidableError
from .providers import candidates
from .textmodel import Document

_NORMAL = statistics.NormalDist()


@dataclass(frozen=True)
class DetectionReport:
    mode: str
    n: int
    count_one: int
    p_hat: float
    z: float
    p_value: float
    alpha: float
    watermarked: bool
    trace: tuple[tuple[int, int, bool], ...] | None = None


def normal_cdf(z: float) -> float:
    """Standard normal CDF."""
    if math.isnan(z):
        raise ValueError("z must be finite")
    return _NORMAL.cdf(z)


def upper_tail(z: float) -> float:
    """1 - cdf(z), via erfc so large z does not cancel to exactly zero."""
    if math.isnan(z):
        raise ValueError("z must be finite")
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def z_critical(alpha: float) -> float:
    """The one-sided critical value: the (1 - alpha) standard normal quantile."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return _NORMAL.inv_cdf(1.0 - alpha)


def binomial_z(n: int, count_one: int) -> float:
    """The one-sided test statistic for ``count_one`` bit-1s out of ``n``."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0 <= count_one <= n:
        raise ValueError("count_one must lie in [0, n]")
    return (count_one / n - 0.5) / math.sqrt(0.25 / n)


def _report(mode: str, bits: list[int], alpha: float,
            trace: tuple[tuple[int, int, bool], ...] | None) -> DetectionReport:
    n = len(bits)
    if n == 0:
        raise UndecidableError(f"{mode} detection found no testable encodings")
    ones = sum(bits)
    p_hat = ones / n
    z = binomial_z(n, ones)
    return DetectionReport(
        mode=mode,
        n=n,
        count_one=ones,
        p_hat=p_hat,
        z=z,
        p_value=upper_tail(z),
        alpha=alpha,
        watermarked=z > z_critical(alpha),
        trace=trace,
    )


def detect_fast(doc: Document, cfg: WatermarkConfig,
                with_trace: bool = False) -> DetectionReport:
    """Test the bits of all eligible tokens."""
    scope = [i for i, t in enumerate(doc.tokens) if t.eligible]
    encoded = encode_stream(doc, scope)
    bits = [e.bit for e in encoded]
    trace = tuple((e.token_index, e.bit, True) for e in encoded) if with_trace else None
    return _report("fast", bits, cfg.alpha, trace)


def detect_precise(doc: Document, cfg: WatermarkConfig,
                   with_trace: bool = False) -> DetectionReport:
    """Test only tokens that plausibly had substitutable synonyms.

    Uses the same provider and thresholds as injection, so the scope matches
    what injection could actually have modified.
    """
    eligible = [i for i, t in enumerate(doc.tokens) if t.eligible]
    scope = [
        i for i in eligible
        if candidates(doc, i, cfg).filtered
    ]
    in_scope = set(scope)
    encoded = encode_stream(doc, eligible)
    bits = [e.bit for e in encoded if e.token_index in in_scope]
    trace = (
        tuple((e.token_index, e.bit, e.token_index in in_scope) for e in encoded)
        if with_trace else None
    )
    return _report("precise", bits, cfg.alpha, trace)
