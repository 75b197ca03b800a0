"""Watermarking configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .textmodel import ExclusionList, bundled_exclusions


@dataclass
class WatermarkConfig:
    """All tunables for injection and detection.

    ``lam`` is the blend weight between contextual and global word similarity;
    ``k`` the candidate budget per word; ``tau_sent``/``tau_word`` the
    similarity floors a substitute must clear; ``alpha`` the significance
    level of the detection test.
    """

    lam: float = 0.83
    k: int = 32
    tau_sent: float = 0.8
    tau_word: float = 0.8
    alpha: float = 0.05
    exclusion: ExclusionList = field(default_factory=bundled_exclusions)
    provider: Any = None
    language: str = "en"

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lam must lie in [0, 1]")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
