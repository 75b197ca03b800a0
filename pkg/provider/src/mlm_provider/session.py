"""Model loading and session configuration for the synonym provider."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from transformers import AutoModel, AutoModelForMaskedLM, AutoTokenizer


@dataclass
class ProviderSession:
    """Which models to serve with and how to mask the target word.

    ``dropout_rate`` is the fraction of the target word's embedding zeroed
    before prediction; ``layers`` is how many of the final hidden layers
    enter the contextual similarity average.
    """

    mlm_model: str
    sentence_model: str | None = None
    vectors_path: str | None = None
    dropout_rate: float = 0.3
    layers: int = 8
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.layers < 1:
            raise ValueError("layers must be at least 1")
        if not 0.0 < self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie strictly between 0 and 1")

    def load(self) -> "LoadedSession":
        return LoadedSession(self)


def load_vectors(path) -> dict[str, np.ndarray]:
    """Plain-text word-vector table: a word then its components per line."""
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) < 2:
                continue
            vectors[parts[0].casefold()] = np.array(parts[1:], dtype=np.float64)
    return vectors


class LoadedSession:
    """Session with models resident; everything runs on CPU in eval mode."""

    def __init__(self, session: ProviderSession):
        self.config = session
        self.tokenizer = AutoTokenizer.from_pretrained(session.mlm_model)
        self.mlm = AutoModelForMaskedLM.from_pretrained(session.mlm_model)
        self.mlm.eval()
        sent_path = session.sentence_model or session.mlm_model
        self.sent_tokenizer = AutoTokenizer.from_pretrained(sent_path)
        self.sent_encoder = AutoModel.from_pretrained(sent_path)
        self.sent_encoder.eval()
        self.vectors = (
            load_vectors(session.vectors_path) if session.vectors_path else {}
        )

    def dropout_mask(self, size: int, seed: int | None) -> torch.Tensor:
        """Inverted-dropout mask for partially hiding the target embedding."""
        rate = self.config.dropout_rate
        if seed is not None:
            generator = torch.Generator()
            generator.manual_seed(seed & ((1 << 63) - 1))
            draws = torch.rand(size, generator=generator)
        else:
            draws = torch.rand(size)
        return (draws >= rate).to(torch.float32) / (1.0 - rate)
