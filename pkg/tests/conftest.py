import pytest

from textmark.config import WatermarkConfig
from textmark.providers import LexiconProvider
from textmark.synthetic import content_words, load_wordlist, make_lexicon
from textmark.textmodel import bundled_exclusions


@pytest.fixture(scope="session")
def excl():
    return bundled_exclusions("en")


@pytest.fixture(scope="session")
def wordlist():
    return load_wordlist()


@pytest.fixture(scope="session")
def content(wordlist, excl):
    return content_words(wordlist, excl)


@pytest.fixture(scope="session")
def full_lexicon(content):
    """Every content word covered with three same-vector synonyms."""
    return make_lexicon(content, synonyms_per_word=3, coverage=1.0)


@pytest.fixture(scope="session")
def partial_lexicon(content):
    """Roughly 60% of content words covered."""
    return make_lexicon(content, synonyms_per_word=3, coverage=0.6, seed=11)


def make_cfg(lexicon=None, provider=None, **kwargs):
    if provider is None and lexicon is not None:
        provider = LexiconProvider(lexicon)
    return WatermarkConfig(provider=provider, **kwargs)


@pytest.fixture
def full_cfg(full_lexicon):
    return make_cfg(full_lexicon)


@pytest.fixture
def partial_cfg(partial_lexicon):
    return make_cfg(partial_lexicon)
