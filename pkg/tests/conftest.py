import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import PAPER_DISTRIBUTION, separable_corpus, write_corpus  # noqa: E402

from newstox.corpus import load_dataset  # noqa: E402


@pytest.fixture(scope="session")
def paper_corpus(tmp_path_factory):
    """317 articles with the released corpus's label distribution."""
    tmp = tmp_path_factory.mktemp("paper_corpus")
    articles_path, media_path = write_corpus(tmp, PAPER_DISTRIBUTION)
    return load_dataset(articles_path, media_path)


@pytest.fixture(scope="session")
def separable_bundle(tmp_path_factory):
    """(articles_path, media_path, manifests) for the 450-article separable corpus."""
    tmp = tmp_path_factory.mktemp("separable")
    return separable_corpus(tmp)


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("tiny")
    counts = {"non_toxic": 2, "fake_news": 2, "hate_speech": 1}
    articles_path, media_path = write_corpus(tmp, counts, n_media=3)
    return load_dataset(articles_path, media_path)
