import numpy as np

from embed_extract.nela import nela_features, nela_part


def test_part_dimension_and_determinism():
    text = "The quick brown fox jumps! Is it really that quick?"
    a = nela_part(text)
    b = nela_part(text)
    assert a.shape == (129,)
    assert np.array_equal(a, b)
    assert np.all(np.isfinite(a))


def test_full_vector_is_258():
    vec = nela_features("A short title", "A body. With two sentences!")
    assert vec.shape == (258,)
    assert np.all(np.isfinite(vec))


def test_empty_text_well_defined():
    vec = nela_part("")
    assert vec.shape == (129,)
    assert np.all(np.isfinite(vec))
    assert vec[0] == 0.0  # word count


def test_counts_respond_to_text():
    short = nela_part("one two")
    long = nela_part("one two three four five six seven")
    assert long[0] > short[0]  # word count grows
    bangs = nela_part("wow! wow! wow!")
    assert bangs[8] == 3.0  # exclamation count slot
