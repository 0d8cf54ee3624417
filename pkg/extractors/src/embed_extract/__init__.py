"""Batch extraction of translation and embedding feature files."""

from .corpus_io import read_articles, write_articles
from .encoders import GROUPS, GroupSpec, HashingEncoder, TransformersEncoder, resolve_encoder
from .errors import (
    CorpusFormatError,
    EncoderUnavailable,
    ExtractError,
    MissingTranslation,
    TranslationServiceError,
)
from .jobs import ExtractionJob, run_extraction
from .nela import nela_features, nela_part
from .translate import HttpTranslator, MarkerTranslator, make_backend, translate_corpus
from .writer import write_vector_file

__version__ = "0.1.0"
