import pytest

from demi.corpus import load_corpus
from demi.numerics import PrecisionContext

_REFERENCE = {r.name: r.digits for r in load_corpus()}


def ref(name: str) -> str:
    """Published digits for a named constant, as shipped in the corpus."""
    return _REFERENCE[name]


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext(30)


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext(40)
