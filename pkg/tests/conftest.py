import numpy as np
import pytest

from largespin import _kernels_py, linalg_core

try:
    from largespin import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

BACKENDS = {"python": _kernels_py}
if _kernels_c is not None:
    BACKENDS["cython"] = _kernels_c


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available eigen-kernel backend."""
    monkeypatch.setattr(linalg_core, "_kernels", BACKENDS[request.param])
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
