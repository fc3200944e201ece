import os
import subprocess
import sys

import numpy as np
import pytest
from triangles import corpus

from dechyp import _kernels_py, kernels
from dechyp.dectri import gram_matrix
from dechyp.errors import InvalidTriangle


@pytest.fixture(scope="module")
def triangles():
    return corpus(n_per_triple=5, seed=99)


def test_unit_gram_matches_weighted(triangles):
    for tri in triangles:
        G0 = np.array(kernels.gram_unit(tri.types, tri.lengths)).reshape(3, 3)
        D = np.diag(1 / np.array(tri.weights))
        assert np.allclose(D @ G0 @ D, gram_matrix(tri))


def test_tilts_linear(triangles):
    for tri in triangles:
        M = np.array(kernels.tilt_matrix(tri.types, tri.lengths)).reshape(3, 3)
        assert np.allclose(M @ np.array(tri.weights), kernels.tilts(tri.types, tri.weights, tri.lengths))


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
def test_backends_agree(triangles):
    from dechyp import _kernels

    for tri in triangles:
        args = (tri.types, tri.lengths)
        assert np.allclose(_kernels.gram_unit(*args), _kernels_py.gram_unit(*args), rtol=1e-14)
        assert np.allclose(_kernels.gram_inverse(*args), _kernels_py.gram_inverse(*args), rtol=1e-12)
        assert np.allclose(_kernels.tilt_matrix(*args), _kernels_py.tilt_matrix(*args), rtol=1e-12)
        assert np.allclose(
            _kernels.tilts(tri.types, tri.weights, tri.lengths),
            _kernels_py.tilts(tri.types, tri.weights, tri.lengths),
            rtol=1e-12,
        )


@pytest.mark.parametrize("module", ["_kernels_py", "_kernels"])
def test_invalid_triangle_raises(module):
    mod = pytest.importorskip(f"dechyp.{module}")
    with pytest.raises(InvalidTriangle):
        mod.tilt_matrix((-1, -1, -1), (0.1, 0.1, 3.0))


def test_pure_python_switch():
    env = dict(os.environ, DECHYP_PURE_PYTHON="1")
    proc = subprocess.run(
        [sys.executable, "-c", "from dechyp import kernels; print(kernels.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert proc.stdout.strip() == "python"
