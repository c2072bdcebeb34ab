import json
import os
import subprocess
import sys

import numpy as np
import pytest

from specsparse import binary_psd, eigensolve, kernels, matview, psd_test, reference

SNIPPET = """
import json
import numpy as np
from specsparse import binary_psd, eigensolve, kernels, matview, psd_test, reference
A = matview.gen_random_symmetric_bounded(96, 1)
sig, V, rep = eigensolve.approx_all_singvals(A, 0.25, 1)
v = psd_test.psd_test(matview.gen_planted_negative(96, 0.2, 1), 0.2, 1)
rec = binary_psd.binary_psd_approx(matview.gen_random_signed_blocks(128, 1), 0.1, 1)
jac = reference.sym_eigen(A.peek_dense(), "jacobi")
print(json.dumps({"backend": kernels.BACKEND, "sig": sig.tolist(), "queries": rep["queries"],
                  "verdict": v.verdict, "sB": v.sigma1_B, "rec": rec.Atilde.to_dense().tolist(),
                  "jac": jac.values.tolist()}))
"""


def test_pure_fallback_matches_default_backend():
    env = dict(os.environ, SPECSPARSE_PURE="1")
    out = subprocess.run([sys.executable, "-c", SNIPPET], capture_output=True, text=True, env=env, check=True)
    pure = json.loads(out.stdout)
    assert pure["backend"] == "python"
    A = matview.gen_random_symmetric_bounded(96, 1)
    sig, V, rep = eigensolve.approx_all_singvals(A, 0.25, 1)
    np.testing.assert_allclose(pure["sig"], sig, rtol=1e-10, atol=1e-10)
    assert pure["queries"] == rep["queries"]
    v = psd_test.psd_test(matview.gen_planted_negative(96, 0.2, 1), 0.2, 1)
    assert pure["verdict"] == v.verdict
    assert pure["sB"] == pytest.approx(v.sigma1_B, rel=1e-10)
    rec = binary_psd.binary_psd_approx(matview.gen_random_signed_blocks(128, 1), 0.1, 1)
    assert np.array_equal(np.array(pure["rec"]), rec.Atilde.to_dense())
    np.testing.assert_allclose(pure["jac"], reference.sym_eigen(A.peek_dense(), "jacobi").values, atol=1e-12)


def test_matmul_blocks_independent_of_threads():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((200, 200))
    B = rng.standard_normal((200, 330))
    outs = []
    for t in (1, 2, 5):
        kernels.set_threads(t)
        outs.append(kernels.matmul(A, B))
    kernels.set_threads(1)
    assert outs[0].tobytes() == outs[1].tobytes() == outs[2].tobytes()
    np.testing.assert_allclose(outs[0], A @ B, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(kernels.matmul(A, B[:, 0]), A @ B[:, 0], rtol=1e-12)
