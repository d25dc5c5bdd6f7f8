"""Smoke test for the qwit Python extension.

Builds the extension with cargo, imports it from a temporary directory and
checks a handful of reference values.
"""

import importlib
import math
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(["cargo", "build", "--release", "-p", "qwit-py"], cwd=ROOT, check=True)
    lib = ROOT / "target" / "release" / ("libqwit.dylib" if sys.platform == "darwin" else "libqwit.so")
    dest = Path(tempfile.mkdtemp())
    shutil.copy(lib, dest / ("qwit" + sysconfig.get_config_var("EXT_SUFFIX")))
    sys.path.insert(0, str(dest))
    return importlib.import_module("qwit")


def close(x, y, tol=1e-10):
    return abs(x - y) <= tol


def main():
    qwit = build_and_import()

    a, b = qwit.optimal_pair()
    assert close(b.trace(), 2.0)
    assert a.is_psd() and a.leq(b)
    v = b.square() - a.square()
    assert close(v.min_eigenvalue(), -4 / 27)

    rep = qwit.optimal_witness()
    assert close(rep["lambda_min"], -4 / 27, 1e-11)
    assert rep["is_quantumness_witness"]

    t, u, lam = qwit.numeric_search(grid=51)
    assert close(t, 1 / 3, 1e-6) and close(u, 4 / 9, 1e-6) and close(lam, -4 / 27, 1e-9)
    assert close(qwit.lambda_minus(1 / 3, 4 / 9), -4 / 27)

    w = qwit.witness_v(a, b)
    assert w["kind"] == "V_from_ordered_pair"

    rho = qwit.Operator([[0.9, 0.0], [0.0, 0.1]])
    c = qwit.construct(rho)
    assert c["lambda_min"] < 0 and c["mean"] < 0

    try:
        qwit.witness_v(b, a)
    except ValueError:
        pass
    else:
        raise AssertionError("unordered pair accepted")

    col = qwit.collective(a, b, 3)
    for row in col["rows"]:
        assert row["lambda_min"] >= -(4 / 27) / row["N"] - 1e-9

    ch = qwit.chsh(seeds=10)
    assert ch["k_star"] == 4 and ch["lhv_bound"] == 2

    assert qwit.classical_demo(3)["q2_gap"] == -0.125
    assert qwit.classical_demo(2)["verdict"] == "unordered"

    assert qwit.k_m(1, 16)[:4] == [1.0, -1.0, -1.0, 1.0]
    lo, hi, levels = qwit.negative_window(2)
    assert levels == [2, 3] and close(lo, 1.0) and close(hi, 4.0)
    z = complex(1.2, -0.7)
    assert close(qwit.coherent_mean(3, z), (abs(z) ** 2 - 3) ** 2, 1e-9)

    x = qwit.Operator.pauli("x")
    vals, vecs = x.eigh()
    assert close(vals[0], -1.0) and close(abs(vecs[0][0]), 1 / math.sqrt(2))
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
