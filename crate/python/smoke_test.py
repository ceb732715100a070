"""Smoke test for the sqstates_py extension.

Build it first:

    cargo build --release -p sqstates-py --features extension-module

then run `python3 python/smoke_test.py [path/to/libsqstates_py.so]`.
"""

import cmath
import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(path):
    loader = importlib.machinery.ExtensionFileLoader("sqstates_py", str(path))
    spec = importlib.util.spec_from_file_location("sqstates_py", path, loader=loader)
    mod = importlib.util.module_from_spec(spec)
    loader.exec_module(mod)
    return mod


def main():
    path = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "target/release/libsqstates_py.so"
    sq = load(path)

    # Barut-Girardello state: C_m ~ 1/sqrt(m!(m+1)!) for z = 1, k = 1
    s = sq.construct(1, 1, 0, 0, 1.0)
    a = s.amplitudes
    assert abs(a[2] / a[0] - 1 / math.sqrt(12)) < 1e-14
    assert s.eigen_residual() < 1e-12
    assert s.k == 1.0
    rep = s.k_uncertainty()
    assert rep["det_sigma"] >= rep["det_c"] - 1e-9

    # photon statistics of the even state |-0.5-5i, sqrt(1.25), -0.5; +>
    fig = sq.even_odd_state(-0.5 - 5j, math.sqrt(1.25), -0.5, 0, "even")
    st = fig.photon_statistics()
    assert abs(st["mean"] - 7.06) < 0.02, st["mean"]
    assert abs(st["mandel_q"] + 0.21) < 0.01, st["mandel_q"]

    # squeezed cat parameters
    z, u, v, w, k = sq.squeezed_cat_params(0.5, 0.31, "even")
    assert abs(u - math.cosh(0.31) ** 2) < 1e-15 and k == 0.25
    assert abs(w + math.sinh(0.62)) < 1e-15

    # vacuum as a canonical Gaussian
    b = sq.beta_from_m([[0.5]], [0])
    assert abs(complex(*b["beta1"][0][0]) - math.sqrt(0.5)) < 1e-15

    t = sq.scheme_targets(1.5, 0.3, 0)
    assert abs(t["u"] ** 2 - t["v"] ** 2 - 1) < 1e-12

    run = sq.figure("fig1b", step=0.05)
    assert run["table"]["columns"][0] == "d"
    assert run["summary"]["failed_rows"] == 0

    for bad in (lambda: sq.construct(0.3, 1, 0.3, 1.5, 0.5), lambda: sq.figure("fig9"), lambda: sq.run_suite("nope")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    fock = sq.State([1, 1j])
    assert abs(fock.amplitudes[1] - 1j / math.sqrt(2)) < 1e-15
    assert abs(fock.overlap(fock) - 1) < 1e-15
    assert cmath.isclose(sq.State([0, 1]).cat_variances()["var_q"], 1.5)
    print("sqstates_py smoke test: ok")


if __name__ == "__main__":
    main()
