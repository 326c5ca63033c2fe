#!/usr/bin/env python3
"""Smoke test for the stochord Python extension.

Builds the cdylib with cargo, copies it to an importable name, and runs a
few end-to-end checks against known closed forms.
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def build_and_import():
    subprocess.run(
        [
            "cargo",
            "build",
            "--release",
            "-p",
            "stochord-py",
            "--features",
            "extension-module",
        ],
        cwd=ROOT,
        check=True,
    )
    so = ROOT / "target" / "release" / "libstochord.so"
    stage = Path(tempfile.mkdtemp(prefix="stochord-py-"))
    shutil.copy(so, stage / "stochord.so")
    sys.path.insert(0, str(stage))
    import stochord

    return stochord


def main():
    st = build_and_import()

    # Distribution basics against closed forms.
    d = st.Dist.weibull(0.5, 2.0)
    assert abs(d.sf(1.0) - math.exp(-2.0)) < 1e-15
    assert abs(d.hazard(4.0) - 0.5) < 1e-15
    assert abs(d.cdf(1.0) + d.sf(1.0) - 1.0) < 1e-14
    assert abs(d.inv_sf(math.exp(-2.0)) - 1.0) < 1e-13

    # The shifted families and pmf of the worked minimum example.
    base = st.Dist.weibull(0.5, 2.0)
    fam_x = st.Family.from_shifts(base, [0.1, 0.2, 0.3, 0.4, 0.5], "X")
    fam_y = st.Family.from_shifts(base, [0.05, 0.15, 0.25, 0.35, 0.45], "Y")
    pmf = st.Pmf.explicit([(3, 0.2), (4, 0.4), (5, 0.4)])
    expected = math.exp(-2.0 * (math.sqrt(0.9) + math.sqrt(0.8) + math.sqrt(0.7)))
    assert abs(fam_x.min_sf(3, 1.0) - expected) < 1e-14

    grid = st.neg_log_unit_grid(800, 0.5)
    assert grid[0] > 0.5 and grid[-1] > 6.0

    report = st.verify_theorem("3.1", fam_x, fam_y, pmf, grid)
    assert report["classification"] == "CONSISTENT", report
    assert all(h["holds"] for h in report["hypotheses"])
    assert report["conclusion"]["holds"]

    # Direct order checks through Python callables.
    mix_x = st.RandomExtreme(fam_x, pmf, "min")
    mix_y = st.RandomExtreme(fam_y, pmf, "min")
    hr = st.check_hr(mix_x.min_sf, mix_y.min_sf, grid)
    assert hr["holds"]
    st_verdict = st.check_st(mix_x.min_sf, mix_y.min_sf, grid)
    assert not st_verdict["holds"]  # the X minimum survives longer pointwise

    # Kernel checks with Python lambdas.
    unit = [i / 61 for i in range(1, 61)]
    tp2 = st.check_tp2(lambda n, x: x**n / n, list(range(1, 13)), unit)
    assert tp2["holds"]
    beyond = [1.0 + 0.4 * i for i in range(1, 61)]
    rr2 = st.check_rr2(lambda n, x: 1.0 / (n * x**n), list(range(1, 13)), beyond)
    assert rr2["holds"]

    # Series transform against its closed form.
    rows = st.vd_transform(
        lambda n, x: n * x - 5.0,
        lambda n, x: 1.0 / (n * x**n),
        [1.2, 2.0, 5.0, 20.0],
        n_max=40_000,
    )
    for x, value, _tail in rows:
        closed = x / (x - 1.0) + 5.0 * math.log(1.0 - 1.0 / x)
        assert abs(value - closed) < 1e-8

    ce = st.counterexample("I")
    assert ce["count"] >= 2 and ce["max_abs_diff"] < 1e-8

    prop = st.verify_proposition(
        "3.1",
        lambda n, x: n - 3.0 - x,
        lambda n, x: math.exp(-n * x),
        list(range(1, 31)),
        [0.2 + 7.8 * i / 499 for i in range(500)],
        n_max=2000,
    )
    assert prop["classification"] == "CONSISTENT", prop
    assert prop["sign_pattern"] == "+-"

    oracle = st.mc_oracle(mix_x, seed=42, n_samples=50_000, checkpoints=[0.5, 1.0, 2.0, 4.0])
    assert oracle["pass"], oracle

    print("stochord python smoke test: OK")


if __name__ == "__main__":
    main()
