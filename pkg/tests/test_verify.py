from __future__ import annotations

import pytest

from fracflow.plotting import figure_path, line_figure
from fracflow.verify import CHECKS, VerifyOptions, run_checks

FAST = ["wright-normalization", "laplace", "half-closed-forms", "surgailis-limit", "front-law",
        "classical-degeneration", "lp-exponent"]


def test_fast_checks_pass():
    results = run_checks(FAST)
    assert {r.check for r in results} == set(FAST)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_alpha_selection():
    results = run_checks(["wright-moments"], VerifyOptions(alphas=(0.7,)))
    assert len(results) == 4 and all("alpha=0.7" in r.case for r in results)


def test_negative_scale_fails_everything():
    results = run_checks(["laplace"], VerifyOptions(tolerance_scale=-1.0))
    assert results and not any(r.passed for r in results)


def test_unknown():
    with pytest.raises(KeyError):
        run_checks(["nope"])


def test_registry_names():
    assert len(CHECKS) == 12
    assert all(name == name.lower() and " " not in name for name in CHECKS)


def test_figure(tmp_path):
    p = line_figure(tmp_path / "f.png", [1, 2, 3], {"a": [1, 4, 9], "b": [1, 2, 3]}, "x", "y",
                    logy=True, markers={"b": "o"})
    first = p.read_bytes()
    line_figure(p, [1, 2, 3], {"a": [1, 4, 9], "b": [1, 2, 3]}, "x", "y", logy=True, markers={"b": "o"})
    assert p.read_bytes() == first and first[:4] == b"\x89PNG"
    assert figure_path(tmp_path / "t.csv") == tmp_path / "t.png"
