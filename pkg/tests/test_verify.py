import numpy as np
import pytest

from qbcoorbit import norms, verify
from qbcoorbit.norms import QuasiNormSpec, y_norm

import oracles


def test_fault_injection_is_scoped_and_detected():
    w = np.array([1.0, 10.0])
    spec = QuasiNormSpec.lp(1, w)
    with verify.inject_fault("dropped-weight"):
        assert y_norm([1, 1], spec) == 2
        assert not verify.check_weighted_lp_oracle(0).passed
    assert y_norm([1, 1], spec) == 11
    assert norms._weighted_magnitude is not None
    with pytest.raises(ValueError):
        with verify.inject_fault("bit-flip"):
            pass


def test_run_suite_reports_and_unknown_suite():
    res = verify.run_suite("nterm", seed=3)
    assert list(res) == ["nterm"] and all(c.passed for c in res["nterm"])
    d = res["nterm"][0].to_dict()
    assert d["margin"] == d["worst"] - d["bound"]
    with pytest.raises(ValueError):
        verify.run_suite("everything")


def test_suite_oracles_agree_with_test_oracles():
    rng = np.random.default_rng(0)
    lam = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    assert verify.brute_maximal(lam, 2, np.inf, 1) == pytest.approx(oracles.maximal_lorentz(list(lam), 2, np.inf, 1))
    f, g = rng.standard_normal(12) + 0j, rng.standard_normal(12) + 0j
    assert np.allclose(verify.direct_dgt(f, g, 3, 4), oracles.dgt(list(f), list(g), 3, 4), atol=1e-12)


@pytest.mark.parametrize("seed", [1, 2])
def test_suites_pass_for_other_seeds(seed):
    for suite, checks in verify.run_suite("all", seed).items():
        for c in checks:
            assert c.passed, (suite, c.line())
