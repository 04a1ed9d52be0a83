import json
import math

import pytest

import subpois


def test_special_functions():
    assert subpois.airy_ai(0.0) == pytest.approx(0.355028053887817239, rel=1e-14)
    assert subpois.bessel_j(0.5, 2.0) == pytest.approx(math.sqrt(1 / math.pi) * math.sin(2.0), rel=1e-12)
    nodes, weights = subpois.gauss_legendre(3)
    assert sum(weights) == pytest.approx(2.0)
    assert nodes[0] == pytest.approx(-math.sqrt(0.6))


def test_kernel_and_spectrum():
    assert subpois.kernel("sine", 0.0, 0.5) == pytest.approx(2 / math.pi)
    lam = subpois.spectrum("sine", (0.0, 1.0), 100)
    assert lam[0] == pytest.approx(0.783368789209999, abs=1e-12)
    assert sum(lam) == pytest.approx(1.0, abs=1e-12)
    pmf = subpois.count_pmf([0.5, 0.5])
    assert pmf[:3] == pytest.approx([0.25, 0.5, 0.25])


def test_moments_and_bounds():
    value = subpois.exp_moment_sq("sine", (0.0, 1.0), 0.5)
    report = subpois.bound_report("sine", (0.0, 1.0))
    assert report["sigma"] == 1.0
    assert math.log(value) <= report["c"] * math.expm1(4 * 0.5)
    assert subpois.tail_log_bound("sine", (0.0, 1.0), 1) == pytest.approx(1.0)


def test_pfaffian_and_sampling():
    assert subpois.pfaffian([[0.0, 2.0], [-2.0, 0.0]]) == pytest.approx(2.0)
    a = subpois.sample("sine", (0.0, 2.0), 64, 20, 5)
    b = subpois.sample("sine", (0.0, 2.0), 64, 20, 5)
    assert a == b
    assert subpois.additive_functional([0.1, 0.2, 0.3], lambda x, y: 1.0) == 6.0


def test_errors():
    with pytest.raises(subpois.ConfigError):
        subpois.kernel("cosine", 0.0, 0.0)
    with pytest.raises(subpois.DomainError):
        subpois.kernel("bessel:s=0", -1.0, 1.0)
    assert issubclass(subpois.DomainError, subpois.Error)


def test_cli(tmp_path):
    assert subpois.run_cli(["bound", "--kernel", "airy", "--window=-1,0", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "bound_report.json").read_text())["sigma"] == 1.5
    assert subpois.run_cli(["bound", "--kernel", "bessel:s=-0.5", "--out", str(tmp_path)]) == 2
