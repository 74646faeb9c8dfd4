"""Smoke test for the cuspgamma extension module.

Build and install first, e.g. `maturin develop --release -m crates/py/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import cmath
import math

import cuspgamma as cg


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    assert len(cg.enumerate_regular_orbits(3, 2)) == 3
    assert len(cg.enumerate_regular_orbits(5, 1)) == 4

    tower = cg.Tower(3, 2)
    assert (tower.p, tower.q, tower.degree, tower.order) == (3, 3, 2, 8)
    assert close(tower.gauss_sum(2, 0), -1.0)
    assert close(abs(tower.gauss_sum(2, 1)), 3.0)

    pi = cg.Cuspidal(3, 2, 1)
    assert pi.orbit == [1, 3]
    assert pi.dimension == 2
    assert close(pi.char_value(tower, [1, 0, 0, 1]), 2.0)

    for q, n, m, k_pi, k_tau in [(3, 2, 1, 1, 0), (2, 3, 1, 1, 0), (2, 3, 2, 1, 1), (2, 4, 3, 1, 1)]:
        values = [cg.gamma_finite(q, n, m, k_pi, k_tau, method=meth) for meth in ("bessel", "closed")]
        if m == 1:
            values.append(cg.gamma_finite(q, n, m, k_pi, k_tau, method="nien"))
        expected = q ** (m * (m + 1 - n) / 2)
        for v in values:
            assert close(v, values[0], 1e-9), (q, n, m, values)
            assert close(abs(v), expected, 1e-9)

    t_pi = cg.TamePair(2, 3, 1, scalar=cmath.exp(0.3j))
    t_tau = cg.TamePair(2, 2, 1)
    closed = cg.gamma_local(t_pi, t_tau)
    bridged = cg.gamma_local(t_pi, t_tau, method="bridge", finite_method="bessel")
    assert close(closed, bridged) and close(abs(closed), 1.0)
    chain = cg.verify_chain(t_pi, t_tau)
    assert chain["passed"], chain
    assert len(t_pi.base_change(2)) == math.gcd(3, 2)

    g = cg.gamma_unramified(3, cmath.exp(0.7j), 0.5 + 2.0j)
    assert close(abs(g), 1.0)

    for name in cg.suite_names():
        report = cg.run_suite(name, "quick")
        assert report["passed"], (name, report)
    print("smoke test passed:", ", ".join(cg.suite_names()))


if __name__ == "__main__":
    main()
