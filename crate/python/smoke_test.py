"""Smoke test for the qeuler_py extension module.

Build and import it with either
    maturin develop -m crates/python/Cargo.toml
or
    cargo build -p qeuler-py --features extension-module
    cp target/debug/libqeuler_py.so python/qeuler_py.so
and then run `python python/smoke_test.py`.
"""

import json
from fractions import Fraction as F

import qeuler_py as qe


def main():
    half = F(1, 2)
    assert qe.q_number(half, 2) == F(3, 2)
    assert qe.gauss_binomial(half, 4, 2) == F(35, 16)
    assert qe.q_pochhammer(half, F(1, 3), 2) == F(5, 9)
    assert qe.classical_euler_poly(1, 1, 0) == F(-1, 2)

    exact = qe.q_euler_closed(1, 1, 1, half, 1)
    assert exact == F(-2, 3)
    for route in (qe.q_euler_series, qe.q_euler_multisum, qe.fermionic_integral):
        v = route(3, 2, 2, F(1, 3), F(1, 3))
        assert v.contains(qe.q_euler_closed(3, 2, 2, F(1, 3), F(1, 3))), v
    assert qe.q_to_1_limit(1, 3, 1, 0) == F(-1, 2)

    (q, t), = qe.sample_points(0, 1)
    assert (q, t) == (F(13, 18), F(16, 45))
    lhs, rhs, ok = qe.check_thm3(3, 5, 3, 2, 2, q, t)
    assert ok and lhs == rhs
    assert qe.check_thm4(1, 3, 2, 1, 1, half, 1)[2]
    assert qe.check_q_binomial_finite(half, F(-1, 3), 5)[2]

    report = json.loads(qe.run_suite("thm3", n_max=2, r_max=1, q_samples=1))
    assert report["summary"]["fail"] == 0, report["summary"]

    try:
        qe.q_euler_closed(1, 1, 1, F(3, 2), 1)
    except ValueError:
        pass
    else:
        raise AssertionError("q outside (0, 1) must be rejected")
    print("qeuler_py smoke test: ok")


if __name__ == "__main__":
    main()
