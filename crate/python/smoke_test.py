"""Smoke test for the pymahler extension.

Build and install first, e.g. `maturin build -m crates/py/Cargo.toml` and
`pip install` the wheel, then run `python python/smoke_test.py`.
"""

import json
import math
from fractions import Fraction

import pymahler as pm


def main():
    assert pm.enumerate(3) == [[2, 3, 6], [2, 4, 4], [3, 3, 3]]
    simple, weighted = pm.counts(3)
    assert simple == 3 and weighted == Fraction(5, 3)

    pair = pm.Model([2, 2])
    assert [int(c) for c in pair.series("Q", 4).coeffs()] == [0, 1, 2, 5, 14]
    assert pair.series("q", 8) == pair.series("Q", 8)

    s = pm.PowerSeries([0, 1, Fraction(1, 2), 3, -2])
    assert s.compose(s.revert()) == pm.PowerSeries([0, 1, 0, 0, 0])
    root = pm.PowerSeries([1, -4, 0, 0, 0]).pow(Fraction(-1, 2))
    assert root.coeffs() == [1, 2, 6, 20, 70]

    sextic = pm.Model.from_weights(6, [3, 2, 1])
    op = pm.pf_operator(sextic)
    assert op["C"] == 432 and op["a"] == [Fraction(1, 6), Fraction(5, 6)]

    report = json.loads(pm.integrality_report(pm.Model([3, 3, 3]), 10))
    assert [r["b"] for r in report["rows"]] == ["9", "-9", "0", "9", "-9", "0", "9", "-9", "0", "9"]
    assert report["rows"][1]["bhat"] == "-9/2"
    assert report["checks"]["product_plain"] and report["checks"]["product_alt"]

    mm = pm.mahler_measure(pair, 2.0)
    assert abs(mm["m"] - math.log((2 + math.sqrt(3)) / 2)) < 1e-12
    try:
        pm.mahler_measure(pm.Model([3, 3, 3]), 0.1)
    except ArithmeticError:
        pass
    else:
        raise AssertionError("expected the convergence guard to trip")

    print("pymahler smoke test passed")


if __name__ == "__main__":
    main()
