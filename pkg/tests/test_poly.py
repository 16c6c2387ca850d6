import numpy as np

from symspread.field_tower import create_tower
from symspread.poly import Poly


def test_arithmetic_and_eval():
    F = create_tower(2, [2])[0]
    x, y = Poly.var(F, 2, 0), Poly.var(F, 2, 1)
    p = (x + y) ** 2
    assert p == x * x + y * y
    assert (x + y).square_linear() == p
    pts = np.array([[a, b] for a in range(4) for b in range(4)])
    assert list(p.evaluate_many(pts)) == [p.evaluate(r) for r in pts.tolist()]
    assert p.is_homogeneous(2) and p.degree() == 2


def test_json_round_trip_and_subs():
    F = create_tower(3, [1])[0]
    x, y = Poly.var(F, 2, 0), Poly.var(F, 2, 1)
    p = x * x * 2 + x * y + Poly.const(F, 2, 1)
    assert Poly.from_json(F, 2, p.to_json()) == p
    assert p.subs([y, x]) == y * y * 2 + x * y + Poly.const(F, 2, 1)
    assert (p - p).is_zero()
