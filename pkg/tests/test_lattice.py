import random

import pytest

from modtors.abgroup import FinAbGroup
from modtors.intlinalg import det_bareiss, identity
from modtors.lattice import Lattice, lattice_torsion_quotient


def test_torsion_quotient_trivia():
    z2 = Lattice.standard(2)
    two_z2 = Lattice.from_rows([[2, 0], [0, 2]])
    assert lattice_torsion_quotient(two_z2, z2) == FinAbGroup([2, 2])
    assert lattice_torsion_quotient(z2, z2) == FinAbGroup([])
    sub = Lattice.from_rows([[1, 1], [0, 3]])
    assert lattice_torsion_quotient(sub, z2) == FinAbGroup([3])


def test_torsion_quotient_rejects_incommensurable():
    a = Lattice.from_rows([[1, 0]], ambient=2)
    b = Lattice.standard(2)
    with pytest.raises(ValueError):
        lattice_torsion_quotient(a, b)
    c = Lattice.from_rows([[1, 0], [0, 2]])
    d = Lattice.from_rows([[3, 0], [0, 1]])
    with pytest.raises(ValueError):
        lattice_torsion_quotient(d, c)  # d not inside c


@pytest.mark.parametrize("seed", range(12))
def test_quotient_order_is_det_ratio(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    while True:
        over = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        if det_bareiss(over) != 0:
            break
    mult = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    while det_bareiss(mult) == 0:
        mult = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    sub_rows = [
        [sum(mult[i][k] * over[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]
    lover = Lattice.from_rows(over)
    lsub = Lattice.from_rows(sub_rows)
    q = lattice_torsion_quotient(lsub, lover)
    assert q.order() == abs(det_bareiss(mult))


def test_lattice_canonical_equality():
    a = Lattice.from_rows([[1, 1], [0, 3]])
    b = Lattice.from_rows([[1, 4], [2, 5]])
    assert a == b  # same row span over Z
    assert a.contains([1, 4])
    assert not a.contains([0, 1])
    assert a.contains([1, 1])


def test_sum_and_intersection():
    a = Lattice.from_rows([[2, 0], [0, 3]])
    b = Lattice.from_rows([[3, 0], [0, 2]])
    s = a.sum(b)
    i = a.intersect(b)
    assert s == Lattice.standard(2)
    assert i == Lattice.from_rows([[6, 0], [0, 6]])
    # index multiplicativity: [s : a][a : i] = [s : b][b : i]
    assert a.index_in(s) * i.index_in(a) == b.index_in(s) * i.index_in(b)


def test_rational_lattices():
    half = Lattice.from_rows([[1, 0], [0, 1]], den=2)
    z2 = Lattice.standard(2)
    assert z2.torsion_quotient_in(half) == FinAbGroup([2, 2])
    assert half.contains([1, 1], den=2)
    assert not z2.contains([1, 1], den=2)
    assert half.contains_lattice(z2)
    assert not z2.contains_lattice(half)


def test_preimage_nonsingular():
    # {v in Z^2 : v @ A in Z^2} for A = diag(2, 3) scaled into 6 Z^2
    a = [[2, 0], [0, 3]]
    target = Lattice.from_rows([[6, 0], [0, 6]])
    pre = Lattice.standard(2).preimage(a, target)
    assert pre == Lattice.from_rows([[3, 0], [0, 2]])


def test_preimage_singular_operator():
    # operator with kernel: v @ A with A = [[1, 1], [1, 1]]
    a = [[1, 1], [1, 1]]
    target = Lattice.from_rows([[2, 0], [0, 2]])
    pre = Lattice.standard(2).preimage(a, target)
    # v @ A = (v1+v2, v1+v2): condition v1+v2 even
    assert pre.contains([1, 1])
    assert pre.contains([2, 0])
    assert not pre.contains([1, 0])


def test_saturation():
    l = Lattice.from_rows([[2, 2, 0], [0, 0, 3]])
    s = l.saturation()
    assert s.contains([1, 1, 0])
    assert s.contains([0, 0, 1])
    assert not s.contains([1, 0, 0])
    assert s.rank == 2


def test_solve_coordinates():
    l = Lattice.from_rows([[2, 1], [0, 5]])
    x = l.solve([4, 12])
    assert x is not None
    rows, den = l.scaled_rows()
    got = [sum(xi * r[j] for xi, r in zip(x, rows)) for j in range(2)]
    assert got == [4, 12]
    assert l.solve([1, 0]) is None
