"""Lattices in Q^n: finitely generated subgroups of Q^n of full or partial rank.

A Lattice is stored as an integer basis matrix over a positive denominator,
normalized to row Hermite form, so equal lattices compare equal.  These are
the workhorses behind torsion quotients, Hecke-kernel bounds and cuspidal
class groups.
"""

from math import gcd

from .abgroup import FinAbGroup
from .intlinalg import (
    elementary_divisors,
    hnf,
    kernel_basis,
    transpose,
    vec_gcd,
)


class Lattice:
    """Subgroup of Q^n spanned by basis rows / den, in Hermite normal form."""

    __slots__ = ("ambient", "basis", "den")

    def __init__(self, ambient, rows, den=1, normalize=True):
        if den <= 0:
            raise ValueError("denominator must be positive")
        self.ambient = ambient
        if normalize:
            rows = [r for r in rows if any(r)]
            h = hnf(rows) if rows else []
            g = den
            for r in h:
                g = gcd(g, vec_gcd(r))
            if g > 1:
                h = [[x // g for x in r] for r in h]
                den //= g
        else:
            h = rows
        self.basis = h
        self.den = den

    @classmethod
    def standard(cls, n):
        from .intlinalg import identity

        return cls(n, identity(n), 1, normalize=False)

    @classmethod
    def from_rows(cls, rows, ambient=None, den=1):
        if ambient is None:
            ambient = len(rows[0]) if rows else 0
        return cls(ambient, [list(r) for r in rows], den)

    @property
    def rank(self):
        return len(self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.ambient == other.ambient
            and self.den == other.den
            and self.basis == other.basis
        )

    def __repr__(self):
        return f"Lattice(rank {self.rank} in Q^{self.ambient}, den {self.den})"

    def scaled_rows(self):
        """Basis rows as exact rational data: (integer rows, denominator)."""
        return self.basis, self.den

    def contains(self, vec, den=1):
        """Membership of the rational vector vec/den."""
        # vec/den in L  <=>  vec * (self.den/den) in span_Z(basis)
        t = self.den
        target = [x * t for x in vec]
        if any(x % den for x in target):
            return False
        target = [x // den for x in target]
        for row in self.basis:
            j = next((k for k, x in enumerate(row) if x), None)
            if j is None:
                continue
            if target[j] % row[j] == 0:
                q = target[j] // row[j]
                if q:
                    target = [x - q * y for x, y in zip(target, row)]
        return not any(target)

    def contains_lattice(self, other):
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return all(other_contains_row(self, r, other.den) for r in other.basis)

    def sum(self, other):
        """Lattice sum self + other."""
        d = lcm(self.den, other.den)
        rows = [[x * (d // self.den) for x in r] for r in self.basis]
        rows += [[x * (d // other.den) for x in r] for r in other.basis]
        return Lattice(self.ambient, rows, d)

    def intersect(self, other):
        """Lattice intersection."""
        d = lcm(self.den, other.den)
        a = [[x * (d // self.den) for x in r] for r in self.basis]
        b = [[x * (d // other.den) for x in r] for r in other.basis]
        if not a or not b:
            return Lattice(self.ambient, [], 1)
        # x a = y b ; kernel of [a; -b] stacked gives coefficient pairs
        stacked = a + [[-x for x in r] for r in b]
        ker = kernel_basis(transpose(stacked))
        rows = []
        for k in ker:
            coeff = k[: len(a)]
            rows.append(vec_mat_int(coeff, a))
        return Lattice(self.ambient, rows, d)

    def scale(self, num, den=1):
        """The lattice (num/den) * L."""
        rows = [[x * num for x in r] for r in self.basis]
        return Lattice(self.ambient, rows, self.den * den)

    def preimage(self, op, target):
        """{v in self : v @ op in target} for an integer matrix op (row action).

        op maps Q^ambient -> Q^m by v |-> v @ op; target is a Lattice in Q^m.
        Returns the sublattice of self mapping into target.
        """
        if not self.basis:
            return self
        imgs = [mat_vec_row(r, op) for r in self.basis]  # each length m
        tb, td = target.basis, target.den
        # condition: sum x_i imgs_i / self.den  in  span(tb)/td
        # i.e. td * sum x_i imgs_i = self.den * (y @ tb): integer solve
        if not tb:
            # target trivial: need image zero
            stacked = transpose(imgs)
            ker = kernel_basis(stacked)
            rows = [vec_mat_int(k, self.basis) for k in ker]
            return Lattice(self.ambient, rows, self.den)
        stacked = [[x * td for x in img] for img in imgs]
        stacked += [[-x * self.den for x in r] for r in tb]
        ker = kernel_basis(transpose(stacked))
        rows = [vec_mat_int(k[: len(imgs)], self.basis) for k in ker]
        return Lattice(self.ambient, rows, self.den)

    def solve(self, vec, den=1):
        """Integer coordinates x with x @ basis = vec * self.den/den, or None.

        Uses the stored Hermite form directly (pivots ascending), so each
        call is a single back-substitution pass.
        """
        t = [x * self.den for x in vec]
        if any(x % den for x in t):
            return None
        t = [x // den for x in t]
        x = [0] * len(self.basis)
        for i, row in enumerate(self.basis):
            j = next((k for k, v in enumerate(row) if v), None)
            if j is None:
                continue
            q, r = divmod(t[j], row[j])
            if r:
                return None
            if q:
                x[i] = q
                t = [a - q * b for a, b in zip(t, row)]
        if any(t):
            return None
        return x

    def saturation(self):
        """Smallest saturated lattice containing self (same Q-span)."""
        if not self.basis:
            return self
        ker = kernel_basis(self.basis)  # {x : basis @ x = 0}
        if not ker:
            from .intlinalg import identity

            return Lattice(self.ambient, identity(self.ambient), 1)
        sat = kernel_basis(ker)  # {v : ker @ v = 0}, saturated by construction
        return Lattice(self.ambient, sat, 1)

    def index_in(self, other):
        """Index [other : self] when finite (same rank, self <= other)."""
        q = self.torsion_quotient_in(other)
        return q.order()

    def torsion_quotient_in(self, other):
        """Invariant factors of other/self as FinAbGroup.

        Requires span(self) = span(other) over Q (else the quotient is
        infinite and a ValueError is raised).
        """
        if self.rank != other.rank:
            raise ValueError("not commensurable: ranks differ")
        coords = []
        for r in self.basis:
            x = other.solve(r, self.den)
            if x is None:
                raise ValueError("not commensurable: sublattice not contained")
            coords.append(x)
        if not coords:
            return FinAbGroup([])
        return FinAbGroup(elementary_divisors(coords))


def lcm(a, b):
    return a * b // gcd(a, b)


def mat_vec_row(v, op):
    """v @ op for a row vector v and matrix op (list of rows)."""
    m = len(op[0]) if op else 0
    out = [0] * m
    for x, row in zip(v, op):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return out


def vec_mat_int(coeff, rows):
    n = len(rows[0]) if rows else 0
    out = [0] * n
    for c, r in zip(coeff, rows):
        if c:
            for j, x in enumerate(r):
                if x:
                    out[j] += c * x
    return out


def other_contains_row(lat, row, den):
    return lat.contains(row, den)


def lattice_torsion_quotient(sub, over):
    """Invariant factors of over/sub for commensurable lattices."""
    return sub.torsion_quotient_in(over)
