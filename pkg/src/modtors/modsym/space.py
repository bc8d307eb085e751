"""Built modular symbol spaces: integral coordinates, boundary, lattices.

A ModSymSpace carries the solved presentation on an integral basis (the
symbol lattice is exactly Z^dim), the boundary map to the cusp divisor
space, the cuspidal sublattice S = ker(boundary), the integral homology
(S itself, already saturated), and the star-plus sublattice.  All operator
matrices produced from it are integer matrices acting on row vectors.
"""

import json
import os
from math import gcd

from ..intlinalg import kernel_basis, transpose
from ..lattice import Lattice
from .groups import GroupData, GroupSpec, sl2_lift
from .presentation import Presentation

MAX_SYMBOLS = 60000  # resource guard: refuse absurdly large presentations


class ModSymSpace:
    """Weight-2 modular symbols for a congruence subgroup, on a Z-basis."""

    def __init__(self, spec, max_symbols=MAX_SYMBOLS):
        if isinstance(spec, str):
            raise TypeError("pass a GroupSpec")
        from .groups import num_unit_pairs

        est = num_unit_pairs(spec.level) // max(1, len(spec.hplus()) // 1)
        if est > max_symbols:
            raise ResourceWarning(
                f"{spec.label()}: ~{est} Manin symbols exceeds bound {max_symbols}"
            )
        self.spec = spec
        self.group = GroupData(spec)
        pres = Presentation(self.group)
        self.dim = pres.dim
        self.proj = pres.proj  # symbol index -> integer coordinate vector
        self.free_symbols = pres.free
        self._pres_basis = pres.lattice_basis
        self._pres_den = pres.lattice_den

        gd = self.group
        self.ncusps = gd.ncusps
        self.cusp_classes = gd.cusp_classes

        # boundary of the working free symbols, then of the integral basis
        bnd_free = [self._symbol_boundary(i) for i in pres.free]
        den = pres.lattice_den
        basis = pres.lattice_basis
        boundary = []
        for row in basis:
            acc = [0] * gd.ncusps
            for j, x in enumerate(row):
                if x:
                    bj = bnd_free[j]
                    for k, y in enumerate(bj):
                        acc[k] += x * y
            assert all(v % den == 0 for v in acc), "non-integral boundary"
            boundary.append([v // den for v in acc])
        self.boundary = boundary  # dim x ncusps, integer

        s_rows = kernel_basis(transpose(boundary))  # {v : v @ boundary = 0}
        self.cuspidal = Lattice.from_rows(s_rows, ambient=self.dim) if s_rows else Lattice(self.dim, [])
        self.genus_from_dim = (self.dim - (gd.ncusps - 1)) // 2 if self.dim else 0
        # integral homology H1(X, Z) = cuspidal part of the symbol lattice
        self.homology = self.cuspidal

        self._star = None
        self._plus = None
        self._op_cache = {}

    # -- basic data ---------------------------------------------------------

    @property
    def level(self):
        return self.spec.level

    def genus(self):
        return self.group.genus()

    def symbol_vector(self, c, d):
        """Projection of the Manin symbol (c : d) onto the basis."""
        n = self.level
        return self.proj[self.group.pair_orbit[(c % n, d % n)]]

    def winding_element(self):
        """The class of the path {0, oo}: the Manin symbol of the identity."""
        return list(self.symbol_vector(0, 1))

    def _symbol_boundary(self, sym_idx):
        """Boundary (gamma oo) - (gamma 0) of a Manin symbol, as divisor."""
        gd = self.group
        c, d = gd.symbols[sym_idx]
        a, b, c0, d0 = sl2_lift(c, d, self.level)
        out = [0] * gd.ncusps
        out[gd.cusp_index_of_fraction(a, c0)] += 1
        out[gd.cusp_index_of_fraction(b, d0)] -= 1
        return out

    # -- paths --------------------------------------------------------------

    def path_vector(self, alpha, beta):
        """Modular symbol {alpha, beta} as a coordinate vector.

        alpha, beta are cusps given as (numerator, denominator) pairs with
        denominator 0 meaning infinity.
        """
        out = [0] * self.dim
        for x, s in ((beta, 1), (alpha, -1)):
            for v, coef in self._path_from_infinity(x):
                if s == 1:
                    for j, y in enumerate(v):
                        out[j] += coef * y
                else:
                    for j, y in enumerate(v):
                        out[j] -= coef * y
        return out

    def _path_from_infinity(self, cusp):
        """{oo, cusp} as a list of (symbol projection vector, coefficient)."""
        num, den = cusp
        if den == 0:
            return []
        if den < 0:
            num, den = -num, -den
        # continued fraction convergents of num/den
        terms = []
        a, b = num, den
        quots = []
        while b:
            q, r = divmod(a, b)
            quots.append(q)
            a, b = b, r
        p_prev, q_prev = 1, 0
        p_cur, q_cur = quots[0], 1
        n = self.level
        sgn = 1  # (-1)^(k-1) for k = 0 is -1? handled via explicit formula
        # step k = 0: {oo, a0}: matrix [[-p0, 1], [-q0, 0]] bottom row (-q0, 0)
        terms.append((self.symbol_vector(-q_cur, q_prev), 1))
        for k in range(1, len(quots)):
            p_nxt = quots[k] * p_cur + p_prev
            q_nxt = quots[k] * q_cur + q_prev
            p_prev, p_cur = p_cur, p_nxt
            q_prev, q_cur = q_cur, q_nxt
            s = -1 if (k % 2 == 0) else 1
            terms.append((self.symbol_vector(s * q_cur, q_prev), 1))
        return terms

    # -- lattices -----------------------------------------------------------

    def star_matrix(self):
        if self._star is None:
            from .operators import star_matrix

            self._star = star_matrix(self)
        return self._star

    def plus_cuspidal(self):
        """Saturated lattice S+ = cuspidal vectors fixed by the star map."""
        if self._plus is None:
            star = self.star_matrix()
            stacked = [
                row_b + [x - (1 if i == j else 0) for j, x in enumerate(row_s)]
                for i, (row_b, row_s) in enumerate(zip(self.boundary, star))
            ]
            rows = kernel_basis(transpose(stacked))
            self._plus = Lattice.from_rows(rows, ambient=self.dim) if rows else Lattice(self.dim, [])
        return self._plus

    def __repr__(self):
        return f"ModSymSpace({self.spec.label()}, dim {self.dim})"


_SPACE_CACHE = {}

CACHE_FORMAT = 1


def build_space(spec, cache=True, max_symbols=MAX_SYMBOLS, cache_dir=None):
    """Build the space for spec, going through the in-process cache and the
    optional on-disk cache (keyed by kind, level and H generators)."""
    key = (spec.kind, spec.level, spec.h_gens)
    if cache and key in _SPACE_CACHE:
        return _SPACE_CACHE[key]
    space = None
    path = _cache_path(cache_dir, spec) if cache_dir else None
    if path and os.path.exists(path):
        space = _load_space(path, spec, max_symbols)
    if space is None:
        space = ModSymSpace(spec, max_symbols=max_symbols)
        # dimension identity: dim = 2 g + #cusps - 1
        g = space.genus()
        assert space.dim == 2 * g + space.ncusps - 1, (
            spec.label(),
            space.dim,
            g,
            space.ncusps,
        )
        assert space.cuspidal.rank == 2 * g
        if path:
            save_space(space, cache_dir)
    if cache:
        _SPACE_CACHE[key] = space
    return space


def _cache_path(cache_dir, spec):
    tag = f"space-{spec.kind}-{spec.level}"
    if spec.h_gens:
        tag += "-h" + "_".join(map(str, spec.h_gens))
    return os.path.join(cache_dir, tag + ".json")


def save_space(space, cache_dir):
    """Serialize the built space (and computed operators) to cache_dir."""
    os.makedirs(cache_dir, exist_ok=True)
    ops = {
        op.label: op.matrix for op in space._op_cache.values()
    }
    data = {
        "format": CACHE_FORMAT,
        "kind": space.spec.kind,
        "level": space.spec.level,
        "h_gens": list(space.spec.h_gens),
        "dim": space.dim,
        "proj": space.proj,
        "free_symbols": space.free_symbols,
        "pres_basis": space._pres_basis,
        "pres_den": space._pres_den,
        "boundary": space.boundary,
        "operators": ops,
    }
    with open(_cache_path(cache_dir, space.spec), "w") as fh:
        json.dump(data, fh)


def _load_space(path, spec, max_symbols):
    with open(path) as fh:
        data = json.load(fh)
    if data.get("format") != CACHE_FORMAT:
        return None
    if (data["kind"], data["level"], data["h_gens"]) != (
        spec.kind,
        spec.level,
        list(spec.h_gens),
    ):
        return None
    space = ModSymSpace.__new__(ModSymSpace)
    space.spec = spec
    space.group = GroupData(spec)
    space.dim = data["dim"]
    space.proj = data["proj"]
    space.free_symbols = data["free_symbols"]
    space._pres_basis = data["pres_basis"]
    space._pres_den = data["pres_den"]
    gd = space.group
    space.ncusps = gd.ncusps
    space.cusp_classes = gd.cusp_classes
    space.boundary = data["boundary"]
    s_rows = kernel_basis(transpose(space.boundary))
    space.cuspidal = (
        Lattice.from_rows(s_rows, ambient=space.dim)
        if s_rows
        else Lattice(space.dim, [])
    )
    space.genus_from_dim = (
        (space.dim - (gd.ncusps - 1)) // 2 if space.dim else 0
    )
    space.homology = space.cuspidal
    space._star = None
    space._plus = None
    space._op_cache = {}
    from .operators import OperatorMatrix

    for label, mat in data.get("operators", {}).items():
        if label.startswith("T_"):
            key = ("T", int(label[2:]))
        elif label.startswith("<"):
            key = ("D", int(label[1:-1]))
        elif label.startswith("W_"):
            key = ("W", int(label[2:]))
        elif label == "star":
            space._star = mat
            continue
        else:
            continue
        space._op_cache[key] = OperatorMatrix(space, label, mat)
    return space


def clear_space_cache():
    _SPACE_CACHE.clear()
