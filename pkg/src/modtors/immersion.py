"""Formal-immersion rank tests at cuspidal divisors of X0(N).

The pipeline behind the positive-rank levels: decompose the cuspidal plus
part of a Gamma0(N) space into Hecke-isotypic components, flag the ones the
winding element sees (these assemble the analytic-rank-zero quotient),
build an integral basis of coefficient rows for the corresponding forms,
transport expansions to other cusps through Atkin-Lehner involutions, and
test the rank of the resulting matrices at degree-3 cuspidal divisors.
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import gcd

import numpy as np
from sympy import Poly, Symbol, factor_list, isprime

from .cusps import cusp_orbits_mod_p, x0_width
from .ecff import exists_point_of_order, hasse_excludes
from .intlinalg import (
    MODP,
    charpoly,
    kernel_basis,
    mat_mul,
    poly_eval_matrix,
    rank_mod_p,
    rank_rational,
    transpose,
    vec_mat,
)
from .jacobian import _exact_vector, _hecke_image_counts, sturm_bound
from .lattice import Lattice
from .modsym import (
    GroupSpec,
    atkin_lehner,
    atkin_lehner_cusp_action,
    build_space,
    hecke_operator,
    restrict_to_lattice,
)

DEFAULT_SPLIT_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


@dataclass
class IsotypicComponent:
    basis: list  # rows over the plus-part lattice coordinates
    charpoly_label: str
    rank_zero: bool

    @property
    def dim(self):
        return len(self.basis)


@dataclass
class RankZeroQuotient:
    spec: object
    components: list
    winding_dim: int

    @property
    def rank_zero_dim(self):
        return sum(c.dim for c in self.components if c.rank_zero)

    def rank_zero_basis(self):
        rows = []
        for c in self.components:
            if c.rank_zero:
                rows.extend(c.basis)
        return rows

    def to_json(self):
        return {
            "group": self.spec.label(),
            "components": [
                {"dim": c.dim, "rank_zero": c.rank_zero, "charpoly": c.charpoly_label}
                for c in self.components
            ],
            "rank_zero_dim": self.rank_zero_dim,
        }


def _winding_span_vectors(space):
    """Exact integer vectors spanning (Hecke span of {0,oo}) cap cuspidal."""
    bound = sturm_bound(space.spec)
    g = space.genus()
    p = MODP
    from .intlinalg import ModPEchelon

    proj_np = np.array(space.proj, dtype=np.int64) % p
    bnd_np = np.array(space.boundary, dtype=np.int64) % p
    full_ech = ModPEchelon(space.dim, p)
    bnd_ech = ModPEchelon(space.ncusps, p)
    kept = []
    for n in range(1, bound + 1):
        items = _hecke_image_counts(space, n)
        if not items:
            continue
        idx = np.fromiter((i for i, _ in items), dtype=np.int64, count=len(items))
        cnt = np.fromiter((c for _, c in items), dtype=np.int64, count=len(items))
        v = (proj_np[idx] * cnt[:, None]).sum(axis=0) % p
        if full_ech.add(v):
            kept.append(_exact_vector(space, items))
            bnd_ech.add(v @ bnd_np % p)
            if full_ech.rank - bnd_ech.rank >= g:
                break
    dv = [vec_mat(v, space.boundary) for v in kept]
    ker = kernel_basis(transpose(dv)) if kept else []
    return [vec_mat(x, kept) for x in ker]


def rank_zero_quotient(spec, split_primes=DEFAULT_SPLIT_PRIMES):
    """Hecke-isotypic decomposition of the cuspidal plus part with winding
    flags; the flagged components assemble the analytic-rank-zero quotient.
    """
    space = build_space(spec) if isinstance(spec, GroupSpec) else spec
    if space.spec.kind != "gamma0":
        raise ValueError("quotient decompositions are built on Gamma0 spaces")
    plus = space.plus_cuspidal()
    g = plus.rank
    if g == 0:
        return RankZeroQuotient(space.spec, [], 0)
    n = space.level

    comps = [[[1 if j == i else 0 for j in range(g)] for i in range(g)]]
    labels = [""]
    x = Symbol("x")
    for q in split_primes:
        if n % q == 0:
            continue
        tq = restrict_to_lattice(hecke_operator(space, q).matrix, plus)
        new_comps = []
        new_labels = []
        for basis, label in zip(comps, labels):
            sub = Lattice.from_rows(basis, ambient=g)
            tq_sub = restrict_to_lattice(tq, sub)
            cp = charpoly(tq_sub)
            poly = Poly(list(reversed(cp)), x)
            factors = factor_list(poly)[1]
            if len(factors) == 1:
                new_comps.append(basis)
                new_labels.append(label or _fmt_factor(q, factors[0]))
                continue
            for fac, mult in factors:
                coeffs = [int(c) for c in reversed(fac.all_coeffs())]
                mat = poly_eval_matrix(_poly_power(coeffs, mult), tq_sub)
                ker = kernel_basis(transpose(mat))  # left kernel rows
                piece = [vec_mat(k, basis) for k in ker]
                new_comps.append(piece)
                new_labels.append(_fmt_factor(q, (fac, mult)))
        comps, labels = new_comps, new_labels
    if sum(len(c) for c in comps) != g:
        raise ArithmeticError("decomposition incomplete")
    # each surviving block must be isotypic for every operator used
    for basis in comps:
        sub = Lattice.from_rows(basis, ambient=g)
        for q in split_primes:
            if n % q == 0:
                continue
            tq = restrict_to_lattice(hecke_operator(space, q).matrix, plus)
            cp = charpoly(restrict_to_lattice(tq, sub))
            poly = Poly(list(reversed(cp)), x)
            if len(factor_list(poly)[1]) > 1:
                raise ArithmeticError("decomposition incomplete")

    winding = _winding_span_vectors(space)
    wcoords = [plus.solve(w, 1) for w in winding]
    assert all(c is not None for c in wcoords)
    components = []
    for basis, label in zip(comps, labels):
        stacked = wcoords + basis
        meets = rank_rational(stacked) < len(wcoords) + len(basis)
        components.append(
            IsotypicComponent(basis=basis, charpoly_label=label, rank_zero=meets)
        )
    return RankZeroQuotient(space.spec, components, len(wcoords))


def _poly_power(coeffs, m):
    out = [1]
    for _ in range(m):
        new = [0] * (len(out) + len(coeffs) - 1)
        for i, a in enumerate(out):
            if a:
                for j, b in enumerate(coeffs):
                    new[i + j] += a * b
        out = new
    return out


def _fmt_factor(q, fac_mult):
    fac, mult = fac_mult
    s = f"T{q}:{fac.as_expr()}"
    return s + (f"^{mult}" if mult > 1 else "")


def _coprime_range(n_level, count):
    """1..count truncated before the first index sharing a factor with N.

    Only T_n with n coprime to the level commute with the Atkin-Lehner
    involutions, which is what keeps expansion rows at different cusps
    attached to the same form.
    """
    out = []
    for n in range(1, count + 1):
        if gcd(n, n_level) != 1:
            break
        out.append(n)
    return out


def joint_expansion_rows(space, sublattice, cusp_classes, count):
    """Consistent coefficient rows of an integral basis of the dual forms,
    at several cusps at once.

    Returns (ns, blocks) where ns lists the coefficient indices used and
    blocks maps each requested cusp class to an e x len(ns) integer matrix;
    row i of every block describes the SAME form omega_i.  Functionals are
    the matrix entries of T_n (restricted to the sublattice), transported
    to other cusps by composing with the Atkin-Lehner matrix that carries
    infinity there; the combined rows are saturated jointly, so unimodular
    changes of basis act on all cusps together and ranks are well defined.
    """
    plus = space.plus_cuspidal()
    if isinstance(sublattice, list):
        sublattice = Lattice.from_rows(sublattice, ambient=plus.rank)
    d = sublattice.rank
    ns = _coprime_range(space.level, count)
    inf_class = space.group.cusp_index_of_fraction(1, 0)
    tn_mats = {
        n: restrict_to_lattice(hecke_operator(space, n).matrix, plus) for n in ns
    }
    per_cusp_mats = {}
    for cusp in cusp_classes:
        if cusp == inf_class:
            per_cusp_mats[cusp] = [
                restrict_to_lattice(tn_mats[n], sublattice) for n in ns
            ]
            continue
        found = None
        for q in exact_divisors(space.level):
            if q == 1:
                continue
            perm = atkin_lehner_cusp_action(space, q)
            if perm[inf_class] == cusp:
                found = q
                break
        if found is None:
            raise ValueError(
                f"cusp class {cusp} is not in the Atkin-Lehner orbit of oo"
            )
        w = restrict_to_lattice(atkin_lehner(space, found).matrix, plus)
        per_cusp_mats[cusp] = [
            restrict_to_lattice(mat_mul(w, tn_mats[n]), sublattice) for n in ns
        ]
    order = list(per_cusp_mats)
    func_rows = []
    for i in range(d):
        for j in range(d):
            row = []
            for cusp in order:
                row.extend(m[i][j] for m in per_cusp_mats[cusp])
            func_rows.append(row)
    lat = Lattice.from_rows(func_rows, ambient=len(ns) * len(order))
    sat = lat.saturation().basis
    if not sat:
        raise ValueError("non-integral system: empty coefficient space")
    blocks = {}
    for k, cusp in enumerate(order):
        blocks[cusp] = [row[k * len(ns):(k + 1) * len(ns)] for row in sat]
    return ns, blocks


def coefficient_rows(space, sublattice, count):
    """Integral basis of first-coefficient rows (a_1 ... a_B) of the cusp
    forms dual to a Hecke-stable sublattice of the plus part."""
    plus = space.plus_cuspidal()
    if isinstance(sublattice, list):
        sublattice = Lattice.from_rows(sublattice, ambient=plus.rank)
    d = sublattice.rank
    mats = []
    for n in range(1, count + 1):
        tn = restrict_to_lattice(hecke_operator(space, n).matrix, plus)
        mats.append(restrict_to_lattice(tn, sublattice))
    func_rows = []
    for i in range(d):
        for j in range(d):
            func_rows.append([mats[n][i][j] for n in range(count)])
    lat = Lattice.from_rows(func_rows, ambient=count)
    sat = lat.saturation()
    if not lat.basis:
        raise ValueError("non-integral system: empty coefficient space")
    return sat.basis


def expansions_at_cusp(space, sublattice, cusp_class, count, p):
    """Coefficient rows (mod p) of the quotient's forms at a rational cusp.

    The cusp must be reachable from infinity by an Atkin-Lehner involution;
    rows are reduced mod p, with unit scaling immaterial for rank tests.
    """
    if not isprime(p) or (2 * space.level) % p == 0:
        raise ValueError(f"bad reduction prime {p}")
    inf_class = space.group.cusp_index_of_fraction(1, 0)
    _, blocks = joint_expansion_rows(space, sublattice, [inf_class, cusp_class], count)
    return [[x % p for x in row] for row in blocks[cusp_class]]


def exact_divisors(n):
    return [q for q in range(1, n + 1) if n % q == 0 and gcd(q, n // q) == 1]


@dataclass
class ImmersionInstance:
    level: int
    prime: int
    quotient: RankZeroQuotient
    divisor: list  # list of (cusp_class_index, multiplicity)
    rows_at_cusp: dict  # cusp_class_index -> rows mod p
    count: int

    @property
    def degree(self):
        return sum(m for _, m in self.divisor)


def immersion_matrix(instance):
    """The block matrix of leading expansion coefficients at the divisor."""
    blocks = []
    for cusp, mult in instance.divisor:
        rows = instance.rows_at_cusp[cusp]
        blocks.append([row[:mult] for row in rows])
    e = len(blocks[0])
    out = []
    for i in range(e):
        row = []
        for blk in blocks:
            row.extend(blk[i])
        out.append(row)
    return out


def is_formal_immersion(instance):
    mat = immersion_matrix(instance)
    return rank_mod_p(mat, instance.prime) == instance.degree


def _x0_rational_cusp_classes(space, p):
    """Group-side cusp classes of the degree-1 places of X0(N) mod p.

    Rational places are the fixed points of the Frobenius sigma_p acting on
    cusp classes; the count is cross-checked against the scheme-side
    bookkeeping, and widths must match per class (ambiguity is flagged
    rather than guessed away).
    """
    from .jacobian import galois_cusp_permutation

    perm = galois_cusp_permutation(space, p % space.level)
    fixed = [i for i, j in enumerate(perm) if i == j]
    scheme = [o for o in cusp_orbits_mod_p(space.level, "X0", p) if o.degree == 1]
    expected = sum(o.count for o in scheme)
    if len(fixed) != expected:
        raise ArithmeticError(
            f"cusp matching mismatch mod {p}: {len(fixed)} fixed classes vs "
            f"{expected} rational scheme places"
        )
    widths_group = sorted(space.group.cusp_width(i) for i in fixed)
    widths_scheme = sorted(
        w for o in scheme for w in [o.width] * o.count
    )
    if widths_group != widths_scheme:
        raise ArithmeticError("cusp matching mismatch: widths disagree")
    return fixed


def reduction_targets(N, p, q_bound=3**6, refine="auto"):
    """Degree-3 cuspidal divisors on X0(N) mod p that a cubic point of
    X1(N) can reduce to.

    First certifies that no elliptic curve over F_{p^i} (i <= 3) carries a
    point of order N (Hasse bound where it applies, Tate scans otherwise);
    raises if the scan finds one.  With refine="auto", the finer X1-side
    bookkeeping restricts the targets to the divisors 3[c] over rational
    cusps whenever every admissible degree-3 cuspidal pattern on X1 has
    single-cusp support; refine=False keeps every degree-3 divisor
    supported on the low-degree cusps (the coarse X0-side set).
    """
    space = build_space(GroupSpec.gamma0(N))
    hasse_all = all(hasse_excludes(p**i, N) for i in (1, 2, 3))
    if not hasse_all:
        for i in (1, 2, 3):
            if exists_point_of_order(p**i, N, q_bound=q_bound):
                raise ArithmeticError(
                    f"reduction not forced to cusps: curve over F_{p**i} "
                    f"with {N}-torsion exists"
                )
    rational = _x0_rational_cusp_classes(space, p)
    if refine == "auto" and hasse_all and _x1_patterns_single_support(N, p):
        return [[(c, 3)] for c in rational]
    # coarse mode: all degree-3 divisors supported on cusps of degree <= 3
    low = list(rational)  # degrees 2,3 would enter here; see below
    extra = [
        o
        for o in cusp_orbits_mod_p(N, "X0", p)
        if o.degree in (2, 3)
    ]
    if extra:
        raise ArithmeticError(
            "degree-2/3 cusp places on X0 lack a class matching; "
            "only rational-support divisors are implemented"
        )
    targets = []
    for combo in combinations_with_replacement(low, 3):
        div = {}
        for c in combo:
            div[c] = div.get(c, 0) + 1
        targets.append(sorted(div.items()))
    return targets


def _degeneracy_scale(N):
    """Pullback scale of the second degeneracy 1-form: M for level M^2.

    The form f(Mz) d z on X0(M^2) is (1/M) of the pullback of f(z) dz, so
    the integral combination pairs the visible row with M times the shadow.
    """
    from math import isqrt

    m = isqrt(N)
    if m * m != N:
        raise ValueError("degeneracy rows implemented for square levels only")
    return m


def _x1_patterns_single_support(N, p):
    """Lemma-7.1-style hypothesis: every admissible degree-3 cuspidal
    pattern on X1(N) mod p is supported over a single X0 cusp."""
    orbits = cusp_orbits_mod_p(N, "X1", p)
    rational_components = {o.component for o in orbits if o.degree == 1}
    has_degree2 = any(o.degree == 2 for o in orbits)
    return len(rational_components) == 1 and not has_degree2


def immersion_certificate(N, p, count=5, q_bound=3**6, refine="auto",
                          rows_mode="full"):
    """Full certificate: reduction targets plus rank tests at each target.

    rows_mode "full" uses an integral basis of all forms on the rank-zero
    quotient (old directions carry their expansions at every cusp);
    "newform" keeps only rows visible in the expansion at infinity, which
    reproduces computations built from newform q-expansions alone.
    """
    space = build_space(GroupSpec.gamma0(N))
    quotient = rank_zero_quotient(space)
    targets = reduction_targets(N, p, q_bound=q_bound, refine=refine)
    cusps_needed = sorted({c for div in targets for c, _ in div})
    inf_class = space.group.cusp_index_of_fraction(1, 0)
    all_cusps = sorted(set(cusps_needed) | {inf_class})
    if rows_mode in ("full", "newform"):
        _, blocks = joint_expansion_rows(
            space, quotient.rank_zero_basis(), all_cusps, count
        )
        keep = list(range(len(blocks[inf_class])))
        if rows_mode == "newform":
            keep = [i for i in keep if any(blocks[inf_class][i])]
        rows = {
            c: [[x % p for x in blocks[c][i]] for i in keep] for c in cusps_needed
        }
    elif rows_mode == "degeneracy":
        rows = {c: [] for c in cusps_needed}
        for comp in quotient.components:
            if not comp.rank_zero:
                continue
            _, blocks = joint_expansion_rows(space, comp.basis, all_cusps, count)
            visible = [i for i in range(len(blocks[inf_class])) if any(blocks[inf_class][i])]
            shadows = [i for i in range(len(blocks[inf_class])) if i not in visible]
            if shadows:
                # old component: one form per visible row, with the shadow
                # direction folded in through the degeneracy 1-form scaling
                scale = _degeneracy_scale(N)
                assert len(visible) == len(shadows) == 1, "unhandled old block"
                for c in cusps_needed:
                    combined = [
                        a + scale * b
                        for a, b in zip(blocks[c][visible[0]], blocks[c][shadows[0]])
                    ]
                    rows[c].append([x % p for x in combined])
            else:
                for c in cusps_needed:
                    for i in visible:
                        rows[c].append([x % p for x in blocks[c][i]])
    else:
        raise ValueError(f"unknown rows_mode {rows_mode!r}")
    per_target = []
    all_pass = True
    for div in targets:
        inst = ImmersionInstance(
            level=N,
            prime=p,
            quotient=quotient,
            divisor=div,
            rows_at_cusp=rows,
            count=count,
        )
        rank = rank_mod_p(immersion_matrix(inst), p)
        ok = rank == inst.degree
        all_pass = all_pass and ok
        per_target.append({"divisor": div, "rank": rank, "degree": inst.degree,
                           "formal_immersion": ok})
    return {
        "level": N,
        "prime": p,
        "quotient_dims": [c.dim for c in quotient.components if c.rank_zero],
        "rank_one_dims": [c.dim for c in quotient.components if not c.rank_zero],
        "targets": [[list(t) for t in div] for div in targets],
        "per_target": per_target,
        "verdict": "cubic points of X1({}) are cuspidal".format(N)
        if all_pass
        else "immersion test failed at some target",
        "all_pass": all_pass,
    }
