"""Automorphism layer: diagram/standard automorphisms, fixed subalgebras,
weight restriction and branching, twisted level alphabets."""

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import IllegalPair, NonDominant, NotInAlphabet, UnsupportedCombination
from .liecore import RootDatum, build_root_datum
from .util import rational_inverse, smith_normal_form, solve_rational


@dataclass(frozen=True)
class TwistKind:
    tag: str    # identity | diagram2 | diagram3 | standard4
    order: int  # 1, 2, 3 or 4


IDENTITY = TwistKind("identity", 1)
DIAGRAM2 = TwistKind("diagram2", 2)
DIAGRAM3 = TwistKind("diagram3", 3)
STANDARD4 = TwistKind("standard4", 4)

_KINDS = {k.tag: k for k in (IDENTITY, DIAGRAM2, DIAGRAM3, STANDARD4)}


def twist_kind(tag):
    try:
        return _KINDS[tag]
    except KeyError:
        raise IllegalPair(f"unknown twist kind {tag!r}") from None


def _fold_spec(ambient, tag):
    """Node orbits of the diagram part and the fixed-algebra label.

    Returns (fixed_type, fixed_rank, orbits, coroot_scales, standard).
    ``coroot_scales[i]`` multiplies the orbit-sum of simple coroots; it is
    2 only on the last node of the (A_{2n}, diagram2) row.
    """
    t, r = ambient.lie_type, ambient.rank
    if tag == "diagram2":
        if t == "A" and r >= 3 and r % 2 == 1:          # A_{2n-1} -> C_n
            n = (r + 1) // 2
            orbits = [(i, r - 1 - i) for i in range(n - 1)] + [(n - 1,)]
            return ("C", n, orbits, [1] * n, True)
        if t == "A" and r >= 2 and r % 2 == 0:          # A_{2n} -> B_n (special, not standard)
            n = r // 2
            orbits = [(i, r - 1 - i) for i in range(n)]
            return ("B", n, orbits, [1] * (n - 1) + [2], False)
        if t == "D" and r >= 4:                          # D_{n+1} -> B_n
            n = r - 1
            orbits = [(i,) for i in range(n - 1)] + [(n - 1, n)]
            return ("B", n, orbits, [1] * n, True)
        if t == "E" and r == 6:                          # E6 -> F4
            return ("F", 4, [(1,), (3,), (2, 4), (0, 5)], [1] * 4, True)
    elif tag == "diagram3":
        if t == "D" and r == 4:                          # D4 -> G2 (triality)
            return ("G", 2, [(1,), (0, 2, 3)], [1] * 2, True)
    elif tag == "standard4":
        if t == "A" and r >= 2 and r % 2 == 0:           # A_{2n} -> C_n, order 4
            n = r // 2
            orbits = [(i, r - 1 - i) for i in range(n)]
            return ("C", n, orbits, [1] * n, True)
    raise IllegalPair(f"no {tag} automorphism row for {t}{r}")


def _fixed_datum(fixed_type, fixed_rank):
    if fixed_rank == 1:   # B1 and C1 mean A1
        return build_root_datum("A", 1)
    return build_root_datum(fixed_type, fixed_rank)


def _row_lattice_basis(rows):
    """Integer basis (as columns) of the lattice spanned by the given rows."""
    divisors, _, v = smith_normal_form([list(map(int, r)) for r in rows])
    n = len(rows[0])
    vinv = rational_inverse(v)
    cols = []
    for i in range(n):
        col = [divisors[i] * vinv[i][j] for j in range(n)]
        assert all(x.denominator == 1 for x in col)
        cols.append(tuple(int(x) for x in col))
    # transpose: each basis vector is a row of D V^{-1}; return as columns
    return [tuple(cols[i][j] for i in range(n)) for j in range(n)]


@dataclass
class TwistData:
    """All fixed-subalgebra data attached to a standard (or special) twist."""
    ambient: RootDatum
    kind: TwistKind
    fixed: RootDatum
    restriction_matrix: np.ndarray        # fixed-weight coords of a restricted ambient weight
    lattice_M: tuple                      # basis of the translation lattice M, columns
    theta_sigma: tuple                    # weight of the fixed algebra
    theta_check_sigma: tuple              # coweight coords of theta^vee_sigma
    level_marks: tuple                    # (lambda, theta^vee_sigma) = level_marks . lambda
    a0: int
    is_standard: bool
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _branch_cache: dict = field(default_factory=dict, repr=False)

    @property
    def order(self):
        return self.kind.order

    @property
    def dual_coxeter(self):
        """Dual Coxeter number of the twisted affine algebra = that of g."""
        return self.ambient.dual_coxeter

    def shifted_level(self, c):
        return c + self.dual_coxeter

    def weight_level(self, lam):
        return sum(int(m) * int(x) for m, x in zip(self.level_marks, lam))

    def restrict_weight(self, weight):
        v = self.restriction_matrix @ np.array(weight, dtype=np.int64)
        return tuple(int(x) for x in v)

    def fixed_exponents(self, xi):
        """Exponent vector y on the fixed algebra for a fixed-Cartan point."""
        return self.fixed.exponent_vector(xi)

    def ambient_exponents(self, xi):
        """Exponent vector of the same point for ambient weights.

        omega_i^g(xi) = (R omega_i^g)(xi), so y_g = R^T y_fixed.
        """
        yf = self.fixed.exponent_vector(xi)
        n = self.ambient.rank
        r = self.restriction_matrix
        return tuple(sum(int(r[k][i]) * yf[k] for k in range(self.fixed.rank))
                     for i in range(n))

    def _require_standard(self, what):
        if not self.is_standard:
            raise UnsupportedCombination(
                f"{what} is defined for standard automorphisms only; "
                f"({self.ambient.lie_type}{self.ambient.rank}, diagram2) is excluded")


def _coroot_coords_of_dual(rd, root):
    """Simple-coroot coordinates of root^vee for a root of rd."""
    nrm = rd.form_value(root, root)
    # coweight coordinates of root^vee: alpha_i(root^vee) = 2<alpha_i, root>/<root, root>
    mvec = []
    for i in range(rd.rank):
        alpha_i = tuple(int(x) for x in rd.cartan[:, i])
        mvec.append(2 * rd.form_value(alpha_i, root) / nrm)
    coords = solve_rational([list(r) for r in rd.cartan.T], mvec)
    assert all(x.denominator == 1 for x in coords)
    return tuple(int(x) for x in coords)


_twist_cache = {}
_twist_lock = threading.Lock()


def build_twist(ambient, kind):
    """Assemble TwistData for a legal (ambient, kind) pair.

    Instances are cached per (ambient, kind) so downstream caches (branching,
    character values at torus points) are shared.  The fixed Cartan matrix is
    recomputed from the node orbits and checked against the table row, so a
    labeling mistake cannot pass silently.
    """
    if isinstance(kind, str):
        kind = twist_kind(kind)
    key = (ambient.lie_type, ambient.rank, kind.tag)
    with _twist_lock:
        hit = _twist_cache.get(key)
    if hit is not None:
        return hit
    data = _build_twist_uncached(ambient, kind)
    with _twist_lock:
        return _twist_cache.setdefault(key, data)


def _build_twist_uncached(ambient, kind):
    if kind.tag == "identity":
        return _identity_twist(ambient)

    ftype, frank, orbits, cscale, standard = _fold_spec(ambient, kind.tag)
    fixed = _fixed_datum(ftype, frank)

    # scales of the restricted simple roots: 2 alpha_n| on the standard4 row
    rscale = [1] * frank
    if kind.tag == "standard4":
        rscale[frank - 1] = 2

    amb_a = ambient.cartan
    afix = np.zeros((frank, frank), dtype=np.int64)
    for i in range(frank):
        for j in range(frank):
            o_j = orbits[j][0]
            afix[i, j] = rscale[j] * cscale[i] * sum(int(amb_a[k][o_j]) for k in orbits[i])
    if not np.array_equal(afix, fixed.cartan):
        raise AssertionError(f"folded Cartan mismatch for ({ambient}, {kind.tag}): "
                             f"{afix.tolist()} vs {fixed.cartan.tolist()}")

    rmat = np.zeros((frank, ambient.rank), dtype=np.int64)
    for i, orb in enumerate(orbits):
        for k in orb:
            rmat[i, k] = cscale[i]

    if kind.tag == "standard4":
        theta_l = fixed.highest_root
        assert all(x % 2 == 0 for x in theta_l)
        theta_sigma = tuple(x // 2 for x in theta_l)
        marks = tuple(2 * x for x in _coroot_coords_of_dual(fixed, theta_l))
        lattice = [tuple(int(i == j) for i in range(frank)) for j in range(frank)]
        a0 = 2
    else:
        theta_sigma = fixed.highest_short_root
        marks = _coroot_coords_of_dual(fixed, theta_sigma)
        lattice = [tuple(int(x) for x in fixed.cartan[:, j]) for j in range(frank)]
        a0 = 1

    if standard:
        assert sum(marks) == ambient.dual_coxeter - 1, \
            "(rho_sigma, theta_check_sigma) must equal h-check - 1"

    theta_check = tuple(int(sum(m * int(fixed.cartan[i][j]) for i, m in enumerate(marks)))
                        for j in range(frank))
    return TwistData(ambient=ambient, kind=kind, fixed=fixed,
                     restriction_matrix=rmat, lattice_M=tuple(lattice),
                     theta_sigma=theta_sigma, theta_check_sigma=theta_check,
                     level_marks=marks, a0=a0, is_standard=standard)


def _long_root_lattice_columns(rd):
    longs = [tuple(int(x) for x in r) for r in rd.positive_roots
             if rd.form_value(r, r) == 2]
    return _row_lattice_basis(longs)


def _identity_twist(ambient):
    n = ambient.rank
    eye = np.eye(n, dtype=np.int64)
    marks = ambient.dual_marks
    theta_check = tuple(int(sum(m * int(ambient.cartan[i][j]) for i, m in enumerate(marks)))
                        for j in range(n))
    # translation lattice of the classical torus: span of the long roots
    lattice = tuple(_long_root_lattice_columns(ambient))
    assert sum(marks) == ambient.dual_coxeter - 1
    return TwistData(ambient=ambient, kind=IDENTITY, fixed=ambient,
                     restriction_matrix=eye, lattice_M=lattice,
                     theta_sigma=ambient.highest_root, theta_check_sigma=theta_check,
                     level_marks=marks, a0=1, is_standard=True)


@dataclass(frozen=True)
class WeightSet:
    """The level-c alphabet D_{c,sigma}, deterministically ordered."""
    level: int
    twist: TwistData
    members: tuple

    def __contains__(self, weight):
        return tuple(weight) in set(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _bounded_lex(marks, budget):
    """All nonnegative integer vectors v with marks . v <= budget, lex order."""
    n = len(marks)
    out = []

    def rec(prefix, left):
        i = len(prefix)
        if i == n:
            out.append(tuple(prefix))
            return
        for v in range(left // marks[i] + 1):
            rec(prefix + [v], left - v * marks[i])

    rec([], budget)
    return out


def weight_alphabet(twist, c):
    """D_{c,sigma}: dominant weights of the fixed algebra with level <= c."""
    if c < 0:
        raise ValueError("level must be >= 0")
    twist._require_standard("the level alphabet")
    members = _bounded_lex([int(m) for m in twist.level_marks], c)
    if twist.kind.tag != "identity":
        for lam in members:
            assert twist.fixed.dual_weight(lam) == lam, \
                "twisted alphabet members must be self-dual"
    return WeightSet(level=c, twist=twist, members=tuple(members))


def ambient_alphabet(twist, c):
    """D_c of the ambient algebra (the untwisted level alphabet)."""
    marks = [int(m) for m in twist.ambient.dual_marks]
    return tuple(_bounded_lex(marks, c))


def branch_to_fixed(twist, nu):
    """Restrict the ambient irreducible V(nu) to the fixed subalgebra.

    Returns {fixed highest weight: multiplicity}.  Restricted weights are
    peeled greedily in decreasing height; a negative intermediate
    multiplicity aborts, since it can only mean a corrupted character.
    """
    nu = tuple(int(x) for x in nu)
    if not twist.ambient.is_dominant(nu):
        raise NonDominant(f"{nu} is not dominant for {twist.ambient}")
    with twist._lock:
        hit = twist._branch_cache.get(nu)
    if hit is not None:
        return dict(hit)
    if twist.kind.tag == "identity":
        out = {nu: 1}
    else:
        out = _branch_uncached(twist, nu)
    with twist._lock:
        twist._branch_cache[nu] = dict(out)
    return out


def _branch_uncached(twist, nu):
    fixed = twist.fixed
    remaining = {}
    for w, m in twist.ambient.weight_system(nu).items():
        rw = twist.restrict_weight(w)
        remaining[rw] = remaining.get(rw, 0) + m
    hf = [sum(fixed.cartan_inv[i][j] for i in range(fixed.rank))
          for j in range(fixed.rank)]

    def height(w):
        return sum(h * x for h, x in zip(hf, w))

    out = {}
    while remaining:
        eta = max(remaining, key=lambda w: (height(w), w))
        b = remaining[eta]
        if b < 0 or not fixed.is_dominant(eta):
            raise AssertionError(f"branching peel failed at {eta} (mult {b})")
        for w, m in fixed.weight_system(eta).items():
            nv = remaining.get(w, 0) - b * m
            if nv:
                remaining[w] = nv
            else:
                remaining.pop(w, None)
        out[eta] = out.get(eta, 0) + b
    return out


def a2n_weight_bijection(twist, c, lam, check_alphabet=True):
    """C_n -> B_n relabeling for the order-4 row.

    sum a_i w_i^C maps to sum_{i<n} a_i w_i^B + (2 a_n + c) w_n^B.
    """
    if twist.kind.tag != "standard4":
        raise IllegalPair("weight relabeling applies to the order-4 twist only")
    lam = tuple(int(x) for x in lam)
    if len(lam) != twist.fixed.rank or not twist.fixed.is_dominant(lam):
        raise NotInAlphabet(f"{lam} is not a dominant weight of {twist.fixed}")
    if check_alphabet and twist.weight_level(lam) > c:
        raise NotInAlphabet(f"{lam} exceeds level {c}")
    n = twist.fixed.rank
    return lam[:n - 1] + (2 * lam[n - 1] + c,)
