"""Root-system core: Cartan data, Weyl groups, weight arithmetic, characters.

Conventions used throughout the package
---------------------------------------
* ``cartan[i][j] = <alpha_j, alpha_i^vee>``; column ``j`` of the Cartan
  matrix is the j-th simple root written in fundamental-weight coordinates.
* Weights are tuples of ints in the fundamental-weight basis of their
  root datum; coweights are tuples in the fundamental-coweight basis.
* The invariant form is normalized so long roots have squared length 2.
* A torus point is a tuple of Fractions ``xi`` in fundamental-coweight
  coordinates and stands for ``t = exp(2*pi*i*xi)``.  All exponents
  ``lambda(xi)`` are computed exactly as rationals mod 1; only the final
  complex exponential is floating point.
"""

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import NonDominant, SingularPoint, UnsupportedType
from .util import (fraction_lcm_den, np_rows_not_in, rational_inverse,
                   solve_rational)

# (type, min rank, max rank); E7/E8 stay out of the table
_SUPPORTED = {"A": (1, 8), "B": (2, 4), "C": (2, 4), "D": (3, 6),
              "E": (6, 6), "F": (4, 4), "G": (2, 2)}

# numeric guard for character denominators, scaled by |W| (see module docs)
_SINGULAR_TOL = 1e-8

_datum_cache = {}
_datum_lock = threading.Lock()


def _cartan_matrix(lie_type, rank):
    a = 2 * np.eye(rank, dtype=np.int64)
    chain = range(rank - 1)
    if lie_type in ("A", "B", "C"):
        for i in chain:
            a[i, i + 1] = a[i + 1, i] = -1
        if lie_type == "B":      # last root short
            a[rank - 1, rank - 2] = -2
        elif lie_type == "C":    # last root long
            a[rank - 2, rank - 1] = -2
    elif lie_type == "D":
        for i in range(rank - 2):
            a[i, i + 1] = a[i + 1, i] = -1
        a[rank - 3, rank - 1] = a[rank - 1, rank - 3] = -1
    elif lie_type == "E":
        # Bourbaki: chain 1-3-4-5-6 with node 2 hanging off node 4
        for i, j in ((0, 2), (2, 3), (3, 4), (4, 5), (1, 3)):
            a[i, j] = a[j, i] = -1
    elif lie_type == "F":
        # nodes 1,2 long; 3,4 short
        for i in chain:
            a[i, i + 1] = a[i + 1, i] = -1
        a[2, 1] = -2
    elif lie_type == "G":
        # node 1 long, node 2 short
        a[0, 1] = -1
        a[1, 0] = -3
    return a


class WeylElement(NamedTuple):
    matrix: np.ndarray   # integer matrix on weight coordinates
    sign: int            # determinant = (-1)^length


@dataclass
class CharacterValue:
    """Numeric carrier for a character value chi_lambda(t).

    ``phase_exact`` optionally records the exact (exponent mod 1,
    multiplicity) pairs when the value came from a small weight sum.
    """
    value: complex
    phase_exact: Optional[tuple] = None


class RootDatum:
    """Immutable simple root system with cached multiplicity data.

    All mutating state is confined to internal caches guarded by a lock,
    so instances are safe to share between worker threads.
    """

    def __init__(self, lie_type, rank):
        if lie_type not in _SUPPORTED:
            raise UnsupportedType(f"unknown Lie type {lie_type!r}")
        lo, hi = _SUPPORTED[lie_type]
        if not lo <= rank <= hi:
            raise UnsupportedType(f"{lie_type}{rank} outside supported table "
                                  f"{lie_type}({lo}..{hi})")
        self.lie_type = lie_type
        self.rank = rank
        self.cartan = _cartan_matrix(lie_type, rank)
        self.cartan_inv = rational_inverse(self.cartan.tolist())
        self.rho = tuple([1] * rank)
        self.rho_check = tuple([1] * rank)

        self._sym = self._symmetrizer()
        # form on weight coordinates: F[i][j] = d_i * (A^{-1})[i][j]
        self._form = [[self._sym[i] * self.cartan_inv[i][j] for j in range(rank)]
                      for i in range(rank)]
        den = fraction_lcm_den(x for row in self._form for x in row)
        self._form_num = np.array(
            [[int(x * den) for x in row] for row in self._form], dtype=np.int64)
        self._form_den = den

        self._build_roots()
        self._build_theta_data()

        self._lock = threading.Lock()
        self._orbit_cache = {}
        self._weights_cache = {}
        self._weyl_group = None
        self._weyl_order = None

    # -- static data -------------------------------------------------

    def _symmetrizer(self):
        """d_i with d_i a_ij = d_j a_ji, normalized so max(d) = 1."""
        n = self.rank
        a = self.cartan
        d = [None] * n
        d[0] = Fraction(1)
        todo = [0]
        while todo:
            i = todo.pop()
            for j in range(n):
                if a[i][j] != 0 and i != j and d[j] is None:
                    d[j] = d[i] * a[i][j] / a[j][i]
                    todo.append(j)
        top = max(d)
        return tuple(x / top for x in d)

    def _build_roots(self):
        """Positive roots by the standard root-string closure."""
        n = self.rank
        a = self.cartan
        found = {tuple(int(i == j) for j in range(n)) for i in range(n)}
        levels = [sorted(found)]
        while True:
            new = set()
            for beta in levels[-1]:
                omega = a @ np.array(beta)    # omega coords of beta
                for i in range(n):
                    cand = list(beta)
                    cand[i] += 1
                    cand = tuple(cand)
                    if cand in found or cand in new:
                        continue
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        if any(x < 0 for x in down) or tuple(down) not in found:
                            break
                        p += 1
                    if p - omega[i] >= 1:
                        new.add(cand)
            if not new:
                break
            found |= new
            levels.append(sorted(new))
        alpha = np.array(sorted(found, key=lambda r: (sum(r), r)), dtype=np.int64)
        self.positive_roots_alpha = alpha
        self.positive_roots = alpha @ self.cartan.T
        self.num_positive_roots = len(alpha)

    def _build_theta_data(self):
        pr = self.positive_roots
        pa = self.positive_roots_alpha
        heights = pa.sum(axis=1)
        self.highest_root = tuple(int(x) for x in pr[np.argmax(heights)])
        self.marks = tuple(int(x) for x in pa[np.argmax(heights)])

        norms = [self.form_value(r, r) for r in pr]
        top_norm = max(norms)
        assert top_norm == 2, "normalized form must give <theta,theta> = 2"
        shorts = [i for i, nm in enumerate(norms) if nm < 2]
        if shorts:
            hs = max(shorts, key=lambda i: heights[i])
            self.highest_short_root = tuple(int(x) for x in pr[hs])
        else:
            # simply laced: every root counts as long
            self.highest_short_root = self.highest_root

        # coroot of theta in the simple-coroot basis -> dual Kac labels
        mvec = [self._sym[i] * self.highest_root[i] for i in range(self.rank)]
        dm = solve_rational([list(r) for r in self.cartan.T], mvec)
        assert all(x.denominator == 1 for x in dm)
        self.dual_marks = tuple(int(x) for x in dm)
        self.dual_coxeter = 1 + sum(self.dual_marks)

        # per positive root: integer vector cv with lambda(root^vee) = cv . lambda
        cvs = []
        for r in pr:
            fr = [sum(self._form[i][j] * int(r[j]) for j in range(self.rank))
                  for i in range(self.rank)]
            nrm = sum(fr[j] * int(r[j]) for j in range(self.rank))
            cv = [2 * x / nrm for x in fr]
            assert all(v.denominator == 1 for v in cv)
            cvs.append([int(v) for v in cv])
        self.coroot_pairings = np.array(cvs, dtype=np.int64)

    @property
    def simple_roots(self):
        """Simple roots in fundamental-weight coordinates (alpha_j = column j)."""
        return tuple(tuple(int(x) for x in self.cartan[:, j]) for j in range(self.rank))

    @property
    def simple_coroots(self):
        """Simple coroots in fundamental-coweight coordinates (row i)."""
        return tuple(tuple(int(x) for x in self.cartan[i, :]) for i in range(self.rank))

    @property
    def normalized_form(self):
        """Gram matrix of the invariant form on fundamental weights (Fractions)."""
        return tuple(tuple(row) for row in self._form)

    # -- elementary weight arithmetic ---------------------------------

    def form_value(self, x, y):
        """Normalized invariant form <x, y> of two weights (exact Fraction)."""
        acc = 0
        for i in range(self.rank):
            if x[i]:
                for j in range(self.rank):
                    if y[j]:
                        acc += int(x[i]) * self._form_num[i][j] * int(y[j])
        return Fraction(int(acc), self._form_den)

    def pairing(self, weight, coweight):
        """Natural pairing lambda(x) of a weight with a coweight (Fraction)."""
        alpha = solve_rational([list(r) for r in self.cartan], list(weight))
        return sum(a * Fraction(m) for a, m in zip(alpha, coweight))

    def exponent_vector(self, xi):
        """y with y[i] = omega_i(xi) for a coweight-coordinate point xi."""
        n = self.rank
        return tuple(sum(self.cartan_inv[j][i] * Fraction(xi[j]) for j in range(n))
                     for i in range(n))

    def level(self, weight):
        """lambda(theta^vee) = sum of dual marks times coordinates."""
        return sum(int(m) * int(x) for m, x in zip(self.dual_marks, weight))

    def is_dominant(self, weight):
        return all(x >= 0 for x in weight)

    def _require_dominant(self, weight):
        if not self.is_dominant(weight):
            raise NonDominant(f"{weight} is not dominant for {self}")

    def dominant_rep_signed(self, vec):
        """Fold vec into the dominant chamber.

        Returns (dominant tuple, sign, on_wall).  A vector fixed by some
        reflection reports on_wall=True (its chamber representative then
        has a zero coordinate).
        """
        v = np.array(vec, dtype=np.int64)
        a = self.cartan
        sign = 1
        while True:
            neg = np.where(v < 0)[0]
            if len(neg) == 0:
                break
            i = int(neg[0])
            v = v - v[i] * a[:, i]
            sign = -sign
        wall = bool((v == 0).any())
        return tuple(int(x) for x in v), sign, wall

    def dominant_rep(self, vec):
        return self.dominant_rep_signed(vec)[0]

    def dual_weight(self, weight):
        """Highest weight of the dual representation, -w0(lambda)."""
        return self.dominant_rep([-x for x in weight])

    # -- Weyl group ----------------------------------------------------

    def simple_reflection(self, i):
        s = np.eye(self.rank, dtype=np.int64)
        s[:, i] -= self.cartan[:, i]
        return s

    @property
    def weyl_group(self):
        """Full list of WeylElement, enumerated once and cached."""
        with self._lock:
            if self._weyl_group is None:
                self._weyl_group = self._enumerate_weyl()
                self._weyl_order = len(self._weyl_group)
            return self._weyl_group

    @property
    def weyl_order(self):
        with self._lock:
            if self._weyl_order is None:
                self._weyl_order = len(self._signed_orbit_nolock(
                    tuple([1] * self.rank))[0])
            return self._weyl_order

    def _enumerate_weyl(self):
        n = self.rank
        gens = [self.simple_reflection(i) for i in range(n)]
        elems = [WeylElement(np.eye(n, dtype=np.int64), 1)]
        seen = {elems[0].matrix.tobytes()}
        frontier = [elems[0].matrix]
        sign = 1
        while frontier:
            sign = -sign
            nxt = []
            for m in frontier:
                for g in gens:
                    prod = g @ m
                    key = prod.tobytes()
                    if key not in seen:
                        seen.add(key)
                        nxt.append(prod)
                        elems.append(WeylElement(prod, sign))
            frontier = nxt
        return elems

    def signed_orbit(self, vec):
        """Weyl orbit of a strictly dominant vector with (-1)^length signs.

        Returns (orbit matrix K x rank int64, signs K int8); row 0 is vec.
        """
        key = tuple(int(x) for x in vec)
        with self._lock:
            hit = self._orbit_cache.get(key)
            if hit is None:
                hit = self._signed_orbit_nolock(key)
                self._orbit_cache[key] = hit
            return hit

    def _signed_orbit_nolock(self, key):
        if any(x <= 0 for x in key):
            raise ValueError("signed_orbit needs a strictly dominant vector")
        a = self.cartan
        n = self.rank
        cur = np.array([key], dtype=np.int64)
        prev = None
        chunks = [cur]
        signs = [np.ones(1, dtype=np.int8)]
        sign = 1
        while True:
            cands = []
            for i in range(n):
                mask = cur[:, i] != 0
                if not mask.any():
                    continue
                w = cur[mask].copy()
                w -= w[:, i:i + 1] * a[:, i][None, :]
                cands.append(w)
            if not cands:
                break
            cand = np.unique(np.vstack(cands), axis=0)
            cand = np_rows_not_in(cand, prev)
            if len(cand) == 0:
                break
            sign = -sign
            chunks.append(cand)
            signs.append(np.full(len(cand), sign, dtype=np.int8))
            prev, cur = cur, cand
        return np.vstack(chunks), np.concatenate(signs)

    # -- dimensions and weight multiplicities --------------------------

    def weyl_dimension(self, weight):
        """dim V(lambda) by the Weyl dimension formula, exact."""
        self._require_dominant(weight)
        lr = np.array(weight, dtype=np.int64) + 1
        rho = np.ones(self.rank, dtype=np.int64)
        num = den = 1
        for cv in self.coroot_pairings:
            num *= int(cv @ lr)
            den *= int(cv @ rho)
        assert num % den == 0
        return num // den

    def weight_system(self, weight):
        """All weights of V(lambda) with multiplicities (Freudenthal).

        Returns a dict {weight tuple: multiplicity}.  Cached.
        """
        key = tuple(int(x) for x in weight)
        self._require_dominant(key)
        with self._lock:
            hit = self._weights_cache.get(key)
        if hit is not None:
            return hit
        ws = self._weight_system_uncached(key)
        with self._lock:
            self._weights_cache[key] = ws
        return ws

    def _weight_closure(self, lam):
        """Weight set of V(lambda) via root strings, grouped by depth."""
        n = self.rank
        a = self.cartan
        levels = [[lam]]
        found = {lam}
        while True:
            new = set()
            for nu in levels[-1]:
                for i in range(n):
                    cand = tuple(int(nu[k] - a[k][i]) for k in range(n))
                    if cand in found or cand in new:
                        continue
                    p = 0
                    up = list(nu)
                    while True:
                        up = [up[k] + a[k][i] for k in range(n)]
                        if tuple(up) not in found:
                            break
                        p += 1
                    if p + nu[i] >= 1:
                        new.add(cand)
            if not new:
                break
            found |= new
            levels.append(sorted(new))
        return levels, found

    def _weight_system_uncached(self, lam):
        levels, found = self._weight_closure(lam)
        fd = self._form_den
        fnum = self._form_num
        lamr = np.array(lam, dtype=np.int64) + 1

        def norm2(v):
            arr = np.array(v, dtype=np.int64)
            return int(arr @ fnum @ arr)

        top = norm2(lamr)
        mult = {lam: 1}
        roots = [tuple(int(x) for x in r) for r in self.positive_roots]
        root_form = {}  # scaled <x, r> helpers
        for depth, level in enumerate(levels):
            if depth == 0:
                continue
            for mu in level:
                mur = tuple(m + 1 for m in mu)
                denom = top - norm2(mur)
                assert denom > 0
                acc = 0
                for r in roots:
                    k = 1
                    while True:
                        up = tuple(mu[j] + k * r[j] for j in range(self.rank))
                        if up not in found:
                            break
                        # <mu + k r, r> scaled by form_den
                        arr = np.array(up, dtype=np.int64)
                        rr = np.array(r, dtype=np.int64)
                        acc += mult[up] * int(arr @ fnum @ rr)
                        k += 1
                num = 2 * acc
                assert num % denom == 0, "Freudenthal recursion must stay integral"
                mult[mu] = num // denom
        return mult

    def weight_multiplicities(self, weight):
        """Spec surface: identical to weight_system."""
        return self.weight_system(weight)

    # -- tensor products ------------------------------------------------

    def tensor_with_character(self, lam, weights):
        """Decompose V(lam) (x) X where X has the given weight multiset.

        Klimyk: fold lam+rho+mu for every weight mu of X; a vector hitting
        a reflection wall contributes zero.
        """
        self._require_dominant(lam)
        lr = tuple(x + 1 for x in lam)
        out = {}
        for mu, m in weights.items():
            v = tuple(lr[i] + mu[i] for i in range(self.rank))
            dom, sign, wall = self.dominant_rep_signed(v)
            if wall:
                continue
            eta = tuple(x - 1 for x in dom)
            out[eta] = out.get(eta, 0) + sign * m
        out = {k: v for k, v in out.items() if v != 0}
        if any(v < 0 for v in out.values()):
            raise AssertionError("negative tensor multiplicity: corrupted input character")
        return out

    def tensor_multiplicities(self, lam, mu):
        """V(lam) (x) V(mu) as a map {nu: multiplicity}."""
        self._require_dominant(lam)
        self._require_dominant(mu)
        return self.tensor_with_character(lam, self.weight_system(mu))

    # -- characters -------------------------------------------------------

    def root_pairings_exact(self, y):
        """r . y for every positive root r, as Fractions."""
        out = []
        for r in self.positive_roots:
            out.append(sum(int(r[i]) * y[i] for i in range(self.rank) if r[i]))
        return out

    def point_is_regular(self, y):
        """exp(2 pi i y-pairing) differs from 1 on every root."""
        return all(p.denominator != 1 for p in self.root_pairings_exact(y))

    def character_at_exponents(self, lam, y, method="quotient"):
        """chi_lambda at the point with exact exponent vector y.

        y[i] = omega_i(xi); exponents of weights are integer combinations
        of y reduced mod 1, evaluated through a single root-of-unity table.
        """
        self._require_dominant(lam)
        d = fraction_lcm_den(y)
        yd = np.array([int(Fraction(v) * d) for v in y], dtype=np.int64)
        table = _roots_of_unity(d)
        if method == "weights":
            ws = self.weight_system(lam)
            vecs = np.array(list(ws.keys()), dtype=np.int64)
            mults = np.array(list(ws.values()), dtype=np.int64)
            phases = (vecs @ yd) % d
            val = _phase_sum(phases, mults, d, table)
            exact = None
            if len(ws) <= 64:
                exact = tuple(sorted(
                    (Fraction(int(p), d), int(m)) for p, m in zip(phases, mults)))
            return CharacterValue(val, exact)
        if not self.point_is_regular(y):
            raise SingularPoint("point lies on a root hyperplane")
        lr = tuple(x + 1 for x in lam)
        orb, signs = self.signed_orbit(lr)
        rho_orb, rho_signs = self.signed_orbit(tuple([1] * self.rank))
        num = _phase_sum((orb @ yd) % d, signs, d, table)
        den = _phase_sum((rho_orb @ yd) % d, rho_signs, d, table)
        if abs(den) < _SINGULAR_TOL * len(rho_orb):
            raise SingularPoint("Weyl denominator below tolerance")
        return CharacterValue(num / den)

    def character_value(self, lam, xi):
        """chi_lambda(exp(2 pi i xi)) by the Weyl quotient formula."""
        return self.character_at_exponents(lam, self.exponent_vector(xi))

    def character_by_weights(self, lam, xi):
        """Same value by the direct weight-multiplicity sum (no regularity needed)."""
        return self.character_at_exponents(lam, self.exponent_vector(xi),
                                           method="weights")

    def __repr__(self):
        return f"RootDatum({self.lie_type}{self.rank})"


def _phase_sum(phases, weights, d, table):
    """sum weights[j] * table[phases[j]], accumulated exactly.

    Integer weights are first bucketed per phase residue (exact in float64
    up to 2^53), so the heavy alternating cancellation happens in integer
    arithmetic; only the final <= d-term sum touches floats.
    """
    counts = np.bincount(phases, weights=weights.astype(np.float64), minlength=d)
    return complex(math.fsum(counts * table.real), math.fsum(counts * table.imag))


_unity_cache = {}
_unity_lock = threading.Lock()


def _roots_of_unity(d):
    with _unity_lock:
        tab = _unity_cache.get(d)
        if tab is None:
            tab = np.exp(2j * np.pi * np.arange(d) / d)
            _unity_cache[d] = tab
        return tab


def build_root_datum(lie_type, rank):
    """Construct (or fetch the cached) RootDatum for a supported type."""
    key = (lie_type, rank)
    with _datum_lock:
        rd = _datum_cache.get(key)
        if rd is None:
            rd = RootDatum(lie_type, rank)
            _datum_cache[key] = rd
        return rd


def weyl_dimension(rd, weight):
    return rd.weyl_dimension(weight)


def weight_multiplicities(rd, weight):
    return rd.weight_system(weight)


def tensor_multiplicities(rd, lam, mu):
    return rd.tensor_multiplicities(lam, mu)


def character_value(rd, lam, xi):
    return rd.character_value(lam, xi)
