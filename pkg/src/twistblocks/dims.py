"""Verlinde-type dimension formulas: classical and twisted point sums over
the finite regular torus classes, the general cover formula, and the
factorization recursion."""

import math
from dataclasses import dataclass
from fractions import Fraction

from .alcove import enumerate_sigma_c
from .errors import (InconsistentRamification, IntegralityError,
                     UnstableInput, WeightNotInAlphabet)
from .twist import ambient_alphabet, build_twist
from .util import round_half_away, tree_sum

_IMAG_TOL = 1e-7
_RESIDUAL_TOL = 1e-5

# weight-multiplicity sums are exact at any point; prefer them for ambient
# characters unless the representation is large
_WEIGHTSUM_DIM_CAP = 4000


@dataclass(frozen=True)
class DimensionResult:
    value: int
    raw: complex
    residual: float


@dataclass(frozen=True)
class ThreePointRequest:
    """Cover of P^1 with ramified pair (0, infinity) and one free point."""
    twist: object
    level: int
    lam: tuple
    mu: tuple
    nu: tuple


@dataclass(frozen=True)
class CurveRequest:
    """Genus g-bar base with `pairs` ramified pairs and b free points.

    lambda_dagger holds the 2*pairs twisted weights (fixed-subalgebra
    coordinates); mu holds the b untwisted weights (ambient coordinates).
    All nontrivial ramifications share the single standard twist, which
    models gamma_{2k-1} gamma_{2k} = 1 for every pair.
    """
    twist: object
    level: int
    genus_bar: int
    lambda_dagger: tuple
    mu: tuple

    @property
    def pairs(self):
        return len(self.lambda_dagger) // 2


def _finalize(raw, context, allow_negative=False):
    raw = complex(raw)
    if abs(raw.imag) > _IMAG_TOL:
        raise IntegralityError(f"{context}: imaginary part {raw.imag:.3e} "
                               f"exceeds {_IMAG_TOL}")
    value = round_half_away(raw.real)
    residual = abs(raw - value)
    if residual > _RESIDUAL_TOL:
        raise IntegralityError(f"{context}: raw value {raw} has residual "
                               f"{residual:.3e} above {_RESIDUAL_TOL}")
    if value < 0 and not allow_negative:
        raise IntegralityError(f"{context}: negative dimension {value} from {raw}")
    return DimensionResult(value=value, raw=raw, residual=residual)


def _check_twisted(twist, c, lam, slot):
    lam = tuple(int(x) for x in lam)
    if len(lam) != twist.fixed.rank or not twist.fixed.is_dominant(lam) \
            or twist.weight_level(lam) > c:
        raise WeightNotInAlphabet(f"{slot} weight {lam} is not in D_{{{c},sigma}} "
                                  f"of {twist.fixed}")
    return lam


def _check_ambient(twist, c, nu, slot):
    nu = tuple(int(x) for x in nu)
    rd = twist.ambient
    if len(nu) != rd.rank or not rd.is_dominant(nu) or rd.level(nu) > c:
        raise WeightNotInAlphabet(f"{slot} weight {nu} is not in D_{c} of {rd}")
    return nu


# -- character and denominator evaluation at enumerated points ------------

def _memo(twist, key, fn):
    with twist._lock:
        if not hasattr(twist, "_char_memo"):
            twist._char_memo = {}
        hit = twist._char_memo.get(key)
    if hit is not None:
        return hit
    val = fn()
    with twist._lock:
        twist._char_memo[key] = val
    return val


def _fixed_char(twist, lam, pt):
    def compute():
        y = twist.fixed.exponent_vector(pt.xi)
        return twist.fixed.character_at_exponents(lam, y).value
    return _memo(twist, ("fx", lam, pt.xi), compute)


def _ambient_char(twist, nu, pt):
    def compute():
        y = twist.ambient_exponents(pt.xi)
        rd = twist.ambient
        if rd.weyl_dimension(nu) <= _WEIGHTSUM_DIM_CAP:
            return rd.character_at_exponents(nu, y, method="weights").value
        if rd.point_is_regular(y):
            return rd.character_at_exponents(nu, y).value
        return rd.character_at_exponents(nu, y, method="weights").value
    return _memo(twist, ("amb", nu, pt.xi), compute)


def _delta_from_exponents(rd, y, context):
    """prod over all roots of (e^alpha(t) - 1) = prod 4 sin^2(pi alpha(xi))."""
    total = 1.0
    for p in rd.root_pairings_exact(y):
        if p.denominator == 1:
            raise AssertionError(f"{context}: point is singular for {rd}")
        total *= 4.0 * math.sin(math.pi * float(p)) ** 2
    return total


def _delta_sigma(twist, pt):
    def compute():
        y = twist.fixed.exponent_vector(pt.xi)
        return _delta_from_exponents(twist.fixed, y, "Delta_sigma")
    return _memo(twist, ("ds", pt.xi), compute)


def _delta_ambient(twist, pt):
    def compute():
        y = twist.ambient_exponents(pt.xi)
        return _delta_from_exponents(twist.ambient, y, "Delta")
    return _memo(twist, ("da", pt.xi), compute)


def _enumeration(twist, c):
    def compute():
        return enumerate_sigma_c(twist, c)
    return _memo(twist, ("enum", c), compute)


# -- the formulas ----------------------------------------------------------

def identity_twist(rd):
    """Trivial-twist TwistData for rd (classical Verlinde setup)."""
    return build_twist(rd, "identity")


def _classical_raw(twist_id, c, g, weights):
    """|T_c|^{g-1} sum over A_c of prod chi * Delta^{1-g}; no stability gate."""
    enum = _enumeration(twist_id, c)
    terms = []
    for pt in enum.points:
        term = complex(1.0)
        for lam in weights:
            term *= _fixed_char(twist_id, lam, pt)
        d = _delta_ambient(twist_id, pt)
        term *= d ** (1 - g)
        terms.append(term)
    total = tree_sum(terms)
    return total * float(Fraction(enum.order_T) ** (g - 1))


def classical_verlinde(rd, c, g, weights):
    """Untwisted conformal-block dimension on a genus-g curve."""
    if c < 1:
        raise ValueError("level must be >= 1")
    if g < 0:
        raise ValueError("genus must be >= 0")
    tw = identity_twist(rd)
    weights = tuple(_check_ambient(tw, c, w, f"insertion {i}")
                    for i, w in enumerate(weights))
    if g == 0 and len(weights) < 3:
        raise UnstableInput("genus 0 needs at least three insertions")
    return _finalize(_classical_raw(tw, c, g, weights),
                     f"classical N_{g}{weights}")


def twisted_three_point(req):
    """N(sigma; lam, mu, nu) by the twisted Verlinde sum."""
    twist, c = req.twist, req.level
    twist._require_standard("the twisted Verlinde formula")
    if twist.kind.tag == "identity":
        raise WeightNotInAlphabet("three-point twisted dimension needs a "
                                  "nontrivial twist")
    lam = _check_twisted(twist, c, req.lam, "lambda")
    mu = _check_twisted(twist, c, req.mu, "mu")
    nu = _check_ambient(twist, c, req.nu, "nu")
    enum = _enumeration(twist, c)
    terms = []
    for pt in enum.points:
        term = _fixed_char(twist, lam, pt) * _fixed_char(twist, mu, pt)
        term *= _ambient_char(twist, nu, pt)
        term *= _delta_sigma(twist, pt)
        terms.append(term)
    raw = tree_sum(terms) / enum.order_Tsigma
    return _finalize(raw, f"N(sigma;{lam},{mu},{nu})")


def fusion_coefficient(twist, c, lam, mu, eta):
    """Structure constant c^eta_{lam,mu} of the twisted fusion ring.

    These are integers; at level 1 they are non-negative, but the ring is
    a trace ring of a diagram automorphism, and genuinely negative values
    occur from level 2 on (e.g. c^{w2}_{w2,w2} = -1 for (A3, diagram2)).
    """
    twist._require_standard("fusion coefficients")
    if twist.kind.tag == "identity":
        raise WeightNotInAlphabet("twisted fusion needs a nontrivial twist")
    lam = _check_twisted(twist, c, lam, "lambda")
    mu = _check_twisted(twist, c, mu, "mu")
    eta = _check_twisted(twist, c, eta, "eta")
    # eta* = eta: the fixed algebras here have -1 in their Weyl groups
    assert twist.fixed.dual_weight(eta) == eta
    enum = _enumeration(twist, c)
    terms = []
    for pt in enum.points:
        term = _fixed_char(twist, lam, pt) * _fixed_char(twist, mu, pt)
        term *= _fixed_char(twist, eta, pt)
        term *= _delta_sigma(twist, pt)
        terms.append(term)
    raw = tree_sum(terms) / enum.order_Tsigma
    return _finalize(raw, f"c^{eta}_{lam},{mu}", allow_negative=True)


def _check_curve(req):
    twist, c = req.twist, req.level
    twist._require_standard("the general dimension formula")
    if len(req.lambda_dagger) % 2 != 0:
        raise WeightNotInAlphabet("lambda_dagger must list 2a paired weights")
    a = req.pairs
    b = len(req.mu)
    if req.genus_bar < 0:
        raise ValueError("genus_bar must be >= 0")
    if a > 0 and twist.kind.tag == "identity":
        raise WeightNotInAlphabet("ramified pairs require a nontrivial twist")
    # two paired ramified points alone are admissible (z -> z^m cover);
    # otherwise demand the usual stability
    if req.genus_bar == 0 and a == 0 and b < 3:
        raise UnstableInput("genus 0 with no ramification needs >= 3 points")
    lams = tuple(_check_twisted(twist, c, w, f"lambda_dagger[{i}]")
                 for i, w in enumerate(req.lambda_dagger))
    mus = tuple(_check_ambient(twist, c, w, f"mu[{i}]")
                for i, w in enumerate(req.mu))
    return a, b, lams, mus


def general_dimension(req):
    """Dimension for a genus g-bar base with a ramified pairs, b free points.

    N = |T_c|^{g-1+a} / |T_c^sigma|^a *
        sum over T_c^{sigma,reg}/W^sigma of
        prod chi_{lambda_i}(t) prod chi_{mu_j}(t) Delta_sigma(t)^a / Delta(t)^{g-1+a}.
    """
    a, b, lams, mus = _check_curve(req)
    twist, c, gbar = req.twist, req.level, req.genus_bar
    if a == 0:
        # no ramified pairs: the cover contributes nothing and the formula
        # degenerates to the classical sum over the full regular-class set
        raw = _classical_raw(identity_twist(twist.ambient), c, gbar, mus)
        return _finalize(raw, f"N_({gbar},a=0){mus}")
    enum = _enumeration(twist, c)
    dexp = gbar - 1 + a
    terms = []
    for pt in enum.points:
        term = complex(1.0)
        for lam in lams:
            term *= _fixed_char(twist, lam, pt)
        for nu in mus:
            term *= _ambient_char(twist, nu, pt)
        if a:
            term *= _delta_sigma(twist, pt) ** a
        if dexp:
            term *= _delta_ambient(twist, pt) ** (-dexp)
        terms.append(term)
    factor = Fraction(enum.order_T) ** dexp / Fraction(enum.order_Tsigma) ** a
    raw = tree_sum(terms) * float(factor)
    return _finalize(raw, f"N_({gbar},a={a}){lams}{mus}")


def factorized_dimension(req):
    """Same dimension through the factorization recursion.

    Sums products of three-point twisted numbers against classical
    higher-genus Verlinde numbers over all tuples of gluing weights.
    """
    a, b, lams, mus = _check_curve(req)
    twist, c, gbar = req.twist, req.level, req.genus_bar
    if a == 0:
        # empty product over pairs: plain classical Verlinde number
        raw = _classical_raw(identity_twist(twist.ambient), c, gbar, mus)
        return _finalize(raw, f"factorized N_({gbar},a=0){mus}")
    dc = ambient_alphabet(twist, c)
    rd = twist.ambient
    id_tw = identity_twist(rd)

    def three_point(lam1, lam2, nu):
        key = ("N3", lam1, lam2, nu, c)
        return _memo(twist, key, lambda: twisted_three_point(
            ThreePointRequest(twist=twist, level=c, lam=lam1, mu=lam2, nu=nu)).value)

    total = 0.0
    tuples = [()]
    for _ in range(a):
        tuples = [t + (nu,) for t in tuples for nu in dc]
    for nus in tuples:
        coeff = 1
        for k in range(a):
            coeff *= three_point(lams[2 * k], lams[2 * k + 1], nus[k])
            if coeff == 0:
                break
        if coeff == 0:
            continue
        duals = tuple(rd.dual_weight(nu) for nu in nus)
        classical = _classical_raw(id_tw, c, gbar, mus + duals)
        total += coeff * classical
    return _finalize(total, f"factorized N_({gbar},a={a})")


def riemann_hurwitz_genus(order_gamma, genus_bar, stabilizer_orders):
    """Cover genus from 2g-2 = |G|(2g_bar-2) + sum (|G|/|G_i|)(|G_i|-1)."""
    if order_gamma < 1 or genus_bar < 0:
        raise InconsistentRamification("need |Gamma| >= 1 and genus_bar >= 0")
    rhs = order_gamma * (2 * genus_bar - 2)
    for m in stabilizer_orders:
        if m < 1 or order_gamma % m != 0:
            raise InconsistentRamification(
                f"stabilizer order {m} does not divide |Gamma| = {order_gamma}")
        rhs += (order_gamma // m) * (m - 1)
    if rhs % 2 != 0:
        raise InconsistentRamification(f"2g - 2 = {rhs} is odd")
    g = (rhs + 2) // 2
    if g < 0:
        raise InconsistentRamification(f"negative genus g = {g}")
    return g
