"""Finite torus combinatorics: lattice orders, the regular point set
Sigma_c = T_c^{sigma,reg}/W^sigma, and affine Weyl folding with the
rho-shifted star action."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .twist import TwistData, weight_alphabet, ambient_alphabet, _bounded_lex
from .util import dual_lattice_basis, lattice_index

# defensive bound on folding; the affine action is proper, so this only
# guards against corrupted inputs
_FOLD_SLACK = 64


@dataclass(frozen=True)
class TorusPoint:
    """t = exp(2 pi i xi); xi in fundamental-coweight coordinates."""
    xi: tuple


@dataclass(frozen=True)
class AlcoveEnumeration:
    twist: TwistData
    level: int
    points: tuple           # TorusPoint of the fixed Cartan
    labels: tuple           # alphabet element that produced each point
    order_T: int
    order_Tsigma: int


@dataclass(frozen=True)
class FoldResult:
    status: str                       # "interior" | "wall"
    weight: Optional[tuple] = None    # dominant alcove representative
    sign: Optional[int] = None        # (-1)^length of the folding word
    length_parity: int = 0


def _coroot_basis_columns(rd):
    """Coroot lattice basis in coweight coordinates (columns)."""
    n = rd.rank
    return [[int(rd.cartan[j][i]) for j in range(n)] for i in range(n)]


def _long_dual_basis_columns(rd):
    """Basis of the dual lattice of the long-root span, coweight coords."""
    longs = [list(map(int, r)) for r in rd.positive_roots_alpha
             if rd.form_value(rd.cartan @ np.array(r), rd.cartan @ np.array(r)) == 2]
    return dual_lattice_basis(longs)


def lattice_orders(twist, c):
    """(|T_c|, |T_c^sigma|) at level c.

    |T_c| = [dual(Q_lg) : (c+h^vee) Q^vee] on the ambient algebra; for the
    simply-laced ambients of every twisted row this is |P^vee/(c+h)Q^vee|.
    |T_c^sigma| = |P_sigma / (c+h^vee) M|.  Both via Smith normal form.
    """
    if c < 1:
        raise ValueError("level must be >= 1")
    n_amb = twist.ambient.rank
    nshift = twist.shifted_level(c)

    dual_cols = _long_dual_basis_columns(twist.ambient)
    coroot_cols = _coroot_basis_columns(twist.ambient)
    sub = [[nshift * coroot_cols[i][j] for j in range(n_amb)] for i in range(n_amb)]
    order_t = lattice_index(dual_cols, sub)

    if twist.kind.tag == "identity":
        order_ts = order_t
    else:
        nf = twist.fixed.rank
        eye = [[int(i == j) for j in range(nf)] for i in range(nf)]
        mcols = [[nshift * int(twist.lattice_M[j][i]) for j in range(nf)]
                 for i in range(nf)]
        order_ts = lattice_index(eye, mcols)
    return order_t, order_ts


def _points_identity(twist, c):
    """A_c = T_c^reg/W for the trivial twist: xi = nu^{-1}(lam+rho)/(c+h).

    alpha_j(nu^{-1}(lam+rho)) = <alpha_j, lam+rho> = d_j (lam_j + 1).
    """
    rd = twist.ambient
    nshift = twist.shifted_level(c)
    labels = ambient_alphabet(twist, c)
    pts = []
    for lam in labels:
        xi = tuple(rd._sym[j] * (lam[j] + 1) / nshift for j in range(rd.rank))
        pts.append(TorusPoint(xi))
    return pts, labels


def _points_standard4(twist, c):
    """xi = nu^{-1}(rho+lam)/(c+h) in the form with <theta_l|theta_l> = 4.

    That form is twice the restriction of the ambient normalized form, so
    the coweight coordinates are 2 d_j (lam_j + 1) / (c + h).
    """
    fixed = twist.fixed
    nshift = twist.shifted_level(c)
    labels = weight_alphabet(twist, c).members
    pts = []
    for lam in labels:
        xi = tuple(2 * fixed._sym[j] * (lam[j] + 1) / nshift
                   for j in range(fixed.rank))
        pts.append(TorusPoint(xi))
    return pts, labels


def _points_diagram(twist, c):
    """xi = (rho_check + lam_check)/(c+h) over the coweight alphabet
    {lam_check dominant : (lam_check, theta_l) <= c}."""
    fixed = twist.fixed
    nshift = twist.shifted_level(c)
    labels = _bounded_lex([int(m) for m in fixed.marks], c)
    pts = []
    for lck in labels:
        xi = tuple(Fraction(lck[j] + 1, nshift) for j in range(fixed.rank))
        pts.append(TorusPoint(xi))
    return pts, labels


def enumerate_sigma_c(twist, c):
    """All regular torus classes the Verlinde sums run over, with orders.

    Every point is checked regular for the fixed Weyl group, and the count
    must match |D_{c,sigma}| (the fusion-basis cardinality).
    """
    twist._require_standard("the regular-point enumeration")
    if c < 1:
        raise ValueError("level must be >= 1")
    tag = twist.kind.tag
    if tag == "identity":
        pts, labels = _points_identity(twist, c)
    elif tag == "standard4":
        pts, labels = _points_standard4(twist, c)
    else:
        pts, labels = _points_diagram(twist, c)

    alphabet_size = len(weight_alphabet(twist, c))
    if len(pts) != alphabet_size:
        raise AssertionError(
            f"|Sigma_c| = {len(pts)} differs from |D_c,sigma| = {alphabet_size}")
    if len({p.xi for p in pts}) != len(pts):
        raise AssertionError("enumerated torus points are not distinct")
    for p in pts:
        if not twist.fixed.point_is_regular(twist.fixed.exponent_vector(p.xi)):
            raise AssertionError(f"enumerated point {p.xi} is not regular")

    order_t, order_ts = lattice_orders(twist, c)
    return AlcoveEnumeration(twist=twist, level=c, points=tuple(pts),
                             labels=tuple(labels), order_T=order_t,
                             order_Tsigma=order_ts)


def fold_to_alcove(twist, c, eta):
    """Star-action fold of an integral weight into the level-c alcove.

    Repeated simple reflections make eta+rho dominant; the far wall
    (pairing with theta_check_sigma equal to c+h) reflects by theta_sigma.
    Translations have even length, so the sign is just (-1)^#reflections.
    """
    twist._require_standard("alcove folding")
    fixed = twist.fixed
    nshift = twist.shifted_level(c)
    a = fixed.cartan
    marks = np.array(twist.level_marks, dtype=np.int64)
    theta = np.array(twist.theta_sigma, dtype=np.int64)

    x = np.array(eta, dtype=np.int64) + 1
    parity = 0
    budget = _FOLD_SLACK + 10 * int(abs(int(marks @ np.abs(x))))
    while True:
        budget -= 1
        if budget < 0:
            raise AssertionError("folding failed to terminate; corrupted input")
        neg = np.where(x < 0)[0]
        if len(neg):
            i = int(neg[0])
            x = x - x[i] * a[:, i]
            parity ^= 1
            continue
        lvl = int(marks @ x)
        if lvl > nshift:
            x = x - (lvl - nshift) * theta
            parity ^= 1
            continue
        break

    if (x == 0).any() or int(marks @ x) == nshift:
        return FoldResult(status="wall", length_parity=parity)
    weight = tuple(int(v) - 1 for v in x)
    return FoldResult(status="interior", weight=weight,
                      sign=1 - 2 * parity, length_parity=parity)
