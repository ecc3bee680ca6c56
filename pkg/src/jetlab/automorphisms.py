"""Closed-form stability maps, their composition, and the parameter group.

Every automorphism of the model hypersurface germ is

    H[eps, r, alpha, s] = ( eps*(z + alpha*w) / th,  r*w / th ),
    th = (1 - 2i*conj(alpha)*z*w - (s + i*|alpha|^2)*w^2)^(1/2),

with |eps| = 1, r real nonzero, alpha complex, s real.  This module builds
these maps as truncated series, composes maps in normal form, and carries
the group structure on parameters.

Group coordinates.  The identification used throughout is

    zeta = r * conj(eps),  alpha = alpha,  s = s,

and ``group_compose(e, e')`` models "apply H[e] first, then H[e']".  In
these coordinates the multiplication is

    (zeta, alpha, s) . (zeta', alpha', s')
        = (zeta*zeta', alpha + zeta*alpha',
           s + |zeta|^2 * s' - 2*Im(alpha * conj(zeta) * conj(alpha'))),

verified against exact series composition in the tests.  Note the |zeta|^2
weight on s': dropping it breaks associativity off the |zeta| = 1 slice, so
the unweighted variant cannot describe map composition.  On the Heisenberg
subgroup (zeta = 1) the weight disappears and the s-rule is
s + s' - 2*Im(alpha*conj(alpha')).

The map (eps, r) -> zeta is two-to-one: (eps, r) and (-eps, -r) share one
zeta but give different maps.  ``group_to_params`` returns the r > 0
representative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .gaussrat import GaussRat, I, ONE, as_gauss
from .hypersurface import TWO_I, FormalMap
from .series import MultiSeries, variables


@dataclass(frozen=True)
class AutParams:
    """Parameters (eps, r, alpha, s) of one stability map."""

    eps: GaussRat
    r: GaussRat
    alpha: GaussRat
    s: GaussRat

    def __post_init__(self):
        for name in ("eps", "r", "alpha", "s"):
            object.__setattr__(self, name, as_gauss(getattr(self, name)))
        if not self.eps.is_unimodular():
            raise ValueError("invalid parameters: eps must be unimodular")
        if not self.r.is_real() or not self.r:
            raise ValueError("invalid parameters: r must be a nonzero real")
        if not self.s.is_real():
            raise ValueError("invalid parameters: s must be real")

    @classmethod
    def identity(cls) -> "AutParams":
        return cls(ONE, ONE, GaussRat(0), GaussRat(0))


@dataclass(frozen=True)
class GroupElem:
    """A point (zeta, alpha, s) of the parameter group, zeta != 0, s real."""

    zeta: GaussRat
    alpha: GaussRat
    s: GaussRat

    def __post_init__(self):
        for name in ("zeta", "alpha", "s"):
            object.__setattr__(self, name, as_gauss(getattr(self, name)))
        if not self.zeta:
            raise ValueError("invalid group element: zeta must be nonzero")
        if not self.s.is_real():
            raise ValueError("invalid group element: s must be real")

    @classmethod
    def identity(cls) -> "GroupElem":
        return cls(ONE, GaussRat(0), GaussRat(0))


# -- series construction ------------------------------------------------------------


def denominator_series(alpha, s, degree: int) -> MultiSeries:
    """The square-root denominator shared by both map components.

    (1 - 2i*conj(alpha)*z*w - (s + i*|alpha|^2)*w^2)^(1/2), principal root
    with constant term 1, exact through the truncation degree.
    """
    alpha = as_gauss(alpha)
    s = as_gauss(s)
    z, w = variables(2, degree)
    inner = (
        MultiSeries.one(2, degree)
        - (z * w).scale(TWO_I * alpha.conjugate())
        - (w * w).scale(s + I * alpha.norm_sq())
    )
    return inner.sqrt()


def build_automorphism(p: AutParams, degree: int) -> FormalMap:
    """The stability map for ``p`` as a normal-form pair at the given degree."""
    th_inv = denominator_series(p.alpha, p.s, degree).reciprocal()
    z, w = variables(2, degree)
    f = (z + w.scale(p.alpha)) * th_inv.scale(p.eps)
    g = th_inv.scale(p.r)
    return FormalMap(f, g)


def compose_maps(h1: FormalMap, h2: FormalMap) -> FormalMap:
    """Normal-form pair of h1 o h2 (apply h2 first), exact modulo the degree.

    The second component of the composite is w * [g2 * (g1 at h2)], so the
    returned g-factor is recomputed accordingly.
    """
    if h1.trunc_degree != h2.trunc_degree:
        raise ValueError("incompatible series: map degrees disagree")
    args = [h2.f, h2.second_component()]
    f = h1.f.compose(args)
    g = h2.g * h1.g.compose(args)
    return FormalMap(f, g)


# -- parameter-level composition -----------------------------------------------------


def compose_params(p1: AutParams, p2: AutParams) -> AutParams:
    """Parameters of H[p1] o H[p2] (apply p2 first).

    Closed form, equal to the parameters read off the composed series:
        eps = eps1*eps2,  r = r1*r2,
        alpha = alpha2 + r2*conj(eps2)*alpha1,
        s = s2 + r2^2*s1 + 2*r2*Im(alpha1*conj(eps2*alpha2)).
    """
    cross = p1.alpha * (p2.eps * p2.alpha).conjugate()
    return AutParams(
        p1.eps * p2.eps,
        p1.r * p2.r,
        p2.alpha + p2.r * p2.eps.conjugate() * p1.alpha,
        p2.s + p2.r * p2.r * p1.s + GaussRat(2 * p2.r.re * cross.im),
    )


def inverse_params(p: AutParams) -> AutParams:
    """The parameters of the inverse map: compose_params(p, inverse) is the identity."""
    r_inv = ONE / p.r
    return AutParams(
        p.eps.conjugate(),
        r_inv,
        -(p.eps * p.alpha * r_inv),
        -(p.s * r_inv * r_inv),
    )


# -- the abstract group ---------------------------------------------------------------


def params_to_group(p: AutParams) -> GroupElem:
    """Group coordinates of a parameter tuple: (r*conj(eps), alpha, s).

    Forgets the simultaneous sign of (eps, r); the two preimages of a group
    element differ by that sign.
    """
    return GroupElem(p.r * p.eps.conjugate(), p.alpha, p.s)


def group_to_params(e: GroupElem) -> AutParams:
    """The r > 0 parameter representative of a group element.

    Requires |zeta| to be rational, which is exactly when the element is
    realisable with Gaussian-rational parameters.
    """
    n = e.zeta.norm_sq()
    root_num = math.isqrt(n.numerator * n.denominator)
    if root_num * root_num != n.numerator * n.denominator:
        raise ValueError(
            "group element has irrational modulus; no Gaussian-rational parameters"
        )
    r = GaussRat(Fraction(root_num, n.denominator))
    eps = e.zeta.conjugate() / r
    return AutParams(eps, r, e.alpha, e.s)


def group_compose(e1: GroupElem, e2: GroupElem) -> GroupElem:
    """Product in the parameter group; models H[e2] o H[e1] (e1 acts first).

    (zeta, alpha, s) . (zeta', alpha', s') =
        (zeta*zeta', alpha + zeta*alpha',
         s + |zeta|^2*s' - 2*Im(alpha*conj(zeta)*conj(alpha'))).
    """
    twist = e1.alpha * e1.zeta.conjugate() * e2.alpha.conjugate()
    return GroupElem(
        e1.zeta * e2.zeta,
        e1.alpha + e1.zeta * e2.alpha,
        e1.s + e1.zeta.norm_sq() * e2.s - GaussRat(2 * twist.im),
    )


def group_inverse(e: GroupElem) -> GroupElem:
    zeta_inv = ONE / e.zeta
    return GroupElem(zeta_inv, -(e.alpha * zeta_inv), -(e.s / GaussRat(e.zeta.norm_sq())))


# -- convergence radius ------------------------------------------------------------


def radius_estimate(p: AutParams, order: int) -> float:
    """Estimated convergence radius in w for the one-parameter family (1,1,0,s).

    The g-component is (1 - s*w^2)^(-1/2), whose even coefficients c_{2k}
    drive a root test |c_{2k}|^(-1/(2k)) -> radius.  The plain root value at
    fixed k carries a slowly varying prefactor, so the returned estimate
    differences the last two root-test data points (equivalently a ratio
    test), which cancels it; the raw sequence is available from
    ``radius_root_sequence``.  Floating point enters only in this final
    conversion.
    """
    coeffs = _even_w_coefficients(p, order)
    k = len(coeffs) - 1
    if k < 2:
        raise ValueError("order too low: need at least two even coefficients")
    ratio = abs(coeffs[k - 1]) / abs(coeffs[k])
    return math.sqrt(float(ratio))


def radius_root_sequence(p: AutParams, order: int) -> list[tuple[int, float]]:
    """The raw root-test values (k, |c_{2k}|^(-1/(2k))) up to order//2."""
    coeffs = _even_w_coefficients(p, order)
    out = []
    for k in range(1, len(coeffs)):
        c = abs(coeffs[k])
        out.append((k, math.exp(-math.log(float(c)) / (2 * k))))
    return out


def _even_w_coefficients(p: AutParams, order: int) -> list[Fraction]:
    if p.eps != ONE or p.r != ONE or p.alpha:
        raise ValueError("radius estimate applies to the (1, 1, 0, s) family only")
    if not p.s:
        raise ValueError("infinite radius: s = 0")
    if order < 10:
        raise ValueError("order must be at least 10")
    (w,) = variables(1, order)
    g = (MultiSeries.one(1, order) - (w * w).scale(p.s)).sqrt().reciprocal()
    coeffs = []
    for k in range(0, order // 2 + 1):
        c = g.coeff((2 * k,))
        if c.im:
            raise AssertionError("even coefficients must be real for real s")
        coeffs.append(c.re)
    return coeffs
