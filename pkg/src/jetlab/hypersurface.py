"""The model hypersurface and its invariance residuals.

The hypersurface under study is the germ at 0 of

    M = { (z, w) : w = conj(w) * S(|z|^2) },   S(t) = i*t + sqrt(1 - t^2),

an infinite-type surface in C^2 (it contains the complex line w = 0).  A
formal map H = (f, w*g) preserves M exactly when a certain trivariate
residual series vanishes identically; this module builds that residual, the
uncancelled defining identity, and the analogous residual for the
Heisenberg-sphere model Im w = |z|^2 used for comparison.

Complexification convention: the conjugated variables are replaced by
independent indeterminates, conj(z) -> chi and conj(w) -> tau, so on M the
substitution w = tau * S(z*chi) holds; for the sphere model the
substitution is w = tau + 2i*z*chi.
"""

from __future__ import annotations

from .gaussrat import GaussRat, I, as_gauss
from .series import MultiSeries, lowest_nonzero, variables

BIVAR_NAMES = ("z", "w")
TRIVAR_NAMES = ("z", "chi", "tau")

TWO_I = GaussRat(0, 2)


def defining_series(degree: int) -> MultiSeries:
    """The univariate boundary series S(t) = i*t + sqrt(1 - t^2), truncated.

    The constant term is 1, the linear coefficient is i, and every odd
    coefficient above degree 1 vanishes.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    (t,) = variables(1, degree)
    root = (MultiSeries.one(1, degree) - t * t).sqrt()
    return root + t.scale(I)


class FormalMap:
    """A formal map H = (f, w*g) in normal form.

    ``f`` and ``g`` are bivariate series in (z, w) at a common truncation
    degree, with f(0,0) = 0 and f_z(0,0)*g(0,0) != 0 (invertibility).  All
    candidate automorphisms of the model hypersurface are stored this way.
    """

    __slots__ = ("f", "g")

    def __init__(self, f: MultiSeries, g: MultiSeries):
        if f.nvars != 2 or g.nvars != 2 or f.trunc_degree != g.trunc_degree:
            raise ValueError("incompatible series: map components disagree")
        if f.constant_term():
            raise ValueError("not an invertible normal-form map: f(0,0) != 0")
        if f.trunc_degree >= 1:
            fz = f.terms.get((1, 0))
            g0 = g.constant_term()
            if fz is None or not g0:
                raise ValueError(
                    "not an invertible normal-form map: f_z(0,0)*g(0,0) == 0"
                )
        self.f = f
        self.g = g

    @property
    def trunc_degree(self) -> int:
        return self.f.trunc_degree

    @classmethod
    def identity(cls, degree: int) -> "FormalMap":
        z, w = variables(2, degree)
        return cls(z, MultiSeries.one(2, degree))

    def second_component(self) -> MultiSeries:
        """The full second component w*g, truncated at the map's degree."""
        z, w = variables(2, self.trunc_degree)
        return w * self.g

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalMap):
            return NotImplemented
        return self.f == other.f and self.g == other.g

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"FormalMap(D={self.trunc_degree},\n"
            f"  f={self.f.format(BIVAR_NAMES)},\n"
            f"  g={self.g.format(BIVAR_NAMES)})"
        )


def _substituted_parts(H: FormalMap):
    """Common subexpressions of the defining identity at H's degree.

    Returns (Sz, g_at, gbar_at, f_at, fbar_at, S_at_u) where the arguments
    are z, chi, tau and the hypersurface substitution w = tau*S(z*chi) has
    been applied to the unbarred components.
    """
    D = H.trunc_degree
    S = defining_series(D)
    z, chi, tau = variables(3, D)
    Sz = S.compose([z * chi])
    w_sub = tau * Sz
    g_at = H.g.compose([z, w_sub])
    f_at = H.f.compose([z, w_sub])
    gbar_at = H.g.conjugate().compose([chi, tau])
    fbar_at = H.f.conjugate().compose([chi, tau])
    S_at_u = S.compose([f_at * fbar_at])
    return Sz, g_at, gbar_at, f_at, fbar_at, S_at_u


def invariance_residual(H: FormalMap) -> MultiSeries:
    """The trivariate residual whose vanishing characterises automorphisms.

    With w = tau*S(z*chi) substituted and a common factor tau cancelled,
    the defining identity of the hypersurface becomes

        S(z*chi) * g(z, tau*S(z*chi))
            == conj-series(g)(chi, tau) * S( f(z, tau*S(z*chi)) * conj-series(f)(chi, tau) )

    and this function returns (right side) - (left side), exact through the
    map's truncation degree.  H preserves the hypersurface through that
    degree iff the result is the zero series.
    """
    Sz, g_at, gbar_at, _f_at, _fbar_at, S_at_u = _substituted_parts(H)
    return gbar_at * S_at_u - Sz * g_at


def satisfies_defining_identity(H: FormalMap) -> bool:
    """Check the uncancelled defining identity on the full pair (f, w*g).

    Equivalent to ``invariance_residual(H).is_zero()`` up to the one degree
    lost to the cancelled tau factor: this check sees the cancelled residual
    through degree D - 1.
    """
    D = H.trunc_degree
    S = defining_series(D)
    z, chi, tau = variables(3, D)
    Sz = S.compose([z * chi])
    w_sub = tau * Sz
    h2 = H.second_component()
    lhs = h2.compose([z, w_sub])
    f_at = H.f.compose([z, w_sub])
    fbar_at = H.f.conjugate().compose([chi, tau])
    h2bar_at = h2.conjugate().compose([chi, tau])
    rhs = h2bar_at * S.compose([f_at * fbar_at])
    return lhs == rhs


def first_defect(H: FormalMap):
    """Lowest-degree nonzero residual term, or None; diagnostic companion."""
    return lowest_nonzero(invariance_residual(H))


# -- sphere model (comparison) ---------------------------------------------------


def sphere_residual(h1: MultiSeries, h2: MultiSeries) -> MultiSeries:
    """Residual of the sphere model Im w = |z|^2 for a full pair (h1, h2).

    Uses the substitution w = tau + 2i*z*chi; the pair preserves the model
    through the truncation degree iff the result vanishes.  Both components
    must vanish at the origin.
    """
    if h1.nvars != 2 or h2.nvars != 2 or h1.trunc_degree != h2.trunc_degree:
        raise ValueError("incompatible series: sphere map components disagree")
    if h1.constant_term() or h2.constant_term():
        raise ValueError("sphere map must vanish at the origin")
    D = h1.trunc_degree
    z, chi, tau = variables(3, D)
    w_sub = tau + (z * chi).scale(TWO_I)
    h1_at = h1.compose([z, w_sub])
    h2_at = h2.compose([z, w_sub])
    h1bar_at = h1.conjugate().compose([chi, tau])
    h2bar_at = h2.conjugate().compose([chi, tau])
    return h2_at - h2bar_at - (h1_at * h1bar_at).scale(TWO_I)


def sphere_automorphism(r, eps, alpha, s, degree: int):
    """The sphere model's stability maps, as a full pair (h1, h2).

    h1 = r*eps*(z + alpha*w) / d,  h2 = r^2*w / d  with
    d = 1 - 2i*conj(alpha)*z - (s + i*|alpha|^2)*w, for r > 0, |eps| = 1,
    alpha complex, s real.
    """
    r = as_gauss(r)
    eps = as_gauss(eps)
    alpha = as_gauss(alpha)
    s = as_gauss(s)
    if not r.is_real() or r.re <= 0:
        raise ValueError("invalid parameters: r must be a positive real")
    if not eps.is_unimodular():
        raise ValueError("invalid parameters: eps must be unimodular")
    if not s.is_real():
        raise ValueError("invalid parameters: s must be real")
    z, w = variables(2, degree)
    denom = (
        MultiSeries.one(2, degree)
        - z.scale(TWO_I * alpha.conjugate())
        - w.scale(s + I * alpha.norm_sq())
    )
    inv = denom.reciprocal()
    h1 = (z + w.scale(alpha)) * inv.scale(r * eps)
    h2 = w * inv.scale(r * r)
    return h1, h2
