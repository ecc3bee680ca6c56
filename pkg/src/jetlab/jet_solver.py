"""Jet extraction, jet determinacy, and reconstruction of maps from 3-jet data.

A normal-form map H = (f, w*g) is expanded in powers of w,

    f(z, w) = sum_n f_n(z) w^n / n!,   g(z, w) = sum_n g_n(z) w^n / n!,

and the conjugated Taylor data

    f_jet[n, j] = conj( d^j/dz^j f_n (0) ),   g_jet[n, j] = conj( d^j/dz^j g_n (0) )

determine an automorphism of the model hypersurface completely once four
seed values are known: f_jet[0,1], g_jet[0,0], f_jet[1,0] and the real part
of g_jet[2,0].  ``reconstruct`` rebuilds the whole map w-order by w-order
from that seed by exact undetermined-coefficient solves: at each order the
invariance residual is affine in the unknown slice, every unknown is split
into real and imaginary rational parts (which makes conjugation linear),
and the full coefficient system in (z, chi) is solved over Q.  The 4x4 core
of that system at order n >= 3 is exposed as ``step_matrix`` together with
the closed form of its determinant for auditing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .automorphisms import AutParams
from .gaussrat import GaussRat, I, ONE, ZERO, as_gauss
from .hypersurface import FormalMap, defining_series, invariance_residual
from .linsolve import det_cofactor, solve_exact
from .series import MultiSeries


class UnrealizableJetError(ValueError):
    """Raised when jet data cannot come from an automorphism of the model."""


# -- jet extraction ------------------------------------------------------------------


@dataclass(frozen=True)
class JetData:
    """Conjugated Taylor table of a normal-form map.

    For maps that satisfy the defining identity, f_jet[0,1] is unimodular
    and g_jet[0,0] is real and nonzero; those constraints are validated
    where they are required (``params_from_jet``, ``seed_from_jet``), not at
    extraction time, so that defective maps can still be inspected.
    """

    f_jet: dict[tuple[int, int], GaussRat]
    g_jet: dict[tuple[int, int], GaussRat]
    max_order: int
    trunc_degree: int


def extract_jet(H: FormalMap, max_order: int) -> JetData:
    """Exact conjugated jet table for all w-orders n <= max_order.

    For each n the z-derivative order j runs through the degree budget
    j <= D - n of the underlying truncated series.
    """
    D = H.trunc_degree
    if max_order < 0 or max_order > D:
        raise ValueError("degree budget exceeded: max_order beyond truncation degree")
    f_jet: dict[tuple[int, int], GaussRat] = {}
    g_jet: dict[tuple[int, int], GaussRat] = {}
    for n in range(max_order + 1):
        nf = factorial(n)
        for j in range(D - n + 1):
            scale = nf * factorial(j)
            f_jet[(n, j)] = (H.f.coeff((j, n)) * scale).conjugate()
            g_jet[(n, j)] = (H.g.coeff((j, n)) * scale).conjugate()
    return JetData(f_jet, g_jet, max_order, D)


def params_from_jet(jet: JetData) -> AutParams:
    """Read the automorphism parameters off a jet table.

    eps = conj(f_jet[0,1]), r = conj(g_jet[0,0]),
    alpha = conj(f_jet[1,0]) / conj(f_jet[0,1]),
    s = Re(g_jet[2,0]) / g_jet[0,0].
    """
    try:
        a01 = jet.f_jet[(0, 1)]
        b00 = jet.g_jet[(0, 0)]
        a10 = jet.f_jet[(1, 0)]
        b20 = jet.g_jet[(2, 0)]
    except KeyError as exc:
        raise ValueError("degree budget exceeded: jet table too small") from exc
    if not a01.is_unimodular():
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: f_jet[0,1] is not unimodular"
        )
    if not b00.is_real() or not b00:
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: g_jet[0,0] is not a nonzero real"
        )
    return AutParams(
        a01.conjugate(),
        b00.conjugate(),
        a10.conjugate() / a01.conjugate(),
        GaussRat(b20.re) / b00,
    )


# -- the reconstruction seed -----------------------------------------------------------


@dataclass(frozen=True)
class JetSeed:
    """The seed data determining an automorphism: the distinguished 7-tuple.

    Stored as its four independent entries; the tuple itself is
    (1/fz_bar, 1/g0_bar, fz_bar, g0_bar, fw_bar, conj(fw_bar), gww_re),
    so the reciprocal and conjugate entries are derived, which keeps the
    tuple's internal constraints true by construction.
    """

    fz_bar: GaussRat
    g0_bar: GaussRat
    fw_bar: GaussRat
    gww_re: GaussRat

    def __post_init__(self):
        for name in ("fz_bar", "g0_bar", "fw_bar", "gww_re"):
            object.__setattr__(self, name, as_gauss(getattr(self, name)))
        if not self.fz_bar:
            raise ValueError("invalid seed: fz_bar must be nonzero")
        if not self.g0_bar:
            raise ValueError("invalid seed: g0_bar must be nonzero")
        if not self.gww_re.is_real():
            raise ValueError("invalid seed: gww_re must be real")

    def as_tuple(self) -> tuple[GaussRat, ...]:
        return (
            ONE / self.fz_bar,
            ONE / self.g0_bar,
            self.fz_bar,
            self.g0_bar,
            self.fw_bar,
            self.fw_bar.conjugate(),
            self.gww_re,
        )


def seed_from_jet(jet: JetData) -> JetSeed:
    try:
        return JetSeed(
            jet.f_jet[(0, 1)],
            jet.g_jet[(0, 0)],
            jet.f_jet[(1, 0)],
            GaussRat(jet.g_jet[(2, 0)].re),
        )
    except KeyError as exc:
        raise ValueError("degree budget exceeded: jet table too small") from exc


def seed_from_params(p: AutParams) -> JetSeed:
    """The seed the closed-form map with parameters ``p`` produces."""
    return JetSeed(
        p.eps.conjugate(),
        p.r,
        (p.eps * p.alpha).conjugate(),
        GaussRat((p.r * p.s).re),
    )


def params_from_seed(seed: JetSeed) -> AutParams:
    """The parameter tuple a realizable seed determines; inverse of seed_from_params."""
    if not seed.fz_bar.is_unimodular():
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: fz_bar is not unimodular"
        )
    if not seed.g0_bar.is_real():
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: g0_bar is not real"
        )
    return AutParams(
        seed.fz_bar.conjugate(),
        seed.g0_bar,
        seed.fw_bar.conjugate() / seed.fz_bar.conjugate(),
        GaussRat(seed.gww_re.re) / seed.g0_bar,
    )


# -- jet determinacy -------------------------------------------------------------------


def jets_agree(h1: FormalMap, h2: FormalMap, k: int) -> bool:
    """True iff all Taylor coefficients of the full pairs agree through degree k."""
    if k < 0:
        raise ValueError("jet order must be non-negative")
    if h1.trunc_degree < k or h2.trunc_degree < k:
        raise ValueError("degree too low for the requested jet order")
    return (
        h1.f.truncate(k) == h2.f.truncate(k)
        and h1.second_component().truncate(k) == h2.second_component().truncate(k)
    )


# -- the order-n core matrix and its determinant audit ---------------------------------


@dataclass(frozen=True)
class StepMatrix:
    """The 4x4 core of the order-n coefficient system.

    Acts on the unknown scalar vector (f_jet[n,0], f_jet[n,1], g_jet[n,0],
    g_jet[n,1]); its entries depend only on n and the two seed scalars.  For
    n >= 3 it has exactly six nonzero entries and nonzero determinant.
    """

    n: int
    rows: tuple

    def det(self) -> GaussRat:
        return det_cofactor([list(r) for r in self.rows])


def step_matrix(n: int, fz_bar: GaussRat, g0_bar: GaussRat) -> StepMatrix:
    if n < 1:
        raise ValueError("invalid scalars: n must be at least 1")
    fz_bar = as_gauss(fz_bar)
    g0_bar = as_gauss(g0_bar)
    if not fz_bar.is_unimodular():
        raise ValueError("invalid scalars: fz_bar must be unimodular")
    if not g0_bar.is_real() or not g0_bar:
        raise ValueError("invalid scalars: g0_bar must be a nonzero real")
    ratio = g0_bar / fz_bar
    zero = ZERO
    rows = (
        (zero, ratio * (4 * n), GaussRat(-2 * n * n), zero),
        (ratio * GaussRat(0, -6 * (n * n - 1)), zero, zero, zero),
        (zero, zero, zero, GaussRat(6 * (n * n - 1))),
        (
            zero,
            ratio * GaussRat(0, 18 * (n * n + 2 * n)),
            GaussRat(0, -6 * (2 * n**3 + 3 * n**2 - 2 * n)),
            zero,
        ),
    )
    m = StepMatrix(n, rows)
    if n >= 3:
        nonzero = sum(1 for row in rows for x in row if x)
        assert nonzero == 6, "core matrix must have exactly six nonzero entries"
    return m


def step_det_closed_form(n: int, fz_bar: GaussRat, g0_bar: GaussRat) -> GaussRat:
    """Closed form of det(step_matrix):
    -432 * g0_bar^2 / fz_bar^2 * (n-2)(n-1)^2 n^2 (n+1)^2 (n+2)."""
    fz_bar = as_gauss(fz_bar)
    g0_bar = as_gauss(g0_bar)
    poly = (n - 2) * (n - 1) ** 2 * n**2 * (n + 1) ** 2 * (n + 2)
    return (g0_bar * g0_bar) / (fz_bar * fz_bar) * GaussRat(-432 * poly)


# -- reconstruction ---------------------------------------------------------------------


@dataclass(frozen=True)
class StepReport:
    """What one w-order of the reconstruction solved."""

    order: int
    f_degree_bound: int
    g_degree_bound: int
    equations: int
    unknowns: int
    pinned: tuple[str, ...]
    forced: tuple[tuple[str, bool], ...]
    escalations: int


@dataclass
class Reconstruction:
    map: FormalMap
    order: int
    seed: JetSeed
    steps: list[StepReport] = field(default_factory=list)


def reconstruct(seed: JetSeed, order: int) -> Reconstruction:
    """Rebuild the unique automorphism slices f_0..f_order, g_0..g_order.

    The returned map lives at truncation degree 2*order + 1 and carries no
    terms of w-order above ``order``; each stored slice is exact, so
    comparisons against closed-form maps are made w-slice by w-slice.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if not seed.fz_bar.is_unimodular():
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: fz_bar is not unimodular"
        )
    if not seed.g0_bar.is_real():
        raise UnrealizableJetError(
            "jet not realizable by an automorphism: g0_bar is not real"
        )
    # Order 0 in closed form: f_0 = z / fz_bar, g_0 = g0_bar.
    f_slices: list[list[GaussRat]] = [[ZERO, ONE / seed.fz_bar]]
    g_slices: list[list[GaussRat]] = [[seed.g0_bar]]
    reports: list[StepReport] = []
    for n in range(1, order + 1):
        fn, gn, report = _solve_step(n, f_slices, g_slices, seed)
        f_slices.append(fn)
        g_slices.append(gn)
        reports.append(report)
    out_degree = max(
        2 * order + 1,
        max(len(sl) - 1 + m for m, sl in enumerate(f_slices)),
    )
    return Reconstruction(
        _assemble_map(f_slices, g_slices, out_degree), order, seed, reports
    )


def residual_vanishes_through_order(H: FormalMap, order: int) -> bool:
    """Check the invariance residual on every tau-order up to ``order``.

    Suitable for maps holding w-slices only up to ``order``: higher
    tau-orders of the residual involve missing slices and are ignored.
    """
    return all(e[2] > order for e in invariance_residual(H).terms)


def _assemble_map(f_slices, g_slices, degree: int) -> FormalMap:
    f_terms: dict[tuple[int, int], GaussRat] = {}
    g_terms: dict[tuple[int, int], GaussRat] = {}
    for target, slices in ((f_terms, f_slices), (g_terms, g_slices)):
        for m, sl in enumerate(slices):
            inv = Fraction(1, factorial(m))
            for d, c in enumerate(sl):
                if c:
                    target[(d, m)] = c * inv
    return FormalMap(
        MultiSeries(2, degree, f_terms), MultiSeries(2, degree, g_terms)
    )


def _solve_step(n, f_slices, g_slices, seed):
    """Solve the order-n slice by exact linear algebra over Q.

    The tau^n coefficient of the invariance residual is affine in the
    unknown slice polynomials f_n (degree <= n+1) and g_n (degree <= n):
    cross terms of two unknown slices sit at tau-order 2n > n.  The base
    part comes from one residual evaluation with the unknown slice zeroed;
    the linear part has the closed form

        -Sz^(n+1) g_n(z) + Sz gbar_n(chi)
        + g0_bar * Sz' * ( fz_bar * chi * Sz^n * f_n(z)
                           + (z / fz_bar) * fbar_n(chi) )

    in the bivariate ring of (z, chi), with Sz the boundary series composed
    at z*chi.  Seed entries are pinned at their orders (f_1(0) at n = 1, the
    real part of g_2(0) at n = 2); everything else is solved.
    """
    deg_f, deg_g = n + 1, n
    escalations = 0
    while True:
        Dn = max(n + deg_f + 1, n + 6)
        low = _assemble_map(f_slices, g_slices, Dn)
        phi_low = invariance_residual(low)
        assert all(
            e[2] >= n for e in phi_low.terms
        ), "lower tau-orders must already vanish"
        Db = Dn - n

        S = defining_series(Db)
        z, chi = (
            MultiSeries.variable(0, 2, Db),
            MultiSeries.variable(1, 2, Db),
        )
        Sz = S.compose([z * chi])
        Spz = defining_series(Db + 1).derivative(0).compose([z * chi])
        Sz_n = Sz**n
        col_f_base = (Spz * chi * Sz_n).scale(seed.g0_bar * seed.fz_bar)
        col_fbar_base = (Spz * z).scale(seed.g0_bar / seed.fz_bar)
        col_g_base = -(Sz_n * Sz)
        col_gbar_base = Sz

        grid = [
            (j, k) for t in range(Db + 1) for j in range(t + 1) for k in [t - j]
        ]
        index = {jk: i for i, jk in enumerate(grid)}
        n_f, n_g = deg_f + 1, deg_g + 1
        ncols = 2 * (n_f + n_g)
        pins = _pins(n, seed, n_f)
        nrows = 2 * len(grid) + len(pins)
        mat = [[Fraction(0)] * ncols for _ in range(nrows)]
        rhs = [Fraction(0)] * nrows

        fact = factorial(n)
        for e, c in phi_low.terms.items():
            if e[2] != n:
                continue
            i = 2 * index[(e[0], e[1])]
            rhs[i] = -c.re * fact
            rhs[i + 1] = -c.im * fact

        def put(col: int, series: MultiSeries) -> None:
            for jk, v in series.terms.items():
                i = 2 * index[jk]
                mat[i][col] = v.re
                mat[i + 1][col] = v.im

        def mono(var: int, d: int) -> MultiSeries:
            if d > Db:
                return MultiSeries.zero(2, Db)
            e = (d, 0) if var == 0 else (0, d)
            return MultiSeries._raw(2, Db, {e: ONE})

        for d in range(n_f):
            direct = col_f_base * mono(0, d)
            conj_part = col_fbar_base * mono(1, d)
            put(2 * d, direct + conj_part)
            put(2 * d + 1, (direct - conj_part).scale(I))
        for d in range(n_g):
            direct = col_g_base * mono(0, d)
            conj_part = col_gbar_base * mono(1, d)
            put(2 * n_f + 2 * d, direct + conj_part)
            put(2 * n_f + 2 * d + 1, (direct - conj_part).scale(I))

        for i, (col, value, _label) in enumerate(pins):
            mat[2 * len(grid) + i][col] = Fraction(1)
            rhs[2 * len(grid) + i] = value

        status, payload = solve_exact(mat, rhs)
        if status == "unique":
            sol = payload
            break
        if status == "inconsistent":
            raise UnrealizableJetError(
                f"seed jet not realizable: inconsistent coefficient system at order {n}"
            )
        # Underdetermined: raise the slice degree bounds and retry.
        escalations += 1
        deg_f += 2
        deg_g += 2
        if deg_f > 2 * n + 2:
            raise RuntimeError(
                f"degree bound too low: order-{n} system still underdetermined "
                f"at slice degree {deg_f - 2}"
            )

    fn = [GaussRat(sol[2 * d], sol[2 * d + 1]) for d in range(n_f)]
    gn = [GaussRat(sol[2 * n_f + 2 * d], sol[2 * n_f + 2 * d + 1]) for d in range(n_g)]
    forced = _forced_structure(n, fn, gn, seed)
    report = StepReport(
        order=n,
        f_degree_bound=deg_f,
        g_degree_bound=deg_g,
        equations=nrows,
        unknowns=ncols,
        pinned=tuple(label for _c, _v, label in pins),
        forced=forced,
        escalations=escalations,
    )
    return fn, gn, report


def _pins(n: int, seed: JetSeed, n_f: int):
    """Seed entries fixed at this order: (column, value, label) triples."""
    if n == 1:
        target = seed.fw_bar.conjugate()  # f_1(0)
        return [
            (0, target.re, "Re f_1(0)"),
            (1, target.im, "Im f_1(0)"),
        ]
    if n == 2:
        return [(2 * n_f, seed.gww_re.re, "Re g_2(0)")]
    return []


def _forced_structure(n, fn, gn, seed):
    """Constraints the solve must reproduce at orders 1 and 2."""
    if n == 1:
        return (
            ("f_1 linear coefficient vanishes", not fn[1]),
            ("g_1 constant term vanishes", not gn[0]),
        )
    if n == 2:
        expected_im = (seed.g0_bar * seed.fw_bar.norm_sq()).re
        return (
            ("f_2 constant term vanishes", not fn[0]),
            ("g_2 linear coefficient vanishes", not gn[1]),
            ("Im g_2(0) equals g0_bar*|fw_bar|^2", gn[0].im == expected_im),
        )
    return ()
