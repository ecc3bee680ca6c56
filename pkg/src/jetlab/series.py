"""Sparse truncated multivariate formal power series over the Gaussian rationals.

A series is a finite map from exponent tuples to nonzero coefficients,
truncated by TOTAL degree: every operation discards monomials whose total
degree exceeds the truncation bound and is exact at and below it.  Two
series are equal iff their variable count, truncation degree, and term
maps all agree.

Binary ring operations require operands in the same ring (equal ``nvars``
and ``trunc_degree``); composition additionally requires every substituted
series to have zero constant term, which makes truncated composition exact.

All values are immutable by convention; operations return new series.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, lcm
from typing import Iterable, Mapping, Sequence

from .gaussrat import GaussRat, ZERO, ONE, as_gauss


class MultiSeries:
    """Truncated power series in ``nvars`` variables at total degree ``trunc_degree``."""

    __slots__ = ("nvars", "trunc_degree", "terms")

    def __init__(self, nvars: int, trunc_degree: int, terms: Mapping | None = None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        if trunc_degree < 0:
            raise ValueError("trunc_degree must be non-negative")
        clean: dict[tuple[int, ...], GaussRat] = {}
        if terms:
            for exps, coeff in terms.items():
                e = tuple(exps)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent tuple {e!r} for {nvars} variables")
                if sum(e) > trunc_degree:
                    raise ValueError("exponent degree exceeds truncation")
                c = as_gauss(coeff)
                if c:
                    clean[e] = c
        self.nvars = nvars
        self.trunc_degree = trunc_degree
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, trunc_degree: int, terms: dict) -> "MultiSeries":
        """Trusted constructor: ``terms`` must already be canonical."""
        s = object.__new__(cls)
        s.nvars = nvars
        s.trunc_degree = trunc_degree
        s.terms = terms
        return s

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, trunc_degree: int) -> "MultiSeries":
        return cls._raw(nvars, trunc_degree, {})

    @classmethod
    def constant(cls, value, nvars: int, trunc_degree: int) -> "MultiSeries":
        c = as_gauss(value)
        if not c:
            return cls.zero(nvars, trunc_degree)
        return cls._raw(nvars, trunc_degree, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars: int, trunc_degree: int) -> "MultiSeries":
        return cls.constant(ONE, nvars, trunc_degree)

    @classmethod
    def variable(cls, index: int, nvars: int, trunc_degree: int) -> "MultiSeries":
        if not 0 <= index < nvars:
            raise ValueError("variable index out of range")
        if trunc_degree < 1:
            return cls.zero(nvars, trunc_degree)
        e = tuple(1 if i == index else 0 for i in range(nvars))
        return cls._raw(nvars, trunc_degree, {e: ONE})

    # -- accessors -------------------------------------------------------------

    def coeff(self, exponents: Sequence[int]) -> GaussRat:
        """Coefficient of the given monomial; exact zero when absent."""
        e = tuple(exponents)
        if len(e) != self.nvars:
            raise ValueError("exponent arity mismatch")
        if sum(e) > self.trunc_degree:
            raise ValueError("degree overflow: exponent beyond truncation degree")
        return self.terms.get(e, ZERO)

    def constant_term(self) -> GaussRat:
        return self.terms.get((0,) * self.nvars, ZERO)

    def min_order(self) -> int:
        """Total degree of the lowest nonzero term; trunc_degree + 1 if zero."""
        if not self.terms:
            return self.trunc_degree + 1
        return min(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, new_degree: int) -> "MultiSeries":
        """Drop every term of total degree above ``new_degree``."""
        if new_degree >= self.trunc_degree:
            if new_degree == self.trunc_degree:
                return self
            raise ValueError("cannot raise truncation degree: missing terms are unknown")
        kept = {e: c for e, c in self.terms.items() if sum(e) <= new_degree}
        return MultiSeries._raw(self.nvars, new_degree, kept)

    # -- ring structure ----------------------------------------------------------

    def _check_ring(self, other: "MultiSeries") -> None:
        if self.nvars != other.nvars or self.trunc_degree != other.trunc_degree:
            raise ValueError("incompatible series: nvars/trunc_degree mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiSeries):
            g = GaussRat._coerce(other)
            if g is None:
                return NotImplemented
            other = MultiSeries.constant(g, self.nvars, self.trunc_degree)
        self._check_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiSeries._raw(self.nvars, self.trunc_degree, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiSeries._raw(
            self.nvars, self.trunc_degree, {e: -c for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, MultiSeries):
            g = GaussRat._coerce(other)
            if g is None:
                return NotImplemented
            other = MultiSeries.constant(g, self.nvars, self.trunc_degree)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "MultiSeries":
        c = as_gauss(value)
        if not c:
            return MultiSeries.zero(self.nvars, self.trunc_degree)
        return MultiSeries._raw(
            self.nvars, self.trunc_degree, {e: v * c for e, v in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, MultiSeries):
            g = GaussRat._coerce(other)
            if g is None:
                return NotImplemented
            return self.scale(g)
        self._check_ring(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiSeries.zero(self.nvars, self.trunc_degree)
        if len(a) == 1 or len(b) == 1:
            return self._mul_single(other)
        return self._mul_bulk(other)

    __rmul__ = __mul__

    def _mul_single(self, other: "MultiSeries") -> "MultiSeries":
        if len(self.terms) == 1:
            small, big = self, other
        else:
            small, big = other, self
        D = self.trunc_degree
        (e0, c0), = small.terms.items()
        d0 = sum(e0)
        out = {}
        for e, c in big.terms.items():
            if sum(e) + d0 > D:
                continue
            k = tuple(x + y for x, y in zip(e, e0))
            v = c * c0
            if v:
                out[k] = v
        return MultiSeries._raw(self.nvars, D, out)

    def _mul_bulk(self, other: "MultiSeries") -> "MultiSeries":
        # Clear denominators once per operand and convolve Gaussian integers;
        # a single normalisation per result term restores lowest terms.
        # Exponent tuples are packed into ints (base trunc_degree+1), which is
        # collision-free because kept component sums never exceed the base - 1.
        from bisect import bisect_right

        D = self.trunc_degree
        base = D + 1
        nv = self.nvars

        def integerize(terms):
            den = 1
            for c in terms.values():
                den = lcm(den, c.re.denominator, c.im.denominator)
            items = []
            for e, c in terms.items():
                packed = 0
                for x in e:
                    packed = packed * base + x
                p = c.re.numerator * (den // c.re.denominator)
                q = c.im.numerator * (den // c.im.denominator)
                items.append((sum(e), packed, p, q))
            items.sort(key=lambda t: t[0])
            return den, items

        da, ia = integerize(self.terms)
        db, ib = integerize(other.terms)
        if len(ia) > len(ib):
            ia, ib = ib, ia
        b_degs = [t[0] for t in ib]

        acc: dict[int, list[int]] = {}
        get = acc.get
        for dega, ka, pa, qa in ia:
            hi = bisect_right(b_degs, D - dega)
            for j in range(hi):
                _, kb, pb, qb = ib[j]
                k = ka + kb
                ent = get(k)
                if ent is None:
                    acc[k] = [pa * pb - qa * qb, pa * qb + qa * pb]
                else:
                    ent[0] += pa * pb - qa * qb
                    ent[1] += pa * qb + qa * pb

        den = da * db
        out = {}
        for k, (p, q) in acc.items():
            if p or q:
                e = [0] * nv
                for i in range(nv - 1, -1, -1):
                    k, e[i] = divmod(k, base)
                out[tuple(e)] = GaussRat(Fraction(p, den), Fraction(q, den))
        return MultiSeries._raw(nv, D, out)

    def __pow__(self, n: int) -> "MultiSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiSeries.one(self.nvars, self.trunc_degree)
        for _ in range(n):
            result = result * self
            if result.is_zero():
                break
        return result

    # -- conjugation -----------------------------------------------------------

    def conjugate(self) -> "MultiSeries":
        """Conjugate every coefficient; exponents untouched."""
        return MultiSeries._raw(
            self.nvars,
            self.trunc_degree,
            {e: c.conjugate() for e, c in self.terms.items()},
        )

    # -- units: reciprocal and principal square root ------------------------------

    def reciprocal(self) -> "MultiSeries":
        """The series g with self*g == 1 modulo the truncation degree.

        Newton iteration with degree doubling; requires a nonzero constant
        term.
        """
        c0 = self.constant_term()
        if not c0:
            raise ValueError("not a unit: zero constant term")
        D = self.trunc_degree
        g = MultiSeries.constant(ONE / c0, self.nvars, D)
        d = 1
        while d <= D:
            d *= 2
            # g <- g*(2 - f*g), correct modulo degree d
            g = g * (MultiSeries.constant(2, self.nvars, D) - self * g)
        return g

    def sqrt(self) -> "MultiSeries":
        """The principal square root: u with u*u == self and u(0) == 1.

        Defined only for series with constant term exactly 1.  Newton
        iteration u <- (u + f/u)/2 with degree doubling.
        """
        if self.constant_term() != ONE:
            raise ValueError("sqrt requires unit constant term")
        D = self.trunc_degree
        half = GaussRat(Fraction(1, 2))
        u = MultiSeries.one(self.nvars, D)
        d = 1
        while d <= D:
            d *= 2
            u = (u + self * u.reciprocal()).scale(half)
        return u

    # -- calculus ---------------------------------------------------------------

    def derivative(self, var: int) -> "MultiSeries":
        """Formal partial derivative; the result is exact through degree D-1."""
        if not 0 <= var < self.nvars:
            raise ValueError("variable index out of range")
        new_degree = max(self.trunc_degree - 1, 0)
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k == 0:
                continue
            ne = e[:var] + (k - 1,) + e[var + 1 :]
            if sum(ne) > new_degree:
                continue
            out[ne] = c * k
        return MultiSeries._raw(self.nvars, new_degree, out)

    # -- composition ------------------------------------------------------------

    def compose(self, args: Sequence["MultiSeries"]) -> "MultiSeries":
        """Substitute ``args[i]`` for variable i; exact truncated composition.

        Every argument must live in one common ring and have zero constant
        term (so that high-order terms of ``self`` cannot feed back into low
        degrees, keeping the truncated result exact).
        """
        if len(args) != self.nvars:
            raise ValueError("arity mismatch: need one series per variable")
        nv = args[0].nvars
        Da = args[0].trunc_degree
        for a in args:
            if a.nvars != nv or a.trunc_degree != Da:
                raise ValueError("incompatible series: substitution arguments disagree")
            if a.constant_term():
                raise ValueError("nonzero constant term in substitution")
        D = min(self.trunc_degree, Da)
        base_one = MultiSeries.one(nv, D)
        trunc_args = [a.truncate(D) if a.trunc_degree != D else a for a in args]

        # Lazy power tables; empty powers short-circuit whole monomials.
        tables: list[dict[int, MultiSeries]] = [{0: base_one} for _ in range(self.nvars)]

        def power(i: int, k: int) -> MultiSeries:
            tab = tables[i]
            if k in tab:
                return tab[k]
            j = max(x for x in tab if x <= k)
            p = tab[j]
            while j < k:
                p = p * trunc_args[i]
                j += 1
                tab[j] = p
                if p.is_zero():
                    tab[k] = p
                    return p
            return p

        acc: dict[tuple[int, ...], GaussRat] = {}
        for e, c in self.terms.items():
            if sum(e) > D:
                continue
            prod = None
            dead = False
            for i, k in enumerate(e):
                if k == 0:
                    continue
                p = power(i, k)
                if p.is_zero():
                    dead = True
                    break
                prod = p if prod is None else prod * p
            if dead:
                continue
            if prod is None:
                prod = base_one
            for pe, pc in prod.terms.items():
                v = pc * c
                old = acc.get(pe)
                if old is None:
                    if v:
                        acc[pe] = v
                else:
                    old = old + v
                    if old:
                        acc[pe] = old
                    else:
                        del acc[pe]
        return MultiSeries._raw(nv, D, acc)

    # -- comparisons / formatting ---------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.trunc_degree == other.trunc_degree
            and self.terms == other.terms
        )

    __hash__ = None

    def sorted_terms(self) -> list[tuple[tuple[int, ...], GaussRat]]:
        """Terms in graded-lexicographic order (total degree, then tuple)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))

    def format(self, names: Sequence[str] | None = None, max_terms: int = 12) -> str:
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms()[:max_terms]:
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k
            )
            parts.append(f"({c!r})" + (f"*{mono}" if mono else ""))
        tail = " + ..." if len(self.terms) > max_terms else ""
        return " + ".join(parts) + tail

    def __repr__(self) -> str:
        return (
            f"MultiSeries(nvars={self.nvars}, D={self.trunc_degree}: {self.format()})"
        )


def variables(nvars: int, trunc_degree: int) -> tuple[MultiSeries, ...]:
    """The coordinate series (x0, ..., x_{nvars-1}) in one ring."""
    return tuple(MultiSeries.variable(i, nvars, trunc_degree) for i in range(nvars))


def slice_var(f: MultiSeries, var: int, n: int) -> MultiSeries:
    """n! times the coefficient series of ``x_var^n``, in the remaining variables.

    With f = sum_n f_n(rest) x_var^n / n!, this returns f_n exactly through
    degree D - n.
    """
    if f.nvars < 2:
        raise ValueError("slice requires at least two variables")
    if not 0 <= n <= f.trunc_degree:
        raise ValueError("slice order out of range")
    fact = factorial(n)
    out = {}
    for e, c in f.terms.items():
        if e[var] != n:
            continue
        out[e[:var] + e[var + 1 :]] = c * fact
    return MultiSeries._raw(f.nvars - 1, f.trunc_degree - n, out)


def w_slice(f: MultiSeries, n: int) -> MultiSeries:
    """For bivariate f(z, w): the polynomial f_n(z) = n! * [w^n] f."""
    if f.nvars != 2:
        raise ValueError("w_slice expects a bivariate series")
    return slice_var(f, 1, n)


def lowest_nonzero(f: MultiSeries) -> tuple[tuple[int, ...], GaussRat] | None:
    """The graded-lex first nonzero term, for diagnostics; None if f == 0."""
    if not f.terms:
        return None
    e = min(f.terms, key=lambda t: (sum(t), t))
    return e, f.terms[e]
