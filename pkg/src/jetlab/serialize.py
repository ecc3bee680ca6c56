"""JSON wire formats.

All numbers travel as exact fraction strings ("3/5", "-2", "7"); series
terms are listed in graded-lexicographic order so that serialisation is
deterministic and round trips are byte-exact.

Schemas:

  series     {"nvars": v, "trunc_degree": D, "vars": ["z", ...],
              "terms": [{"e": [e1, ..., ev], "re": "p/q", "im": "p/q"}, ...]}
  gauss      {"re": "p/q", "im": "p/q"}   (bare "p/q" accepted for reals)
  params     {"eps": gauss, "r": "p/q", "alpha": gauss, "s": "p/q"}
  group elem {"zeta": gauss, "alpha": gauss, "s": "p/q"}
  seed       {"fz_bar": gauss, "g0_bar": gauss, "fw_bar": gauss, "gww_re": "p/q"}
  map        {"f": series, "g": series}
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence

from .automorphisms import AutParams, GroupElem
from .gaussrat import GaussRat
from .hypersurface import BIVAR_NAMES, FormalMap
from .jet_solver import JetSeed
from .series import MultiSeries


def fraction_to_str(x: Fraction) -> str:
    return str(x)


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def gauss_to_doc(x: GaussRat) -> dict:
    return {"re": str(x.re), "im": str(x.im)}


def gauss_from_doc(doc) -> GaussRat:
    if isinstance(doc, str):
        return GaussRat(fraction_from_str(doc))
    if isinstance(doc, dict):
        return GaussRat(
            fraction_from_str(doc.get("re", "0")), fraction_from_str(doc.get("im", "0"))
        )
    raise ValueError(f"cannot parse Gaussian rational from {doc!r}")


def real_to_doc(x: GaussRat) -> str:
    if x.im:
        raise ValueError("expected a real value")
    return str(x.re)


# -- series ---------------------------------------------------------------------


def series_to_doc(s: MultiSeries, var_names: Sequence[str] | None = None) -> dict:
    if var_names is None:
        var_names = [f"x{i}" for i in range(s.nvars)]
    if len(var_names) != s.nvars:
        raise ValueError("one variable name per variable required")
    return {
        "nvars": s.nvars,
        "trunc_degree": s.trunc_degree,
        "vars": list(var_names),
        "terms": [
            {"e": list(e), "re": str(c.re), "im": str(c.im)}
            for e, c in s.sorted_terms()
        ],
    }


def series_from_doc(doc: dict) -> MultiSeries:
    terms = {
        tuple(t["e"]): GaussRat(
            fraction_from_str(t.get("re", "0")), fraction_from_str(t.get("im", "0"))
        )
        for t in doc.get("terms", [])
    }
    return MultiSeries(doc["nvars"], doc["trunc_degree"], terms)


# -- parameters and group elements ---------------------------------------------


def params_to_doc(p: AutParams) -> dict:
    return {
        "eps": gauss_to_doc(p.eps),
        "r": real_to_doc(p.r),
        "alpha": gauss_to_doc(p.alpha),
        "s": real_to_doc(p.s),
    }


def params_from_doc(doc: dict) -> AutParams:
    try:
        return AutParams(
            gauss_from_doc(doc["eps"]),
            gauss_from_doc(doc["r"]),
            gauss_from_doc(doc["alpha"]),
            gauss_from_doc(doc["s"]),
        )
    except KeyError as exc:
        raise ValueError(f"params file missing key: {exc}") from exc


def group_elem_to_doc(e: GroupElem) -> dict:
    return {
        "zeta": gauss_to_doc(e.zeta),
        "alpha": gauss_to_doc(e.alpha),
        "s": real_to_doc(e.s),
    }


def group_elem_from_doc(doc: dict) -> GroupElem:
    try:
        return GroupElem(
            gauss_from_doc(doc["zeta"]),
            gauss_from_doc(doc["alpha"]),
            gauss_from_doc(doc["s"]),
        )
    except KeyError as exc:
        raise ValueError(f"group element missing key: {exc}") from exc


def seed_to_doc(seed: JetSeed) -> dict:
    return {
        "fz_bar": gauss_to_doc(seed.fz_bar),
        "g0_bar": gauss_to_doc(seed.g0_bar),
        "fw_bar": gauss_to_doc(seed.fw_bar),
        "gww_re": real_to_doc(seed.gww_re),
    }


def seed_from_doc(doc: dict) -> JetSeed:
    try:
        return JetSeed(
            gauss_from_doc(doc["fz_bar"]),
            gauss_from_doc(doc["g0_bar"]),
            gauss_from_doc(doc["fw_bar"]),
            gauss_from_doc(doc["gww_re"]),
        )
    except KeyError as exc:
        raise ValueError(f"seed file missing key: {exc}") from exc


def map_to_doc(H: FormalMap) -> dict:
    return {
        "f": series_to_doc(H.f, BIVAR_NAMES),
        "g": series_to_doc(H.g, BIVAR_NAMES),
    }


def map_from_doc(doc: dict) -> FormalMap:
    try:
        return FormalMap(series_from_doc(doc["f"]), series_from_doc(doc["g"]))
    except KeyError as exc:
        raise ValueError(f"map file missing key: {exc}") from exc


def dumps(doc) -> str:
    """Canonical JSON: sorted keys, stable separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1) + "\n"
