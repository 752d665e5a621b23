"""Polynomial serialization: the JSON form and the line-per-term text form.

JSON:
    { "vars": d, "mode": "rational"|"float",
      "terms": [ {"exp": [e1,...,ed], "re": "num/den"|float, "im": ...}, ... ] }

Text: one term per line, ``coeff * x1^e1 x2^e2 ...``. Rational coefficients are
``num/den``; a complex coefficient is written ``(re,im)``.

Both parsers reject duplicate exponent vectors.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .poly import Polynomial
from .scalars import (FLOAT, RATIONAL, format_exact, imag_part, real_part,
                      scalar_from_json_pair, scalar_to_json_pair)


class PolyFormatError(ValueError):
    """Malformed polynomial input; carries a human-readable position."""


def poly_to_json_dict(p):
    terms_map = dict(p.terms())
    terms = []
    for e in sorted(terms_map, key=lambda t: (-sum(t), t)):
        re_v, im_v = scalar_to_json_pair(terms_map[e], p.mode)
        terms.append({"exp": list(e), "re": re_v, "im": im_v})
    return {"vars": p.nvars, "mode": p.mode, "terms": terms}


def poly_to_json(p, indent=None):
    return json.dumps(poly_to_json_dict(p), indent=indent, sort_keys=True)


def poly_from_json_dict(data):
    try:
        nvars = int(data["vars"])
        mode = data.get("mode", RATIONAL)
        raw_terms = data["terms"]
    except (KeyError, TypeError) as exc:
        raise PolyFormatError(f"polynomial JSON missing field: {exc}") from exc
    if mode not in (RATIONAL, FLOAT):
        raise PolyFormatError(f"unknown coefficient mode {mode!r}")
    terms = {}
    for idx, t in enumerate(raw_terms):
        try:
            exp = tuple(int(e) for e in t["exp"])
            c = scalar_from_json_pair(t["re"], t.get("im", 0), mode)
        except (KeyError, TypeError, ValueError) as exc:
            raise PolyFormatError(f"term {idx}: {exc}") from exc
        if len(exp) != nvars:
            raise PolyFormatError(f"term {idx}: exponent length {len(exp)} != vars {nvars}")
        if exp in terms:
            raise PolyFormatError(f"term {idx}: duplicate exponent vector {list(exp)}")
        terms[exp] = c
    return Polynomial(nvars, terms, mode)


def poly_from_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolyFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return poly_from_json_dict(data)


_MONO_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def _format_coeff(c, mode):
    if mode == RATIONAL:
        re_v, im_v = real_part(c), imag_part(c)
        if im_v == 0:
            return format_exact(re_v)
        return f"({format_exact(re_v)},{format_exact(im_v)})"
    z = complex(c)
    if z.imag == 0:
        return repr(z.real)
    return f"({z.real!r},{z.imag!r})"


def poly_to_text(p):
    lines = []
    terms = dict(p.terms())
    for e in sorted(terms, key=lambda t: (-sum(t), t)):
        mono = " ".join(f"x{i + 1}^{k}" for i, k in enumerate(e) if k)
        cs = _format_coeff(terms[e], p.mode)
        lines.append(f"{cs} * {mono}" if mono else cs)
    return "\n".join(lines) if lines else "0"


def _parse_coeff(text, mode, where):
    text = text.strip()
    try:
        if text.startswith("(") and text.endswith(")"):
            re_s, im_s = text[1:-1].split(",")
        else:
            re_s, im_s = text, "0"
        if mode == RATIONAL:
            return scalar_from_json_pair(re_s.strip(), im_s.strip(), RATIONAL)
        return complex(float(Fraction(re_s.strip())), float(Fraction(im_s.strip())))
    except (ValueError, ZeroDivisionError) as exc:
        raise PolyFormatError(f"{where}: bad coefficient {text!r}") from exc


def poly_from_text(text, nvars=None, mode=RATIONAL):
    terms = {}
    max_var = 0
    parsed = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "0":
            continue
        where = f"line {ln}"
        if "*" in line:
            coeff_s, mono_s = line.split("*", 1)
        else:
            coeff_s, mono_s = line, ""
        c = _parse_coeff(coeff_s, mode, where)
        exps = {}
        for tok in mono_s.split():
            m = _MONO_RE.match(tok)
            if not m:
                raise PolyFormatError(f"{where}: bad monomial factor {tok!r}")
            idx = int(m.group(1))
            if idx < 1:
                raise PolyFormatError(f"{where}: variable index must be >= 1")
            power = int(m.group(2) or 1)
            exps[idx - 1] = exps.get(idx - 1, 0) + power
            max_var = max(max_var, idx)
        parsed.append((where, exps, c))
    d = nvars if nvars is not None else max_var
    for where, exps, c in parsed:
        e = tuple(exps.get(i, 0) for i in range(d))
        if any(i >= d for i in exps):
            raise PolyFormatError(f"{where}: variable index exceeds vars = {d}")
        if e in terms:
            raise PolyFormatError(f"{where}: duplicate exponent vector {list(e)}")
        terms[e] = c
    return Polynomial(d, terms, mode)


def load_poly(text):
    """Accept either the JSON form or the text form (sniffed on first char)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return poly_from_json(text)
    header_mode = RATIONAL
    for line in text.splitlines():
        if line.strip().startswith("# mode: float"):
            header_mode = FLOAT
    return poly_from_text(text, mode=header_mode)
