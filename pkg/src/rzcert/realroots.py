"""Univariate real-root counting, isolation, and power sums.

Exact mode (rational coefficients) uses Sturm chains for counting and
isolation plus Yun's squarefree decomposition for multiplicities; float mode
classifies companion-matrix eigenvalues with a relative tolerance. Power sums
come from Newton's identities and never touch the roots, so they also work
with symbolic (polynomial) coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .poly import NEG_INF, UnivariatePolynomial, uni_gcd
from .scalars import FLOAT, RATIONAL, imag_part, invert, is_zero

DEFAULT_TOL = 1e-8
INCONCLUSIVE_BAND = 100.0  # nonreal-margin multiplier for the unsure zone


@dataclass
class RootList:
    """Sorted real roots with multiplicities plus the residual complex count."""

    roots: list  # [(value, multiplicity)] strictly increasing
    complex_count: int
    mode: str
    tol: float

    def real_count(self):
        return sum(m for _, m in self.roots)

    def distinct_real(self):
        return len(self.roots)

    def values(self):
        return [r for r, _ in self.roots]


def _require_exact(f):
    if f.mode != RATIONAL:
        raise ValueError("operation requires exact (rational) coefficients")
    for c in f.coeffs:
        if not is_zero(imag_part(c)):
            raise ValueError("operation requires real coefficients")
    return UnivariatePolynomial([Fraction(c) for c in f.coeffs], RATIONAL)


def sturm_chain(f):
    chain = [f, f.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree() > 0:
        _, r = chain[-2].divmod(chain[-1])
        chain.append(-r)
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _sign_variations(values):
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain, x):
    return _sign_variations([g(x) for g in chain])


def _variations_at_inf(chain, positive):
    vals = []
    for g in chain:
        if g.is_zero():
            continue
        lead = g.leading()
        d = g.degree()
        if positive:
            vals.append(lead)
        else:
            vals.append(lead if d % 2 == 0 else -lead)
    return _sign_variations(vals)


def sturm_count(f, a, b):
    """Number of distinct real roots in (a, b]; exact coefficients only."""
    f = _require_exact(f)
    if f.is_zero():
        raise ValueError("zero polynomial")
    a, b = Fraction(a), Fraction(b)
    if f(a) == 0 or f(b) == 0:
        raise ValueError("interval endpoint is a root")
    chain = sturm_chain(f)
    return _variations_at(chain, a) - _variations_at(chain, b)


def _count_all_real_distinct(f):
    chain = sturm_chain(f)
    return _variations_at_inf(chain, False) - _variations_at_inf(chain, True)


def squarefree_part(f):
    g = uni_gcd(f, f.derivative())
    if g.degree() in (0, NEG_INF):
        return f.monic()
    q, _ = f.divmod(g)
    return q.monic()


def yun_decomposition(f):
    """[(squarefree factor, multiplicity)] with f = lc * prod factor^mult."""
    f = f.monic()
    fp = f.derivative()
    a = uni_gcd(f, fp)
    if a.degree() in (0, NEG_INF):
        return [(f, 1)] if f.degree() >= 1 else []
    b, _ = f.divmod(a)
    c, _ = fp.divmod(a)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() >= 1:
        g = uni_gcd(b, d)
        if g.degree() >= 1:
            out.append((g.monic(), i))
            b, _ = b.divmod(g)
            c, _ = d.divmod(g)
        else:
            c = d
        d = c - b.derivative()
        i += 1
    return out


def _cauchy_bound(f):
    lead = abs(Fraction(f.leading()))
    return 1 + max(abs(Fraction(c)) for c in f.coeffs) / lead


def _isolate_squarefree(f, tol):
    """Strictly increasing rational approximations of the real roots of a
    squarefree exact polynomial, each within tol of the true root."""
    if f.degree() < 1:
        return []
    chain = sturm_chain(f)
    bound = _cauchy_bound(f)
    lo, hi = -bound, bound
    while f(lo) == 0:
        lo -= 1
    while f(hi) == 0:
        hi += 1
    total = _variations_at(chain, lo) - _variations_at(chain, hi)
    roots = []

    def refine(a, b, count):
        if count == 0:
            return
        while True:
            mid = (a + b) / 2
            if f(mid) == 0:
                if count == 1:
                    roots.append(mid)
                    return
                eps = (b - a) / 4
                refine(a, mid - eps, _variations_at(chain, a) - _variations_at(chain, mid - eps))
                roots.append(mid)
                refine(mid + eps, b, _variations_at(chain, mid + eps) - _variations_at(chain, b))
                return
            left = _variations_at(chain, a) - _variations_at(chain, mid)
            if count == 1:
                if b - a <= tol:
                    roots.append((a + b) / 2)
                    return
                if left == 1:
                    b = mid
                else:
                    a = mid
            else:
                if left == 0:
                    a = mid
                elif left == count:
                    b = mid
                else:
                    refine(a, mid, left)
                    refine(mid, b, count - left)
                    return

    refine(Fraction(lo), Fraction(hi), total)
    return sorted(roots)


def real_roots(f, tol=DEFAULT_TOL):
    """Isolate the real roots of f with multiplicities; see :class:`RootList`."""
    if f.is_zero():
        raise ValueError("zero polynomial has no well-defined roots")
    if f.mode == RATIONAL:
        fe = _require_exact(f)
        deg = int(fe.degree())
        if deg == 0:
            return RootList([], 0, RATIONAL, tol)
        found = []
        for factor, mult in yun_decomposition(fe):
            for r in _isolate_squarefree(factor, Fraction(tol)):
                found.append((float(r), mult))
        found.sort()
        real_total = sum(m for _, m in found)
        return RootList(found, deg - real_total, RATIONAL, tol)
    return _real_roots_float(f, tol)


def _real_roots_float(f, tol):
    coeffs = f.float_coeffs()
    mags = np.abs(coeffs)
    top = mags.max()
    nz = np.nonzero(mags > 1e-14 * top)[0]
    if len(nz) == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    coeffs = coeffs[: nz[-1] + 1]
    deg = len(coeffs) - 1
    if deg == 0:
        return RootList([], 0, FLOAT, tol)
    if np.allclose(coeffs.imag, 0):
        rts = np.roots(coeffs.real[::-1])
    else:
        rts = np.roots(coeffs[::-1])
    reals = []
    complex_count = 0
    for z in rts:
        if abs(z.imag) <= tol * (1.0 + abs(z)):
            reals.append(z.real)
        else:
            complex_count += 1
    reals.sort()
    clustered = []
    for r in reals:
        if clustered and abs(r - clustered[-1][0]) <= tol * (1.0 + abs(r)) * 10:
            v, m = clustered[-1]
            clustered[-1] = ((v * m + r) / (m + 1), m + 1)
        else:
            clustered.append((r, 1))
    return RootList(clustered, complex_count, FLOAT, tol)


def real_root_profile(f, tol=DEFAULT_TOL):
    """(n_real, n_nonreal, worst_margin) for float verdicts with an unsure band.

    worst_margin is the smallest |Im z| / (1 + |z|) among roots classified
    nonreal (inf when all roots are real). Callers treat margins inside
    (tol, INCONCLUSIVE_BAND * tol] as inconclusive.
    """
    if f.mode == RATIONAL:
        rl = real_roots(f, tol)
        return rl.real_count(), rl.complex_count, float("inf") if rl.complex_count == 0 else 1.0
    coeffs = f.float_coeffs()
    mags = np.abs(coeffs)
    if not len(mags) or mags.max() == 0:
        raise ValueError("zero polynomial")
    nz = np.nonzero(mags > 1e-14 * mags.max())[0]
    coeffs = coeffs[: nz[-1] + 1]
    if len(coeffs) == 1:
        return 0, 0, float("inf")
    rts = np.roots(coeffs[::-1] if np.any(coeffs.imag) else coeffs.real[::-1])
    n_real = 0
    n_nonreal = 0
    worst = float("inf")
    for z in rts:
        margin = abs(z.imag) / (1.0 + abs(z))
        if margin <= tol:
            n_real += 1
        else:
            n_nonreal += 1
            worst = min(worst, margin)
    return n_real, n_nonreal, worst


def all_real(f, tol=DEFAULT_TOL):
    """True iff every root of f is real (vacuously true for constants)."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.mode == RATIONAL:
        fe = _require_exact(f)
        if fe.degree() == 0:
            return True
        sf = squarefree_part(fe)
        return _count_all_real_distinct(sf) == sf.degree()
    n_real, n_nonreal, _ = real_root_profile(f, tol)
    return n_nonreal == 0


def power_sums(coeffs, k_max):
    """Power sums p_0..p_k_max of the roots via Newton's identities.

    ``coeffs`` is ascending; the leading coefficient must be an invertible
    scalar. Entries may be numbers or any ring elements supporting +, -, *
    and multiplication by the scalar inverse of the leading coefficient
    (polynomials included), so the recurrence runs symbolically.
    """
    coeffs = list(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial")
    lead = coeffs[-1]
    m = len(coeffs) - 1
    if m == 0:
        return [0] * (k_max + 1)
    inv = _lead_inverse(lead)
    monic = [c * inv for c in coeffs]
    a = monic[:-1]  # a[j] multiplies t^j; recurrence uses a_{m-i}
    sums = [m]  # p_0 counts the roots
    for k in range(1, k_max + 1):
        if k <= m:
            acc = k * a[m - k]
            for i in range(1, k):
                acc = acc + a[m - i] * sums[k - i]
        else:
            acc = 0
            for i in range(1, m + 1):
                acc = acc + a[m - i] * sums[k - i]
        sums.append(-acc)
    return sums


def _lead_inverse(lead):
    if isinstance(lead, (int, Fraction)):
        return invert(lead)
    if isinstance(lead, (float, complex)):
        return 1.0 / lead
    # ring element: expect a constant polynomial with an invertible value
    if hasattr(lead, "is_zero") and hasattr(lead, "degree"):
        if lead.degree() not in (0, NEG_INF):
            raise ValueError("leading coefficient is not a constant")
        const = lead.coeff((0,) * lead.nvars)
        return invert(const) if lead.mode == RATIONAL else 1.0 / complex(const)
    return invert(lead)
