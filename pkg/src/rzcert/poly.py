"""Sparse multivariate polynomials, line restrictions, and polynomial matrices.

Coefficients live in one of two modes (see :mod:`rzcert.scalars`): exact
rationals/Gaussian rationals, or complex doubles. All values are immutable
after construction and every operation returns a fresh object.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import scalars
from .scalars import FLOAT, RATIONAL, QQi, conj, demote, invert, is_zero

NEG_INF = float("-inf")


def _coerce_coeff(c, mode):
    if mode == FLOAT:
        return complex(c)
    if isinstance(c, QQi):
        return demote(c)
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficient {c!r} is not exact; use float mode")


def monomials_of_degree(nvars, deg):
    """All exponent tuples of length nvars with total degree exactly deg."""
    if nvars == 0:
        if deg == 0:
            yield ()
        return
    for bars in itertools.combinations(range(deg + nvars - 1), nvars - 1):
        prev = -1
        exp = []
        for b in bars:
            exp.append(b - prev - 1)
            prev = b
        exp.append(deg + nvars - 2 - prev)
        yield tuple(exp)


def monomials_up_to(nvars, deg):
    for k in range(deg + 1):
        yield from monomials_of_degree(nvars, k)


class Polynomial:
    """Sparse multivariate polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("nvars", "mode", "_terms")

    def __init__(self, nvars, terms=None, mode=RATIONAL):
        self.nvars = int(nvars)
        self.mode = mode
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.nvars:
                    raise ValueError("exponent length does not match nvars")
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponent")
                c = _coerce_coeff(c, mode)
                if not is_zero(c):
                    clean[exp] = c
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars, mode=RATIONAL):
        return cls(nvars, {}, mode)

    @classmethod
    def constant(cls, value, nvars, mode=RATIONAL):
        return cls(nvars, {(0,) * nvars: value}, mode)

    @classmethod
    def variable(cls, i, nvars, mode=RATIONAL):
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1}, mode)

    @classmethod
    def variables(cls, nvars, mode=RATIONAL):
        return [cls.variable(i, nvars, mode) for i in range(nvars)]

    # -- inspection --------------------------------------------------------

    def terms(self):
        return self._terms.items()

    def coeff(self, exp):
        c = self._terms.get(tuple(exp))
        if c is None:
            return Fraction(0) if self.mode == RATIONAL else 0j
        return c

    def is_zero(self):
        return not self._terms

    def degree(self):
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def num_terms(self):
        return len(self._terms)

    def max_abs_coeff(self):
        if not self._terms:
            return 0.0
        return max(scalars.magnitude(c) for c in self._terms.values())

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.nvars == other.nvars and self.mode == other.mode
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.nvars, self.mode, frozenset(self._terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        if self.mode != other.mode:
            raise ValueError("coefficient mode mismatch")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars, self.mode)
        self._check_compatible(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = demote(s)
        return Polynomial(self.nvars, terms, self.mode)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self._terms.items()}, self.mode)

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.nvars, self.mode)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce_coeff(other, self.mode)
            if is_zero(c):
                return Polynomial.zero(self.nvars, self.mode)
            return Polynomial(self.nvars,
                              {e: v * c for e, v in self._terms.items()}, self.mode)
        self._check_compatible(other)
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                out[e] = s
        return Polynomial(self.nvars, out, self.mode)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1, self.nvars, self.mode)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def conjugate(self):
        return Polynomial(self.nvars, {e: conj(c) for e, c in self._terms.items()},
                          self.mode)

    def chop(self, tol=1e-12):
        """Drop float-mode terms tiny relative to the largest coefficient."""
        if self.mode != FLOAT or not self._terms:
            return self
        cutoff = tol * self.max_abs_coeff()
        return Polynomial(self.nvars,
                          {e: c for e, c in self._terms.items() if abs(c) > cutoff},
                          self.mode)

    def real_part(self):
        return Polynomial(self.nvars,
                          {e: scalars.real_part(c) for e, c in self._terms.items()},
                          self.mode if self.mode == RATIONAL else FLOAT)

    # -- evaluation and calculus -------------------------------------------

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match nvars")
        if self.mode == FLOAT:
            point = [complex(v) for v in point]
        total = Fraction(0) if self.mode == RATIONAL else 0j
        powers = [{} for _ in range(self.nvars)]
        for e, c in self._terms.items():
            v = c
            for i, ei in enumerate(e):
                if ei:
                    pw = powers[i].get(ei)
                    if pw is None:
                        pw = point[i] ** ei
                        powers[i][ei] = pw
                    v = v * pw
            total = total + v
        return demote(total)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple, np.ndarray)):
            point = point[0]
        return self.evaluate(point)

    def compiled(self):
        """Fast float evaluator: point array -> complex value."""
        if not self._terms:
            return lambda x: 0j
        exps = np.array(list(self._terms.keys()), dtype=float)
        coeffs = np.array([complex(c) for c in self._terms.values()])

        def ev(x):
            x = np.asarray(x, dtype=complex)
            with np.errstate(divide="ignore", invalid="ignore"):
                mono = np.prod(np.where(exps > 0, x[None, :] ** exps, 1.0), axis=1)
            return complex(coeffs @ mono)

        return ev

    def partial(self, i):
        out = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return Polynomial(self.nvars, out, self.mode)

    def gradient(self):
        return [self.partial(i) for i in range(self.nvars)]

    def shift(self, x0):
        """p(x + x0) expanded exactly."""
        if len(x0) != self.nvars:
            raise ValueError("shift dimension mismatch")
        x0 = [_coerce_coeff(v, self.mode) for v in x0]
        if all(is_zero(v) for v in x0):
            return self
        out = {}
        for e, c in self._terms.items():
            # per-variable binomial tables: (x_i + a_i)^{e_i}
            tables = []
            for i, ei in enumerate(e):
                a = x0[i]
                row = []
                for k in range(ei + 1):
                    row.append(math.comb(ei, k) * a ** (ei - k))
                tables.append(row)
            for ks in itertools.product(*(range(ei + 1) for ei in e)):
                v = c
                for i, k in enumerate(ks):
                    v = v * tables[i][k]
                if is_zero(v):
                    continue
                s = out.get(ks, 0) + v
                out[ks] = s
        return Polynomial(self.nvars, out, self.mode)

    def homogeneous_components(self):
        """Map total degree -> homogeneous part."""
        buckets = {}
        for e, c in self._terms.items():
            buckets.setdefault(sum(e), {})[e] = c
        return {k: Polynomial(self.nvars, t, self.mode) for k, t in buckets.items()}

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return Polynomial(self.nvars, {e: complex(c) for e, c in self._terms.items()},
                          FLOAT)

    # -- printing ----------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self.to_text() or '0'})"

    def to_text(self):
        parts = []
        for e in sorted(self._terms, key=lambda t: (-sum(t), t)):
            c = self._terms[e]
            mono = " ".join(f"x{i + 1}^{k}" for i, k in enumerate(e) if k)
            cs = str(c) if not isinstance(c, complex) else repr(c)
            parts.append(f"{cs} * {mono}" if mono else f"{cs}")
        return " + ".join(parts)


class HomogeneousPolynomial(Polynomial):
    """Polynomial whose stored terms all have the same total degree."""

    __slots__ = ("hom_degree",)

    def __init__(self, nvars, terms=None, mode=RATIONAL, hom_degree=None):
        super().__init__(nvars, terms, mode)
        degs = {sum(e) for e in self._terms}
        if len(degs) > 1:
            raise ValueError("terms are not homogeneous of a single degree")
        if degs:
            d = degs.pop()
            if hom_degree is not None and hom_degree != d:
                raise ValueError(f"terms have degree {d}, expected {hom_degree}")
            self.hom_degree = d
        else:
            self.hom_degree = hom_degree if hom_degree is not None else 0

    @classmethod
    def from_polynomial(cls, p, hom_degree=None):
        return cls(p.nvars, dict(p.terms()), p.mode, hom_degree)

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return HomogeneousPolynomial(
            self.nvars, {e: complex(c) for e, c in self.terms()}, FLOAT,
            self.hom_degree)


def homogenize(p, m=None):
    """X0^m * p(X1/X0, ..., Xd/X0); variable 0 of the result is X0."""
    deg = p.degree()
    if m is None:
        m = deg if deg != NEG_INF else 0
    if deg != NEG_INF and m < deg:
        raise ValueError(f"homogenization degree {m} below deg p = {deg}")
    terms = {}
    for e, c in p.terms():
        terms[(m - sum(e),) + e] = c
    return HomogeneousPolynomial(p.nvars + 1, terms, p.mode, hom_degree=m)


def dehomogenize(P):
    """Substitute X0 = 1; inverse of homogenize when X0 does not divide P."""
    terms = {}
    for e, c in P.terms():
        key = e[1:]
        s = terms.get(key, 0) + c
        terms[key] = s
    return Polynomial(P.nvars - 1, terms, P.mode)


def directional_derivative(P, x0coords):
    """Sum_a x0_a dP/dX_a; for homogeneous P of degree m the result has degree m-1."""
    coords = list(x0coords)
    if len(coords) != P.nvars:
        raise ValueError("direction dimension mismatch")
    if all(is_zero(_coerce_coeff(v, P.mode)) for v in coords):
        raise ValueError("zero vector is not a projective point")
    out = Polynomial.zero(P.nvars, P.mode)
    for i, v in enumerate(coords):
        c = _coerce_coeff(v, P.mode)
        if not is_zero(c):
            out = out + P.partial(i) * c
    if isinstance(P, HomogeneousPolynomial):
        return HomogeneousPolynomial.from_polynomial(
            out, hom_degree=max(P.hom_degree - 1, 0))
    return out


# ---------------------------------------------------------------------------
# univariate polynomials (dense, ascending coefficients)


class UnivariatePolynomial:
    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs, mode=RATIONAL):
        cs = [_coerce_coeff(c, mode) for c in coeffs]
        while cs and is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.mode = mode

    @classmethod
    def zero(cls, mode=RATIONAL):
        return cls([], mode)

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, UnivariatePolynomial)
                and self.coeffs == other.coeffs and self.mode == other.mode)

    def __hash__(self):
        return hash((self.coeffs, self.mode))

    def __call__(self, t):
        acc = Fraction(0) if self.mode == RATIONAL else 0j
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return demote(acc)

    def __add__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            other = UnivariatePolynomial([other], self.mode)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [(self.coeffs[i] if i < len(self.coeffs) else 0)
              + (other.coeffs[i] if i < len(other.coeffs) else 0) for i in range(n)]
        return UnivariatePolynomial(cs, self.mode)

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePolynomial([-c for c in self.coeffs], self.mode)

    def __sub__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            other = UnivariatePolynomial([other], self.mode)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return UnivariatePolynomial([c * other for c in self.coeffs], self.mode)
        if self.is_zero() or other.is_zero():
            return UnivariatePolynomial.zero(self.mode)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UnivariatePolynomial(out, self.mode)

    __rmul__ = __mul__

    def derivative(self):
        return UnivariatePolynomial(
            [c * k for k, c in enumerate(self.coeffs)][1:], self.mode)

    def monic(self):
        if self.is_zero():
            raise ValueError("zero polynomial cannot be made monic")
        inv = invert(self.coeffs[-1])
        return UnivariatePolynomial([demote(c * inv) for c in self.coeffs], self.mode)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return UnivariatePolynomial.zero(self.mode), self
        quot = [0] * (dq + 1)
        inv = invert(other.coeffs[-1])
        for k in range(dq, -1, -1):
            if len(rem) < len(other.coeffs) + k:
                continue
            c = demote(rem[len(other.coeffs) - 1 + k] * inv)
            quot[k] = c
            if not is_zero(c):
                for j, b in enumerate(other.coeffs):
                    rem[j + k] = rem[j + k] - c * b
        return (UnivariatePolynomial(quot, self.mode),
                UnivariatePolynomial(rem[:len(other.coeffs) - 1], self.mode))

    def reversed_padded(self, m):
        """Coefficient reversal at length m+1: t^m * f(1/t) for deg f <= m."""
        if self.degree() != NEG_INF and self.degree() > m:
            raise ValueError("degree exceeds reversal length")
        cs = list(self.coeffs) + [0] * (m + 1 - len(self.coeffs))
        return UnivariatePolynomial(cs[::-1], self.mode)

    def float_coeffs(self):
        return np.array([complex(c) for c in self.coeffs])

    def real_float_coeffs(self):
        return np.array([complex(c).real for c in self.coeffs])

    def __repr__(self):
        return f"UnivariatePolynomial({list(self.coeffs)!r})"


def uni_gcd(f, g):
    """Monic gcd over a field (exact scalars expected)."""
    a, b = f, g
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.monic()


# ---------------------------------------------------------------------------
# line restrictions


def restrict_to_line(p, x0, direction):
    """Exact coefficients of t -> p(x0 + t*direction)."""
    if len(x0) != p.nvars or len(direction) != p.nvars:
        raise ValueError("line dimension mismatch")
    mode = p.mode
    x0 = [_coerce_coeff(v, mode) for v in x0]
    direction = [_coerce_coeff(v, mode) for v in direction]
    deg = p.degree()
    if deg == NEG_INF:
        return UnivariatePolynomial.zero(mode)
    out = [0] * (int(deg) + 1)
    for e, c in p.terms():
        # product over i of (x0_i + t d_i)^{e_i}, accumulated by convolution
        acc = [c]
        for i, ei in enumerate(e):
            if ei == 0:
                continue
            a, d = x0[i], direction[i]
            fac = [math.comb(ei, k) * a ** (ei - k) * d ** k for k in range(ei + 1)]
            acc = _convolve(acc, fac)
        for k, v in enumerate(acc):
            out[k] = out[k] + v
    return UnivariatePolynomial(out, mode)


def _convolve(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def reversed_restriction(p, x0, direction, m):
    """t^m * p(x0 + direction/t): reversal of the line restriction padded to m+1."""
    deg = p.degree()
    if deg != NEG_INF and m < deg:
        raise ValueError(f"reversal length {m} below deg p = {deg}")
    return restrict_to_line(p, x0, direction).reversed_padded(m)


class LineRestrictor:
    """Precomputed machinery for restricting one polynomial to many lines.

    p(x0 + t*dir) = sum_k c_k(dir) t^k where c_k is the degree-k homogeneous
    component of p shifted to x0. Computing the shift once makes per-line
    restriction a handful of polynomial evaluations.
    """

    def __init__(self, p, x0):
        self.p = p
        self.mode = p.mode
        shifted = p.shift(list(x0))
        comps = shifted.homogeneous_components()
        deg = p.degree()
        top = int(deg) if deg != NEG_INF else 0
        self.components = [comps.get(k, Polynomial.zero(p.nvars, p.mode))
                           for k in range(top + 1)]
        self._fast = None
        if p.mode == FLOAT:
            self._fast = [c.compiled() for c in self.components]

    def univariate(self, direction):
        if self._fast is not None:
            d = np.asarray(direction, dtype=complex)
            return UnivariatePolynomial([f(d) for f in self._fast], FLOAT)
        return UnivariatePolynomial([c.evaluate(direction) for c in self.components],
                                    self.mode)

    def reversed(self, direction, m):
        return self.univariate(direction).reversed_padded(m)


# ---------------------------------------------------------------------------
# polynomial matrices


class PolyMatrix:
    """Rectangular matrix with Polynomial entries sharing nvars and mode."""

    __slots__ = ("entries", "nrows", "ncols", "nvars", "mode")

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.nrows = len(self.entries)
        self.ncols = len(self.entries[0]) if self.nrows else 0
        if any(len(row) != self.ncols for row in self.entries):
            raise ValueError("ragged polynomial matrix")
        first = self.entries[0][0] if self.nrows and self.ncols else None
        self.nvars = first.nvars if first is not None else 0
        self.mode = first.mode if first is not None else RATIONAL
        for row in self.entries:
            for p in row:
                if p.nvars != self.nvars or p.mode != self.mode:
                    raise ValueError("entry variable counts or modes disagree")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_square(self):
        return self.nrows == self.ncols

    def transpose(self):
        return PolyMatrix([[self.entries[i][j] for i in range(self.nrows)]
                           for j in range(self.ncols)])

    def conjugate_transpose(self):
        return PolyMatrix([[self.entries[i][j].conjugate() for i in range(self.nrows)]
                           for j in range(self.ncols)])

    def __add__(self, other):
        return PolyMatrix([[a + b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return PolyMatrix([[a - b for a, b in zip(r1, r2)]
                           for r1, r2 in zip(self.entries, other.entries)])

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.ncols != other.nrows:
                raise ValueError("matrix shape mismatch")
            out = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    s = Polynomial.zero(self.nvars, self.mode)
                    for k in range(self.ncols):
                        s = s + self.entries[i][k] * other.entries[k][j]
                    row.append(s)
                out.append(row)
            return PolyMatrix(out)
        return PolyMatrix([[p * other for p in row] for row in self.entries])

    def det(self):
        """Determinant by bitmask dynamic programming over column subsets.

        Works over any commutative coefficient ring (no divisions), costing
        O(2^n * n) polynomial multiplications.
        """
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Polynomial.constant(1, self.nvars, self.mode)
        states = {0: Polynomial.constant(1, self.nvars, self.mode)}
        for i in range(n):
            new = {}
            for mask, val in states.items():
                if val.is_zero():
                    continue
                for j in range(n):
                    bit = 1 << j
                    if mask & bit:
                        continue
                    entry = self.entries[i][j]
                    if entry.is_zero():
                        continue
                    inversions = (mask >> (j + 1)).bit_count()
                    term = val * entry
                    if inversions & 1:
                        term = -term
                    key = mask | bit
                    acc = new.get(key)
                    new[key] = term if acc is None else acc + term
            states = new
            if not states:
                return Polynomial.zero(self.nvars, self.mode)
        return states.get((1 << n) - 1, Polynomial.zero(self.nvars, self.mode))

    def minor(self, drop_row, drop_col):
        return PolyMatrix([[self.entries[i][j] for j in range(self.ncols)
                            if j != drop_col]
                           for i in range(self.nrows) if i != drop_row])

    def adjugate(self, size_bound=6):
        """Adjugate via signed minors: self * adj(self) = det(self) * I."""
        if not self.is_square():
            raise ValueError("adjugate of a non-square matrix")
        n = self.nrows
        if n > size_bound:
            raise ValueError(f"adjugate size {n} exceeds bound {size_bound}")
        if n == 0:
            return PolyMatrix([])
        if n == 1:
            return PolyMatrix([[Polynomial.constant(1, self.nvars, self.mode)]])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                # (i, j) entry is the cofactor of the (j, i) position
                m = self.minor(j, i).det()
                out[i][j] = m if (i + j) % 2 == 0 else -m
        return PolyMatrix(out)

    def evaluate(self, point):
        return [[p.evaluate(point) for p in row] for row in self.entries]

    def to_numpy(self, point):
        return np.array([[complex(p.evaluate(point)) for p in row]
                         for row in self.entries], dtype=complex)

    def to_float(self):
        return PolyMatrix([[p.to_float() for p in row] for row in self.entries])

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


# ---------------------------------------------------------------------------
# exact division


def exact_divide(p, q, tol=1e-10):
    """Divide p by q; returns (quotient, exact_flag).

    Rational mode runs multivariate long division and demands a zero
    remainder. Float mode solves for the quotient coefficients by least
    squares over the expected support and accepts residuals below
    tol * max(1, |p|).
    """
    if q.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.nvars != q.nvars or p.mode != q.mode:
        raise ValueError("operand mismatch in exact_divide")
    if p.is_zero():
        return Polynomial.zero(p.nvars, p.mode), True
    if p.mode == RATIONAL:
        return _exact_divide_rational(p, q)
    return _exact_divide_float(p, q, tol)


def _deglex_key(e):
    return (sum(e), e)


def _exact_divide_rational(p, q):
    q_terms = sorted(q.terms(), key=lambda t: _deglex_key(t[0]))
    lead_exp, lead_coeff = q_terms[-1]
    lead_inv = invert(lead_coeff)
    rem = dict(p.terms())
    quot = {}
    stuck = False
    while rem:
        e = max(rem, key=_deglex_key)
        c = rem.pop(e)
        if all(a >= b for a, b in zip(e, lead_exp)):
            qe = tuple(a - b for a, b in zip(e, lead_exp))
            qc = demote(c * lead_inv)
            quot[qe] = quot.get(qe, 0) + qc
            for fe, fc in q.terms():
                ne = tuple(a + b for a, b in zip(qe, fe))
                if ne == e:
                    continue
                s = rem.get(ne, 0) - qc * fc
                if is_zero(s):
                    rem.pop(ne, None)
                else:
                    rem[ne] = demote(s)
        else:
            stuck = True  # this term can never be cancelled
            break
    if stuck or rem:
        return None, False
    return Polynomial(p.nvars, quot, p.mode), True


def _exact_divide_float(p, q, tol):
    dq = int(p.degree() - q.degree())
    if dq < 0:
        return None, False
    p_hom = _is_homogeneous(p)
    q_hom = _is_homogeneous(q)
    if p_hom and q_hom:
        support = list(monomials_of_degree(p.nvars, dq))
    else:
        support = list(monomials_up_to(p.nvars, dq))
    rows = {}
    for ci, e in enumerate(support):
        for fe, fc in q.terms():
            ne = tuple(a + b for a, b in zip(e, fe))
            d = rows.setdefault(ne, {})
            d[ci] = d.get(ci, 0) + complex(fc)
    row_keys = sorted(set(rows) | {e for e, _ in p.terms()})
    a = np.zeros((len(row_keys), len(support)), dtype=complex)
    b = np.zeros(len(row_keys), dtype=complex)
    for ri, e in enumerate(row_keys):
        for ci, v in rows.get(e, {}).items():
            a[ri, ci] = v
        b[ri] = complex(p.coeff(e))
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    scale = max(1.0, float(np.linalg.norm(b)))
    res = float(np.linalg.norm(a @ x - b)) / scale
    if res > tol:
        return None, False
    quot = Polynomial(p.nvars, {e: x[i] for i, e in enumerate(support)}, FLOAT)
    return quot.chop(), True


def _is_homogeneous(p):
    degs = {sum(e) for e, _ in p.terms()}
    return len(degs) <= 1


# ---------------------------------------------------------------------------
# projective points


class ProjectivePoint:
    """Point of P^d with a unique normalized representative.

    Normalization scales the first coordinate whose magnitude is not
    negligible (relative tolerance in float mode; exact nonzero otherwise)
    to 1.
    """

    __slots__ = ("coords", "mode")

    def __init__(self, coords, mode=None, normalize=True, tol=1e-12):
        coords = list(coords)
        if mode is None:
            mode = FLOAT if any(isinstance(c, (float, complex)) for c in coords) \
                else RATIONAL
        if mode == FLOAT:
            coords = [complex(c) for c in coords]
        else:
            coords = [demote(c) if isinstance(c, QQi) else _coerce_coeff(c, RATIONAL)
                      for c in coords]
        if all(is_zero(c) if mode == RATIONAL else abs(c) == 0 for c in coords):
            raise ValueError("projective point needs a nonzero coordinate")
        self.mode = mode
        if normalize:
            coords = self._normalized(coords, tol)
        self.coords = tuple(coords)

    def _normalized(self, coords, tol):
        if self.mode == RATIONAL:
            lead = next(c for c in coords if not is_zero(c))
            inv = invert(lead)
            return [demote(c * inv) for c in coords]
        top = max(abs(c) for c in coords)
        lead = next(c for c in coords if abs(c) > tol * top)
        return [c / lead for c in coords]

    def __len__(self):
        return len(self.coords)

    def conjugate(self):
        return ProjectivePoint([conj(c) for c in self.coords], self.mode)

    def is_real(self, tol=1e-9):
        if self.mode == RATIONAL:
            return all(is_zero(scalars.imag_part(c)) for c in self.coords)
        top = max(abs(c) for c in self.coords)
        return all(abs(complex(c).imag) <= tol * max(1.0, top) for c in self.coords)

    def to_complex(self):
        return np.array([complex(c) for c in self.coords])

    def approx_eq(self, other, tol=1e-9):
        if self.mode == RATIONAL and other.mode == RATIONAL:
            return self.coords == other.coords
        a, b = self.to_complex(), other.to_complex()
        return bool(np.max(np.abs(a - b)) <= tol * max(1.0, float(np.max(np.abs(a)))))

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"[{', '.join(str(c) for c in self.coords)}]"
