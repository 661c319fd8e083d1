"""Frobenius matrices of elliptic curves, with a point-counting oracle.

The curve is y^2 = f(x) for a monic integer cubic f with good reduction
at an odd prime p >= 5.  Lifting Frobenius by x -> x^p and expanding
1/sigma(y) as a binomial series in (f(x^p) - f(x)^p)/f(x)^p gives a
differential with high-order poles along y = 0; pushing the pole order
back down with exact forms expresses the image of each basis element in
the basis {dx/y, x dx/y} again.  Counting points over F_p directly
supplies an independent value for the trace.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_prime, kronecker
from .padic import PrecisionError, make_padic


def _vp_int(m, p):
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


# -- integer polynomials, coefficients low to high -------------------------

def _int_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_pow(a, e):
    out = [1]
    for _ in range(e):
        out = _int_mul(out, a)
    return out


# -- rational polynomials, for the one-off Bezout pair ---------------------

def _frac_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _frac_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _frac_trim(out)


def _frac_sub(a, b):
    out = list(a) + [Fraction(0)] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] -= y
    return _frac_trim(out)


def _frac_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 0)
    for top in range(len(a) - 1, db - 1, -1):
        c = a[top] / lead
        if c:
            q[top - db] = c
            for t in range(db + 1):
                a[top - db + t] -= c * b[t]
    return q, _frac_trim(a[:db])


def _bezout_unit(f, g):
    """u, v with u*f + v*g = 1, for coprime f, g with integer coefficients.

    The pair with deg u < deg g and deg v < deg f is unique, and its
    denominators divide the resultant; for a cubic of good reduction that
    keeps every coefficient p-integral.
    """
    r0 = [Fraction(c) for c in f]
    r1 = [Fraction(c) for c in g]
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = _frac_divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _frac_sub(u0, _frac_mul(q, u1))
        v0, v1 = v1, _frac_sub(v0, _frac_mul(q, v1))
    if len(r0) != 1:
        raise ValueError("polynomials share a factor")
    c = r0[0]
    return [x / c for x in u0], [x / c for x in v0]


# -- polynomials with tracked p-adic coefficients ---------------------------

def _padd(a, b, zero):
    out = list(a) + [zero] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = out[i] + y
    return out


def _psub(a, b, zero):
    out = list(a) + [zero] * (len(b) - len(a))
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return out


def _pmul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_exact_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _pscale(a, s):
    return [c * s for c in a]


def _pderiv(a):
    return [a[i] * i for i in range(1, len(a))]


def _pdivmod_monic(a, d):
    """Quotient and remainder by a monic divisor, highest term first."""
    dd = len(d) - 1
    r = list(a)
    if len(r) <= dd:
        return [], r
    q = [None] * (len(r) - dd)
    for top in range(len(r) - 1, dd - 1, -1):
        c = r[top]
        q[top - dd] = c
        if not c.is_exact_zero():
            for t in range(dd):
                r[top - dd + t] = r[top - dd + t] - c * d[t]
    return q, r[:dd]


def _cap_abs(x, n):
    """Truncate an element to absolute precision n, never extending."""
    if x.is_exact_zero():
        return x._zero_at(n)
    if x.rel_prec == 0 or x.val >= n:
        return x._zero_at(min(x.abs_precision(), n))
    keep = n - x.val
    if keep < x.rel_prec:
        return x.with_rel_prec(keep)
    return x


# -- curves and the counting oracle -----------------------------------------

@dataclass(frozen=True)
class EllipticCurveW:
    """y^2 = f(x), f a monic integer cubic, p >= 5 of good reduction."""

    f: tuple
    p: int
    n: int

    def __post_init__(self):
        f = tuple(int(c) for c in self.f)
        object.__setattr__(self, "f", f)
        if len(f) != 4 or f[3] != 1:
            raise ValueError("f must be a monic cubic, coefficients low to high")
        if self.p < 5 or not is_prime(self.p):
            raise ValueError("p must be a prime >= 5")
        if self.n < 1:
            raise ValueError("precision must be at least 1")
        if self.discriminant() % self.p == 0:
            raise ValueError("bad reduction: the discriminant vanishes mod p")

    def discriminant(self):
        c0, c1, c2 = self.f[0], self.f[1], self.f[2]
        return (18 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2
                - 4 * c1**3 - 27 * c0**2)


def count_points(f, p, method="character"):
    """Trace of Frobenius a_p = p + 1 - #E(F_p) by direct enumeration.

    Two independent loops are available: "character" sums the quadratic
    character of f(x), "table" counts square roots per x from a
    precomputed table of squares.  They must agree, and the result must
    sit inside the Weil bound; both are hard postconditions.
    """
    f = tuple(int(c) for c in f)
    if len(f) != 4 or f[3] != 1:
        raise ValueError("f must be a monic cubic, coefficients low to high")
    if p < 3 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    c0, c1, c2 = f[0], f[1], f[2]
    disc = (18 * c2 * c1 * c0 - 4 * c2**3 * c0 + c2**2 * c1**2
            - 4 * c1**3 - 27 * c0**2)
    if disc % p == 0:
        raise ValueError("bad reduction: the discriminant vanishes mod p")
    values = [(x * x * x + c2 * x * x + c1 * x + c0) % p for x in range(p)]
    if method == "character":
        a_p = -sum(kronecker(v, p) for v in values)
    elif method == "table":
        roots = [0] * p
        for y in range(p):
            roots[y * y % p] += 1
        affine = sum(roots[v] for v in values)
        a_p = p - affine
    else:
        raise ValueError("method must be 'character' or 'table'")
    if a_p * a_p > 4 * p:
        raise ArithmeticError("point count violates the Weil bound")
    return a_p


# -- the Frobenius matrix ----------------------------------------------------

@dataclass(frozen=True)
class FrobeniusMatrix:
    """Action on the basis {dx/y, x dx/y}; column i is the image of basis i."""

    entries: tuple
    curve: EllipticCurveW
    precision: int

    def trace(self):
        return self.entries[0][0] + self.entries[1][1]

    def determinant(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c


def _default_buffer(p, m_init):
    # worst case charges every p-divisible odd denominator 2m-1 to the
    # running numerator, plus slack for the degree-reduction divisions
    # and the discarded zero-class remainders
    return 4 + sum(_vp_int(2 * m - 1, p) for m in range(2, m_init + 1))


def _reduce_differential(num, m_init, fP, fprP, vP, p, W, zero):
    """Rewrite num(x)/y^(2*m_init+1) dx as a*dx/y + b*x dx/y mod exact forms."""
    A = list(num)
    for m in range(m_init, 0, -1):
        # split A = R*f + S*f'; then S f'/y^(2m+1) dx is exact up to
        # (2/(2m-1)) S'/y^(2m-1) dx, and R f/y^(2m+1) loses a pole order
        S = _pdivmod_monic(_pmul(A, vP, zero), fP)[1]
        R, rem = _pdivmod_monic(_psub(A, _pmul(S, fprP, zero), zero), fP)
        for c in rem:
            if not (c.is_exact_zero() or c.is_zero_at_precision()):
                raise ArithmeticError("pole reduction left a nonzero remainder")
        scal = make_padic(p, Fraction(2, 2 * m - 1), W)
        A = _padd(R, _pscale(_pderiv(S), scal), zero)
    j = len(A) - 1
    while j >= 2:
        c = A[j]
        if c.is_exact_zero():
            A = A[:j]
        else:
            # d(x^(j-2) y) = ((j-2) x^(j-3) f + x^(j-2) f'/2) dx/y has
            # leading coefficient (2j-1)/2 at x^j
            rel = [zero] * (j + 1)
            if j >= 3:
                for t, cf in enumerate(fP):
                    rel[j - 3 + t] = rel[j - 3 + t] + cf * (j - 2)
            half = make_padic(p, Fraction(1, 2), W)
            for t, cf in enumerate(fprP):
                rel[j - 2 + t] = rel[j - 2 + t] + cf * half
            s = c * make_padic(p, Fraction(2, 2 * j - 1), W)
            A = [A[t] - s * rel[t] for t in range(j)]
        j = len(A) - 1
    while len(A) < 2:
        A = A + [zero]
    return A[0], A[1]


def kedlaya_frobenius(curve, series_terms=None, buffer_digits=None):
    """Frobenius matrix on {dx/y, x dx/y} to the curve's precision.

    series_terms is the binomial truncation order K; the dropped tail
    carries valuation at least K+1 before reduction losses, so the
    default K = n + 3 leaves margin.  buffer_digits widens the working
    precision to absorb the divisions by 2m - 1; the default covers the
    exact worst case.  Entries come back capped at absolute precision n.
    """
    p, n = curve.p, curve.n
    K = series_terms if series_terms is not None else n + 3
    if K < n:
        raise ValueError("series truncation is below the target precision")
    m_init = p * K + (p - 1) // 2
    if buffer_digits is None:
        buffer_digits = _default_buffer(p, m_init)
    W = n + buffer_digits

    f = list(curve.f)
    fp_int = _int_pow(f, p)
    fxp = [0] * (3 * p + 1)
    for i, c in enumerate(f):
        fxp[i * p] = c
    diff = [a - b for a, b in zip(fxp, fp_int)]
    if any(c % p for c in diff):
        raise ArithmeticError("Frobenius defect is not divisible by p")

    # sum_k binom(-1/2, k) diff^k fp^(K-k), cleared of the 4^K denominator
    fp_pows = [[1]]
    for _ in range(K):
        fp_pows.append(_int_mul(fp_pows[-1], fp_int))
    G = [0] * (3 * p * K + 1)
    dk = [1]
    binom = 1
    for k in range(K + 1):
        coef = binom * 4 ** (K - k) * (-1 if k % 2 else 1)
        for i, c in enumerate(_int_mul(dk, fp_pows[K - k])):
            G[i] += coef * c
        dk = _int_mul(dk, diff)
        binom = binom * (2 * k + 1) * (2 * k + 2) // ((k + 1) * (k + 1))

    zero = make_padic(p, 0, W)
    fP = [make_padic(p, c, W) for c in f]
    fprP = [make_padic(p, f[i] * i, W) for i in range(1, 4)]
    vP = [make_padic(p, c, W)
          for c in _bezout_unit(f, [f[i] * i for i in range(1, 4)])[1]]

    den = 4**K
    cols = []
    for i in (0, 1):
        shift = p - 1 + p * i
        num = [zero] * shift
        num += [make_padic(p, Fraction(p * c, den), W) for c in G]
        cols.append(_reduce_differential(num, m_init, fP, fprP, vP, p, W, zero))
    for col in cols:
        for c in col:
            got = c.abs_precision()
            if got is not None and got < n:
                raise PrecisionError(
                    "working buffer exhausted: achieved absolute precision "
                    "%d is below the requested %d" % (got, n)
                )
    entries = (
        (_cap_abs(cols[0][0], n), _cap_abs(cols[1][0], n)),
        (_cap_abs(cols[0][1], n), _cap_abs(cols[1][1], n)),
    )
    return FrobeniusMatrix(entries=entries, curve=curve, precision=n)


def frobenius_selftest(curve):
    """Recompute with a longer series and twice the buffer; digits must hold.

    Also gates the result against the point-counting oracle.  Raises
    PrecisionError if either probe disagrees, which is the signal that
    the empirical truncation defaults are inadequate for this input.
    """
    p, n = curve.p, curve.n
    K = n + 3
    b = _default_buffer(p, p * K + (p - 1) // 2)
    base = kedlaya_frobenius(curve, series_terms=K, buffer_digits=b)
    K2 = K + 3
    b2 = max(2 * b, _default_buffer(p, p * K2 + (p - 1) // 2))
    deep = kedlaya_frobenius(curve, series_terms=K2, buffer_digits=b2)
    for r in (0, 1):
        for c in (0, 1):
            d = base.entries[r][c] - deep.entries[r][c]
            if not (d.is_exact_zero() or (d.min_valuation() or 0) >= n):
                raise PrecisionError(
                    "matrix digits moved under a deeper recomputation"
                )
    cert = charpoly_certificate(base, count_points(curve.f, p))
    if not cert.ok:
        raise PrecisionError("matrix disagrees with the point count")
    return base


@dataclass(frozen=True)
class CharpolyCertificate:
    """Residual valuations of trace - a_p and det - p against a target."""

    ok: bool
    trace_valuation: object
    det_valuation: object
    precision: int


def charpoly_certificate(matrix, a_p):
    """Check trace = a_p and det = p to the matrix's precision.

    A residual valuation of None means the difference cancelled exactly.
    """
    n = matrix.precision
    tv = (matrix.trace() - a_p).min_valuation()
    dv = (matrix.determinant() - matrix.curve.p).min_valuation()
    ok = (tv is None or tv >= n) and (dv is None or dv >= n)
    return CharpolyCertificate(
        ok=ok, trace_valuation=tv, det_valuation=dv, precision=n
    )
