"""Morita's p-adic Gamma function on Z_p, odd p.

gamma_p(x) evaluates (-1)^m * prod_{0<j<m, p not | j} j at the integer
representative m of x modulo p^N, which by continuity is the value of the
extended function to absolute precision N. Evaluation is a ranged product
over a cached per-(p, N) checkpoint table, so a fresh (p, N) pair pays one
O(p^N) scan and every later call is O(stride).

Normalization: gamma_p(0) = 1, gamma_p(1) = -1.
"""

import math
import os
from fractions import Fraction

from .padic import PadicElement, PrecisionError, make_padic

_STRIDE = 4096
_tables = {}

_DEFAULT_CAP = 10**7


def _precision_cap():
    cap = os.environ.get("PERIODS_PRECISION_CAP")
    return int(cap) if cap else _DEFAULT_CAP


def _table(p, n):
    """Checkpoint list cp[i] = prod of p-coprime j in (0, i*stride] mod p^n."""
    key = (p, n)
    tab = _tables.get(key)
    if tab is not None:
        return tab
    mod = p**n
    cps = [1]
    acc = 1
    for start in range(1, mod + 1, _STRIDE):
        block = range(start, min(start + _STRIDE, mod + 1))
        acc = acc * math.prod(j for j in block if j % p) % mod
        cps.append(acc)
    _tables[key] = cps
    return cps


def _unit_product_below(m, p, n):
    # prod_{0 < j < m, p not dividing j} j mod p^n
    mod = p**n
    last = (m - 1) // _STRIDE
    acc = _table(p, n)[last]
    acc = acc * math.prod(j for j in range(last * _STRIDE + 1, m) if j % p) % mod
    return acc


def gamma_p(x, n=None):
    """Morita Gamma at the p-adic integer x, to absolute precision n.

    Accepts a PadicElement with v(x) >= 0, or an int/Fraction together with
    an explicit precision. Never reports more precision than the argument
    carries.
    """
    if isinstance(x, (int, Fraction)):
        raise TypeError("pass a PadicElement, or use gamma_p_at(p, x, n)")
    p = x.p
    if p == 2:
        raise ValueError("p = 2 is out of scope for this Gamma implementation")
    if x.min_valuation() is not None and x.min_valuation() < 0:
        raise ValueError("gamma_p needs an integral argument")
    if n is None:
        n = x.abs_precision()
        if n is None:
            raise ValueError("precision required for exact zero arguments")
    ap = x.abs_precision()
    if ap is not None and ap < n:
        n = ap
    if n < 1:
        raise ValueError("precision must be >= 1")
    mod = p**n
    if mod > _precision_cap():
        raise PrecisionError(
            "p^N = %d exceeds the configured cap %d (PERIODS_PRECISION_CAP)"
            % (mod, _precision_cap())
        )
    m = x.lift() % mod
    if m == 0:
        m = mod
    value = _unit_product_below(m, p, n)
    if m % 2:
        value = mod - value
    return PadicElement(p, 0, value, n)


def gamma_p_at(p, x, n):
    """Convenience wrapper: gamma_p of the rational x embedded in Z_p."""
    return gamma_p(make_padic(p, Fraction(x), n) if x != 0 else make_padic(p, 0, n), n)


def _as_residual(diff):
    v = diff.min_valuation()
    return math.inf if v is None else v


def check_translation(x, n):
    """Residual valuation of gamma_p(x+1) - sigma(x) gamma_p(x).

    sigma(x) is -x when x is a unit and -1 when p divides x.
    """
    gx = gamma_p(x, n)
    gx1 = gamma_p(x + 1, n)
    if x.is_unit():
        sigma = -x
    else:
        sigma = make_padic(x.p, -1, n)
    return _as_residual(gx1 - sigma * gx)


def check_reflection(x, n):
    """Sign s with gamma_p(x) gamma_p(1-x) = s, plus the residual valuation."""
    gx = gamma_p(x, n)
    gy = gamma_p(1 - x, n)
    prod = gx * gy
    best = None
    for s in (1, -1):
        r = _as_residual(prod - s)
        if best is None or r > best[1]:
            best = (s, r)
    if best[1] < 1:
        raise RuntimeError(
            "gamma reflection product is not +-1 to any precision; "
            "this indicates an arithmetic bug"
        )
    return best
