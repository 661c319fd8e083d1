"""Local power-series solutions of D^2 f = -q f with D = q(t) d/dt.

Here q(t) = (t + lam0)(t + lam0 - 1) is the quadratic that turns d/dt into
the operator lam(lam - 1) d/dlam in the coordinate t = lam - lam0.  The two
normalized solutions alpha (value 1, D-derivative e at the base point) and
beta (value 0, D-derivative 1) generate the solution space, and the matrix

    [[D(beta), -D(alpha)], [-beta, alpha]]

evaluated near the base point has determinant 1 by the Wronskian argument.

Coefficients live in Q_p and the recurrence divides by (k+1)(k+2) at each
order, so valuations can sink like -v_p(k!); evaluation accounts for that
through an explicit tail bound instead of pretending the series converges
like a unit-coefficient one.
"""

from dataclasses import dataclass

from .padic import PadicElement, PrecisionError, make_padic


def _vp_factorial(k, p):
    """v_p(k!) by Legendre's sum."""
    total = 0
    q = p
    while q <= k:
        total += k // q
        q *= p
    return total


@dataclass(frozen=True)
class FormalSeries:
    """Truncated power series in t = lam - lam0 with p-adic coefficients.

    coeffs holds c_0 .. c_order; tail_slack records how far the computed
    coefficients dip below the -v_p(k!) growth model (0 when they respect
    it), and feeds the evaluation tail bound.
    """

    lam0: PadicElement
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("series needs at least the constant term")
        p = self.lam0.p
        slack = 0
        for k, c in enumerate(self.coeffs):
            v = c.min_valuation()
            if v is None:
                continue
            slack = max(slack, -v - _vp_factorial(k, p))
        object.__setattr__(self, "tail_slack", slack)

    @property
    def p(self):
        return self.lam0.p

    def order(self):
        return len(self.coeffs) - 1

    def _check_compatible(self, other):
        if self.p != other.p:
            raise ValueError("series live over different primes")
        gap = self.lam0 - other.lam0
        if not (gap.is_exact_zero() or gap.is_zero_at_precision()):
            raise ValueError("series have different base points")

    def __add__(self, other):
        self._check_compatible(other)
        m = min(self.order(), other.order())
        return FormalSeries(
            self.lam0,
            [self.coeffs[k] + other.coeffs[k] for k in range(m + 1)],
        )

    def __sub__(self, other):
        self._check_compatible(other)
        m = min(self.order(), other.order())
        return FormalSeries(
            self.lam0,
            [self.coeffs[k] - other.coeffs[k] for k in range(m + 1)],
        )

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            self._check_compatible(other)
            m = min(self.order(), other.order())
            out = []
            for k in range(m + 1):
                acc = None
                for i in range(k + 1):
                    term = self.coeffs[i] * other.coeffs[k - i]
                    acc = term if acc is None else acc + term
                out.append(acc)
            return FormalSeries(self.lam0, out)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        return FormalSeries(self.lam0, [c * scalar for c in self.coeffs])

    def differentiate(self):
        if self.order() == 0:
            return FormalSeries(self.lam0, [self.coeffs[0] - self.coeffs[0]])
        return FormalSeries(
            self.lam0,
            [(k + 1) * self.coeffs[k + 1] for k in range(self.order())],
        )

    def evaluate(self, lam):
        """Value at lam, with the truncation tail folded into the precision.

        Requires v(lam - lam0) >= 1.  The dropped orders k > T contribute at
        valuation >= k v(t) - v_p(k!) - tail_slack, which is minimized at
        k = T + 1 because v(t) >= 1 > 1/(p-1).
        """
        t = lam - self.lam0
        if t.is_exact_zero():
            return self.coeffs[0]
        vt = t.min_valuation()
        if vt < 1:
            raise ValueError("evaluation point is outside the unit disc")
        acc = self.coeffs[-1]
        for k in range(self.order() - 1, -1, -1):
            acc = acc * t + self.coeffs[k]
        kk = self.order() + 1
        tail = kk * vt - _vp_factorial(kk, self.p) - self.tail_slack
        # v_p(k!) <= (k-1)/(p-1) < k vt keeps later terms above this bound,
        # so the whole dropped tail is O(p^tail); intersect acc with that
        if acc.is_exact_zero():
            return acc._zero_at(tail)
        if acc.is_zero_at_precision():
            return acc._zero_at(min(acc.val, tail))
        if tail <= acc.val:
            return acc._zero_at(tail)
        if tail < acc.abs_precision():
            return acc.with_rel_prec(tail - acc.val)
        return acc


def apply_D(f):
    """q(t) f'(t) for q(t) = (t + lam0)(t + lam0 - 1), order drops by one."""
    lam0 = f.lam0
    q0 = lam0 * (lam0 - 1)
    q1 = 2 * lam0 - 1
    d = f.differentiate()
    out = []
    for k in range(d.order() + 1):
        acc = q0 * d.coeffs[k]
        if k >= 1:
            acc = acc + q1 * d.coeffs[k - 1]
        if k >= 2:
            acc = acc + d.coeffs[k - 2]
        out.append(acc)
    return FormalSeries(lam0, out)


def solve_second_order(lam0, value, d_value, order, n):
    """One solution of D^2 f = -q f with prescribed f and Df at the base.

    Works order-by-order: writing u = Df, the t^k coefficient of
    Du + q f = 0 pins c_{k+2} after dividing by q0^2 (k+1)(k+2), which is
    where v_p((k+2)!)-style precision loss enters.
    """
    if not isinstance(lam0, PadicElement):
        raise TypeError("base point must be a p-adic element")
    p = lam0.p
    q0 = lam0 * (lam0 - 1)
    if not q0.is_unit():
        raise ValueError("lam0 (lam0 - 1) must be a unit")
    if order < 2:
        raise ValueError("order must be at least 2")
    zero = make_padic(p, 0, n)
    q1 = 2 * lam0 - 1
    if not isinstance(value, PadicElement):
        value = make_padic(p, value, n)
    if not isinstance(d_value, PadicElement):
        d_value = make_padic(p, d_value, n)

    c = [value, d_value / q0]
    u = [q0 * c[1]]
    for k in range(order - 1):
        cm1 = c[k - 1] if k >= 1 else zero
        cm2 = c[k - 2] if k >= 2 else zero
        um1 = u[k - 1] if k >= 1 else zero
        rest = (
            q0 * (k + 1) * (q1 * (k + 1) * c[k + 1] + k * c[k])
            + q1 * k * u[k]
            + (k - 1) * um1
            + q0 * c[k]
            + q1 * cm1
            + cm2
        )
        ck2 = -rest / (q0 * q0 * ((k + 1) * (k + 2)))
        c.append(ck2)
        u.append(q0 * (k + 2) * ck2 + q1 * (k + 1) * c[k + 1] + k * c[k])
    return FormalSeries(lam0, c)


def solve_katz_ode(lam0, e, order, n):
    """The normalized solution pair (alpha, beta) through the given order.

    alpha has value 1 and D-derivative e at the base point, beta value 0 and
    D-derivative 1.
    """
    p = lam0.p if isinstance(lam0, PadicElement) else None
    if isinstance(e, PadicElement):
        if not (e.is_exact_zero() or e.min_valuation() >= 0):
            raise ValueError("e must be integral")
    elif p is not None:
        e = make_padic(p, e, n, integral=True)
    alpha = solve_second_order(lam0, 1, e, order, n)
    beta = solve_second_order(lam0, 0, 1, order, n)
    return alpha, beta


def wronskian_defect(alpha, beta):
    """Orders where alpha D(beta) - beta D(alpha) provably differs from 1.

    The Wronskian of genuine solutions is the constant 1, so any coefficient
    with a certain nonzero digit convicts the solver; coefficients that are
    merely zero-to-their-precision are fine (precision decays with order,
    it does not lie).
    """
    w = alpha * apply_D(beta) - beta * apply_D(alpha)
    bad = []
    for k, c in enumerate(w.coeffs):
        target = c - 1 if k == 0 else c
        if not (target.is_exact_zero() or target.is_zero_at_precision()):
            bad.append(k)
    return bad


@dataclass(frozen=True)
class HypergeomPeriodMatrix:
    entries: tuple  # ((D beta, -D alpha), (-beta, alpha)) evaluated
    lam: PadicElement
    lam0: PadicElement
    e: PadicElement
    order: int

    def determinant(self):
        (a, b), (c, d) = self.entries
        return a * d - b * c

    def achieved_precision(self):
        worst = None
        for row in self.entries:
            for x in row:
                a = x.abs_precision()
                if a is None:
                    continue
                worst = a if worst is None else min(worst, a)
        return worst


def period_matrix_hypergeom(sol, lam, min_precision=None):
    """Evaluate [[D beta, -D alpha], [-beta, alpha]] at lam.

    min_precision, when given, turns a quiet precision shortfall (from the
    truncation tail or coefficient divisions) into a PrecisionError naming
    the achievable precision.
    """
    alpha, beta = sol
    d_alpha = apply_D(alpha)
    d_beta = apply_D(beta)
    q0 = alpha.lam0 * (alpha.lam0 - 1)
    e = q0 * alpha.coeffs[1]
    entries = (
        (d_beta.evaluate(lam), -d_alpha.evaluate(lam)),
        (-beta.evaluate(lam), alpha.evaluate(lam)),
    )
    matrix = HypergeomPeriodMatrix(
        entries=entries, lam=lam, lam0=alpha.lam0, e=e, order=alpha.order()
    )
    if min_precision is not None:
        got = matrix.achieved_precision()
        if got is not None and got < min_precision:
            raise PrecisionError(
                "achievable absolute precision %d is below the requested %d"
                % (got, min_precision)
            )
    return matrix
