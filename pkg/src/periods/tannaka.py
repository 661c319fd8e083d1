"""Symbolic bookkeeping for groups, representations, and matrix coefficients.

Dimension arithmetic for the handful of algebraic groups the period
bounds need, Clebsch-Gordan decomposition for SL2, and an exact
computation inside O(SL2) = Q[a,b,c,d]/(ad - bc - 1) that decides, per
degree, which irreducible blocks of the torus-invariant coordinate ring
the matrix coefficients of a given representation actually generate.
All linear algebra is over exact rationals; nothing is rounded.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

MAX_CLOSURE_CAP = 12

_GROUP_KINDS = ("torus", "gl2", "sl2", "pgl2", "fiber-product", "trivial")


@dataclass(frozen=True)
class GroupDesc:
    kind: str
    rank: int = 0

    def __post_init__(self):
        if self.kind not in _GROUP_KINDS:
            raise ValueError("unknown group kind %r" % (self.kind,))
        if self.kind == "torus":
            if self.rank < 1:
                raise ValueError("a torus needs a positive rank")
        elif self.rank != 0:
            raise ValueError("only tori carry a rank")


GL2 = GroupDesc("gl2")
SL2 = GroupDesc("sl2")
PGL2 = GroupDesc("pgl2")
FIBER_PRODUCT = GroupDesc("fiber-product")
TRIVIAL = GroupDesc("trivial")


def torus(rank):
    return GroupDesc("torus", rank)


def dim_group(g):
    if g.kind == "torus":
        return g.rank
    if g.kind == "gl2":
        return 4
    if g.kind in ("sl2", "pgl2"):
        return 3
    if g.kind == "fiber-product":
        # {(a, b, A) : ab = det A} inside Gm^2 x GL2, one equation
        return 2 + 4 - 1
    return 0


def _max_torus_rank(g):
    return {"torus": g.rank, "gl2": 2, "sl2": 1, "pgl2": 1,
            "fiber-product": 3, "trivial": 0}[g.kind]


def homog_dim(g, h):
    """Dimension of G/H for a designated embedding of H in G."""
    if h.kind == "trivial":
        pass
    elif h.kind == "torus" and h.rank <= _max_torus_rank(g):
        pass
    else:
        raise ValueError("no designated embedding of %r in %r"
                         % (h.kind, g.kind))
    return dim_group(g) - dim_group(h)


@dataclass(frozen=True)
class BoundChain:
    """Three nested trdeg bounds, tightest first, with strictness flags."""

    bounds: tuple
    strict: tuple


def _as_dim(x):
    if isinstance(x, GroupDesc):
        return dim_group(x)
    return int(x)


def trdeg_bound_chain(g_dr_m, g_crys_m, g_dr_mm, g_crys_mm):
    """Chain dim difference of the dual pair <= pair difference <= ambient.

    Inputs are dimensions (or group descriptors, which are measured).
    Rejects data that cannot come from nested fixed groups: negative
    differences or an out-of-order chain.
    """
    a = _as_dim(g_dr_m)
    b = _as_dim(g_crys_m)
    c = _as_dim(g_dr_mm)
    d = _as_dim(g_crys_mm)
    tight, mid, loose = c - d, a - b, a
    if tight < 0 or mid < 0:
        raise ValueError("a fixed group outgrew its ambient group")
    if not tight <= mid <= loose:
        raise ValueError("bounds do not chain")
    return BoundChain(bounds=(tight, mid, loose),
                      strict=(tight < mid, mid < loose))


def clebsch_gordan(r1, r2):
    """Sym^r1 x Sym^r2 = sum of Sym^(r1+r2-2i), highest first."""
    if r1 < 0 or r2 < 0:
        raise ValueError("symmetric powers need nonnegative exponents")
    return tuple(r1 + r2 - 2 * i for i in range(min(r1, r2) + 1))


@dataclass(frozen=True)
class RepDesc:
    """Sym^r(std) twisted by det^s; s is forced where the group forces it."""

    group: str
    r: int
    s: int = None

    def __post_init__(self):
        if self.group not in ("sl2", "pgl2", "gl2"):
            raise ValueError("unknown group %r" % (self.group,))
        if self.r < 0:
            raise ValueError("r must be nonnegative")
        if self.group == "sl2":
            if self.s not in (None, 0):
                raise ValueError("SL2 has no determinant twist")
            object.__setattr__(self, "s", 0)
        elif self.group == "pgl2":
            if self.r % 2:
                raise ValueError("odd symmetric powers do not factor "
                                 "through PGL2")
            balanced = -(self.r // 2)
            if self.s not in (None, balanced):
                raise ValueError("the central twist is forced to %d"
                                 % balanced)
            object.__setattr__(self, "s", balanced)
        elif self.s is None:
            object.__setattr__(self, "s", 0)

    def dimension(self):
        return self.r + 1


def invariant_dim(v, h):
    """Dimension of the subspace fixed by the tagged subgroup.

    Tags: "trivial", "maximal-torus", and for GL2 also "diagonal"
    (scalars) and "second-diagonal" (t fixed to diag(1, t)).
    """
    r, s = v.r, v.s
    if h == "trivial":
        return r + 1
    if h == "maximal-torus":
        if v.group in ("sl2", "pgl2"):
            return 1 if r % 2 == 0 else 0
        return 1 if (r + 2 * s == 0 and 0 <= -s <= r) else 0
    if h == "diagonal" and v.group == "gl2":
        return r + 1 if r + 2 * s == 0 else 0
    if h == "second-diagonal" and v.group == "gl2":
        return 1 if 0 <= -s <= r else 0
    raise ValueError("unsupported subgroup tag %r for %r" % (h, v.group))


# -- the coordinate ring of SL2 ---------------------------------------------
#
# Monomials are exponent tuples (i, j, k, l) for a^i b^j c^k d^l.  The
# relation ad = 1 + bc rewrites any monomial containing both a and d,
# so normal-form monomials have min(i, l) = 0; that rewriting is
# confluent and the surviving monomials are a linear basis.  Right
# translation by diag(t, 1/t) scales a, c by t and b, d by 1/t; left
# translation scales a, b by t and c, d by 1/t.

def _reduce_terms(pairs):
    out = {}
    stack = [(tuple(key), Fraction(coeff)) for key, coeff in pairs]
    while stack:
        key, coeff = stack.pop()
        if not coeff:
            continue
        i, j, k, l = key
        if min(key) < 0 or len(key) != 4:
            raise ValueError("bad monomial %r" % (key,))
        if i > 0 and l > 0:
            stack.append(((i - 1, j, k, l - 1), coeff))
            stack.append(((i - 1, j + 1, k + 1, l - 1), coeff))
        else:
            c = out.get(key, 0) + coeff
            if c:
                out[key] = c
            elif key in out:
                del out[key]
    return out


@dataclass(frozen=True)
class CoeffRingElement:
    """An element of Q[a,b,c,d]/(ad - bc - 1) in normal form."""

    terms: tuple

    def __post_init__(self):
        reduced = _reduce_terms(self.terms)
        object.__setattr__(self, "terms", tuple(sorted(reduced.items())))

    @classmethod
    def monomial(cls, i, j, k, l, coeff=1):
        return cls(terms=(((i, j, k, l), coeff),))

    @classmethod
    def one(cls):
        return cls.monomial(0, 0, 0, 0)

    @classmethod
    def zero(cls):
        return cls(terms=())

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        if not self.terms:
            return None
        return max(sum(key) for key, _ in self.terms)

    def right_weights(self):
        return {key[0] - key[1] + key[2] - key[3] for key, _ in self.terms}

    def left_weight_split(self):
        buckets = {}
        for key, coeff in self.terms:
            w = key[0] + key[1] - key[2] - key[3]
            buckets.setdefault(w, []).append((key, coeff))
        return {w: CoeffRingElement(terms=tuple(p))
                for w, p in buckets.items()}

    def __add__(self, other):
        if not isinstance(other, CoeffRingElement):
            return NotImplemented
        return CoeffRingElement(terms=self.terms + other.terms)

    def __neg__(self):
        return CoeffRingElement(
            terms=tuple((k, -c) for k, c in self.terms)
        )

    def __sub__(self, other):
        if not isinstance(other, CoeffRingElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CoeffRingElement(
                terms=tuple((k, c * other) for k, c in self.terms)
            )
        if not isinstance(other, CoeffRingElement):
            return NotImplemented
        prod = []
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                prod.append((tuple(x + y for x, y in zip(k1, k2)), c1 * c2))
        return CoeffRingElement(terms=tuple(prod))

    __rmul__ = __mul__


def matrix_coefficients(r):
    """Coefficient functions of the torus-fixed vector of Sym^r, r even.

    The fixed line of Sym^r(std) is spanned by (e1 e2)^(r/2); applying a
    group element and reading off the coefficient of each basis monomial
    e1^(r-m) e2^m gives r + 1 functions of degree r with right weight 0
    and left weights r - 2m.  They span one copy of Sym^r on the left.
    """
    if r < 0 or r % 2:
        raise ValueError("the torus fixes nothing in odd symmetric powers")
    h = r // 2
    out = []
    for m in range(r + 1):
        pairs = []
        for s in range(max(0, m - h), min(h, m) + 1):
            t = m - s
            pairs.append(((h - s, h - t, s, t),
                          Fraction(comb(h, s) * comb(h, t))))
        out.append(CoeffRingElement(terms=tuple(pairs)))
    return tuple(out)


# -- exact sparse linear algebra over the rationals --------------------------

def _echelon_insert(pivots, vec):
    """Reduce vec against the pivot rows; install it if independent."""
    vec = dict(vec)
    while vec:
        lead = min(vec)
        if lead not in pivots:
            inv = Fraction(1) / vec[lead]
            pivots[lead] = {k: c * inv for k, c in vec.items()}
            return True
        factor = vec[lead]
        for k, c in pivots[lead].items():
            nc = vec.get(k, 0) - factor * c
            if nc:
                vec[k] = nc
            else:
                vec.pop(k, None)
    return False


def span_rank(elements):
    """Rank of a family of CoeffRingElements, by exact elimination."""
    pivots = {}
    count = 0
    for e in elements:
        if _echelon_insert(pivots, dict(e.terms)):
            count += 1
    return count


def _independent_subset(elements):
    pivots = {}
    kept = []
    for e in elements:
        if _echelon_insert(pivots, dict(e.terms)):
            kept.append(e)
    return kept


def _weight_ranks(elements):
    tables = {}
    for e in elements:
        for w, part in e.left_weight_split().items():
            _echelon_insert(tables.setdefault(w, {}), dict(part.terms))
    return {w: len(t) for w, t in tables.items()}


def _target_multiplicities(cap):
    """Irreducible content of the weight-0 ring through each even degree.

    Counts normal-form monomials with right weight 0 and degree at most
    cap, bucketed by left weight; consecutive differences give the
    multiplicity of each Sym^m, which the product structure predicts to
    be exactly one.  This count is the independent yardstick the closure
    is compared against.
    """
    counts = {}
    for i in range(cap + 1):
        for j in range(cap + 1 - i):
            for k in range(cap + 1 - i - j):
                for l in range(cap + 1 - i - j - k):
                    if i and l:
                        continue
                    if i - j + k - l:
                        continue
                    w = i + j - k - l
                    counts[w] = counts.get(w, 0) + 1
    out = {}
    for m in range(0, cap + 1, 2):
        out[m] = counts.get(m, 0) - counts.get(m + 2, 0)
    return out


@dataclass(frozen=True)
class ClosureReport:
    r: int
    cap: int
    reached: tuple
    target: tuple
    missing: tuple
    generated: bool


def coeff_subalgebra_closure(v, cap=8):
    """Which blocks of the weight-0 ring do products of coefficients hit.

    Multiplies the matrix coefficients of v out to total degree cap,
    splits the product span by left weight, and differences the ranks to
    read off which Sym^m blocks (m even, at most cap) are present.  The
    target side comes from the monomial count, not from the products.
    """
    if not isinstance(v, RepDesc) or v.group != "pgl2":
        raise ValueError("the closure is computed for PGL2 representations")
    if cap < 0 or cap % 2:
        raise ValueError("the degree cap must be a nonnegative even number")
    if cap > MAX_CLOSURE_CAP:
        raise ValueError("degree cap %d exceeds the configured maximum %d"
                         % (cap, MAX_CLOSURE_CAP))
    r = v.r
    one = CoeffRingElement.one()
    elems = [one]
    if r > 0:
        gens = _independent_subset(matrix_coefficients(r))
        level = [one]
        for _ in range(cap // r):
            level = _independent_subset(
                [x * g for x in level for g in gens]
            )
            elems.extend(level)
    ranks = _weight_ranks(elems)
    reached = {}
    for m in range(0, cap + 1, 2):
        reached[m] = ranks.get(m, 0) - ranks.get(m + 2, 0)
    target = _target_multiplicities(cap)
    for m, mult in target.items():
        if mult != 1:
            raise ArithmeticError(
                "monomial count gives multiplicity %d in degree %d" % (mult, m)
            )
    missing = tuple(m for m in sorted(target)
                    if reached.get(m, 0) < target[m])
    return ClosureReport(
        r=r,
        cap=cap,
        reached=tuple(sorted(reached.items())),
        target=tuple(sorted(target.items())),
        missing=missing,
        generated=not missing,
    )
