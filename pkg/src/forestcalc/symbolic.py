"""Exact multivariate polynomials, truncated power series and min-integrals.

Everything here is arbitrary-precision rational; no floating point enters
any identity path.  Three layers:

* RationalPolynomial - sparse multivariate polynomials over Fraction with a
  fixed variable tuple per polynomial (dense exponent vectors as dict keys).
* FormalSeries - power series truncated at a fixed order; exp/log/inverse
  never consult coefficients beyond the truncation.
* MinExpression - polynomials in auxiliary symbols min{w_l : l in S} plus
  the plain weight variables w_l.  Their integral over the unit weight box
  is computed exactly by splitting the box into the tau! order simplices,
  on each of which every min-symbol collapses to a single variable and a
  monomial integrates in closed form.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import SizeLimitError, ValidationError
from .limits import active_limits

Rat = Union[Fraction, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class RationalPolynomial:
    """Sparse polynomial over Q in a fixed tuple of named variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[tuple, Rat]] = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValidationError("duplicate variable names")
        clean = {}
        if terms:
            nvars = len(self.variables)
            for exps, c in terms.items():
                c = _frac(c)
                if len(exps) != nvars:
                    raise ValidationError("exponent vector length mismatch")
                if c:
                    clean[tuple(exps)] = clean.get(tuple(exps), _ZERO) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, variables: Sequence[str], c: Rat) -> "RationalPolynomial":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _frac(c)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "RationalPolynomial":
        variables = tuple(variables)
        if name not in variables:
            raise ValidationError(f"unknown variable {name!r}")
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): _ONE})

    # -- ring operations --------------------------------------------------

    def _check_compatible(self, other: "RationalPolynomial") -> None:
        if self.variables != other.variables:
            raise ValidationError("polynomials live over different variable tuples")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial.constant(self.variables, other)
        self._check_compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, _ZERO) + c
        return RationalPolynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalPolynomial) else -_frac(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = _frac(other)
            return RationalPolynomial(self.variables, {e: c * c0 for e, c in self.terms.items()})
        self._check_compatible(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, _ZERO) + c1 * c2
        return RationalPolynomial(self.variables, terms)

    __rmul__ = __mul__

    def partial_derivative(self, name: str) -> "RationalPolynomial":
        if name not in self.variables:
            raise ValidationError(f"unknown variable {name!r}")
        k = self.variables.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                terms[tuple(ne)] = c * e[k]
        return RationalPolynomial(self.variables, terms)

    def substitute(self, name: str, value: Rat) -> "RationalPolynomial":
        """Fold a single variable to a rational value (variable tuple unchanged)."""
        if name not in self.variables:
            raise ValidationError(f"unknown variable {name!r}")
        k = self.variables.index(name)
        value = _frac(value)
        terms: dict = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[k] = 0
            c = c * value ** e[k]
            ne = tuple(ne)
            terms[ne] = terms.get(ne, _ZERO) + c
        return RationalPolynomial(self.variables, terms)

    def evaluate(self, assignment: Mapping[str, Rat]) -> Fraction:
        missing = [v for v in self.variables if v not in assignment]
        if missing:
            raise ValidationError(f"assignment missing variables {missing}")
        vals = [_frac(assignment[v]) for v in self.variables]
        total = _ZERO
        for e, c in self.terms.items():
            t = c
            for base, exp in zip(vals, e):
                if exp:
                    t *= base**exp
            total += t
        return total

    def at_ones(self) -> Fraction:
        return sum(self.terms.values(), _ZERO)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, RationalPolynomial)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "RationalPolynomial(0)"
        bits = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, e) if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "RationalPolynomial(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------


class FormalSeries:
    """Power series truncated at a fixed order; coefficients are Fractions.

    Operations never look past the truncation order, so a FormalSeries of
    order p carries exactly the information "the series modulo O(x^{p+1})".
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Rat] = ()):
        if order < 0:
            raise ValidationError("truncation order must be >= 0")
        self.order = order
        cs = [_frac(c) for c in coeffs]
        if len(cs) > order + 1:
            raise ValidationError("more coefficients than the truncation order allows")
        cs += [_ZERO] * (order + 1 - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, order: int, c: Rat) -> "FormalSeries":
        return cls(order, [c])

    @classmethod
    def one(cls, order: int) -> "FormalSeries":
        return cls.constant(order, 1)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def _common_order(self, other: "FormalSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormalSeries.constant(self.order, other)
        p = self._common_order(other)
        return FormalSeries(p, [self.coeffs[k] + other.coeffs[k] for k in range(p + 1)])

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = FormalSeries.constant(self.order, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = _frac(other)
            return FormalSeries(self.order, [c * c0 for c in self.coeffs])
        p = self._common_order(other)
        out = [_ZERO] * (p + 1)
        for k in range(p + 1):
            a = self.coeffs[k]
            if not a:
                continue
            for m in range(p + 1 - k):
                b = other.coeffs[m]
                if b:
                    out[k + m] += a * b
        return FormalSeries(p, out)

    __rmul__ = __mul__

    def truncate(self, order: int) -> "FormalSeries":
        if order > self.order:
            raise ValidationError("cannot extend a truncated series")
        return FormalSeries(order, self.coeffs[: order + 1])

    def log(self) -> "FormalSeries":
        """Formal logarithm; requires constant term exactly 1."""
        if self.coeffs[0] != 1:
            raise ValidationError(
                "log requires constant term 1 (normalize the series first); "
                f"got {self.coeffs[0]}"
            )
        p = self.order
        g = [_ZERO] * (p + 1)
        for k in range(1, p + 1):
            acc = self.coeffs[k]
            for m in range(1, k):
                acc -= Fraction(m, k) * g[m] * self.coeffs[k - m]
            g[k] = acc
        return FormalSeries(p, g)

    def exp(self) -> "FormalSeries":
        """Formal exponential; requires constant term exactly 0."""
        if self.coeffs[0] != 0:
            raise ValidationError(f"exp requires constant term 0, got {self.coeffs[0]}")
        p = self.order
        h = [_ZERO] * (p + 1)
        h[0] = _ONE
        for k in range(1, p + 1):
            acc = _ZERO
            for m in range(1, k + 1):
                acc += Fraction(m, k) * self.coeffs[m] * h[k - m]
            h[k] = acc
        return FormalSeries(p, h)

    def inverse(self) -> "FormalSeries":
        if not self.coeffs[0]:
            raise ValidationError("cannot invert a series with zero constant term")
        p = self.order
        inv = [_ZERO] * (p + 1)
        inv[0] = 1 / self.coeffs[0]
        for k in range(1, p + 1):
            acc = _ZERO
            for m in range(1, k + 1):
                acc += self.coeffs[m] * inv[k - m]
            inv[k] = -acc / self.coeffs[0]
        return FormalSeries(p, inv)

    def pow_int(self, k: int) -> "FormalSeries":
        if k < 0:
            return self.inverse().pow_int(-k)
        out = FormalSeries.one(self.order)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FormalSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"FormalSeries(order={self.order}, coeffs={[str(c) for c in self.coeffs]})"


def series_exp_log(s: FormalSeries, direction: str) -> FormalSeries:
    """Dispatch helper: direction is 'exp' or 'log'."""
    if direction == "exp":
        return s.exp()
    if direction == "log":
        return s.log()
    raise ValidationError(f"direction must be 'exp' or 'log', got {direction!r}")


# ---------------------------------------------------------------------------
# min-expressions and their exact box integrals
# ---------------------------------------------------------------------------

# A symbol is a nonempty frozenset S of links and denotes min{w_l : l in S};
# the singleton frozenset({l}) is the plain variable w_l.  A monomial is a
# sorted tuple of (symbol, exponent) pairs.

MinSymbol = frozenset
MinMonomial = tuple


def _canon_monomial(sym_exps: Iterable[tuple]) -> MinMonomial:
    merged: dict = {}
    for s, e in sym_exps:
        if e:
            merged[s] = merged.get(s, 0) + e
    return tuple(sorted(merged.items(), key=lambda t: (len(t[0]), sorted(t[0]))))


class MinExpression:
    """Polynomial in min-symbols over forest links, with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[MinMonomial, Rat]] = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _frac(c)
                if c:
                    clean[mono] = clean.get(mono, _ZERO) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def constant(cls, c: Rat) -> "MinExpression":
        return cls({(): _frac(c)})

    @classmethod
    def one(cls) -> "MinExpression":
        return cls.constant(1)

    @classmethod
    def symbol(cls, links: Iterable) -> "MinExpression":
        s = frozenset(links)
        if not s:
            raise ValidationError("min-symbol needs a nonempty link set")
        return cls({_canon_monomial([(s, 1)]): _ONE})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MinExpression.constant(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, _ZERO) + c
        return MinExpression(terms)

    __radd__ = __add__

    def __neg__(self):
        return MinExpression({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MinExpression.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = _frac(other)
            return MinExpression({m: c * c0 for m, c in self.terms.items()})
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _canon_monomial(list(m1) + list(m2))
                c = c1 * c2
                terms[m] = terms.get(m, _ZERO) + c
        return MinExpression(terms)

    __rmul__ = __mul__

    def evaluate(self, weights: Mapping) -> Fraction:
        """Evaluate at a concrete weight assignment (link -> Fraction)."""
        total = _ZERO
        for mono, c in self.terms.items():
            t = c
            for s, e in mono:
                v = min(_frac(weights[l]) for l in s)
                t *= v**e
            total += t
        return total

    def symbols(self) -> set:
        out = set()
        for mono in self.terms:
            for s, _ in mono:
                out.add(s)
        return out

    def __eq__(self, other):
        return isinstance(other, MinExpression) and self.terms == other.terms

    def __repr__(self):
        return f"MinExpression({len(self.terms)} terms)"


# Cache of monomial integrals keyed by the index-level structure, shared by
# every caller; the integral only depends on that structure.
_MONO_CACHE: dict = {}


def _simplex_monomial_integral(degrees: Sequence[int]) -> Fraction:
    """Integral of prod w_k^{d_k} over 1 > w_0 > w_1 > ... > w_{t-1} > 0.

    Closed form: integrating from the innermost variable outwards, step m
    (m = 1..t, counted from the inside) contributes 1/(suffix degree sum + m).
    """
    val = _ONE
    suffix = 0
    t = len(degrees)
    for m in range(1, t + 1):
        suffix += degrees[t - m]
        val /= suffix + m
    return val


def _integrate_monomial_indexed(tau: int, mono: tuple) -> Fraction:
    # mono: sorted tuple of (frozenset of variable indices, exponent).
    key = (tau, mono)
    cached = _MONO_CACHE.get(key)
    if cached is not None:
        return cached
    total = _ZERO
    for order in permutations(range(tau)):
        # order[0] > order[1] > ... on this simplex; min of a set is the
        # member appearing last in `order`.
        pos = {v: k for k, v in enumerate(order)}
        degrees = [0] * tau
        for s, e in mono:
            rep = max(s, key=pos.__getitem__)
            degrees[pos[rep]] += e
        total += _simplex_monomial_integral(degrees)
    _MONO_CACHE[key] = total
    return total


def _index_monomial(mono: MinMonomial, link_index: Mapping) -> tuple:
    idx = []
    for s, e in mono:
        try:
            idx.append((frozenset(link_index[l] for l in s), e))
        except KeyError as exc:
            raise ValidationError(f"min-symbol uses link {exc.args[0]} outside the integration list")
    return tuple(sorted(idx, key=lambda t: (len(t[0]), sorted(t[0]))))


def integrate_min_expression(
    expr: MinExpression, links: Sequence, max_tau: Optional[int] = None
) -> Fraction:
    """Exact integral of expr over the unit box [0,1]^tau of link weights.

    ``links`` fixes the integration variables (one per forest link); every
    min-symbol of expr must draw from them.  The box is decomposed into the
    tau! total orderings of the weights; on each order simplex every
    min-symbol collapses to its last-ordered member and the resulting
    monomial has a closed-form integral.
    """
    tau = len(links)
    bound = max_tau if max_tau is not None else active_limits().tau
    if tau > bound:
        raise SizeLimitError(f"integration over tau = {tau} links exceeds bound {bound}")
    if len(set(links)) != tau:
        raise ValidationError("integration links must be distinct")
    if tau == 0:
        return sum(expr.terms.values(), _ZERO) if expr.terms else _ZERO
    link_index = {l: k for k, l in enumerate(links)}
    total = _ZERO
    for mono, c in expr.terms.items():
        total += c * _integrate_monomial_indexed(tau, _index_monomial(mono, link_index))
    return total


def integrate_min_on_simplex(
    expr: MinExpression, links: Sequence, ordering: Sequence
) -> Fraction:
    """Integral of expr over the single simplex w_{o0} > w_{o1} > ... > w_{o,tau-1}.

    Summing this over all tau! orderings reproduces integrate_min_expression;
    it is exposed separately for the ordered variant of the forest formula.
    """
    tau = len(links)
    if sorted(ordering) != sorted(links):
        raise ValidationError("ordering must be a permutation of the links")
    link_index = {l: k for k, l in enumerate(links)}
    pos = {link_index[l]: k for k, l in enumerate(ordering)}
    total = _ZERO
    for mono, c in expr.terms.items():
        degrees = [0] * tau
        for s, e in _index_monomial(mono, link_index):
            rep = max(s, key=pos.__getitem__)
            degrees[pos[rep]] += e
        total += c * _simplex_monomial_integral(degrees)
    return total
