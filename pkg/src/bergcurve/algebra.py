"""Exact arithmetic over Q for polynomials and truncated power series.

Also holds resultants and the search for rational roots.

Coefficients are :class:`fractions.Fraction` throughout; nothing in this module
ever stores a float.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, TruncationInsufficient

Rat = Fraction


def as_rat(value) -> Fraction:
    """Exact rational from an integer-like value or a ``"p/q"`` literal."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational literal: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            if den:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational literal: {value!r}") from None
    raise ParseError(f"not a rational literal: {value!r}")


def rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Poly:
    """Polynomial with rational coefficients in an ordered list of variables.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are treated
    as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.variables = tuple(variables)
        clean = {}
        n = len(self.variables)
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            c = as_rat(c)
            if c:
                clean[exp] = c
        self.terms = clean

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "Poly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if sum(exp) != 1:
            raise ValueError(f"{name!r} not among {variables}")
        return cls(variables, {exp: 1})

    @classmethod
    def univariate(cls, coeffs: Sequence, var: str = "t") -> "Poly":
        """Build ``sum coeffs[k] * var**k``."""
        return cls((var,), {(k,): c for k, c in enumerate(coeffs)})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Poly":
        return parse_poly(text, variables)

    # basic queries ------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.variables != self.variables:
                if not other.terms:
                    return Poly(self.variables)
                if all(e == (0,) * len(other.variables) for e in other.terms):
                    return Poly.const(other.terms.get((0,) * len(other.variables), 0), self.variables)
                raise ValueError(f"variable mismatch {self.variables} vs {other.variables}")
            return other
        return Poly.const(as_rat(other), self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (``-1`` for the zero polynomial)."""
        return min((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, k: int) -> "Poly":
        return Poly(self.variables, {e: c for e, c in self.terms.items() if sum(e) == k})

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coeff(self, exp: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rat(other)
            return Poly(self.variables, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.variables != self.variables:
                try:
                    other = self._coerce(other)
                except ValueError:
                    return False
            return self.terms == other.terms
        try:
            return self.terms == self._coerce(other).terms
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{rat_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # calculus and substitution ------------------------------------------------
    def diff(self, var: str) -> "Poly":
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Poly(self.variables, out)

    def substitute(self, mapping: Mapping[str, object], variables: Sequence[str] | None = None) -> "Poly":
        """Replace variables by polynomials (or constants) in ``variables``.

        Variables absent from ``mapping`` are kept and must belong to the target
        variable list.
        """
        target = tuple(variables) if variables is not None else self.variables
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                images.append(img if isinstance(img, Poly) else Poly.const(as_rat(img), target))
            else:
                images.append(Poly.var(v, target))
        cache: list[dict[int, Poly]] = [{0: Poly.const(1, target), 1: img} for img in images]

        def power(i, k):
            if k not in cache[i]:
                cache[i][k] = power(i, k - 1) * images[i]
            return cache[i][k]

        out = Poly(target)
        for e, c in self.terms.items():
            term = Poly.const(c, target)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        total = Fraction(0)
        vals = [as_rat(values[v]) for v in self.variables]
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x**k
            total += term
        return total

    def translate(self, shifts: Mapping[str, object]) -> "Poly":
        """Return ``p(v + shifts[v])``."""
        mapping = {
            v: Poly.var(v, self.variables) + as_rat(s) for v, s in shifts.items() if as_rat(s)
        }
        return self.substitute(mapping) if mapping else self

    def rename(self, variables: Sequence[str]) -> "Poly":
        return Poly(variables, self.terms)

    def drop_variable(self, var: str) -> "Poly":
        """Remove a variable that does not occur (degree 0)."""
        i = self.variables.index(var)
        if self.degree_in(var) > 0:
            raise ValueError(f"{var} occurs in {self}")
        vs = self.variables[:i] + self.variables[i + 1:]
        return Poly(vs, {e[:i] + e[i + 1:]: c for e, c in self.terms.items()})

    def coefficients_in(self, var: str) -> dict[int, "Poly"]:
        """Coefficients of ``self`` as a polynomial in ``var`` over the other variables."""
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: Poly(rest, t) for k, t in out.items()}

    def leading_term(self):
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "Poly") -> "Poly":
        """Divide exactly; raises ``ArithmeticError`` if ``other`` does not divide."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        le, lc = other.leading_term()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            c = rem[e]
            qe = tuple(a - b for a, b in zip(e, le))
            if min(qe) < 0:
                raise ArithmeticError("polynomial division is not exact")
            qc = c / lc
            quot[qe] = qc
            for oe, oc in other.terms.items():
                te = tuple(a + b for a, b in zip(qe, oe))
                v = rem.get(te, 0) - qc * oc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return Poly(self.variables, quot)

    # univariate helpers ---------------------------------------------------------
    def ucoeffs(self) -> list[Fraction]:
        """Dense coefficient list (low degree first) of a univariate polynomial."""
        if self.nvars != 1:
            raise ValueError("not univariate")
        d = self.total_degree()
        out = [Fraction(0)] * (d + 1)
        for (k,), c in self.terms.items():
            out[k] = c
        return out


# ---------------------------------------------------------------------------
# parsing

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    """Parse text such as ``"y^2*z - x^3 + 3/2*x*z^2"``.

    Only integer and ratio literals are accepted as coefficients.
    """
    variables = tuple(variables)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Poly.const(node.value, variables)
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise ParseError(f"unknown variable {node.id!r} (expected one of {variables})")
            return Poly.var(node.id, variables)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = walk(node.operand)
            return -p if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left = walk(node.left)
            if isinstance(node.op, ast.Pow):
                right = walk(node.right)
                if not right.is_constant() or right.constant_term().denominator != 1 or right.constant_term() < 0:
                    raise ParseError("exponents must be non-negative integers")
                return left ** int(right.constant_term())
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if not right.is_constant() or right.is_zero():
                raise ParseError("division is only allowed by nonzero constants")
            return left * (1 / right.constant_term())
        raise ParseError(f"unsupported syntax in polynomial {text!r}")

    return walk(tree)


# ---------------------------------------------------------------------------
# truncated power series


class TruncSeries:
    """Power series in one parameter known through ``t**N``.

    ``exact=True`` means every coefficient beyond ``N`` is known to vanish (the
    series is a polynomial), so the series can be re-truncated at any order.
    """

    __slots__ = ("coeffs", "param", "exact")

    def __init__(self, coeffs: Sequence, N: int | None = None, param: str = "t", exact: bool = False):
        cs = [as_rat(c) for c in coeffs]
        if N is None:
            N = max(len(cs) - 1, 1)
        if N < 1:
            raise ValueError("truncation order must be positive")
        if len(cs) > N + 1:
            if exact and any(cs[N + 1:]):
                N = len(cs) - 1
            cs = cs[: N + 1]
        cs += [Fraction(0)] * (N + 1 - len(cs))
        self.coeffs = tuple(cs)
        self.param = param
        self.exact = exact

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, object], N: int, param: str = "t", exact: bool = False):
        top = max(coeffs, default=0)
        if any(k < 0 for k in coeffs):
            raise ValueError("negative exponent in power series")
        dense = [Fraction(0)] * (max(top, N) + 1)
        for k, c in coeffs.items():
            dense[k] = as_rat(c)
        return cls(dense, N, param, exact)

    @classmethod
    def monomial(cls, k: int, N: int, c=1, param: str = "t"):
        return cls.from_dict({k: c}, N, param, exact=True)

    @classmethod
    def from_poly(cls, p: Poly, N: int, param: str = "t"):
        """Exact series of a univariate polynomial (kept whole if its degree exceeds N)."""
        cs = p.ucoeffs() if not p.is_zero() else [0]
        return cls(cs, N, param, exact=True)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def coefficients(self) -> dict[int, Fraction]:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    @property
    def exact_order(self) -> int | None:
        """Smallest exponent with nonzero coefficient, ``None`` if zero through ``N``."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def leading_coefficient(self) -> Fraction:
        k = self.exact_order
        return Fraction(0) if k is None else self.coeffs[k]

    def degree(self) -> int:
        """Highest exponent with nonzero coefficient (meaningful for exact series)."""
        for k in range(self.N, -1, -1):
            if self.coeffs[k]:
                return k
        return -1

    def truncate(self, N: int) -> "TruncSeries":
        if N > self.N:
            if not self.exact:
                raise TruncationInsufficient(f"series known to order {self.N}, {N} requested")
            return TruncSeries(self.coeffs + (Fraction(0),) * (N - self.N), N, self.param, True)
        exact = self.exact and not any(self.coeffs[N + 1:])
        return TruncSeries(self.coeffs[: N + 1], N, self.param, exact)

    def _align(self, other: "TruncSeries"):
        N = min(self.N, other.N)
        if self.exact and other.exact:
            N = max(self.N, other.N)
        return self.truncate(N) if N != self.N else self, other.truncate(N) if N != other.N else other

    def __add__(self, other):
        if not isinstance(other, TruncSeries):
            cs = list(self.coeffs)
            cs[0] += as_rat(other)
            return TruncSeries(cs, self.N, self.param, self.exact)
        a, b = self._align(other)
        return TruncSeries([x + y for x, y in zip(a.coeffs, b.coeffs)], a.N, a.param, a.exact and b.exact)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.N, self.param, self.exact)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncSeries) else -as_rat(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = as_rat(other)
            return TruncSeries([c * x for x in self.coeffs], self.N, self.param, self.exact)
        a, b = self._align(other)
        N = a.N
        exact = a.exact and b.exact
        if exact:
            da, db = a.degree(), b.degree()
            if da >= 0 and db >= 0 and da + db > N:
                N = da + db
                a, b = a.truncate(N), b.truncate(N)
        ac, bc = a.coeffs, b.coeffs
        anz = [(i, c) for i, c in enumerate(ac) if c]
        bnz = [(j, c) for j, c in enumerate(bc) if c]
        out = [Fraction(0)] * (N + 1)
        for i, x in anz:
            lim = N - i
            for j, y in bnz:
                if j > lim:
                    break
                out[i + j] += x * y
        return TruncSeries(out, N, a.param, exact)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncSeries.monomial(0, self.N, 1, self.param)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        if not self.exact and result.N > self.N:
            result = result.truncate(self.N)
        return result

    def __eq__(self, other):
        return (
            isinstance(other, TruncSeries)
            and self.coeffs == other.coeffs
            and self.exact == other.exact
        )

    def __hash__(self):
        return hash((self.coeffs, self.exact))

    def __repr__(self):
        terms = " + ".join(
            f"{rat_str(c)}*{self.param}^{k}" for k, c in enumerate(self.coeffs) if c
        ) or "0"
        return f"TruncSeries({terms}{'' if self.exact else f' + O({self.param}^{self.N + 1})'})"

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by ``t**k`` (k >= 0), keeping the same truncation order."""
        if k == 0:
            return self
        N = self.N + k if self.exact else self.N
        cs = [Fraction(0)] * k + list(self.coeffs)
        return TruncSeries(cs[: N + 1], N, self.param, self.exact)

    def derivative(self) -> "TruncSeries":
        cs = [c * k for k, c in enumerate(self.coeffs)][1:]
        N = max(self.N - 1, 1)
        return TruncSeries(cs or [0], N, self.param, self.exact)

    def inverse(self) -> "TruncSeries":
        a0 = self.coeffs[0]
        if not a0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        N = self.N
        out = [Fraction(0)] * (N + 1)
        out[0] = 1 / a0
        nz = [(i, c) for i, c in enumerate(self.coeffs) if c and i]
        for n in range(1, N + 1):
            s = Fraction(0)
            for i, c in nz:
                if i > n:
                    break
                s += c * out[n - i]
            out[n] = -s / a0
        return TruncSeries(out, N, self.param, False)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        return self * (1 / as_rat(other))

    def scale_parameter(self, s) -> "TruncSeries":
        """Return ``f(s*t)``."""
        s = as_rat(s)
        return TruncSeries([c * s**k for k, c in enumerate(self.coeffs)], self.N, self.param, self.exact)

    def to_float_coeffs(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def series_compose(f: Poly, s: Sequence[TruncSeries]) -> TruncSeries:
    """Evaluate ``f(s_1, ..., s_k)`` as a truncated series.

    When every input is exact the composition is carried out to full degree, so
    an identically zero result is proven zero.  If the result vanishes through
    ``N`` but is not provably zero, :class:`TruncationInsufficient` is raised.
    """
    s = tuple(s)
    if len(s) != f.nvars:
        raise ValueError(f"{f.nvars} series expected, got {len(s)}")
    Ns = {x.N for x in s}
    all_exact = all(x.exact for x in s)
    if len(Ns) != 1 and not all_exact:
        raise ValueError("series must share the truncation order")
    N = max(Ns)
    work_N = N
    if all_exact:
        bound = max(
            (sum(k * max(x.degree(), 0) for k, x in zip(e, s)) for e in f.terms), default=0
        )
        work_N = max(N, bound, 1)
    ss = [x.truncate(work_N) if x.N != work_N else x for x in s]
    cache: list[dict[int, TruncSeries]] = [{} for _ in ss]
    one = TruncSeries.monomial(0, work_N, 1, ss[0].param if ss else "t")
    if not all_exact:
        one = TruncSeries(one.coeffs, work_N, one.param, False)

    def power(i, k):
        if k == 0:
            return one
        if k not in cache[i]:
            cache[i][k] = ss[i] if k == 1 else power(i, k - 1) * ss[i]
            if cache[i][k].N != work_N:
                cache[i][k] = cache[i][k].truncate(work_N)
        return cache[i][k]

    acc = [Fraction(0)] * (work_N + 1)
    for e, c in f.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                pk = power(i, k)
                term = pk if term is None else (term * pk).truncate(work_N)
        if term is None:
            acc[0] += c
        else:
            for j, v in enumerate(term.coeffs[: work_N + 1]):
                if v:
                    acc[j] += c * v
    result = TruncSeries(acc, work_N, one.param, all_exact)
    if all_exact:
        return result
    if result.is_zero():
        raise TruncationInsufficient(f"composition vanishes through order {N}")
    return result


# ---------------------------------------------------------------------------
# determinants and resultants


def bareiss_det(matrix: list[list]) -> object:
    """Fraction-free determinant; entries may be Fractions or Polys."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    M = [list(row) for row in matrix]
    sign = 1
    prev = None

    def is_zero(x):
        return x.is_zero() if isinstance(x, Poly) else x == 0

    for k in range(n - 1):
        if is_zero(M[k][k]):
            for r in range(k + 1, n):
                if not is_zero(M[r][k]):
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return M[k][k] * 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                if prev is None:
                    M[i][j] = num
                elif isinstance(num, Poly):
                    M[i][j] = num.exact_div(prev)
                else:
                    M[i][j] = num / prev
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


def sylvester_matrix(f: Poly, g: Poly, var: str) -> list[list[Poly]]:
    fc, gc = f.coefficients_in(var), g.coefficients_in(var)
    m, n = f.degree_in(var), g.degree_in(var)
    rest = f.variables[: f.variables.index(var)] + f.variables[f.variables.index(var) + 1:]
    zero = Poly(rest)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + (m - k)] = fc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + (n - k)] = gc.get(k, zero)
        rows.append(row)
    return rows


def resultant(f: Poly, g: Poly, var: str) -> Poly:
    """Resultant of ``f`` and ``g`` with respect to ``var`` (Sylvester determinant).

    The result is a polynomial in the remaining variables, in their original order.
    """
    if f.variables != g.variables:
        raise ValueError("resultant operands must share variables")
    i = f.variables.index(var)
    rest = f.variables[:i] + f.variables[i + 1:]
    if f.is_zero() or g.is_zero():
        return Poly(rest)
    m, n = f.degree_in(var), g.degree_in(var)
    if m == 0:
        return f.drop_variable(var) ** n
    if n == 0:
        return g.drop_variable(var) ** m
    if len(rest) == 1:
        return _resultant_by_interpolation(f, g, var, rest[0])
    det = bareiss_det(sylvester_matrix(f, g, var))
    return det if isinstance(det, Poly) else Poly.const(det, rest)


def _bareiss_int(M: list[list[int]]) -> int:
    n = len(M)
    M = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        for i in range(k + 1, n):
            Mi, mik = M[i], M[i][k]
            Mk = M[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pk - mik * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def _integer_scale(p: Poly) -> int:
    lcm = 1
    for c in p.terms.values():
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return lcm


def _resultant_by_interpolation(f: Poly, g: Poly, var: str, other: str) -> Poly:
    """Bivariate case: evaluate the Sylvester matrix at integer points and interpolate.

    The matrix keeps its generic shape at every sample, so each determinant is
    the exact specialization of the resultant.
    """
    m, n = f.degree_in(var), g.degree_in(var)
    bound = m * g.degree_in(other) + n * f.degree_in(other)
    sf, sg = _integer_scale(f), _integer_scale(g)
    fc = f.coefficients_in(var)
    gc = g.coefficients_in(var)
    fc = {k: [(e[0], int(c * sf)) for e, c in q.terms.items()] for k, q in fc.items()}
    gc = {k: [(e[0], int(c * sg)) for e, c in q.terms.items()] for k, q in gc.items()}
    size = m + n
    x0 = -(bound // 2)
    ys = []
    for x in range(x0, x0 + bound + 1):
        fv = {k: sum(c * x**e for e, c in q) for k, q in fc.items()}
        gv = {k: sum(c * x**e for e, c in q) for k, q in gc.items()}
        rows = []
        for i in range(n):
            row = [0] * size
            for k in range(m + 1):
                row[i + (m - k)] = fv.get(k, 0)
            rows.append(row)
        for i in range(m):
            row = [0] * size
            for k in range(n + 1):
                row[i + (n - k)] = gv.get(k, 0)
            rows.append(row)
        ys.append(_bareiss_int(rows))
    return Poly.univariate(_interpolate_consecutive(x0, ys, sf**n * sg**m), other)


def _interpolate_consecutive(x0: int, ys: Sequence[int], denom: int) -> list[Fraction]:
    """Coefficients of the polynomial through ``(x0 + i, ys[i] / denom)``.

    Newton form on consecutive integers: the coefficients are forward
    differences over factorials, so everything stays in integers until the end.
    """
    n = len(ys)
    diffs, row = [], list(ys)
    for _ in range(n):
        diffs.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    F = math.factorial(n - 1)
    acc = [0] * n
    basis = [1]
    for j in range(n):
        c = diffs[j] * (F // math.factorial(j))
        if c:
            for k, b in enumerate(basis):
                acc[k] += c * b
        shifted = [0] + basis
        for k, b in enumerate(basis):
            shifted[k] -= (x0 + j) * b
        basis = shifted
    return [Fraction(a, F * denom) for a in acc]


# ---------------------------------------------------------------------------
# univariate polynomials over Q, dense coefficient lists (low degree first)


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def udivmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lb
        shift = len(r) - len(b)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = _trim(r)
    return q, r


def ugcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd of two univariate polynomials."""
    a, b = _trim([Fraction(x) for x in a]), _trim([Fraction(x) for x in b])
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [c / a[-1] for c in a]


def uderiv(a: Sequence) -> list:
    return [c * k for k, c in enumerate(a)][1:]


def ueval(a: Sequence, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _sign_changes(seq: Sequence) -> int:
    signs = [s for s in seq if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def _sturm_chain(p: list) -> list[list]:
    chain = [p, uderiv(p)]
    while True:
        _, r = udivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def rational_roots(p: Sequence) -> tuple[list[tuple[Fraction, int]], bool]:
    """Rational roots of a univariate polynomial with their multiplicities.

    Returns ``(roots, split)`` where ``split`` tells whether the polynomial
    factors completely into linear factors over Q.  Real roots are isolated with
    a Sturm sequence, so the search is exhaustive.
    """
    p = _trim([Fraction(x) for x in p])
    if not p:
        raise ValueError("zero polynomial has every number as a root")
    degree = len(p) - 1
    if degree == 0:
        return [], True
    roots: list[tuple[Fraction, int]] = []
    work = list(p)
    mult0 = 0
    while work[0] == 0:
        work = work[1:]
        mult0 += 1
    if mult0:
        roots.append((Fraction(0), mult0))
    if len(work) > 1:
        g = ugcd(work, uderiv(work))
        sqf, _ = udivmod(work, g) if len(g) > 1 else (work, [])
        sqf = _trim(sqf)
        # clear denominators so the rational root theorem bounds denominators
        lcm = 1
        for c in sqf:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in sqf]
        content = 0
        for c in ints:
            content = math.gcd(content, c)
        ints = [c // content for c in ints]
        lead = abs(ints[-1])
        bound = 1 + max(Fraction(abs(c), lead) for c in ints[:-1])
        chain = _sturm_chain([Fraction(c) for c in ints])

        def count(a, b):
            return _sign_changes([ueval(q, a) for q in chain]) - _sign_changes([ueval(q, b) for q in chain])

        stack = [(-bound, bound)]
        found = []
        tol = Fraction(1, 2 * lead)
        while stack:
            a, b = stack.pop()
            n = count(a, b)
            if n == 0:
                continue
            if n == 1 and b - a < tol:
                k_lo = math.floor(a * lead) + 1
                k_hi = math.floor(b * lead)
                for k in range(k_lo, k_hi + 1):
                    cand = Fraction(k, lead)
                    if ueval(ints, cand) == 0:
                        found.append(cand)
                continue
            mid = (a + b) / 2
            stack.append((a, mid))
            stack.append((mid, b))
        for r in sorted(found):
            m = 0
            cur = list(work)
            while True:
                q, rem = udivmod(cur, [-r, 1])
                if rem:
                    break
                m += 1
                cur = q
            roots.append((r, m))
    roots.sort()
    split = sum(m for _, m in roots) == degree
    return roots, split


def poly_from_roots(roots: Iterable[Fraction]) -> list[Fraction]:
    out = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(out) + 1)
        for i, c in enumerate(out):
            nxt[i + 1] += c
            nxt[i] -= r * c
        out = nxt
    return out


def rational_kth_root(q: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a rational number, or ``None`` if it is irrational."""
    if k == 1:
        return q
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_kth_root(-q, k)
        return None if r is None else -r

    def iroot(n):
        if n < 2:
            return n
        x = 1 << ((n.bit_length() + k - 1) // k)
        while True:
            y = ((k - 1) * x + n // x ** (k - 1)) // k
            if y >= x:
                break
            x = y
        return x if x**k == n else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
