"""Exact arithmetic in Q(t1, ..., tm).

Polynomials are sparse dicts ``{monomial: Fraction}`` where a monomial is a
sorted tuple of ``(symbol, exponent)`` pairs.  A :class:`ScalarExpr` is a
numerator/denominator pair of such polynomials, with a fast path that keeps
plain rationals as :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DivisionByZero, ExpressionSyntaxError

# Cancelling common factors is not needed for correctness (equality is decided
# by cross-multiplication), it only keeps expressions small.
_NORMALIZE = True


def set_normalization(enabled):
    """Switch gcd normalization of rational functions on or off.

    Returns the previous setting.
    """
    global _NORMALIZE
    previous = _NORMALIZE
    _NORMALIZE = bool(enabled)
    return previous


# --------------------------------------------------------------------------
# monomials

def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            out.append((va, ea + eb))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_div(a, b):
    """a / b, or None if b does not divide a."""
    exps = dict(a)
    for v, e in b:
        have = exps.get(v, 0)
        if have < e:
            return None
        if have == e:
            del exps[v]
        else:
            exps[v] = have - e
    return tuple(sorted(exps.items()))


def _mono_degree(m):
    return sum(e for _, e in m)


def _lex_key(m, variables):
    exps = dict(m)
    return tuple(exps.get(v, 0) for v in variables)


def _mono_str(m):
    parts = []
    for v, e in m:
        parts.extend([v] * e)
    return "*".join(parts)


# --------------------------------------------------------------------------
# polynomials

class Poly:
    """Sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)}) if c else cls()

    @classmethod
    def symbol(cls, name):
        return cls({((name, 1),): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        return self.terms.get((), Fraction(0))

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def degree(self):
        return max((_mono_degree(m) for m in self.terms), default=0)

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _raw_poly(out)

    def __neg__(self):
        return _raw_poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            if not self.terms or not other.terms:
                return Poly()
            out = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    m = _mono_mul(ma, mb)
                    s = out.get(m, 0) + ca * cb
                    if s:
                        out[m] = s
                    else:
                        out.pop(m, None)
            return _raw_poly(out)
        c = Fraction(other)
        if not c:
            return Poly()
        return _raw_poly({m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def leading_term(self, variables=None):
        if variables is None:
            variables = self.variables()
        m = max(self.terms, key=lambda t: _lex_key(t, variables))
        return m, self.terms[m]

    def exact_div(self, other):
        """Quotient ``self / other`` if the division is exact, else None."""
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if other.is_constant():
            return self * (1 / other.constant_value())
        variables = sorted(set(self.variables()) | set(other.variables()))
        lm_b, lc_b = other.leading_term(variables)
        rem = self
        quotient = {}
        while rem.terms:
            lm_r, lc_r = rem.leading_term(variables)
            m = _mono_div(lm_r, lm_b)
            if m is None:
                return None
            c = lc_r / lc_b
            quotient[m] = quotient.get(m, 0) + c
            rem = rem - _raw_poly({m: c}) * other
        return Poly(quotient)

    def content(self):
        """Positive rational content: gcd of numerators over lcm of denominators."""
        from math import gcd

        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den) if num else Fraction(0)

    def __str__(self):
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda m: (-_mono_degree(m), m))
        out = []
        for m in order:
            c = self.terms[m]
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = _frac_str(a)
            elif a == 1:
                body = _mono_str(m)
            else:
                body = f"{_frac_str(a)}*{_mono_str(m)}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    __repr__ = __str__


def _raw_poly(terms):
    p = Poly.__new__(Poly)
    p.terms = terms
    return p


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def poly_gcd(a, b):
    """Monic-free gcd of two polynomials (via sympy for the multivariate case)."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.is_constant() or b.is_constant():
        return Poly.const(1)
    q = a.exact_div(b)
    if q is not None:
        return b
    q = b.exact_div(a)
    if q is not None:
        return a
    import sympy

    variables = sorted(set(a.variables()) | set(b.variables()))
    gens = tuple(sympy.Symbol(v) for v in variables)

    def to_sympy(p):
        d = {}
        for m, c in p.terms.items():
            d[_lex_key(m, variables)] = sympy.Rational(c.numerator, c.denominator)
        return sympy.Poly.from_dict(d, *gens, domain=sympy.QQ)

    g = to_sympy(a).gcd(to_sympy(b))
    terms = {}
    for exps, c in g.as_dict().items():
        m = tuple((v, e) for v, e in zip(variables, exps) if e)
        terms[m] = Fraction(int(c.p), int(c.q))
    return Poly(terms)


# --------------------------------------------------------------------------
# field elements

_Number = (int, Fraction, Rational)


class ScalarExpr:
    """An element of Q(t1, ..., tm); immutable."""

    __slots__ = ("_q", "_num", "_den")

    def __init__(self, value=0):
        if isinstance(value, ScalarExpr):
            self._q, self._num, self._den = value._q, value._num, value._den
        elif isinstance(value, str):
            other = parse_scalar(value)
            self._q, self._num, self._den = other._q, other._num, other._den
        else:
            self._q = Fraction(value)
            self._num = self._den = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _from_q(cls, q):
        s = object.__new__(cls)
        s._q = q
        s._num = s._den = None
        return s

    @classmethod
    def symbol(cls, name):
        return cls.from_polys(Poly.symbol(name), Poly.const(1))

    @classmethod
    def from_polys(cls, num, den):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if den.is_constant():
            num = num * (1 / den.constant_value())
            if num.is_constant():
                return cls._from_q(num.constant_value())
            s = object.__new__(cls)
            s._q = None
            s._num, s._den = num, Poly.const(1)
            return s
        if num.is_zero():
            return cls._from_q(Fraction(0))
        if _NORMALIZE:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
            if den.is_constant():
                return cls.from_polys(num, den)
            _, lc = den.leading_term()
            if lc != 1:
                num = num * (1 / lc)
                den = den * (1 / lc)
        s = object.__new__(cls)
        s._q = None
        s._num, s._den = num, den
        return s

    # views ----------------------------------------------------------------
    @property
    def numerator(self):
        return Poly.const(self._q) if self._q is not None else self._num

    @property
    def denominator(self):
        return Poly.const(1) if self._q is not None else self._den

    def is_constant(self):
        return self._q is not None

    def as_fraction(self):
        """The rational value, or None if the element involves symbols."""
        return self._q

    def is_zero(self):
        if self._q is not None:
            return not self._q
        return self._num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def symbols(self):
        if self._q is not None:
            return []
        return sorted(set(self._num.variables()) | set(self._den.variables()))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._q is not None and other._q is not None:
            return ScalarExpr._from_q(self._q + other._q)
        a, b, c, d = self.numerator, self.denominator, other.numerator, other.denominator
        if b == d:
            return ScalarExpr.from_polys(a + c, b)
        return ScalarExpr.from_polys(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        if self._q is not None:
            return ScalarExpr._from_q(-self._q)
        s = object.__new__(ScalarExpr)
        s._q = None
        s._num, s._den = -self._num, self._den
        return s

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self._q is not None and other._q is not None:
            return ScalarExpr._from_q(self._q * other._q)
        return ScalarExpr.from_polys(self.numerator * other.numerator,
                                     self.denominator * other.denominator)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("division by zero")
        if self._q is not None:
            return ScalarExpr._from_q(1 / self._q)
        return ScalarExpr.from_polys(self._den, self._num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = ScalarExpr._from_q(Fraction(1))
        for _ in range(abs(k)):
            out = out * base
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        if self._q is not None and other._q is not None:
            return self._q == other._q
        # a/b == c/d  iff  a*d - c*b == 0
        lhs = self.numerator * other.denominator
        rhs = other.numerator * self.denominator
        return (lhs - rhs).is_zero()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self._q is not None:
            return hash(self._q)
        previous = set_normalization(True)
        try:
            canon = ScalarExpr.from_polys(self._num, self._den)
        finally:
            set_normalization(previous)
        if canon._q is not None:
            return hash(canon._q)
        return hash((canon._num, canon._den))

    def sort_key(self):
        """A deterministic total order on printed forms (not a field order)."""
        if self._q is not None:
            return (0, self._q, "")
        return (1, Fraction(0), str(self))

    # printing -------------------------------------------------------------
    def __str__(self):
        if self._q is not None:
            return _frac_str(self._q)
        num = str(self._num)
        if self._den.is_constant():
            return num
        if len(self._num.terms) > 1:
            num = f"({num})"
        return f"{num}/({self._den})"

    def __repr__(self):
        return f"ScalarExpr({str(self)!r})"


def _coerce(x):
    if isinstance(x, ScalarExpr):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, _Number):
        return ScalarExpr._from_q(Fraction(x))
    return NotImplemented


def scalar(x):
    """Coerce ints, Fractions, strings and ScalarExpr to ScalarExpr."""
    if isinstance(x, ScalarExpr):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return ScalarExpr(x)


ZERO = ScalarExpr._from_q(Fraction(0))
ONE = ScalarExpr._from_q(Fraction(1))


# --------------------------------------------------------------------------
# parser
#
#   expr     := term (('+'|'-') term)*
#   term     := factor (('*'|'/') factor)*
#   factor   := rational | symbol | '(' expr ')' | '-' factor
#   rational := integer ('/' positive-integer)?
#   symbol   := letter (letter | digit | '_')*

def _tokenize(src):
    tokens = []
    i = 0
    while i < len(src):
        ch = src[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(src) and src[j].isdigit():
                j += 1
            tokens.append(("int", src[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < len(src) and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("sym", src[i:j], i))
            i = j
        elif ch in "+-*/()":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise ExpressionSyntaxError(f"expected {kind!r}, got {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def expr(self):
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, at = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZero(f"division by zero at position {at}")
                value = value / rhs
        return value

    def factor(self):
        kind, text, at = self.take()
        if kind == "int":
            return ScalarExpr._from_q(Fraction(int(text)))
        if kind == "sym":
            return ScalarExpr.symbol(text)
        if kind == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "-":
            return -self.factor()
        raise ExpressionSyntaxError(f"unexpected {text or 'end of input'!r}", at)


def parse_scalar(src):
    """Parse an expression string into a :class:`ScalarExpr`."""
    parser = _Parser(src)
    value = parser.expr()
    kind, text, at = parser.peek()
    if kind != "end":
        raise ExpressionSyntaxError(f"unexpected {text!r}", at)
    return value
