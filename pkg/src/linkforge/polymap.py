"""Exact sparse polynomial map germs (R^n, 0) -> (R^2, 0).

Coefficients are `Fraction`s throughout; floating-point evaluation goes
through a separately lowered (exponent-matrix, coefficient-vector) form so
that symbolic identities and certification never see rounding.  All values
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

Exponents = Tuple[int, ...]


class PolyMapError(Exception):
    """Base class for errors raised by this module."""


class ParseError(PolyMapError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ConstantTermError(PolyMapError):
    """A germ component carries a nonzero constant term (must vanish at 0)."""


class UnknownVariableError(PolyMapError):
    pass


class DimensionMismatchError(PolyMapError):
    pass


def _order_key(exps: Exponents):
    # graded lexicographic, descending: leading term first
    return (-sum(exps),) + tuple(-e for e in exps)


class Poly:
    """Sparse polynomial over Q in a fixed number of real variables.

    Terms are a map from exponent tuple to nonzero Fraction.  Zero
    coefficients are never stored; equality is exact term-set equality.
    """

    __slots__ = ("nvars", "terms", "_lowered")

    def __init__(self, nvars: int, terms: Optional[Dict[Exponents, Fraction]] = None):
        if nvars < 1:
            raise PolyMapError("nvars must be >= 1")
        clean: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            e = tuple(int(v) for v in exps)
            if len(e) != nvars or any(v < 0 for v in e):
                raise PolyMapError(f"bad exponent vector {exps!r} for nvars={nvars}")
            c = Fraction(coeff)
            if c:
                clean[e] = c
        self.nvars = nvars
        self.terms = clean
        self._lowered = None

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        """Variable x_{index}, 1-based."""
        if not 1 <= index <= nvars:
            raise UnknownVariableError(f"x{index} out of range for nvars={nvars}")
        e = [0] * nvars
        e[index - 1] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    # ---- ring operations ----------------------------------------------

    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out: Dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly(self.nvars, out)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise PolyMapError("polynomial powers must be non-negative integers")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def sorted_terms(self) -> Iterable[Tuple[Exponents, Fraction]]:
        for e in sorted(self.terms, key=_order_key):
            yield e, self.terms[e]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.to_source()!r})"

    # ---- calculus -----------------------------------------------------

    def diff(self, index: int) -> "Poly":
        """Exact partial derivative with respect to x_{index} (1-based)."""
        if not 1 <= index <= self.nvars:
            raise UnknownVariableError(f"x{index} out of range")
        i = index - 1
        out: Dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = c * e[i]
        return Poly(self.nvars, out)

    def subs(self, targets: Sequence["Poly"]) -> "Poly":
        """Exact composition: substitute targets[i] for x_{i+1}."""
        if len(targets) != self.nvars:
            raise DimensionMismatchError(
                f"{self.nvars} variables but {len(targets)} targets")
        m = targets[0].nvars
        for t in targets:
            if t.nvars != m:
                raise DimensionMismatchError("targets disagree on variable count")
        powers: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in powers:
                powers[key] = targets[i] ** k
            return powers[key]

        out = Poly.zero(m)
        for e, c in self.terms.items():
            term = Poly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    # ---- evaluation ---------------------------------------------------

    def eval_fraction(self, point: Sequence) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.nvars:
            raise DimensionMismatchError("point length != nvars")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.sorted_terms():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def lowered(self) -> Tuple[np.ndarray, np.ndarray]:
        """Float form: (T, n) exponent matrix and (T,) coefficient vector.

        Rows follow the canonical term order, which fixes the float
        summation order and makes evaluation deterministic.
        """
        if self._lowered is None:
            items = list(self.sorted_terms())
            if items:
                E = np.array([e for e, _ in items], dtype=np.int64)
                c = np.array([float(v) for _, v in items], dtype=np.float64)
            else:
                E = np.zeros((0, self.nvars), dtype=np.int64)
                c = np.zeros(0, dtype=np.float64)
            self._lowered = (E, c)
        return self._lowered

    def eval_float(self, point: Sequence[float]) -> float:
        # fsum is exactly rounded, so e.g. the z=0 slice of a suspension
        # reproduces the base value bit-for-bit.
        if len(point) != self.nvars:
            raise DimensionMismatchError("point length != nvars")
        E, c = self.lowered()
        if not len(c):
            return 0.0
        x = np.asarray(point, dtype=np.float64)
        return math.fsum(np.prod(x[None, :] ** E, axis=1) * c)

    def eval_float_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.nvars:
            raise DimensionMismatchError("points must be (B, nvars)")
        E, c = self.lowered()
        if not len(c):
            return np.zeros(pts.shape[0])
        return np.prod(pts[:, None, :] ** E[None, :, :], axis=2) @ c

    # ---- printing -----------------------------------------------------

    def to_source(self) -> str:
        """Canonical text form; reparses to an identical term set."""
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e) if k > 0)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = body if sign == "+" else f"-{body}"
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


class _ComplexPoly:
    """Pair (re, im) of Polys standing in for a Q(i)-coefficient polynomial.

    Used by the complex front end; variables are always the real ones, so
    conjugation is coefficient conjugation.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Poly, im: Poly):
        self.re = re
        self.im = im

    @classmethod
    def constant(cls, nvars: int, c) -> "_ComplexPoly":
        return cls(Poly.constant(nvars, c), Poly.zero(nvars))

    @classmethod
    def unit_i(cls, nvars: int) -> "_ComplexPoly":
        return cls(Poly.zero(nvars), Poly.constant(nvars, 1))

    def __add__(self, o):
        return _ComplexPoly(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return _ComplexPoly(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return _ComplexPoly(-self.re, -self.im)

    def __mul__(self, o):
        return _ComplexPoly(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    def __pow__(self, k: int):
        result = _ComplexPoly.constant(self.re.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self):
        return _ComplexPoly(self.re, -self.im)

    def real(self):
        return _ComplexPoly(self.re, Poly.zero(self.re.nvars))

    def imag(self):
        return _ComplexPoly(self.im, Poly.zero(self.re.nvars))


@dataclass(frozen=True)
class PolyMap:
    """A polynomial map germ (R^nvars, 0) -> (R^2, 0).

    Both components must vanish at the origin (germ convention); nonzero
    constant terms are rejected on construction.
    """

    nvars: int
    components: Tuple[Poly, Poly]
    name: Optional[str] = None

    def __post_init__(self):
        if len(self.components) != 2:
            raise PolyMapError("a PolyMap has exactly two components")
        for p in self.components:
            if p.nvars != self.nvars:
                raise DimensionMismatchError("component nvars != map nvars")
            if p.constant_term():
                raise ConstantTermError(
                    "component has a nonzero constant term; germs vanish at 0")
        object.__setattr__(self, "_cache", {})

    # ---- evaluation ---------------------------------------------------

    def evaluate(self, point: Sequence[float]) -> Tuple[float, float]:
        """Float evaluation (f1, f2) with fixed term-summation order."""
        if len(point) != self.nvars:
            raise DimensionMismatchError("point length != nvars")
        return (self.components[0].eval_float(point),
                self.components[1].eval_float(point))

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """(B, nvars) points -> (B, 2) values."""
        return np.stack([c.eval_float_many(points) for c in self.components],
                        axis=1)

    def evaluate_fraction(self, point: Sequence) -> Tuple[Fraction, Fraction]:
        return (self.components[0].eval_fraction(point),
                self.components[1].eval_fraction(point))

    # ---- derivatives ---------------------------------------------------

    def partials(self) -> Tuple[Tuple[Poly, ...], Tuple[Poly, ...]]:
        """Rows of the symbolic Jacobian, cached."""
        cache = self.__dict__ if hasattr(self, "__dict__") else None
        store = object.__getattribute__(self, "_cache")
        if "partials" not in store:
            store["partials"] = tuple(
                tuple(c.diff(j + 1) for j in range(self.nvars))
                for c in self.components)
        return store["partials"]

    def jacobian(self, point: Sequence[float]) -> np.ndarray:
        """Exact symbolic partials evaluated at the point; shape (2, nvars)."""
        if len(point) != self.nvars:
            raise DimensionMismatchError("point length != nvars")
        rows = self.partials()
        return np.array([[p.eval_float(point) for p in row] for row in rows])

    def jacobian_many(self, points: np.ndarray) -> np.ndarray:
        """(B, nvars) points -> (B, 2, nvars) Jacobians."""
        pts = np.asarray(points, dtype=np.float64)
        rows = self.partials()
        out = np.empty((pts.shape[0], 2, self.nvars))
        for i, row in enumerate(rows):
            for j, p in enumerate(row):
                out[:, i, j] = p.eval_float_many(pts)
        return out

    # ---- germ constructions ---------------------------------------------

    def substitute(self, sub: "Substitution") -> "PolyMap":
        """Exact composition f o s as a new PolyMap."""
        if len(sub.targets) != self.nvars:
            raise DimensionMismatchError(
                f"substitution has {len(sub.targets)} targets, map has "
                f"{self.nvars} variables")
        return PolyMap(sub.targets[0].nvars,
                       tuple(c.subs(sub.targets) for c in self.components))

    def suspend(self, r: int) -> "PolyMap":
        """The (nvars+2)-variable germ f + z^r, z = x_{n+1} + i*x_{n+2}.

        The complex power is expanded exactly via binomials.
        """
        if not isinstance(r, int) or r < 2:
            raise PolyMapError("suspension exponent must be an integer >= 2")
        n = self.nvars
        m = n + 2
        pad = {tuple(e) + (0, 0): c for e, c in self.components[0].terms.items()}
        f1 = Poly(m, pad)
        pad = {tuple(e) + (0, 0): c for e, c in self.components[1].terms.items()}
        f2 = Poly(m, pad)
        re_terms: Dict[Exponents, Fraction] = {}
        im_terms: Dict[Exponents, Fraction] = {}
        zero = (0,) * n
        for k in range(r + 1):
            coeff = Fraction(comb(r, k))
            e = zero + (r - k, k)
            if k % 2 == 0:
                re_terms[e] = coeff * (-1) ** (k // 2)
            else:
                im_terms[e] = coeff * (-1) ** ((k - 1) // 2)
        name = f"{self.name}+z^{r}" if self.name else None
        return PolyMap(m, (f1 + Poly(m, re_terms), f2 + Poly(m, im_terms)),
                       name=name)

    # ---- misc -----------------------------------------------------------

    def with_name(self, name: str) -> "PolyMap":
        return PolyMap(self.nvars, self.components, name=name)

    def to_source(self) -> str:
        return f"{self.components[0].to_source()} ; {self.components[1].to_source()}"

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"PolyMap(n={self.nvars}{tag}: {self.to_source()})"


@dataclass(frozen=True)
class Substitution:
    """Replacement of each variable x_i by a polynomial in m fresh variables."""

    targets: Tuple[Poly, ...]

    def __post_init__(self):
        if not self.targets:
            raise PolyMapError("empty substitution")
        m = self.targets[0].nvars
        for t in self.targets:
            if t.nvars != m:
                raise DimensionMismatchError("targets disagree on variable count")

    @classmethod
    def identity(cls, nvars: int) -> "Substitution":
        return cls(tuple(Poly.variable(nvars, i + 1) for i in range(nvars)))


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

_OPS = set("+-*^();/")


def _tokenize(src: str):
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _OPS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and (src[j].isdigit() or src[j] == "."):
                j += 1
            tokens.append(("num", src[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            tokens.append(("ident", src[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    """Recursive-descent parser producing _ComplexPoly values directly.

    Grammar:
        expr   := ('+'|'-')? term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := base ('^' uint)?
        base   := rational | var | 'i' | func '(' expr ')' | '(' expr ')'
        rational := num ('/' num)?
    """

    _FUNCS = ("conj", "Re", "Im")

    def __init__(self, src: str, mode: str, nvars: int):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.mode = mode
        self.nvars = nvars

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str):
        t = self.next()
        if t[0] != kind:
            raise ParseError(f"expected {kind!r}, found {t[1]!r}", t[2])
        return t

    def parse_expr(self) -> _ComplexPoly:
        sign = 1
        if self.peek()[0] in "+-":
            if self.next()[0] == "-":
                sign = -1
        value = self.parse_term()
        if sign < 0:
            value = -value
        while self.peek()[0] in "+-":
            op = self.next()[0]
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> _ComplexPoly:
        value = self.parse_factor()
        while self.peek()[0] == "*":
            self.next()
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> _ComplexPoly:
        value = self.parse_base()
        if self.peek()[0] == "^":
            self.next()
            t = self.expect("num")
            if "." in t[1]:
                raise ParseError("exponent must be a non-negative integer", t[2])
            value = value ** int(t[1])
        return value

    def parse_base(self) -> _ComplexPoly:
        kind, text, pos = self.next()
        if kind == "num":
            value = Fraction(text)
            if self.peek()[0] == "/":
                self.next()
                t = self.expect("num")
                value = value / Fraction(t[1])
            return _ComplexPoly.constant(self.nvars, value)
        if kind == "(":
            value = self.parse_expr()
            self.expect(")")
            return value
        if kind == "ident":
            if text == "i":
                if self.mode != "complex":
                    raise ParseError("imaginary unit only allowed in complex mode",
                                     pos)
                return _ComplexPoly.unit_i(self.nvars)
            if text in self._FUNCS:
                if self.mode != "complex":
                    raise ParseError(f"{text} only allowed in complex mode", pos)
                self.expect("(")
                value = self.parse_expr()
                self.expect(")")
                if text == "conj":
                    return value.conj()
                return value.real() if text == "Re" else value.imag()
            if text.startswith("x") and text[1:].isdigit():
                k = int(text[1:])
                if not 1 <= k <= self.nvars:
                    raise UnknownVariableError(
                        f"variable {text} out of range for n={self.nvars}")
                return _ComplexPoly(Poly.variable(self.nvars, k),
                                    Poly.zero(self.nvars))
            if text.startswith("z") and text[1:].isdigit():
                if self.mode != "complex":
                    raise ParseError(
                        f"complex variable {text} only allowed in complex mode",
                        pos)
                j = int(text[1:])
                if not 1 <= 2 * j <= self.nvars:
                    raise UnknownVariableError(
                        f"variable {text} out of range for n={self.nvars}")
                return _ComplexPoly(Poly.variable(self.nvars, 2 * j - 1),
                                    Poly.variable(self.nvars, 2 * j))
            raise UnknownVariableError(f"unknown identifier {text!r}")
        raise ParseError(f"unexpected token {text!r}", pos)


def parse_polymap(source: str, mode: str = "real", nvars: Optional[int] = None,
                  name: Optional[str] = None) -> PolyMap:
    """Parse expression text into a PolyMap.

    In "real" mode the source is two expressions separated by ';' over
    variables x1..xn.  In "complex" mode a single expression over z1, z2
    (and x1..x4, conj, Re, Im, i) is lowered exactly to its real and
    imaginary parts via z_j = x_{2j-1} + i*x_{2j}.
    """
    if mode not in ("real", "complex"):
        raise PolyMapError(f"unknown parse mode {mode!r}")
    if mode == "complex":
        n = 4 if nvars is None else nvars
        if n != 4:
            raise PolyMapError("complex mode supports exactly z1, z2 (n=4)")
        parser = _Parser(source, mode, n)
        value = parser.parse_expr()
        t = parser.expect("end")
        return PolyMap(n, (value.re, value.im), name=name)
    parts = source.split(";")
    if len(parts) != 2:
        raise ParseError("real mode expects exactly two ';'-separated "
                         "components", source.find(";") if ";" in source else
                         len(source))
    if nvars is None:
        nvars = 0
        for tok in _tokenize(source):
            if tok[0] == "ident" and tok[1].startswith("x") and tok[1][1:].isdigit():
                nvars = max(nvars, int(tok[1][1:]))
        if nvars == 0:
            raise PolyMapError("cannot infer variable count from source")
    comps = []
    for part in parts:
        parser = _Parser(part, mode, nvars)
        value = parser.parse_expr()
        parser.expect("end")
        if not value.im.is_zero():
            raise PolyMapError("real-mode component has an imaginary part")
        comps.append(value.re)
    return PolyMap(nvars, (comps[0], comps[1]), name=name)


# ----------------------------------------------------------------------
# Germ catalog
# ----------------------------------------------------------------------

# Rational stand-in for the sqrt(2) coefficient below (continued-fraction
# convergent, |error| < 1.6e-12); keeps the coefficient field exactly Q.
SQRT2_APPROX = Fraction(665857, 470832)

_RUDOLPH_F_SRC = "z2^3 - 3*(x1^2+x2^2)*(1+i*x2)*z2 - 2*x1"
_RUDOLPH_F_ALT_SRC = "z2^3 - 3*(x1^2+x2^2)*(1+i*x2)*z2 - 2*z1"


def _square_substitution() -> Substitution:
    """(x1, x2) -> (x1^2 - x2^2, 2*x1*x2), i.e. z1 -> z1^2; x3, x4 fixed."""
    x = [Poly.variable(4, i) for i in range(1, 5)]
    return Substitution((x[0] * x[0] - x[1] * x[1],
                         (x[0] * x[1]).scale(2), x[2], x[3]))


def _perron_components(rho_squared: Poly) -> Tuple[Poly, Poly]:
    x = [Poly.variable(4, i) for i in range(1, 5)]
    eight_x1sq = (x[0] * x[0]).scale(8)
    f1 = x[2] * rho_squared + x[0] * (eight_x1sq - rho_squared.scale(2))
    f2 = (x[3] * x[0]).scale(SQRT2_APPROX) + x[1] * (eight_x1sq - rho_squared)
    return f1, f2


@lru_cache(maxsize=None)
def _build_catalog() -> Dict[str, PolyMap]:
    x = [Poly.variable(4, i) for i in range(1, 5)]
    rho = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]
    square = _square_substitution()

    rudolph_f = parse_polymap(_RUDOLPH_F_SRC, mode="complex", name="rudolph_f")
    rudolph_f_alt = parse_polymap(_RUDOLPH_F_ALT_SRC, mode="complex",
                                  name="rudolph_f_alt")
    entries = {
        "trivial_plane": parse_polymap("x1 ; x2", nvars=4, name="trivial_plane"),
        "rudolph_f": rudolph_f,
        "rudolph_f_alt": rudolph_f_alt,
        "rudolph_g": rudolph_f.substitute(square).with_name("rudolph_g"),
        "rudolph_g_alt": rudolph_f_alt.substitute(square).with_name(
            "rudolph_g_alt"),
        "perron_f": PolyMap(4, _perron_components(rho * rho), name="perron_f"),
        "perron_f_alt": PolyMap(4, _perron_components(rho), name="perron_f_alt"),
    }
    sq34 = Substitution((x[0], x[1], x[2] * x[2] - x[3] * x[3],
                         (x[2] * x[3]).scale(2)))
    entries["perron_g"] = entries["perron_f"].substitute(sq34).with_name(
        "perron_g")
    return entries


def brieskorn(p: int, q: int) -> PolyMap:
    """(Re(z1^p + z2^q), Im(z1^p + z2^q)) expanded into real coordinates."""
    if p < 1 or q < 1:
        raise PolyMapError("brieskorn exponents must be positive")
    return parse_polymap(f"z1^{p} + z2^{q}", mode="complex",
                         name=f"brieskorn({p},{q})")


def catalog_names() -> Tuple[str, ...]:
    return tuple(sorted(_build_catalog())) + ("brieskorn(p,q)",)


def get_germ(name: str) -> PolyMap:
    """Look up a catalog germ by name (e.g. "rudolph_g", "brieskorn(2,3)")."""
    entries = _build_catalog()
    if name in entries:
        return entries[name]
    text = name.replace(" ", "")
    if text.startswith("brieskorn(") and text.endswith(")"):
        inner = text[len("brieskorn("):-1]
        parts = inner.split(",")
        if len(parts) == 2 and all(s.isdigit() for s in parts):
            return brieskorn(int(parts[0]), int(parts[1]))
    raise PolyMapError(f"unknown germ {name!r}; known: "
                       + ", ".join(catalog_names()))


def iter_catalog() -> Iterable[PolyMap]:
    """Concrete catalog germs (brieskorn represented by (2,3))."""
    for name in sorted(_build_catalog()):
        yield get_germ(name)
    yield brieskorn(2, 3)
