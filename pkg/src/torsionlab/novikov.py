"""Arithmetic in the universal Novikov ring with exact rational exponents.

An element is a finite sum  sum_i  a_i * T^(l_i) * e^(m_i)  with rational
coefficients a_i, rational T-exponents l_i, and integer e-exponents m_i.
The T-adic valuation of a nonzero element is its smallest T-exponent; the
valuation of zero is +infinity.  Elements with valuation >= 0 form the
bounded subring, those with valuation > 0 its maximal ideal.

Every element carries a truncation level ``trunc``: terms with T-exponent
at or above ``trunc`` have been dropped and the element is reliable only
below that level.  ``trunc = inf`` marks an exact element.  Sums truncate
at the smaller of the two levels.  Products truncate at

    min(x.trunc + valuation(y),  y.trunc + valuation(x))

so that no retained term could have been contaminated by a dropped one.
Inversion and division are long division against the leading term; when
the quotient is an infinite series, a finite truncation level is required
and PrecisionExhausted is raised otherwise.

All exponents stay exact Fractions end to end.  Downstream quantities
(valuations, torsion exponents, thresholds) are therefore exact rationals
whenever they fall below the truncation budget; floating point is never
involved.

Elements are immutable values: every operation returns a new element, and
sharing across threads is safe.

>>> x = from_text("1 - T(1)")
>>> to_text(invert(x.retruncate(3)))
'1 + T(1) + T(2)'
>>> to_text(x * from_text("1 + T(1) + T(2)"))
'1 - T(3)'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InexactDivision, PrecisionExhausted
from .rationals import INFINITE, Level, as_level, format_level, is_infinite

# A term is (coefficient, T-exponent, e-exponent).
Term = tuple[Fraction, Fraction, int]

# Long division with an infinite truncation level terminates only when the
# quotient is a finite sum.  The step budget turns the non-terminating case
# into a PrecisionExhausted instead of a hang.
_DIVISION_STEP_BUDGET = 100_000


def _canonical_terms(terms: Iterable[tuple], trunc: Level) -> tuple[Term, ...]:
    merged: dict[tuple[Fraction, int], Fraction] = {}
    for coeff, t_exp, e_exp in terms:
        coeff = Fraction(coeff)
        t_exp = Fraction(t_exp)
        e_exp = int(e_exp)
        if coeff == 0 or t_exp >= trunc:
            continue
        key = (t_exp, e_exp)
        acc = merged.get(key, _ZERO_FRACTION) + coeff
        if acc == 0:
            merged.pop(key, None)
        else:
            merged[key] = acc
    return tuple(
        (coeff, t_exp, e_exp)
        for (t_exp, e_exp), coeff in sorted(merged.items())
    )


_ZERO_FRACTION = Fraction(0)


class NovikovElement:
    """Immutable finite sum of T/e monomials below a truncation level."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Iterable[tuple] = (), trunc: Level = INFINITE):
        trunc = as_level(trunc)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "terms", _canonical_terms(terms, trunc))

    def __setattr__(self, name, value):
        raise AttributeError("NovikovElement is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, trunc: Level = INFINITE) -> "NovikovElement":
        return cls((), trunc)

    @classmethod
    def one(cls) -> "NovikovElement":
        return cls(((Fraction(1), Fraction(0), 0),))

    @classmethod
    def monomial(cls, coeff, t_exp=0, e_exp: int = 0,
                 trunc: Level = INFINITE) -> "NovikovElement":
        return cls(((Fraction(coeff), Fraction(t_exp), e_exp),), trunc)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self) -> Level:
        """Smallest T-exponent; +inf for the zero element."""
        if not self.terms:
            return INFINITE
        return self.terms[0][1]

    def leading_term(self) -> Term:
        if not self.terms:
            raise ValueError("zero element has no leading term")
        return self.terms[0]

    def is_integral(self) -> bool:
        """Membership in the bounded subring (valuation >= 0)."""
        return self.valuation() >= 0

    def has_positive_valuation(self) -> bool:
        """Membership in the maximal ideal (valuation > 0)."""
        return self.valuation() > 0

    def retruncate(self, trunc: Level) -> "NovikovElement":
        """Drop terms at or above ``trunc``; keeps the smaller level."""
        level = min(self.trunc, as_level(trunc))
        if level == self.trunc:
            return self
        return NovikovElement(self.terms, level)

    def collapse_e(self) -> "NovikovElement":
        """Forget the e-grading (set every e-exponent to zero, merging)."""
        return NovikovElement(
            ((c, l, 0) for c, l, _ in self.terms), self.trunc)

    # -- ring operations ----------------------------------------------

    @staticmethod
    def _coerce(value) -> "NovikovElement":
        if isinstance(value, NovikovElement):
            return value
        if isinstance(value, (int, Fraction)):
            return NovikovElement.monomial(value)
        return NotImplemented

    def __add__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return NovikovElement(self.terms + other.terms,
                              min(self.trunc, other.trunc))

    __radd__ = __add__

    def __neg__(self) -> "NovikovElement":
        return NovikovElement(
            ((-c, l, m) for c, l, m in self.terms), self.trunc)

    def __sub__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "NovikovElement":
        return (-self) + other

    def __mul__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        trunc = min(self.trunc + other.valuation(),
                    other.trunc + self.valuation())
        if is_infinite(trunc):
            trunc = INFINITE
        acc: dict[tuple[Fraction, int], Fraction] = {}
        for a, la, ma in self.terms:
            for b, lb, mb in other.terms:
                level = la + lb
                if level >= trunc:
                    continue
                key = (level, ma + mb)
                acc[key] = acc.get(key, _ZERO_FRACTION) + a * b
        return NovikovElement(
            ((c, l, m) for (l, m), c in acc.items()), trunc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "NovikovElement":
        if exponent < 0:
            return invert(self) ** (-exponent)
        out = NovikovElement.one()
        for _ in range(exponent):
            out = out * self
        return out

    def __truediv__(self, other) -> "NovikovElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return divide_exact(self, other)

    # -- comparison ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NovikovElement.monomial(other)
        if not isinstance(other, NovikovElement):
            return NotImplemented
        return self.terms == other.terms and self.trunc == other.trunc

    def __hash__(self) -> int:
        return hash((self.terms, self.trunc))

    def agrees_with(self, other: "NovikovElement") -> bool:
        """True when the difference vanishes below the shared level."""
        diff = self - other
        return diff.valuation() >= diff.trunc

    def __repr__(self) -> str:
        level = "" if is_infinite(self.trunc) else f" (mod T^{self.trunc})"
        return f"<{to_text(self)}{level}>"

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)


def valuation(x: NovikovElement) -> Level:
    return x.valuation()


def divide_exact(x: NovikovElement, y: NovikovElement) -> NovikovElement:
    """Quotient x / y by long division against the leading term of y.

    The quotient exists in the bounded subring exactly when
    valuation(x) >= valuation(y); with negative exponents allowed the
    division always proceeds.  The quotient is truncated at
    min(x.trunc, y.trunc) - valuation(y), the level below which its terms
    are reliable.

    The divisor's lowest T-level must consist of a single term (a
    monomial in e).  Divisibility by elements like 1 + e is undecidable
    by T-adic valuation alone and nothing here needs it; collapse the
    e-grading first if it is irrelevant.

    >>> to_text(divide_exact(from_text("T(3) - T(4)"), from_text("T(3)")))
    '1 - T(1)'
    """
    if y.is_zero():
        raise ZeroDivisionError("division by the zero element")
    yc, yl, ym = y.leading_term()
    if len(y.terms) > 1 and y.terms[1][1] == yl:
        raise InexactDivision(
            "divisor's lowest T-level has several e-terms; "
            "collapse the e-grading or use an e-monomial-led divisor")
    out_trunc = min(x.trunc, y.trunc) - yl
    if is_infinite(out_trunc):
        out_trunc = INFINITE
    quotient: list[Term] = []
    remainder = x
    steps = 0
    while remainder.terms:
        rc, rl, rm = remainder.leading_term()
        level = rl - yl
        if level >= out_trunc:
            break
        steps += 1
        if steps > _DIVISION_STEP_BUDGET and is_infinite(out_trunc):
            raise PrecisionExhausted(
                "quotient is an infinite series; set a finite truncation")
        piece = (rc / yc, level, rm - ym)
        quotient.append(piece)
        remainder = remainder - NovikovElement((piece,)) * y
    return NovikovElement(quotient, out_trunc)


def invert(x: NovikovElement) -> NovikovElement:
    """Multiplicative inverse, exact for monomials, truncated otherwise.

    x * invert(x) equals one below the propagated truncation level.  When
    the inverse is an infinite geometric series a finite x.trunc is
    required.

    >>> to_text(invert(NovikovElement.monomial(1, Fraction(2))))
    'T(-2)'
    """
    return divide_exact(NovikovElement.one(), x)


def is_divisible(x: NovikovElement, y: NovikovElement) -> bool:
    """Whether x / y stays in the bounded subring."""
    if y.is_zero():
        return x.is_zero()
    return x.valuation() >= y.valuation()


def default_truncation(values: Iterable[Level]) -> Level:
    """Energy budget used when no truncation is requested: four times the
    largest finite input valuation (infinite when every input is exact
    zero or no value is finite)."""
    finite = [Fraction(v) for v in values if not is_infinite(v)]
    if not finite:
        return INFINITE
    top = max(max(finite), Fraction(1))
    return 4 * top


# -- text encoding ----------------------------------------------------
#
# Canonical form: terms sorted by (T-exponent, e-exponent), joined by
# " + " / " - ", each term  coeff*T(p/q)*e(n)  with unit coefficients and
# zero exponents omitted.  Examples: "2*T(3/2)*e(-1) + T(2)", "1 - T(3)",
# "0".  Round-trips are bit exact.

_TERM_PATTERN = re.compile(
    r"""^\s*
    (?:(?P<coeff>\d+(?:/\d+)?)\s*)?
    (?:\*?\s*T\(\s*(?P<t>-?\d+(?:/\d+)?)\s*\)\s*)?
    (?:\*?\s*e\(\s*(?P<e>-?\d+)\s*\)\s*)?
    $""",
    re.VERBOSE,
)


def _format_term(coeff: Fraction, t_exp: Fraction, e_exp: int) -> str:
    parts = []
    if t_exp != 0:
        parts.append(f"T({t_exp})")
    if e_exp != 0:
        parts.append(f"e({e_exp})")
    magnitude = abs(coeff)
    if magnitude != 1 or not parts:
        parts.insert(0, str(magnitude))
    return "*".join(parts)


def to_text(x: NovikovElement) -> str:
    if not x.terms:
        return "0"
    pieces = []
    for index, (coeff, t_exp, e_exp) in enumerate(x.terms):
        body = _format_term(coeff, t_exp, e_exp)
        if index == 0:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"{'+' if coeff > 0 else '-'} {body}")
    return " ".join(pieces)


def _split_terms(text: str) -> list[tuple[int, str]]:
    """Split into (sign, body) summands at top-level + and - signs.

    Signs inside parentheses, as in T(-1), never split a term.
    """
    pieces: list[tuple[int, str]] = []
    depth = 0
    sign = 1
    body: list[str] = []
    has_content = False
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
        if depth == 0 and char in "+-":
            if has_content:
                pieces.append((sign, "".join(body)))
                body = []
                has_content = False
                sign = 1
            if char == "-":
                sign = -sign
            continue
        if not char.isspace():
            has_content = True
        body.append(char)
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    if has_content:
        pieces.append((sign, "".join(body)))
    elif sign != 1 or not pieces:
        raise ValueError(f"dangling sign or empty term in {text!r}")
    return pieces


def from_text(text: str, trunc: Level = INFINITE) -> NovikovElement:
    """Parse the text encoding.  Inverse of to_text on canonical forms."""
    stripped = text.strip()
    if stripped == "0":
        return NovikovElement.zero(trunc)
    if not stripped:
        raise ValueError("empty Novikov literal")
    terms = []
    for sign, body in _split_terms(stripped):
        match = _TERM_PATTERN.match(body)
        if not match or not body.strip():
            raise ValueError(f"cannot parse Novikov term {body!r}")
        coeff_text, t_text, e_text = match.group("coeff", "t", "e")
        if coeff_text is None and t_text is None and e_text is None:
            raise ValueError(f"cannot parse Novikov term {body!r}")
        coeff = Fraction(coeff_text) if coeff_text else Fraction(1)
        terms.append((
            sign * coeff,
            Fraction(t_text) if t_text else Fraction(0),
            int(e_text) if e_text else 0,
        ))
    return NovikovElement(terms, trunc)


# -- JSON encoding ----------------------------------------------------

def to_json_terms(x: NovikovElement) -> list[dict]:
    """List of {"coeff": "p/q", "t": "p/q", "e": n}; truncation is carried
    by the enclosing container, not per element."""
    return [
        {"coeff": str(coeff), "t": str(t_exp), "e": e_exp}
        for coeff, t_exp, e_exp in x.terms
    ]


def from_json_terms(data: Iterable[dict], trunc: Level = INFINITE) -> NovikovElement:
    terms = []
    for entry in data:
        terms.append((
            Fraction(entry["coeff"]),
            Fraction(entry.get("t", 0)),
            int(entry.get("e", 0)),
        ))
    return NovikovElement(terms, trunc)


def parse(value, trunc: Level = INFINITE) -> NovikovElement:
    """Liberal constructor: element, text, JSON term list, int, Fraction."""
    if isinstance(value, NovikovElement):
        return value.retruncate(trunc)
    if isinstance(value, str):
        return from_text(value, trunc)
    if isinstance(value, (int, Fraction)):
        return NovikovElement.monomial(value, trunc=trunc)
    if isinstance(value, (list, tuple)):
        return from_json_terms(value, trunc)
    raise TypeError(f"cannot interpret {value!r} as a Novikov element")
