"""Task formulas: a small fragment of metric interval temporal logic.

A task is a pair of conjunctions over atomic propositions: hard constraints
(safety, never relaxed) and soft constraints (relaxed with violation costs).
The accepted surface syntax is

    formula   = hard-part [";"] [soft-part] | soft-part
    hard-part = "hard" ":" conj
    soft-part = "soft" ":" conj
    conj      = term {"&" term}
    term      = "G" "!" atom
              | "G" atom
              | "G" "F" interval atom
              | "G" "(" atom "->" "F" interval atom ")"
              | "F" [interval] atom
              | atom "U" interval atom
    interval  = "[" number "," (number | "inf") ")"
    atom      = identifier

Hard constraints are restricted to "G !atom" terms.  Intervals are
right-open with rational endpoints; a "*Within" pattern is exactly one
whose interval has a finite upper bound.  "F atom" and "F[0,inf) atom"
both denote the unbounded eventually.

All types here are immutable; parsing and rendering are inverse on valid
input (round-tripped in the test suite).
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field


class Pattern(enum.Enum):
    ALWAYS_NOT = "always_not"
    ALWAYS = "always"
    EVENTUALLY = "eventually"
    EVENTUALLY_WITHIN = "eventually_within"
    ALWAYS_EVENTUALLY_WITHIN = "always_eventually_within"
    ALWAYS_IMPLIES_EVENTUALLY_WITHIN = "always_implies_eventually_within"
    UNTIL_WITHIN = "until_within"
    # Derived by split_until; carries the "left operand holds until the right
    # one occurs" obligation.  Not part of the surface grammar.
    HOLD_UNTIL = "hold_until"


class TemporalClass(enum.Enum):
    TEMPORALLY_BOUNDED = "temporally_bounded"
    NON_BOUNDED_TYPE_I = "non_bounded_type_i"
    NON_BOUNDED_TYPE_II = "non_bounded_type_ii"


class FormulaError(ValueError):
    """Raised for syntax, vocabulary, or pattern errors in task formulas."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass(frozen=True, order=True)
class Interval:
    """Right-open time interval [lower, upper) with 0 <= lower < upper."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower < 0:
            raise FormulaError(f"interval lower bound must be non-negative: {self.lower}")
        if not self.upper > self.lower:
            raise FormulaError(f"empty interval [{_num(self.lower)},{_num(self.upper)})")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    def contains(self, t: float) -> bool:
        return self.lower <= t < self.upper

    def render(self) -> str:
        hi = "inf" if not self.bounded else _num(self.upper)
        return f"[{_num(self.lower)},{hi})"


# Patterns whose interval must have a finite upper bound.
_WITHIN = {
    Pattern.EVENTUALLY_WITHIN,
    Pattern.ALWAYS_EVENTUALLY_WITHIN,
    Pattern.ALWAYS_IMPLIES_EVENTUALLY_WITHIN,
    Pattern.UNTIL_WITHIN,
}
_BINARY = {Pattern.ALWAYS_IMPLIES_EVENTUALLY_WITHIN, Pattern.UNTIL_WITHIN, Pattern.HOLD_UNTIL}


@dataclass(frozen=True, order=True)
class SubFormula:
    """One conjunct: a pattern instance over one or two atoms."""

    pattern: Pattern
    atoms: tuple[str, ...]
    interval: Interval | None = None

    def __post_init__(self) -> None:
        want = 2 if self.pattern in _BINARY else 1
        if len(self.atoms) != want:
            raise FormulaError(f"{self.pattern.value} takes {want} atom(s), got {len(self.atoms)}")
        if self.pattern in _WITHIN:
            if self.interval is None or not self.interval.bounded:
                raise FormulaError(f"{self.pattern.value} requires a bounded interval")
        elif self.interval is not None:
            raise FormulaError(f"{self.pattern.value} takes no interval")

    def render(self) -> str:
        a = self.atoms
        match self.pattern:
            case Pattern.ALWAYS_NOT:
                return f"G !{a[0]}"
            case Pattern.ALWAYS:
                return f"G {a[0]}"
            case Pattern.EVENTUALLY:
                return f"F {a[0]}"
            case Pattern.EVENTUALLY_WITHIN:
                return f"F{self.interval.render()} {a[0]}"
            case Pattern.ALWAYS_EVENTUALLY_WITHIN:
                return f"G F{self.interval.render()} {a[0]}"
            case Pattern.ALWAYS_IMPLIES_EVENTUALLY_WITHIN:
                return f"G ({a[0]} -> F{self.interval.render()} {a[1]})"
            case Pattern.UNTIL_WITHIN:
                return f"{a[0]} U{self.interval.render()} {a[1]}"
            case Pattern.HOLD_UNTIL:
                # Derived conjunct; functional form, not surface syntax.
                return f"holduntil({a[0]},{a[1]})"
        raise AssertionError(self.pattern)


@dataclass(frozen=True)
class Formula:
    """A task: hard and soft conjunctions over a declared alphabet."""

    alphabet: frozenset[str]
    hard: tuple[SubFormula, ...] = field(default=())
    soft: tuple[SubFormula, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.hard and not self.soft:
            raise FormulaError("formula has no conjuncts")
        for sub in self.hard:
            if sub.pattern is not Pattern.ALWAYS_NOT:
                raise FormulaError("hard constraints are restricted to 'G !atom' conjuncts")
        for sub in self.hard + self.soft:
            for atom in sub.atoms:
                if atom not in self.alphabet:
                    raise FormulaError(f"unknown proposition {atom!r}")
        if len(set(self.hard)) != len(self.hard) or len(set(self.soft)) != len(self.soft):
            raise FormulaError("duplicate conjuncts")

    @property
    def hard_atoms(self) -> frozenset[str]:
        return frozenset(a for sub in self.hard for a in sub.atoms)

    def render(self) -> str:
        parts = []
        if self.hard:
            parts.append("hard: " + " & ".join(s.render() for s in self.hard))
        if self.soft:
            parts.append("soft: " + " & ".join(s.render() for s in self.soft))
        return " ; ".join(parts)


def classify(sub: SubFormula) -> TemporalClass:
    """Temporal class of a conjunct.

    Bounded patterns (finite interval upper bound, including the until
    pattern via its bounded obligation) evaluate over {vio, sat, unc};
    unbounded eventually is Type I ({sat, unc}); unbounded always and the
    hold-until flag are Type II ({vio, unc}).
    """
    if sub.pattern in _WITHIN:
        return TemporalClass.TEMPORALLY_BOUNDED
    if sub.pattern is Pattern.EVENTUALLY:
        return TemporalClass.NON_BOUNDED_TYPE_I
    return TemporalClass.NON_BOUNDED_TYPE_II


def split_until(sub: SubFormula) -> tuple[SubFormula, ...]:
    """Decompose an until conjunct into its two monitored obligations.

    "a U[l,u) b" combines a bounded obligation (b must occur within the
    window) with an unbounded one (a must hold at every step strictly
    before the first b).  Each part is monitored independently:

        a U[l,u) b  ->  F[l,u) b  and  holduntil(a, b)

    The decomposition is exact for l == 0 (a zero-violation run on the
    pair coincides with satisfaction of the until); for l > 0 a witness
    before the window opens is not credited by the bounded part, which
    makes the pair slightly stricter.  Non-until conjuncts pass through.
    """
    if sub.pattern is not Pattern.UNTIL_WITHIN:
        return (sub,)
    left, right = sub.atoms
    return (
        SubFormula(Pattern.EVENTUALLY_WITHIN, (right,), sub.interval),
        SubFormula(Pattern.HOLD_UNTIL, (left, right)),
    )


def normalize_soft(soft: tuple[SubFormula, ...]) -> tuple[SubFormula, ...]:
    """Apply split_until to every soft conjunct, rejecting duplicates."""
    out: list[SubFormula] = []
    for sub in soft:
        for part in split_until(sub):
            if part in out:
                raise FormulaError(f"duplicate conjunct after until split: {part.render()}")
            out.append(part)
    return tuple(out)


# --- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)"
    r"|(?P<punct>[:;&!()\[\],])"
)

_KEYWORDS = {"G", "F", "U", "hard", "soft", "inf"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> FormulaError:
        return FormulaError(message, self.cur.line, self.cur.col)

    def accept(self, text: str) -> bool:
        if self.cur.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> _Token:
        if self.cur.text != text:
            raise self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")
        tok = self.cur
        self.pos += 1
        return tok

    def atom(self) -> str:
        tok = self.cur
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise self.error(f"expected proposition, found {tok.text or 'end of input'!r}")
        self.pos += 1
        return tok.text

    def number(self) -> float:
        tok = self.cur
        if tok.text == "inf":
            self.pos += 1
            return math.inf
        if tok.kind != "num":
            raise self.error(f"expected number or 'inf', found {tok.text!r}")
        self.pos += 1
        return float(tok.text)

    def interval(self) -> Interval:
        self.expect("[")
        lo_tok = self.cur
        lo = self.number()
        self.expect(",")
        hi = self.number()
        close = self.expect(")")
        try:
            return Interval(lo, hi)
        except FormulaError as exc:
            raise FormulaError(str(exc), lo_tok.line, lo_tok.col) from None

    def term(self) -> SubFormula:
        tok = self.cur
        if self.accept("G"):
            if self.accept("!"):
                return SubFormula(Pattern.ALWAYS_NOT, (self.atom(),))
            if self.accept("F"):
                iv = self.interval()
                if not iv.bounded:
                    raise FormulaError("'G F' requires a bounded interval", tok.line, tok.col)
                return SubFormula(Pattern.ALWAYS_EVENTUALLY_WITHIN, (self.atom(),), iv)
            if self.accept("("):
                trigger = self.atom()
                self.expect("->")
                self.expect("F")
                iv = self.interval()
                if not iv.bounded:
                    raise FormulaError(
                        "'G (.. -> F ..)' requires a bounded interval", tok.line, tok.col
                    )
                target = self.atom()
                self.expect(")")
                return SubFormula(
                    Pattern.ALWAYS_IMPLIES_EVENTUALLY_WITHIN, (trigger, target), iv
                )
            return SubFormula(Pattern.ALWAYS, (self.atom(),))
        if self.accept("F"):
            if self.cur.text == "[":
                iv = self.interval()
                if not iv.bounded:
                    if iv.lower != 0:
                        raise FormulaError(
                            "unbounded eventually supports only lower bound 0", tok.line, tok.col
                        )
                    return SubFormula(Pattern.EVENTUALLY, (self.atom(),))
                return SubFormula(Pattern.EVENTUALLY_WITHIN, (self.atom(),), iv)
            return SubFormula(Pattern.EVENTUALLY, (self.atom(),))
        left = self.atom()
        self.expect("U")
        iv = self.interval()
        if not iv.bounded:
            raise FormulaError("until requires a bounded interval", tok.line, tok.col)
        right = self.atom()
        return SubFormula(Pattern.UNTIL_WITHIN, (left, right), iv)

    def conjunction(self, stop: str) -> tuple[SubFormula, ...]:
        if self.cur.text == stop or self.cur.kind == "eof":
            return ()
        terms = [self.term()]
        while self.accept("&"):
            terms.append(self.term())
        return tuple(terms)


def parse(text: str, alphabet: frozenset[str] | set[str] | None = None) -> Formula:
    """Parse a task formula.

    When ``alphabet`` is omitted it defaults to the atoms that occur in the
    text; when given, any atom outside it is an error.
    """
    parser = _Parser(_tokenize(text))
    hard: tuple[SubFormula, ...] = ()
    soft: tuple[SubFormula, ...] = ()
    if parser.cur.text not in ("hard", "soft"):
        raise parser.error("expected a 'hard:' or 'soft:' section")
    if parser.accept("hard"):
        parser.expect(":")
        hard = parser.conjunction(";")
        parser.accept(";")
    if parser.accept("soft"):
        parser.expect(":")
        soft = parser.conjunction(";")
    if parser.cur.kind != "eof":
        raise parser.error(f"trailing input {parser.cur.text!r}")
    for sub in hard:
        if sub.pattern is not Pattern.ALWAYS_NOT:
            raise FormulaError(
                f"unsupported pattern in hard constraints: {sub.render()!r}"
            )
    used = frozenset(a for sub in hard + soft for a in sub.atoms)
    if alphabet is None:
        alphabet = used
    return Formula(alphabet=frozenset(alphabet), hard=hard, soft=soft)


def _num(x: float) -> str:
    if math.isfinite(x) and x == int(x):
        return str(int(x))
    return str(x)
