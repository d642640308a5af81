import typing

from uvk.syntax.terms import Succ, Term, Zero


def to_numeral(n: int) -> Term:
    if n < 0:
        raise ValueError(f"numerals are non-negative, got {n}")
    term: Term = Zero()
    for _ in range(n):
        term = Succ(term)
    return term


def numeral_value(term: Term) -> typing.Optional[int]:
    """The integer a closed `S (S ... O)` chain denotes, or None."""
    n = 0
    while isinstance(term, Succ):
        term = term.pred
        n += 1
    return n if isinstance(term, Zero) else None


def ordinal_number(n: int) -> str:
    suffix = ["th", "st", "nd", "rd", "th"][min(n % 10, 4)]
    if 11 <= (n % 100) <= 13:
        suffix = "th"
    return str(n) + suffix
