"""Orders and metadata of the non-Abelian finite simple groups.

Lie-type orders are exact polynomial evaluations.  Sporadic orders (and the
Tits group) come from a checked-in table, ``data/sporadic.csv``; the
directory can be redirected with the ``GQPRIM_DATA_DIR`` environment
variable.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from math import factorial, gcd, prod
from pathlib import Path

from .factor import factorize

DATA_ENV = "GQPRIM_DATA_DIR"
ALT_MAX_DEGREE = 10**6
Q_MAX = 1 << 64


class Family(str, Enum):
    ALT = "Alt"
    SPORADIC = "Sporadic"
    A = "A"
    A2 = "2A"
    B = "B"
    C = "C"
    D = "D"
    D2 = "2D"
    E6 = "E6"
    E6_2 = "2E6"
    E7 = "E7"
    E8 = "E8"
    F4 = "F4"
    F4_2 = "2F4"
    G2 = "G2"
    G2_2 = "2G2"
    D4_3 = "3D4"
    B2_2 = "2B2"
    TITS = "Tits"


CLASSICAL = {Family.A, Family.A2, Family.B, Family.C, Family.D, Family.D2}
EXCEPTIONAL = {
    Family.E6, Family.E6_2, Family.E7, Family.E8, Family.F4, Family.F4_2,
    Family.G2, Family.G2_2, Family.D4_3, Family.B2_2,
}
LIE = CLASSICAL | EXCEPTIONAL
MIN_RANK = {Family.A: 1, Family.A2: 2, Family.B: 2, Family.C: 2, Family.D: 4, Family.D2: 4}
# (family, rank, q) combinations that are not simple
NOT_SIMPLE = {
    (Family.A, 1, 2): "PSL2(2) is soluble",
    (Family.A, 1, 3): "PSL2(3) is soluble",
    (Family.A2, 2, 2): "PSU3(2) is soluble",
    (Family.B, 2, 2): "B2(2) is Sym6, not simple",
    (Family.C, 2, 2): "C2(2) is Sym6, not simple",
    (Family.G2, None, 2): "G2(2) is not simple",
    (Family.B2_2, None, 2): "2B2(2) is soluble",
    (Family.G2_2, None, 3): "2G2(3) is not simple",
    (Family.F4_2, None, 2): "2F4(2) is not simple; use the Tits group",
}
# sign carried by each twisted/untwisted pair, for display and centraliser formulas
EPSILON = {Family.A: 1, Family.A2: -1, Family.D: 1, Family.D2: -1, Family.E6: 1, Family.E6_2: -1}


class InvalidGroup(ValueError):
    pass


@dataclass(frozen=True)
class GroupId:
    family: Family
    n: int | None = None
    q: int | None = None
    name: str | None = None

    def __str__(self) -> str:
        f = self.family
        if f is Family.ALT:
            return f"Alt({self.n})"
        if f is Family.SPORADIC:
            return self.name or "?"
        if f is Family.TITS:
            return "Tits"
        if f in CLASSICAL:
            return f"{f.value}{self.n}({self.q})"
        return f"{f.value}({self.q})"

    @property
    def epsilon(self) -> int:
        return EPSILON.get(self.family, 1)


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, k) with q = p**k, or None."""
    if q < 2 or q >= Q_MAX:
        return None
    f = factorize(q)
    if len(f.primes) != 1 or not f.complete:
        return None
    ((p, k),) = f.primes.items()
    return p, k


def validation_error(g: GroupId) -> str | None:
    """The exclusion rule ``g`` violates, or None if it is valid."""
    f = g.family
    if f is Family.ALT:
        if g.n is None or g.n < 5:
            return "Alt_n needs n >= 5"
        if g.n > ALT_MAX_DEGREE:
            return f"Alt_n only supported for n <= {ALT_MAX_DEGREE}"
        return None
    if f is Family.SPORADIC:
        if g.name not in sporadic_table() or g.name == "Tits":
            return f"unknown sporadic group {g.name!r}"
        return None
    if f is Family.TITS:
        return None
    if g.q is None:
        return "Lie type groups need q"
    pk = prime_power(g.q)
    if pk is None:
        return f"q={g.q} is not a prime power"
    p, k = pk
    if f in CLASSICAL:
        if g.n is None or g.n < MIN_RANK[f]:
            return f"{f.value} needs rank n >= {MIN_RANK[f]}"
        key = (f, g.n, g.q)
    else:
        if g.n is not None:
            return f"{f.value} takes no rank parameter"
        key = (f, None, g.q)
    if f in (Family.B2_2, Family.F4_2) and (p != 2 or k % 2 == 0):
        return f"{f.value} needs q = 2^(2m+1)"
    if f is Family.G2_2 and (p != 3 or k % 2 == 0):
        return "2G2 needs q = 3^(2m+1)"
    return NOT_SIMPLE.get(key)


def is_simple_valid(g: GroupId) -> bool:
    return validation_error(g) is None


def check(g: GroupId) -> GroupId:
    err = validation_error(g)
    if err:
        raise InvalidGroup(f"{g}: {err}")
    return g


def diagonal_gcd(g: GroupId) -> int:
    """The d dividing out the centre in the order formula (1 if trivial)."""
    f, n, q = g.family, g.n, g.q
    if f is Family.A:
        return gcd(n + 1, q - 1)
    if f is Family.A2:
        return gcd(n + 1, q + 1)
    if f in (Family.B, Family.C, Family.E7):
        return gcd(2, q - 1)
    if f is Family.D:
        return gcd(4, q**n - 1)
    if f is Family.D2:
        return gcd(4, q**n + 1)
    if f is Family.E6:
        return gcd(3, q - 1)
    if f is Family.E6_2:
        return gcd(3, q + 1)
    return 1


def _pm(q: int, exps: list[int]) -> int:
    return prod(q**i - 1 for i in exps)


def order_numerator(g: GroupId) -> int:
    """Lie-type order polynomial before dividing by :func:`diagonal_gcd`."""
    f, n, q = g.family, g.n, g.q
    if f is Family.A:
        return q ** (n * (n + 1) // 2) * _pm(q, list(range(2, n + 2)))
    if f is Family.A2:
        return q ** (n * (n + 1) // 2) * prod(q**i - (-1) ** i for i in range(2, n + 2))
    if f in (Family.B, Family.C):
        return q ** (n * n) * _pm(q, [2 * i for i in range(1, n + 1)])
    if f in (Family.D, Family.D2):
        eps = 1 if f is Family.D else -1
        return q ** (n * (n - 1)) * (q**n - eps) * _pm(q, [2 * i for i in range(1, n)])
    if f is Family.G2:
        return q**6 * _pm(q, [6, 2])
    if f is Family.F4:
        return q**24 * _pm(q, [12, 8, 6, 2])
    if f is Family.E6:
        return q**36 * _pm(q, [12, 9, 8, 6, 5, 2])
    if f is Family.E6_2:
        return q**36 * (q**12 - 1) * (q**9 + 1) * (q**8 - 1) * (q**6 - 1) * (q**5 + 1) * (q**2 - 1)
    if f is Family.E7:
        return q**63 * _pm(q, [2, 6, 8, 10, 12, 14, 18])
    if f is Family.E8:
        return q**120 * _pm(q, [2, 8, 12, 14, 18, 20, 24, 30])
    if f is Family.D4_3:
        return q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1)
    if f is Family.B2_2:
        return q**2 * (q**2 + 1) * (q - 1)
    if f is Family.G2_2:
        return q**3 * (q**3 + 1) * (q - 1)
    if f is Family.F4_2:
        return q**12 * (q**6 + 1) * (q**4 - 1) * (q**3 + 1) * (q - 1)
    raise InvalidGroup(f"{f.value} is not of Lie type")


def order(g: GroupId) -> int:
    """|T| exactly."""
    check(g)
    if g.family is Family.ALT:
        return factorial(g.n) // 2
    if g.family is Family.SPORADIC:
        return sporadic_table()[g.name][0]
    if g.family is Family.TITS:
        return sporadic_table()["Tits"][0]
    num, d = order_numerator(g), diagonal_gcd(g)
    o, rem = divmod(num, d)
    assert rem == 0, f"{g}: order polynomial not divisible by d={d}"
    return o


def data_dir() -> Path:
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("gqprim") / "data"))


@lru_cache(maxsize=None)
def _load_sporadic(path: str) -> dict[str, tuple[int, int]]:
    table: dict[str, tuple[int, int]] = {}
    with open(path, newline="", encoding="ascii") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            name, o, m = row
            o, m = int(o), int(m)
            if o % m:
                raise ValueError(f"sporadic table: class size {m} does not divide |{name}|")
            table[name] = (o, m)
    return table


def sporadic_table() -> dict[str, tuple[int, int]]:
    """name -> (order, minimal nontrivial class size)."""
    return _load_sporadic(str(data_dir() / "sporadic.csv"))


def sporadic_names() -> list[str]:
    return [n for n in sporadic_table() if n != "Tits"]


def alt(n: int) -> GroupId:
    return GroupId(Family.ALT, n=n)


def sporadic(name: str) -> GroupId:
    if name == "Tits":
        return GroupId(Family.TITS)
    return GroupId(Family.SPORADIC, name=name)


def lie(family: str | Family, q: int, n: int | None = None) -> GroupId:
    return GroupId(Family(family), n=n, q=q)


_TWIST = {"A": Family.A2, "D": Family.D2, "E6": Family.E6_2}


def parse_group(text: str) -> GroupId:
    """Parse ``Alt:7``, ``Spor:M11``, ``Tits`` or ``A:n=2,q=4,eps=+``."""
    head, sep, rest = text.partition(":")
    if head == "Tits" and not sep:
        return check(GroupId(Family.TITS))
    if not sep or not rest:
        raise InvalidGroup(f"cannot parse group {text!r}")
    if head == "Alt":
        if not rest.isdigit():
            raise InvalidGroup(f"bad degree in {text!r}")
        return check(alt(int(rest)))
    if head == "Spor":
        return check(sporadic(rest))
    try:
        fam = Family(head)
    except ValueError:
        raise InvalidGroup(f"unknown family {head!r}") from None
    if fam in (Family.ALT, Family.SPORADIC, Family.TITS) or fam not in LIE:
        raise InvalidGroup(f"unknown family {head!r}")
    kv: dict[str, str] = {}
    for part in rest.split(","):
        k, eq, v = part.partition("=")
        if not eq or k not in ("n", "q", "eps") or k in kv:
            raise InvalidGroup(f"bad parameter {part!r} in {text!r}")
        kv[k] = v
    if "q" not in kv or not kv["q"].isdigit():
        raise InvalidGroup(f"missing or bad q in {text!r}")
    n = None
    if "n" in kv:
        if not kv["n"].isdigit():
            raise InvalidGroup(f"bad n in {text!r}")
        n = int(kv["n"])
    eps = kv.get("eps", "+")
    if eps not in ("+", "-"):
        raise InvalidGroup(f"eps must be + or - in {text!r}")
    if eps == "-":
        if fam not in _TWIST:
            raise InvalidGroup(f"{head} has no twisted form")
        fam = _TWIST[fam]
    return check(GroupId(fam, n=n, q=int(kv["q"])))
