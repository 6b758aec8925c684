"""Centraliser orders and the |C_T(x)| < |T|^(1-r/5) classifier.

Witnesses are specific elements with known centraliser order: a 3-cycle in
Alt_n, a long-root unipotent (or a suitable involution) in groups of Lie
type, and the ATLAS maximum for sporadic groups.  Comparisons are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd, prod

from . import groups as G
from .arith import power_cmp, power_lt
from .groups import Family, GroupId, order

ALT_EXACT_LIMIT = 40


@dataclass(frozen=True)
class CentraliserWitness:
    group: GroupId
    value: int
    element_description: str
    is_lower_bound: bool = False
    # 2B2 only: value bounds every nontrivial centraliser from above
    is_upper_bound_only: bool = False

    def as_dict(self) -> dict:
        return {
            "group": str(self.group),
            "value": str(self.value),
            "element": self.element_description,
            "is_lower_bound": self.is_lower_bound,
            "is_upper_bound_only": self.is_upper_bound_only,
        }


def _simple(fam: Family, q: int, n: int | None = None) -> int:
    """Order of a simple group of Lie type, skipping the simplicity check."""
    g = GroupId(fam, n=n, q=q)
    return G.order_numerator(g) // G.diagonal_gcd(g)


def psl2_max_centraliser(q: int) -> int:
    """Largest nontrivial centraliser in PSL2(q), q >= 4."""
    if q % 2 == 0 or q % 4 == 3:
        return q + 1
    return q


def _so_even(n: int, q: int, sign: int) -> int:
    """|SO^sign_{2n}(q)|."""
    return q ** (n * n - n) * (q**n - sign) * prod(q ** (2 * i) - 1 for i in range(1, n))


def witness_centraliser(g: GroupId) -> CentraliserWitness:
    G.check(g)
    f, n, q = g.family, g.n, g.q
    W = CentraliserWitness
    if f is Family.ALT:
        return W(g, 3 * factorial(n - 3) // 2, "3-cycle")
    if f in (Family.SPORADIC, Family.TITS):
        o, m = G.sporadic_table()[g.name or "Tits"]
        return W(g, o // m, "largest centraliser (ATLAS)")
    d = G.diagonal_gcd(g)
    if f in (Family.A, Family.A2):
        if n == 1:
            return W(g, psl2_max_centraliser(q), "largest centraliser in PSL2(q)")
        eps = g.epsilon
        v = q ** (n * (n + 1) // 2) * prod(q**i - eps**i for i in range(1, n))
        return W(g, v // d, "transvection (one Jordan 2-block)")
    if f is Family.C or (f is Family.B and q % 2 == 0):
        v = q ** (n * n) * prod(q ** (2 * i) - 1 for i in range(1, n))
        return W(g, v // d, "transvection / b1 involution")
    if f is Family.B:
        sign = 1 if (q % 4 == 1 or n % 2 == 0) else -1
        return W(g, _so_even(n, q, sign), f"involution with centraliser SO{'+' if sign > 0 else '-'}_{2 * n}(q)")
    if f in (Family.D, Family.D2):
        v = q ** (n * n - n) * (q ** (n - 2) - 1) * (q * q - 1) * prod(q ** (2 * i) - 1 for i in range(1, n - 2))
        dd = 1 if q % 2 == 0 else d
        return W(g, v // dd, "unipotent with Jordan blocks (2n-4, 2, 2) / a2 involution", is_lower_bound=True)
    if f is Family.E8:
        return W(g, q**57 * _simple(Family.E7, q), "long-root unipotent (A1)")
    if f is Family.E7:
        return W(g, q**33 * _simple(Family.D, q, 6) // gcd(2, q - 1), "long-root unipotent (A1)")
    if f in (Family.E6, Family.E6_2):
        fam = Family.A if f is Family.E6 else Family.A2
        return W(g, q**21 * _simple(fam, q, 5) // gcd(3, q - g.epsilon), "long-root unipotent (A1)")
    if f is Family.F4:
        return W(g, q**15 * _simple(Family.C, q, 3), "long-root unipotent (A1)")
    if f is Family.D4_3:
        return W(g, q**12 * (q**6 - 1), "long-root unipotent (A1)")
    if f is Family.F4_2:
        return W(g, q**10 * _simple(Family.B2_2, q), "unipotent (~A1)_2")
    if f is Family.G2:
        return W(g, q**5 * _simple(Family.A, q, 1), "long-root unipotent (A1)")
    if f is Family.G2_2:
        return W(g, q**3, "unipotent (~A1)_3")
    if f is Family.B2_2:
        return W(g, q * q, "upper bound for every nontrivial centraliser", is_upper_bound_only=True)
    raise G.InvalidGroup(f"no witness for {g}")


def _partitions(n: int, largest: int | None = None):
    if largest is None:
        largest = n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def alt_centraliser_of_type(cycle_type: list[int]) -> int:
    """|C_{Alt_n}(x)| for an even permutation x of the given cycle type."""
    counts: dict[int, int] = {}
    for k in cycle_type:
        counts[k] = counts.get(k, 0) + 1
    csym = prod(k**m * factorial(m) for k, m in counts.items())
    # C_Sym(x) lies inside Alt_n iff the cycle lengths are odd and distinct
    inside = all(k % 2 == 1 and m == 1 for k, m in counts.items())
    return csym if inside else csym // 2


@lru_cache(maxsize=None)
def alt_max_centraliser(n: int) -> int:
    """Largest |C_{Alt_n}(x)| over nontrivial x, by cycle types."""
    if n < 5:
        raise ValueError("alt_max_centraliser needs n >= 5")
    if n > ALT_EXACT_LIMIT:
        raise ValueError(f"cycle-type enumeration limited to n <= {ALT_EXACT_LIMIT}")
    best = 0
    for lam in _partitions(n):
        if lam[0] == 1:
            continue
        if sum(1 for k in lam if k % 2 == 0) % 2:
            continue
        best = max(best, alt_centraliser_of_type(lam))
    return best


def max_centraliser_exact(cd) -> int:
    """|T| / (smallest nontrivial class size) from complete class data."""
    sizes = [s for s in cd.class_sizes()]
    if sum(sizes) != cd.group_order:
        raise ValueError("class data incomplete: sizes do not sum to the group order")
    nontrivial = [s for i, s in enumerate(sizes) if i != cd.identity_class]
    if not nontrivial:
        raise ValueError("trivial group")
    return cd.group_order // min(nontrivial)


def exponent_for(r: int) -> Fraction:
    if not 1 <= r <= 4:
        raise ValueError("r must be in 1..4")
    return 1 - Fraction(r, 5)


def threshold_holds(c: int, torder: int, r: int | None = None, exponent: Fraction | None = None) -> bool:
    """Whether c < torder**(1 - r/5) (or torder**exponent), exactly."""
    if exponent is None:
        if r is None:
            raise ValueError("give r or exponent")
        exponent = exponent_for(r)
    exponent = Fraction(exponent)
    if not 0 < exponent < 1:
        raise ValueError("exponent must lie strictly between 0 and 1")
    if c < 1 or torder < 2:
        raise ValueError("need c >= 1 and torder >= 2")
    return power_lt(c, 1, torder, exponent)


# Lie-type rows of the table, as rank ranges per r; None means any rank.
_TABLE2_LIE = {
    1: {Family.A: (1, 8), Family.A2: (2, 8), Family.B: (2, 4), Family.C: (2, 4),
        Family.D: (4, 8), Family.D2: (4, 8), "exceptional": None},
    2: {Family.A: (1, 3), Family.A2: (2, 3), Family.B: (2, 2), Family.C: (2, 2),
        Family.F4_2: None, Family.G2: None, Family.G2_2: None, Family.B2_2: None},
    3: {Family.A: (1, 1), Family.B2_2: None},
}


def _in_table2_lie(g: GroupId, r: int) -> bool:
    rows = _TABLE2_LIE[r]
    if g.family in G.EXCEPTIONAL and "exceptional" in rows:
        return True
    if g.family not in rows:
        return False
    rng = rows[g.family]
    if rng is None:
        return True
    return rng[0] <= g.n <= rng[1]


@dataclass(frozen=True)
class Table2Verdict:
    member: bool
    basis: str  # exact | witness-violation | upper-bound | paper-asserted | not-listed


def table2_verdict(g: GroupId, r: int) -> Table2Verdict:
    if r not in (1, 2, 3):
        raise ValueError("table 2 covers r in {1, 2, 3}")
    t = order(g)
    e = exponent_for(r)
    if g.family is Family.ALT:
        if g.n <= ALT_EXACT_LIMIT:
            return Table2Verdict(threshold_holds(alt_max_centraliser(g.n), t, exponent=e), "exact")
        w = witness_centraliser(g).value
        if not threshold_holds(w, t, exponent=e):
            return Table2Verdict(False, "witness-violation")
        raise ValueError(f"{g}: 3-cycle witness does not decide r={r}")
    if g.family in (Family.SPORADIC, Family.TITS):
        return Table2Verdict(threshold_holds(witness_centraliser(g).value, t, exponent=e), "exact")
    if g.family is Family.A and g.n == 1:
        return Table2Verdict(threshold_holds(psl2_max_centraliser(g.q), t, exponent=e), "exact")
    w = witness_centraliser(g)
    if w.is_upper_bound_only:
        if threshold_holds(w.value, t, exponent=e):
            return Table2Verdict(True, "upper-bound")
    elif not threshold_holds(w.value, t, exponent=e):
        return Table2Verdict(False, "witness-violation")
    if _in_table2_lie(g, r):
        return Table2Verdict(True, "paper-asserted")
    return Table2Verdict(False, "not-listed")


def table2_membership(g: GroupId, r: int) -> bool:
    return table2_verdict(g, r).member


# ---------------------------------------------------------------- claims file

@dataclass(frozen=True)
class Claim:
    family: str
    ranks: tuple[int, ...]
    epsilon: str
    q_spec: str
    exponent: Fraction
    direction: str
    anchor: str


def _parse_ranks(spec: str) -> tuple[int, ...]:
    if spec == "-":
        return (0,)
    out: list[int] = []
    for part in spec.split(","):
        lo, _, hi = part.partition("-")
        out.extend(range(int(lo), int(hi or lo) + 1))
    return tuple(out)


def q_matches(q: int, spec: str) -> bool:
    """Evaluate a q-range spec: OR of '|' groups, AND of '&' terms."""
    if spec in ("-", "all"):
        return True
    for alt_ in spec.split("|"):
        ok = True
        for term in alt_.split("&"):
            term = term.strip()
            if term == "even":
                ok &= q % 2 == 0
            elif term == "odd":
                ok &= q % 2 == 1
            elif term == "all":
                pass
            else:
                for op in (">=", "<=", "!=", "==", ">", "<"):
                    if term.startswith(op):
                        v = int(term[len(op):])
                        ok &= {">=": q >= v, "<=": q <= v, "!=": q != v,
                               "==": q == v, ">": q > v, "<": q < v}[op]
                        break
                else:
                    raise ValueError(f"bad q spec term {term!r}")
        if ok:
            return True
    return False


def parse_claims(text: str) -> list[Claim]:
    claims = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fam, ranks, eps, qs, ex, direction, anchor = (p.strip() for p in line.split(";", 6))
        if direction not in (">", ">=", "<"):
            raise ValueError(f"bad direction in claim {line!r}")
        claims.append(Claim(fam, _parse_ranks(ranks), eps, qs, Fraction(ex), direction, anchor))
    return claims


def load_claims() -> list[Claim]:
    return parse_claims((G.data_dir() / "claims.txt").read_text(encoding="utf-8"))


def prime_powers_upto(q_max: int) -> list[int]:
    return [q for q in range(2, q_max + 1) if G.prime_power(q)]


def _claim_group(c: Claim, rank: int, q: int) -> GroupId:
    if c.family == "Alt":
        return G.alt(rank)
    fam = Family(c.family)
    if c.epsilon == "-":
        fam = {Family.A: Family.A2, Family.D: Family.D2, Family.E6: Family.E6_2}[fam]
    return GroupId(fam, n=rank if fam in G.CLASSICAL else None, q=q)


def _claim_holds(c: Claim, w: CentraliserWitness, t: int) -> bool:
    cmp = power_cmp(w.value, 1, t, c.exponent)
    if c.direction == ">":
        return cmp > 0
    if c.direction == ">=":
        return cmp >= 0
    return cmp < 0


def replicate_claims(q_max: int, claims: list[Claim] | None = None) -> dict:
    """Check every claim instance for valid prime powers q <= q_max."""
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    claims = load_claims() if claims is None else claims
    qs = prime_powers_upto(q_max)
    checked, violations = 0, []
    for c in claims:
        for rank in c.ranks:
            for q in ([0] if c.family == "Alt" else qs):
                if c.family != "Alt" and not q_matches(q, c.q_spec):
                    continue
                g = _claim_group(c, rank, q)
                if not G.is_simple_valid(g):
                    continue
                w = witness_centraliser(g)
                if w.is_lower_bound and c.direction == "<":
                    raise ValueError(f"claim {c.anchor!r} compares a lower bound from above")
                checked += 1
                if not _claim_holds(c, w, order(g)):
                    violations.append({"group": str(g), "claim": c.anchor,
                                       "exponent": str(c.exponent), "direction": c.direction})
    return {"q_max": q_max, "claims": len(claims), "instances_checked": checked, "violations": violations}
