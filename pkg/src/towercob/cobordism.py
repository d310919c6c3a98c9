"""Formal cobordism classes, the a_{i,j} Milnor-number table and the generator criterion."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import comb, gcd

from .charnum import blowup_milnor, closed_form_bf_milnor, milnor_number
from .residues import BaseDigits, is_prime, prime_factors, prime_power
from .varieties import Variety, bounded_flag, point, x_variety, y_variety


class CobordismClass:
    """Integer combination of varieties of one dimension; the Milnor number is linear."""

    def __init__(self, degree: int, terms: dict[str, int] | None = None,
                 varieties: dict[str, Variety] | None = None):
        self.degree = degree
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self.varieties = dict(varieties or {})

    @classmethod
    def of(cls, V: Variety, coeff: int = 1) -> "CobordismClass":
        return cls(V.dim, {V.name: coeff}, {V.name: V})

    def _check(self, other: "CobordismClass"):
        if other.degree != self.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __neg__(self) -> "CobordismClass":
        return CobordismClass(self.degree, {k: -v for k, v in self.terms.items()}, self.varieties)

    def __add__(self, other: "CobordismClass") -> "CobordismClass":
        self._check(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return CobordismClass(self.degree, terms, {**self.varieties, **other.varieties})

    def __sub__(self, other: "CobordismClass") -> "CobordismClass":
        return self + (-other)

    def __rmul__(self, c: int) -> "CobordismClass":
        return CobordismClass(self.degree, {k: c * v for k, v in self.terms.items()}, self.varieties)

    def is_zero(self) -> bool:
        return not self.terms

    def milnor(self) -> int:
        return sum(c * milnor_number(self.varieties[name]) for name, c in sorted(self.terms.items()))

    def __repr__(self):
        body = " + ".join(f"{c}[{name}]" for name, c in sorted(self.terms.items())) or "0"
        return f"CobordismClass(deg {self.degree}: {body})"


def class_negate(c: CobordismClass) -> CobordismClass:
    return -c


def class_add(c1: CobordismClass, c2: CobordismClass) -> CobordismClass:
    return c1 + c2


# ---------------------------------------------------------------------------
# a-values
# ---------------------------------------------------------------------------

def _check_entry(i: int, j: int):
    if not (0 <= i <= j) or i + j < 2:
        raise ValueError(f"need 0 <= i <= j and i + j >= 2, got ({i}, {j})")


def a_closed_form(i: int, j: int) -> int:
    _check_entry(i, j)
    n = i + j
    if i == 0:
        return n + 1
    return (-1) ** (n + 1) * comb(n, j) - comb(n, j + 1)


def m_closed_form(i: int, j: int) -> int:
    """Stated closed form for ``s_n`` of the blow-up ``M_{i,j}``, including the separate ``i = 1`` row."""
    if not 1 <= i <= j:
        raise ValueError(f"need 1 <= i <= j, got ({i}, {j})")
    n = i + j
    if i == 1:
        return (-1) ** (n + 1) * (n - 1) - 2
    return (-1) ** (n + 1) * comb(n, j) - sum(comb(k, j) for k in range(j, n))


def x_closed_form(i: int, j: int) -> int:
    n = i + j
    return 0 if n % 2 == 0 else 2 * comb(n, i)


def y_closed_form(i: int, j: int) -> int:
    """Stated closed form for ``s_n(Y_{i,j})``; ``i = 1`` uses its own row."""
    if i == 1:
        return j + 1 + (-1) ** (j + 1)
    return sum(comb(k, j) for k in range(j, i + j + 1))


@lru_cache(maxsize=None)
def m_engine(i: int, j: int) -> int:
    """``s_n(X_{i,j}) - s_n(Y_{i,j})`` computed in the tower rings."""
    return blowup_milnor(x_variety(i, j), y_variety(i, j))


def blowup_class(i: int, j: int) -> CobordismClass:
    return CobordismClass.of(x_variety(i, j)) - CobordismClass.of(y_variety(i, j))


def a_engine(i: int, j: int) -> int:
    """Engine a-value; the ``i in {0, 1}`` entries use the bounded-flag corrections of the degree-n family."""
    _check_entry(i, j)
    if i >= 2:
        return m_engine(i, j)
    n = i + j
    s = m_engine(1, n - 1)
    bf = milnor_number(bounded_flag(n))
    if n % 2 == 0:
        return -s if i == 0 else s
    return s + 2 * bf if i == 0 else s + bf


# ---------------------------------------------------------------------------
# generator criterion
# ---------------------------------------------------------------------------

def milnor_constant(n: int) -> int:
    if n < 1:
        raise ValueError("degree must be positive")
    pp = prime_power(n + 1)
    return pp[0] if pp else 1


def digit_case_select(n: int, q: int) -> tuple[int, int]:
    """Witness column ``j`` with ``a_{n-j,j}`` prime to ``q``, following the three digit patterns of ``n``."""
    if not is_prime(q) or (n + 1) % q:
        raise ValueError(f"{q} is not a prime divisor of {n + 1}")
    if prime_power(n + 1):
        raise ValueError(f"{n + 1} is a prime power")
    d = BaseDigits.of(n, q).digits
    s = len(d)
    top = d[-1]
    if all(x == q - 1 for x in d[:-1]):
        if top == 1:
            return 1, n - (q - 1)
        return 2, top * q ** (s - 1) - 1
    b = next(k for k, x in enumerate(d) if x != q - 1)
    a = next(k for k in range(b + 1, s) if d[k] > 0)
    j = sum(x * q ** k for k, x in enumerate(d) if k > a) + (d[a] - 1) * q ** a + q ** a - 1
    return 3, j


def case_claim_residue(n: int, q: int, case: int, j: int) -> int:
    """Residue of ``a_{n-j,j}`` mod ``q`` predicted for each digit case."""
    if case == 1:
        return 2 % q
    if case == 2:
        x = (j + 1) // q ** (len(BaseDigits.of(n, q).digits) - 1)
        return ((-1) ** (n + 1) * x - 1) % q
    return -1 % q


@dataclass
class GeneratorReport:
    degree: int
    m_n: int
    a_values: dict[tuple[int, int], int]
    gcd: int
    witness: dict
    checks: dict[str, bool] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        ok = self.gcd == self.m_n and all(self.checks.values())
        return "pass" if ok else "fail"


def verify_generator_degree(n: int, use_engine: bool = False, engine_cap: int = 12) -> GeneratorReport:
    if n < 2:
        raise ValueError("degrees below 2 are not covered")
    m_n = milnor_constant(n)
    a_values = {}
    engine = {}
    for i in range(0, n // 2 + 1):
        j = n - i
        a_values[(i, j)] = a_closed_form(i, j)
        if use_engine and n <= engine_cap and i >= 1:
            engine[(i, j)] = a_engine(i, j)
            if i >= 2:
                a_values[(i, j)] = engine[(i, j)]
    g = reduce(gcd, (abs(v) for v in a_values.values()))
    checks = {"gcd_equals_m_n": g == m_n}
    witness: dict = {}
    pp = prime_power(n + 1)
    if pp:
        p, s = pp
        witness["prime_power"] = {"p": p, "s": s}
        if s >= 2 and p > 2:
            i = p ** (s - 1)
            j = n - i
            pair = gcd(a_closed_form(0, n), a_closed_form(i, j))
            witness["pair"] = {"i": i, "j": j, "a": a_closed_form(i, j), "gcd": pair}
            checks["pair_gcd_equals_p"] = pair == p
        elif s >= 2:
            bf = (milnor_number(bounded_flag(n)) if n <= engine_cap
                  else closed_form_bf_milnor(point(), [0] * (n + 1)))
            witness["bounded_flag_milnor"] = bf
            checks["bounded_flag_gives_p"] = bf == p
    else:
        cases = []
        for q in prime_factors(n + 1):
            case, j = digit_case_select(n, q)
            a = a_closed_form(n - j, j)
            claim = case_claim_residue(n, q, case, j)
            cases.append({"q": q, "case": case, "j": j, "a": a, "residue": a % q, "claim": claim})
            checks[f"q{q}_nonzero"] = a % q != 0 and n - j < j
            checks[f"q{q}_claim"] = a % q == claim
        witness["digit_cases"] = cases
    diagnostics = {"engine": engine} if engine else {}
    if engine:
        diagnostics["closed_form_mismatch"] = sorted(
            k for k, v in engine.items() if v != a_closed_form(*k))
    return GeneratorReport(n, m_n, a_values, g, witness, checks, diagnostics)
