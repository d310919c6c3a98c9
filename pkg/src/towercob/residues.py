"""Binomial coefficients modulo prime powers and the congruence lemmas they feed.

Every lemma verifier evaluates both sides with big integers and compares the
residues; fractions with denominators prime to ``p`` are read through modular
inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod

import numpy as np

from . import _kernels as K


# ---------------------------------------------------------------------------
# primes and digits
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _require_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """``(p, s)`` with ``n = p^s``, ``s >= 1``, or ``None``."""
    fs = prime_factors(n) if n > 1 else []
    if len(fs) != 1:
        return None
    p, s = fs[0], 0
    while n > 1:
        n //= p
        s += 1
    return p, s


@dataclass(frozen=True)
class BaseDigits:
    base: int
    digits: tuple[int, ...]  # little-endian

    @classmethod
    def of(cls, n: int, p: int) -> "BaseDigits":
        if n < 0:
            raise ValueError("negative integer")
        ds = []
        while n:
            n, r = divmod(n, p)
            ds.append(r)
        return cls(p, tuple(ds) or (0,))

    @property
    def value(self) -> int:
        return sum(d * self.base ** i for i, d in enumerate(self.digits))

    def digit(self, i: int) -> int:
        return self.digits[i] if i < len(self.digits) else 0


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, other) -> int:
        if isinstance(other, ResidueClass):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.value
        return other

    def __add__(self, other):
        return ResidueClass(self.value + self._other(other), self.modulus)

    def __sub__(self, other):
        return ResidueClass(self.value - self._other(other), self.modulus)

    def __mul__(self, other):
        return ResidueClass(self.value * self._other(other), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return ResidueClass(-self.value, self.modulus)

    def inverse(self) -> "ResidueClass":
        return ResidueClass(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, ResidueClass):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return (self.value - other) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value


# ---------------------------------------------------------------------------
# binomials
# ---------------------------------------------------------------------------

def binom_exact(n: int, m: int) -> int:
    if m < 0 or m > n:
        return 0
    m = min(m, n - m)
    out = 1
    for k in range(1, m + 1):
        out = out * (n - m + k) // k
    return out


def lucas_residue(n: int, m: int, p: int) -> ResidueClass:
    _require_prime(p)
    out = 1
    while n or m:
        out = out * binom_exact(n % p, m % p) % p
        n //= p
        m //= p
    return ResidueClass(out, p)


def kummer_carries(m: int, r: int, p: int, j: int = 0) -> int:
    """Number of carries at digit positions ``>= j`` when adding ``m`` and ``r`` in base ``p``."""
    _require_prime(p)
    count = carry = pos = 0
    while m or r or carry:
        carry = 1 if m % p + r % p + carry >= p else 0
        if pos >= j:
            count += carry
        m //= p
        r //= p
        pos += 1
    return count


@lru_cache(maxsize=None)
def _factorial_table(p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    """``k!_p mod p^q`` for ``k < p^q`` and the table of inverses mod ``p^q``."""
    mod = p ** q
    fact = np.ones(mod, np.int64)
    acc = 1
    for k in range(1, mod):
        if k % p:
            acc = acc * k % mod
        fact[k] = acc
    inv = np.zeros(mod, np.int64)
    for x in range(1, mod):
        if x % p:
            inv[x] = pow(x, -1, mod)
    return fact, inv


def factorial_p(k: int, p: int, q: int) -> ResidueClass:
    """Product of ``1..k`` prime to ``p``, modulo ``p^q``."""
    mod = p ** q
    fact, _ = _factorial_table(p, q)
    full = int(fact[mod - 1])
    return ResidueClass(pow(full, k // mod, mod) * int(fact[k % mod]), mod)


def granville_residue(n: int, m: int, p: int, q: int) -> ResidueClass:
    """``binom(n, m) mod p^q`` from the carry-weighted product of generalized factorials."""
    _require_prime(p)
    if q < 1:
        raise ValueError("q must be positive")
    mod = p ** q
    if m < 0 or m > n:
        return ResidueClass(0, mod)
    r = n - m
    e0 = kummer_carries(m, r, p, 0)
    if e0 >= q:
        return ResidueClass(0, mod)
    eq1 = kummer_carries(m, r, p, q - 1)
    sign = 1 if (p == 2 and q >= 3) else -1
    out = sign ** eq1
    x, y, z = n, m, r
    while x:
        out = out * factorial_p(x % mod, p, q).value
        out = out * pow(factorial_p(y % mod, p, q).value * factorial_p(z % mod, p, q).value, -1, mod)
        out %= mod
        x //= p
        y //= p
        z //= p
    return ResidueClass(out * p ** e0, mod)


def granville_batch(n, m, p: int, q: int) -> np.ndarray:
    """Vectorised :func:`granville_residue` over int64 arrays (``p^q`` must fit a lookup table)."""
    _require_prime(p)
    fact, inv = _factorial_table(p, q)
    return K.granville_batch(np.asarray(n), np.asarray(m), p, q, fact, inv)


# ---------------------------------------------------------------------------
# congruence lemmas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaRecord:
    lemma: str
    params: dict
    modulus: int
    lhs: int
    rhs: int
    verdict: str  # "pass", "fail" or "unsupported"
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def _frac(num: int, den: int, mod: int) -> int:
    return num * pow(den, -1, mod) % mod


def _harmonic(a: int, mod: int) -> int:
    return sum(pow(k, -1, mod) for k in range(1, a + 1)) % mod


ODD_ONLY = {"eq12", "tech4", "lm32", "lm31"}
LEMMAS = ("eq12", "tech", "tech4", "ressq", "lm32", "lm31", "pmain")


_PARAMS = {"eq12": ("r",), "tech": ("a",), "tech4": (), "ressq": (),
           "lm32": ("s",), "lm31": ("s",), "pmain": ("s",)}


def _sides(lemma: str, p: int, **kw) -> tuple[int, int, dict]:
    if lemma not in _PARAMS:
        raise ValueError(f"unknown lemma {lemma!r}; expected one of {', '.join(LEMMAS)}")
    missing = [k for k in _PARAMS[lemma] if k not in kw]
    if missing:
        raise ValueError(f"{lemma} needs parameter(s) {', '.join(missing)}")
    mod = p * p
    if lemma == "eq12":
        r = kw["r"]
        if not 0 <= r < p:
            raise ValueError("need 0 <= r < p")
        lhs = prod(p * r + k for k in range(1, p))
        rhs = prod(range(1, p))
        return lhs % mod, rhs % mod, {"p": p, "r": r}
    if lemma == "tech":
        a = kw["a"]
        if not 0 < a < p:
            raise ValueError("need 0 < a < p")
        num = prod(p * (p - 1) + k for k in range(1, a + 1))
        lhs = _frac(num, prod(range(1, a + 1)), mod)
        rhs = (1 - p * _harmonic(a, mod)) % mod
        return lhs, rhs, {"p": p, "a": a}
    if lemma == "tech4":
        lhs = sum(_frac(prod(p * (p - 1) + k for k in range(1, a)), prod(range(1, a + 1)), mod)
                  for a in range(1, p)) % mod
        return lhs, 0, {"p": p}
    if lemma == "ressq":
        lhs = prod(k for k in range(1, mod + 1) if k % p) % mod
        return lhs, (-1) % mod, {"p": p}
    s = kw["s"]
    if s < 2:
        raise ValueError("need s >= 2")
    top = p ** s
    j = top - p ** (s - 1) - 1
    if lemma == "lm32":
        return binom_exact(top - 1, j) % mod, (p - 1) % mod, {"p": p, "s": s}
    if lemma == "lm31":
        return sum(binom_exact(k, j) for k in range(j + 1, top - 1)) % mod, 0, {"p": p, "s": s}
    return pmain_sum(p, s) % mod, p % mod, {"p": p, "s": s}


def verify_lemma(lemma: str, p: int, **params) -> LemmaRecord:
    """Evaluate both sides of a congruence mod ``p^2``.

    Statements whose proof pairs ``k`` with ``p - k`` are flagged
    ``unsupported`` at ``p = 2``; the computed residues are still recorded.
    """
    _require_prime(p)
    lhs, rhs, shown = _sides(lemma, p, **params)
    if p == 2 and lemma in ODD_ONLY:
        note = "holds" if lhs == rhs else "fails"
        return LemmaRecord(lemma, shown, p * p, lhs, rhs, "unsupported",
                           f"statement needs odd p; at p = 2 it {note}")
    return LemmaRecord(lemma, shown, p * p, lhs, rhs, "pass" if lhs == rhs else "fail")


def pmain_sum(p: int, s: int) -> int:
    """``sum_{k=j}^{p^s-1} binom(k, j)`` for ``j = p^s - p^(s-1) - 1``; equals ``binom(p^s, p^(s-1))``."""
    _require_prime(p)
    if s < 2:
        raise ValueError("need s >= 2")
    top = p ** s
    j = top - p ** (s - 1) - 1
    total = sum(binom_exact(k, j) for k in range(j, top))
    if total != binom_exact(top, j + 1):
        raise ArithmeticError("hockey-stick identity failed")
    return total


def pmain_decomposition(p: int, s: int) -> dict:
    """Split the main sum into its first term, interior block and last term."""
    top = p ** s
    j = top - p ** (s - 1) - 1
    first = binom_exact(j, j)
    interior = sum(binom_exact(k, j) for k in range(j + 1, top - 1))
    last = binom_exact(top - 1, j)
    total = pmain_sum(p, s)
    return {"first": first, "interior": interior, "last": last, "total": total,
            "consistent": first + interior + last == total}
