"""Stably complex tower varieties: a tower ring, its tangent roots and dimension.

Tangent bundles are recorded stably as a list of factors.  A
:class:`LineClass` contributes one Chern root, a :class:`NegLineClass`
contributes the negated root (used by the non-standard structure on the
blow-up correction term), and a :class:`TwistedBlock` contributes the roots of
``E (x) L`` for a bundle ``E`` known only through its total Chern class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .ring import (RingClass, TowerRing, extend_by_projectivization, integrate,
                   invert_unit, product_ring)


@dataclass(frozen=True, eq=False)
class LineClass:
    c1: RingClass

    @property
    def rank(self) -> int:
        return 1

    def lifted(self, ring: TowerRing) -> "LineClass":
        return LineClass(ring.lift(self.c1))


@dataclass(frozen=True, eq=False)
class NegLineClass:
    c1: RingClass

    @property
    def rank(self) -> int:
        return 1

    def lifted(self, ring: TowerRing) -> "NegLineClass":
        return NegLineClass(ring.lift(self.c1))


@dataclass(frozen=True, eq=False)
class TwistedBlock:
    """Roots of ``E (x) L``: rank ``rank`` bundle ``E`` with total Chern class ``bundle_chern``, ``c1(L) = twist_c1``."""

    bundle_chern: RingClass
    rank: int
    twist_c1: RingClass

    def lifted(self, ring: TowerRing) -> "TwistedBlock":
        return TwistedBlock(ring.lift(self.bundle_chern), self.rank, ring.lift(self.twist_c1))


TangentFactor = Union[LineClass, NegLineClass, TwistedBlock]


@dataclass(frozen=True, eq=False)
class Variety:
    name: str
    ring: TowerRing
    tangent: tuple[TangentFactor, ...]
    dim: int

    def __post_init__(self):
        if self.ring.top_weight != self.dim:
            raise ValueError(f"{self.name}: ring dimension {self.ring.top_weight} != {self.dim}")
        if self.stable_rank < self.dim:
            raise ValueError(f"{self.name}: only {self.stable_rank} tangent roots for dimension {self.dim}")

    @property
    def stable_rank(self) -> int:
        """Number of stable Chern roots, counting a twisted block by its rank."""
        return sum(f.rank for f in self.tangent)

    def gen(self, name: str) -> RingClass:
        return self.ring.gen(name)

    def __repr__(self):
        return f"Variety({self.name}, dim={self.dim}, ring={self.ring!r})"


def _as_class(ring: TowerRing, x) -> RingClass:
    if isinstance(x, RingClass):
        if x.ring is not ring:
            x = ring.lift(x)
        return x
    return ring.scalar(x)


def _linear(ring: TowerRing, x, what: str) -> RingClass:
    cls = _as_class(ring, x)
    if not cls.component(1) == cls:
        raise ValueError(f"{what} must be a class of weight 1")
    return cls


# ---------------------------------------------------------------------------
# basic constructors
# ---------------------------------------------------------------------------

def point() -> Variety:
    return Variety("pt", TowerRing.point(), (), 0)


def projectivize(base: Variety, bundle_chern, rank: int, name: str = "y",
                 label: str | None = None) -> Variety:
    """``P(E)`` over ``base`` for a bundle given by its total Chern class; fiber tangent is ``E (x) conj(taut)``."""
    chern = _as_class(base.ring, bundle_chern)
    ring, y = extend_by_projectivization(base.ring, chern, rank, name)
    tangent = tuple(f.lifted(ring) for f in base.tangent)
    tangent += (TwistedBlock(ring.lift(chern), rank, y),)
    return Variety(label or f"P({base.name})", ring, tangent, base.dim + rank - 1)


def projectivize_lines(base: Variety, line_c1s: Sequence, name: str = "y",
                       label: str | None = None) -> Variety:
    """``P(L_1 + ... + L_m)``; the tangent is recorded root by root."""
    lines = [_linear(base.ring, x, "line class") for x in line_c1s]
    if not lines:
        raise ValueError("need at least one line bundle")
    chern = base.ring.one()
    for x in lines:
        chern = chern * (1 + x)
    ring, y = extend_by_projectivization(base.ring, chern, len(lines), name)
    tangent = tuple(f.lifted(ring) for f in base.tangent)
    tangent += tuple(LineClass(y + ring.lift(x)) for x in lines)
    return Variety(label or f"P({base.name})", ring, tangent, base.dim + len(lines) - 1)


def projective_space(n: int) -> Variety:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    p = point()
    ring, y = extend_by_projectivization(p.ring, p.ring.one(), n + 1, "y")
    return Variety(f"CP^{n}", ring, (TwistedBlock(ring.one(), n + 1, y),), n)


def bf_bundle(base: Variety, line_c1s: Sequence, names: Sequence[str] | None = None,
              label: str | None = None) -> Variety:
    """Bounded flag bundle over ``base`` for lines ``xi_1, ..., xi_{k+1}`` (``xi_{k+1}`` attached last).

    Stage ``i`` projectivizes ``zeta_i + xi_{i+1}`` with ``zeta_1 = xi_1``; its
    generator is ``y_{i+1}`` and the relation is
    ``(y_{i+1} - y_i)(y_{i+1} + x_{i+1}) = 0`` with ``y_1 = -x_1``.
    """
    xs = [_linear(base.ring, x, "line class") for x in line_c1s]
    if not xs:
        raise ValueError("need at least one line bundle")
    k = len(xs) - 1
    if names is None:
        names = [f"y{i + 2}" for i in range(k)]
    if len(names) != k:
        raise ValueError(f"expected {k} generator names")
    ring = base.ring
    prev = -xs[0]
    tangent = list(base.tangent)
    for i in range(k):
        x_next = ring.lift(xs[i + 1])
        chern = (1 - ring.lift(prev)) * (1 + x_next)
        ring, y = extend_by_projectivization(ring, chern, 2, names[i])
        prev = ring.lift(prev)
        tangent.append(LineClass(y - prev))
        tangent.append(LineClass(y + ring.lift(xs[i + 1])))
        prev = y
    tangent = tuple(f.lifted(ring) for f in tangent)
    return Variety(label or f"BF({base.name})", ring, tangent, base.dim + k)


def bounded_flag(n: int) -> Variety:
    if n < 0:
        raise ValueError("dimension must be non-negative")
    if n == 0:
        return point()
    p = point()
    return bf_bundle(p, [0] * (n + 1), [f"t{a}" for a in range(1, n + 1)], f"BF_{n}")


def _t(bf: Variety, a: int) -> RingClass:
    return bf.ring.gen(f"t{a}") if a > 0 else bf.ring.zero()


def _check_ij(i: int, j: int, lo: int = 1):
    if not (lo <= i <= j):
        raise ValueError(f"need {lo} <= i <= j, got ({i}, {j})")


def x_variety(i: int, j: int) -> Variety:
    _check_ij(i, j, 0)
    if i == 0:
        v = bounded_flag(j)
        return Variety(f"X_0,{j}", v.ring, v.tangent, v.dim)
    base = bounded_flag(i)
    lines = [0] * (j - i) + [_t(base, a - 1) - _t(base, a) for a in range(1, i + 1)] + [_t(base, i)]
    return bf_bundle(base, lines, label=f"X_{i},{j}")


def z_variety(i: int, j: int) -> Variety:
    _check_ij(i, j)
    base = bounded_flag(i - 1)
    lines = [0] * (j - i) + [_t(base, a - 1) - _t(base, a) for a in range(1, i)] + [0]
    return bf_bundle(base, lines, label=f"Z_{i},{j}")


def y_variety(i: int, j: int) -> Variety:
    """Projectivized normal bundle plus a conjugate-trivial summand over ``Z_{i,j}``, non-standard structure."""
    _check_ij(i, j)
    z = z_variety(i, j)
    x = z.ring.gen(f"t{i - 1}") if i > 1 else z.ring.zero()
    yj = z.ring.gen(f"y{j}") if j > 1 else z.ring.zero()
    chern = (1 + yj + x) * (1 + x)
    ring, y = extend_by_projectivization(z.ring, chern, 3, "y")
    x, yj = ring.lift(x), ring.lift(yj)
    tangent = tuple(f.lifted(ring) for f in z.tangent) + (
        LineClass(y + yj + x), LineClass(y + x), NegLineClass(y))
    return Variety(f"Y_{i},{j}", ring, tangent, z.dim + 2)


def h_variety(i: int, j: int) -> Variety:
    """Milnor hypersurface as ``P(conj(eta*) + C^{j-i})`` over ``CP^i``."""
    _check_ij(i, j)
    base = projective_space(i)
    chern = invert_unit(1 + base.ring.gen("y"))
    return projectivize(base, chern, j, "w", f"H_{i},{j}")


def br_variety(i: int, j: int) -> Variety:
    _check_ij(i, j)
    base = bounded_flag(i)
    lines = [_t(base, k - 1) - _t(base, k) for k in range(1, i + 1)] + [0] * (j - i)
    return projectivize_lines(base, lines, "w", f"BR_{i},{j}")


def l_variety(i: int, j: int) -> Variety:
    if i < 0 or j < 1:
        raise ValueError(f"need i >= 0 and j >= 1, got ({i}, {j})")
    base = projective_space(i)
    lines = [-base.ring.gen("y")] + [0] * j
    return projectivize_lines(base, lines, "w", f"L_{i},{j}")


def product(v1: Variety, v2: Variety) -> Variety:
    ring = product_ring(v1.ring, v2.ring)
    tangent = tuple(f.lifted(ring) for f in v1.tangent + v2.tangent)
    return Variety(f"{v1.name}x{v2.name}", ring, tangent, v1.dim + v2.dim)


def dual_hypersurface_milnor(X: Variety, c1: RingClass):
    """Milnor number of the hypersurface Poincare dual to a line bundle with first Chern class ``c1``.

    Equals ``<(p_{n-1}(TX) - c1^{n-1}) c1, [X]>``; ``p_0`` is the stable root count.
    """
    from .charnum import power_sum

    if X.dim < 1:
        raise ValueError("ambient variety must have positive dimension")
    c1 = _linear(X.ring, c1, "dual class")
    n = X.dim
    return integrate((power_sum(X, n - 1) - c1 ** (n - 1)) * c1)
