"""Exact graded rings presented as towers of projectivizations.

A :class:`TowerRing` is built from the point by repeatedly adjoining the
first Chern class ``y`` of the conjugate tautological line over ``P(E)``,
subject to the monic relation ``sum_r c_r(E) y^(m-r) = 0``.  Elements are
stored densely over the normal-form monomial basis
``{prod y_k^d_k : 0 <= d_k < rank_k}``, indexed little-endian in mixed radix,
so the basis of every prefix ring is an initial segment of the basis of its
extensions.

Multiplication by each generator is precomputed as a sparse integer matrix
when the stage is added; all ring arithmetic reduces to sparse mat-vecs.
Coefficients live in int64 arrays while a bound check proves that safe and
fall back to ``object`` arrays of Python ints (or Fractions in rational mode)
otherwise, so results never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import numpy as np

from . import _kernels as K

ExactScalar = Union[int, Fraction]

#: products with a factor of at most this many terms use the memoised path
SPARSE_LIMIT = 64


class RingError(ValueError):
    """Base class for ring-engine errors."""


class OwnershipError(RingError):
    """Operands belong to different rings."""


class MalformedBundleError(RingError):
    """A bundle's total Chern class cannot define a projectivization."""


class UnitError(RingError):
    """Attempt to invert a non-unit."""


# ---------------------------------------------------------------------------
# helpers on coefficient vectors
# ---------------------------------------------------------------------------

def _maxabs(v: np.ndarray) -> int:
    if len(v) == 0:
        return 0
    if v.dtype == np.int64:
        return int(np.max(np.abs(v)))
    return max(abs(x) for x in v)


def _obj(v: np.ndarray) -> np.ndarray:
    return v if v.dtype == object else v.astype(object)


def _scalar(x) -> ExactScalar:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    return int(x)


def _add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64 and _maxabs(a) + _maxabs(b) < K.INT64_SAFE:
        return a + b
    return _obj(a) + _obj(b)


def _scale(c: ExactScalar, v: np.ndarray) -> np.ndarray:
    if isinstance(c, int) and v.dtype == np.int64 and abs(c) * _maxabs(v) < K.INT64_SAFE:
        return np.int64(c) * v
    return c * _obj(v)


def _axpy(acc: np.ndarray, c: ExactScalar, v: np.ndarray) -> np.ndarray:
    return _add(acc, _scale(c, v))


def _int_array(values: Iterable) -> np.ndarray:
    """Pack exact values, preferring int64 when they are small integers."""
    arr = np.array(list(values), dtype=object)
    if all(isinstance(x, int) for x in arr) and _maxabs(arr) < K.INT64_SAFE:
        return arr.astype(np.int64)
    return arr


# ---------------------------------------------------------------------------
# sparse operators
# ---------------------------------------------------------------------------

class Operator:
    """Square sparse integer matrix in CSR form; column j is the image of basis j."""

    __slots__ = ("indptr", "indices", "data", "n", "rowbound")

    def __init__(self, indptr, indices, data, n):
        self.indptr = np.asarray(indptr, np.int64)
        self.indices = np.asarray(indices, np.int64)
        if data.dtype == object:
            data = _int_array(data) if len(data) else np.zeros(0, np.int64)
        self.data = data
        self.n = n
        if len(data):
            absdata = np.abs(data) if data.dtype == np.int64 else np.array([abs(x) for x in data], dtype=object)
            rows = np.add.reduceat(absdata, self.indptr[:-1][np.diff(self.indptr) > 0])
            self.rowbound = int(max(rows))
        else:
            self.rowbound = 0

    @classmethod
    def from_coo(cls, rows, cols, vals, n) -> "Operator":
        rows = np.asarray(rows, np.int64)
        cols = np.asarray(cols, np.int64)
        indptr, indices, data = K.coo_to_csr(rows, cols, vals, n, n)
        return cls(indptr, indices, data, n)

    @classmethod
    def identity(cls, n) -> "Operator":
        return cls(np.arange(n + 1), np.arange(n), np.ones(n, np.int64), n)

    def to_coo(self):
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        return rows, self.indices, self.data

    def apply(self, v: np.ndarray) -> np.ndarray:
        if (v.dtype == np.int64 and self.data.dtype == np.int64
                and self.rowbound * _maxabs(v) < K.INT64_SAFE):
            return K.spmv(self.indptr, self.indices, self.data, v)
        return K.spmv_numpy(self.indptr, self.indices, _obj(self.data), _obj(v))

    def __matmul__(self, other: "Operator") -> "Operator":
        b_max = _maxabs(other.data)
        if (self.data.dtype == np.int64 and other.data.dtype == np.int64
                and self.rowbound * b_max < K.INT64_SAFE):
            parts = K.spgemm((self.indptr, self.indices, self.data),
                             (other.indptr, other.indices, other.data), self.n)
        else:
            parts = K.spgemm_numpy(self.indptr, self.indices, _obj(self.data),
                                   other.indptr, other.indices, _obj(other.data), self.n)
        return Operator(*parts, self.n)


def _combine(terms: list[tuple[int, Operator]], n: int) -> Operator:
    """Integer linear combination of operators."""
    rows, cols, vals = [], [], []
    for c, op in terms:
        r, k, d = op.to_coo()
        rows.append(r)
        cols.append(k)
        vals.append(_scale(c, d))
    if not rows:
        return Operator(np.zeros(n + 1, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64), n)
    # duplicates are summed, so bound the sum rather than each term
    safe = sum(_maxabs(v) for v in vals) < K.INT64_SAFE
    dtype = np.int64 if safe and all(v.dtype == np.int64 for v in vals) else object
    return Operator.from_coo(np.concatenate(rows), np.concatenate(cols),
                             np.concatenate([v.astype(dtype) for v in vals]), n)


# ---------------------------------------------------------------------------
# rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Stage:
    """One projectivization step: fiber generator ``name`` over ``P(E)``, ``rank E = rank``."""

    name: str
    rank: int
    bundle_chern: "RingClass"


class TowerRing:
    """Graded ring Z[y_1..y_K]/(stage relations), truncated above ``top_weight``."""

    def __init__(self, stages: tuple[Stage, ...], ops: list[Operator], *,
                 parent: "TowerRing | None" = None, rational: bool = False):
        self.stages = stages
        self.ops = ops
        self.parent = parent
        self.rational = rational
        self.names = tuple(s.name for s in stages)
        self.ranks = tuple(s.rank for s in stages)
        self.top_weight = sum(r - 1 for r in self.ranks)
        self.base_dim = 0
        self.size = int(np.prod(self.ranks, dtype=np.int64)) if stages else 1
        strides, s = [], 1
        for r in self.ranks:
            strides.append(s)
            s *= r
        self.strides = tuple(strides)
        idx = np.arange(self.size, dtype=np.int64)
        self.weights = np.zeros(self.size, np.int64)
        self._lowgen = np.full(self.size, -1, np.int64)
        for k in reversed(range(len(self.ranks))):
            digit = (idx // self.strides[k]) % self.ranks[k]
            self.weights += digit
            self._lowgen[digit > 0] = k
        self._second: tuple[TowerRing, int] | None = None
        self._integer: TowerRing | None = None
        self._twin: TowerRing | None = None
        self._stacked = None
        self._gens: tuple[RingClass, ...] | None = None

    # -- construction ------------------------------------------------------

    @classmethod
    def point(cls, rational: bool = False) -> "TowerRing":
        ring = cls((), [])
        return ring.as_rational() if rational else ring

    def as_rational(self) -> "TowerRing":
        """Twin ring with the same presentation that admits rational coefficients."""
        if self.rational:
            return self
        if self._twin is None:
            twin = TowerRing(self.stages, self.ops, parent=self.parent, rational=True)
            twin._integer = self
            twin._stacked = self._stacked
            self._twin = twin
        return self._twin

    # -- basis bookkeeping -------------------------------------------------

    def index_of(self, exps: tuple[int, ...]) -> int:
        return sum(e * s for e, s in zip(exps, self.strides))

    def exps_of(self, index: int) -> tuple[int, ...]:
        return tuple((index // s) % r for s, r in zip(self.strides, self.ranks))

    def fresh_name(self, name: str) -> str:
        while name in self.names:
            name += "'"
        return name

    # -- elements ----------------------------------------------------------

    def _vec(self) -> np.ndarray:
        return np.zeros(self.size, np.int64)

    def zero(self) -> "RingClass":
        return RingClass(self, self._vec())

    def scalar(self, c: ExactScalar) -> "RingClass":
        c = self._check_scalar(c)
        v = self._vec() if isinstance(c, int) and abs(c) < K.INT64_SAFE else np.zeros(self.size, object)
        v[0] = c
        return RingClass(self, v)

    def one(self) -> "RingClass":
        return self.scalar(1)

    @property
    def generators(self) -> tuple["RingClass", ...]:
        if self._gens is None:
            one = self.one().coeffs
            self._gens = tuple(RingClass(self, op.apply(one)) for op in self.ops)
        return self._gens

    def gen(self, name: str) -> "RingClass":
        try:
            return self.generators[self.names.index(name)]
        except ValueError:
            raise KeyError(f"no generator named {name!r}; have {list(self.names)}") from None

    def monomial(self, exps: Mapping[str, int] | tuple[int, ...]) -> "RingClass":
        """Reduced normal form of an arbitrary monomial."""
        if isinstance(exps, Mapping):
            ex = [0] * len(self.names)
            for name, e in exps.items():
                ex[self.names.index(name)] = e
            exps = tuple(ex)
        if all(0 <= e < r for e, r in zip(exps, self.ranks)):
            v = self._vec()
            v[self.index_of(exps)] = 1
            return RingClass(self, v)
        v = self.one().coeffs
        for k, e in enumerate(exps):
            for _ in range(e):
                v = self.ops[k].apply(v)
        return RingClass(self, v)

    def from_terms(self, terms: Mapping[tuple[int, ...], ExactScalar]) -> "RingClass":
        out = self.zero()
        for exps, c in terms.items():
            out = out + self.monomial(exps) * c
        return out

    def _check_scalar(self, c) -> ExactScalar:
        if isinstance(c, (bool, np.bool_)):
            raise TypeError("boolean is not a ring scalar")
        if isinstance(c, (int, np.integer)):
            return int(c)
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return int(c)
            if not self.rational:
                raise RingError(f"non-integral scalar {c} in integer-mode ring")
            return c
        raise TypeError(f"unsupported scalar {c!r}")

    # -- embeddings --------------------------------------------------------

    def _ancestors(self):
        r = self
        while r is not None:
            yield r
            r = r.parent

    def lift(self, cls: "RingClass") -> "RingClass":
        """Pull ``cls`` back from a prefix ring (or a product factor) into this ring."""
        if cls.ring is self:
            return cls
        me = self._integer or self
        src = cls.ring._integer or cls.ring
        if src is me:
            return RingClass(self, cls.coeffs)
        if self.rational is False and cls.ring.rational:
            raise OwnershipError("cannot lift a rational-mode class into an integer-mode ring")
        for anc in me._ancestors():
            if anc is src:
                return RingClass(self, self._pad(cls.coeffs))
            if anc._second is not None:
                second, stride = anc._second
                if any(r is src for r in second._ancestors()):
                    v = np.zeros(second.size, cls.coeffs.dtype)
                    v[: len(cls.coeffs)] = cls.coeffs
                    w = np.zeros(anc.size, v.dtype)
                    w[::stride] = v
                    return RingClass(self, self._pad(w))
        raise OwnershipError("class does not live in a prefix or factor of this ring")

    def _pad(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.size, v.dtype)
        out[: len(v)] = v
        return out

    # -- kernels -----------------------------------------------------------

    def stacked_ops(self):
        """Pack all generator operators for the numba dense-product kernel."""
        if self._stacked is None and self.ops and all(op.data.dtype == np.int64 for op in self.ops):
            indptr2d = np.stack([op.indptr for op in self.ops])
            offsets = np.cumsum([0] + [len(op.data) for op in self.ops]).astype(np.int64)
            indices = np.concatenate([op.indices for op in self.ops])
            data = np.concatenate([op.data for op in self.ops])
            self._stacked = (indptr2d, indices, data, offsets)
        return self._stacked

    def apply_monomial(self, index: int, cache: dict[int, np.ndarray]) -> np.ndarray:
        """``monomial(index) * cache[0]``, memoising intermediate monomials in ``cache``."""
        chain = []
        while index not in cache:
            k = int(self._lowgen[index])
            chain.append((index, k))
            index -= self.strides[k]
        v = cache[index]
        for idx, k in reversed(chain):
            v = self.ops[k].apply(v)
            cache[idx] = v
        return v

    def multiplication_operator(self, cls: "RingClass") -> Operator:
        """Sparse matrix of multiplication by ``cls``."""
        if cls.ring is not self:
            raise OwnershipError("class from another ring")
        support = np.flatnonzero(cls.coeffs)
        cache: dict[int, Operator] = {0: Operator.identity(self.size)}
        terms = []
        for idx in support:
            idx = int(idx)
            chain = []
            j = idx
            while j not in cache:
                k = int(self._lowgen[j])
                chain.append((j, k))
                j -= self.strides[k]
            op = cache[j]
            for jj, k in reversed(chain):
                op = self.ops[k] @ op
                cache[jj] = op
            terms.append((_scalar(cls.coeffs[idx]), cache[idx]))
        return _combine(terms, self.size)

    def __repr__(self):
        rel = ", ".join(f"{n}:rank {r}" for n, r in zip(self.names, self.ranks))
        return f"TowerRing([{rel}], dim={self.top_weight}{', rational' if self.rational else ''})"


def extend_by_projectivization(ring: TowerRing, bundle_chern: "RingClass", rank: int,
                               name: str = "y") -> tuple[TowerRing, "RingClass"]:
    """Adjoin the fiber class of ``P(E)`` for a rank ``rank`` bundle with total Chern class ``bundle_chern``.

    Returns the extended ring and its new generator ``y``, which satisfies
    ``sum_r c_r(E) y^(rank-r) = 0``.  A plain integer stands for a scalar class.
    """
    if isinstance(bundle_chern, int):
        bundle_chern = ring.scalar(bundle_chern)
    if bundle_chern.ring is not ring:
        raise OwnershipError("bundle Chern class must live in the ring being extended")
    if ring.rational:
        raise RingError("extend the integer-mode ring; use as_rational() afterwards")
    if rank < 1:
        raise MalformedBundleError(f"rank must be positive, got {rank}")
    coeffs = bundle_chern.coeffs
    if _scalar(coeffs[0]) != 1:
        raise MalformedBundleError("total Chern class must have constant term 1")
    if any(isinstance(_scalar(c), Fraction) for c in coeffs[np.flatnonzero(coeffs)]):
        raise MalformedBundleError("total Chern class must have integer coefficients")
    high = np.flatnonzero((ring.weights > rank) & (np.asarray(coeffs != 0, dtype=bool)))
    if len(high):
        raise MalformedBundleError(f"Chern class has components above the rank {rank}")

    n_old = ring.size
    m = rank
    n_new = n_old * m
    ops: list[Operator] = []
    for op in ring.ops:
        r, c, d = op.to_coo()
        offs = np.repeat(np.arange(m, dtype=np.int64) * n_old, len(r))
        ops.append(Operator.from_coo(np.tile(r, m) + offs, np.tile(c, m) + offs,
                                     np.tile(d, m), n_new))

    rows, cols, vals = [], [], []
    base = np.arange(n_old, dtype=np.int64)
    for e in range(m - 1):
        rows.append(base + n_old * (e + 1))
        cols.append(base + n_old * e)
        vals.append(np.ones(n_old, np.int64))
    for r in range(1, m + 1):
        c_r = bundle_chern.component(r)
        if c_r.is_zero():
            continue
        cr, cc, cd = ring.multiplication_operator(c_r).to_coo()
        rows.append(cr + n_old * (m - r))
        cols.append(cc + n_old * (m - 1))
        vals.append(-cd if cd.dtype == np.int64 else np.array([-x for x in cd], dtype=object))
    if rows:
        dtype = np.int64 if all(v.dtype == np.int64 for v in vals) else object
        new_op = Operator.from_coo(np.concatenate(rows), np.concatenate(cols),
                                   np.concatenate([v.astype(dtype) for v in vals]), n_new)
    else:
        new_op = Operator(np.zeros(n_new + 1, np.int64), np.zeros(0, np.int64),
                          np.zeros(0, np.int64), n_new)
    ops.append(new_op)
    stage = Stage(ring.fresh_name(name), rank, bundle_chern)
    new_ring = TowerRing(ring.stages + (stage,), ops, parent=ring)
    return new_ring, new_ring.generators[-1]


def product_ring(r1: TowerRing, r2: TowerRing) -> TowerRing:
    """Tensor product ``r1 (x) r2``; classes of either factor embed via :meth:`TowerRing.lift`."""
    if r1.rational or r2.rational:
        raise RingError("form products of integer-mode rings")
    ring = r1
    n1 = r1.size
    # prime every name of the second factor until the two sets are disjoint
    suffix = ""
    while any(name + suffix in r1.names for name in r2.names):
        suffix += "'"
    for stage in r2.stages:
        src = stage.bundle_chern
        v = np.zeros(n1 * len(src.coeffs), src.coeffs.dtype)
        v[::n1] = src.coeffs
        chern = RingClass(ring, v)
        ring, _ = extend_by_projectivization(ring, chern, stage.rank, stage.name + suffix)
    if ring is r1:
        ring = TowerRing(r1.stages, r1.ops, parent=r1)
    ring._second = (r2, n1)
    return ring


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class RingClass:
    """Element of a :class:`TowerRing`, stored in normal form."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: TowerRing, coeffs: np.ndarray):
        if len(coeffs) != ring.size:
            raise ValueError("coefficient vector has the wrong length")
        if coeffs.dtype == object and not ring.rational:
            if all(isinstance(x, (int, np.integer)) or (isinstance(x, Fraction) and x.denominator == 1)
                   for x in coeffs):
                coeffs = _int_array(int(x) for x in coeffs)
            else:
                raise RingError("non-integral coefficient in integer-mode ring")
        self.ring = ring
        self.coeffs = coeffs

    # -- inspection --------------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], ExactScalar]:
        return {self.ring.exps_of(int(i)): _scalar(self.coeffs[i]) for i in np.flatnonzero(self.coeffs)}

    def coefficient(self, exps: tuple[int, ...]) -> ExactScalar:
        return _scalar(self.coeffs[self.ring.index_of(exps)])

    def constant(self) -> ExactScalar:
        return _scalar(self.coeffs[0])

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def nnz(self) -> int:
        return int(np.count_nonzero(self.coeffs != 0))

    def component(self, weight: int) -> "RingClass":
        mask = self.ring.weights == weight
        v = np.zeros_like(self.coeffs)
        v[mask] = self.coeffs[mask]
        return RingClass(self.ring, v)

    def min_weight(self) -> int | None:
        nz = np.flatnonzero(self.coeffs)
        return int(self.ring.weights[nz].min()) if len(nz) else None

    def is_homogeneous(self) -> bool:
        nz = np.flatnonzero(self.coeffs)
        return len(set(self.ring.weights[nz].tolist())) <= 1

    def to_rational(self) -> "RingClass":
        return RingClass(self.ring.as_rational(), self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "RingClass":
        if isinstance(other, RingClass):
            if other.ring is not self.ring:
                raise OwnershipError("operands belong to different rings")
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return RingClass(self.ring, _add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return RingClass(self.ring, _scale(-1, self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RingClass):
            c = self.ring._check_scalar(other)
            return RingClass(self.ring, _scale(c, self.coeffs))
        other = self._coerce(other)
        return RingClass(self.ring, _multiply(self.ring, self.coeffs, other.coeffs))

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        c = self.ring._check_scalar(Fraction(other))
        return self * (Fraction(1) / c)

    def __pow__(self, k: int):
        if k < 0:
            return invert_unit(self) ** (-k)
        lo = self.min_weight()
        out = self.ring.one()
        if lo is not None and lo > 0 and k * lo > self.ring.top_weight:
            return self.ring.zero()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RingClass):
            if other.ring is not self.ring:
                return False
        elif isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        else:
            return NotImplemented
        return bool(np.all(_obj(self.coeffs) == _obj(other.coeffs)))

    __hash__ = None

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        order = sorted(np.flatnonzero(self.coeffs), key=lambda i: (self.ring.weights[i], i))
        for i in order:
            c = _scalar(self.coeffs[i])
            mono = "*".join(n if e == 1 else f"{n}^{e}"
                            for n, e in zip(self.ring.names, self.ring.exps_of(int(i))) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"RingClass({self})"


def _multiply(ring: TowerRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na = int(np.count_nonzero(a != 0))
    nb = int(np.count_nonzero(b != 0))
    if na < nb:
        a, b, na, nb = b, a, nb, na
    if nb == 0:
        return np.zeros(ring.size, np.int64)
    if nb <= SPARSE_LIMIT or not ring.ops:
        nz_a = np.flatnonzero(a)
        lo = int(ring.weights[nz_a].min())
        cache = {0: a}
        acc = np.zeros(ring.size, np.int64)
        for idx in np.flatnonzero(b):
            if ring.weights[idx] + lo > ring.top_weight:
                continue
            acc = _axpy(acc, _scalar(b[idx]), ring.apply_monomial(int(idx), cache))
        return acc
    stacked = ring.stacked_ops()
    growth = max([1] + [op.rowbound for op in ring.ops]) ** ring.top_weight
    bsum = int(np.abs(b).sum()) if b.dtype == np.int64 else sum(abs(x) for x in b)
    if (stacked is not None and a.dtype == np.int64 and b.dtype == np.int64
            and _maxabs(a) * growth * bsum < K.INT64_SAFE):
        return K.monomial_sweep([(op.indptr, op.indices, op.data) for op in ring.ops],
                                ring.ranks, a, b, stacked)
    return K.monomial_sweep_numpy([(op.indptr, op.indices, _obj(op.data)) for op in ring.ops],
                                  ring.ranks, _obj(a), _obj(b))


# ---------------------------------------------------------------------------
# unit inversion, exponential, integration
# ---------------------------------------------------------------------------

def invert_unit(a: RingClass) -> RingClass:
    """Multiplicative inverse via the finite geometric series in the nilpotent part."""
    ring = a.ring
    c0 = a.constant()
    if c0 == 0:
        raise UnitError("constant term is zero")
    if not ring.rational and c0 not in (1, -1):
        raise UnitError(f"constant term {c0} is not a unit in integer mode")
    inv_c0 = c0 if c0 in (1, -1) else Fraction(1) / c0
    u = (a - c0) * inv_c0
    out = ring.one()
    for _ in range(ring.top_weight):
        out = ring.one() - u * out
    return out * inv_c0


def exp_nilpotent(u: RingClass) -> RingClass:
    """Truncated exponential of a class with zero constant term (rational mode)."""
    if u.constant() != 0:
        raise RingError("exponential needs a nilpotent argument")
    ring = u.ring
    if not ring.rational:
        raise RingError("exponential needs a rational-mode ring")
    out = ring.one()
    for k in range(ring.top_weight, 0, -1):
        out = ring.one() + (u * out) / k
    return out


def integrate(a: RingClass) -> ExactScalar:
    """Pairing with the fundamental class: coefficient of the top monomial."""
    return _scalar(a.coeffs[a.ring.size - 1])
