"""Finite groups as dense multiplication tables over element ids 0..n-1."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    ApproxCommuteError,
    ClassCountCapExceeded,
    EmptySet,
    GroupMismatch,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
    NotSubgroup,
    OrderCapExceeded,
)
from .subset import Subset, product

DEFAULT_ORDER_CAP = 2000
ORDER_CAP_ENV = "APPROXCOMMUTE_ORDER_CAP"
EXHAUSTIVE_ASSOC_CAP = 512
PERM_CLOSURE_CAP = 20000
DEFAULT_CLASS_CAP = 1024
_ASSOC_SAMPLE_SEED = 0xA50C1A7E


def current_order_cap() -> int:
    """Group order cap; APPROXCOMMUTE_ORDER_CAP overrides the default 2000."""
    raw = os.environ.get(ORDER_CAP_ENV)
    if raw is None:
        return DEFAULT_ORDER_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"{ORDER_CAP_ENV} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError(f"{ORDER_CAP_ENV} must be positive, got {cap}")
    return cap


class Group:
    """Finite group on ids 0..order-1; id 0 is always the identity."""

    __slots__ = ("order", "mul", "inv", "labels", "name", "_abelian", "__weakref__")

    identity = 0

    def __init__(self, mul: np.ndarray, inv: np.ndarray, labels, name: str):
        self.order = int(mul.shape[0])
        self.mul = mul
        self.inv = inv
        self.labels = labels
        self.name = name
        self._abelian: Optional[bool] = None

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            self._abelian = bool(np.array_equal(self.mul, self.mul.T))
        return self._abelian

    def element_label(self, g: int) -> str:
        if self.labels is not None:
            return self.labels[g]
        return str(g)

    def __repr__(self) -> str:
        return f"Group({self.name}, order={self.order})"


@dataclass(frozen=True)
class QuotientMap:
    """Surjection onto a quotient group; targets use minimal coset reps."""

    source: Group
    target: Group
    projection: np.ndarray

    def image(self, x: Subset) -> Subset:
        if x.group is not self.source:
            raise ApproxCommuteError("subset does not belong to the quotient source")
        return Subset.from_ids(self.target, np.unique(self.projection[x.ids]))

    def kernel(self) -> Subset:
        return Subset(self.source, self.projection == self.target.identity)


# ---------------------------------------------------------------------------
# construction


def _check_latin(mul: np.ndarray) -> None:
    n = mul.shape[0]
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
        raise NotLatinSquare(f"table must be square, got shape {mul.shape}")
    if n == 0:
        raise NotLatinSquare("table must be nonempty")
    if mul.min() < 0 or mul.max() >= n:
        raise NotLatinSquare(f"table entries must lie in [0, {n})")
    expect = np.arange(n, dtype=mul.dtype)
    if not np.array_equal(np.sort(mul, axis=1), np.broadcast_to(expect, mul.shape)):
        raise NotLatinSquare("some row is not a permutation of the element ids")
    if not np.array_equal(np.sort(mul, axis=0), np.broadcast_to(expect[:, None], mul.shape)):
        raise NotLatinSquare("some column is not a permutation of the element ids")


def _find_identity(mul: np.ndarray) -> int:
    n = mul.shape[0]
    expect = np.arange(n, dtype=mul.dtype)
    for e in np.flatnonzero(mul[:, 0] == 0):
        if np.array_equal(mul[e], expect) and np.array_equal(mul[:, e], expect):
            return int(e)
    raise NoIdentity("no two-sided identity element in the table")


def _check_associative(mul: np.ndarray, exhaustive_cap: int) -> None:
    n = mul.shape[0]
    if n <= exhaustive_cap:
        for x in range(n):
            row = mul[x]
            lhs = mul[row]  # lhs[y, z] = (x*y)*z
            rhs = row[mul]  # rhs[y, z] = x*(y*z)
            if not np.array_equal(lhs, rhs):
                y, z = map(int, np.argwhere(lhs != rhs)[0])
                raise NotAssociative(f"({x}*{y})*{z} != {x}*({y}*{z})")
        return
    # sampled regime: 10*n^2 random triples from a fixed seed
    rng = np.random.default_rng(_ASSOC_SAMPLE_SEED)
    remaining = 10 * n * n
    chunk = 1 << 20
    while remaining > 0:
        m = min(chunk, remaining)
        xs = rng.integers(0, n, m)
        ys = rng.integers(0, n, m)
        zs = rng.integers(0, n, m)
        bad = mul[mul[xs, ys], zs] != mul[xs, mul[ys, zs]]
        if bad.any():
            i = int(np.argmax(bad))
            raise NotAssociative(
                f"({int(xs[i])}*{int(ys[i])})*{int(zs[i])} != "
                f"{int(xs[i])}*({int(ys[i])}*{int(zs[i])})"
            )
        remaining -= m


def _finalize_table(
    table,
    labels: Optional[Sequence[str]],
    name: Optional[str],
    *,
    check_assoc: bool,
    exhaustive_cap: int = EXHAUSTIVE_ASSOC_CAP,
) -> Group:
    mul = np.ascontiguousarray(np.asarray(table, dtype=np.int32))
    _check_latin(mul)
    n = mul.shape[0]
    if labels is not None and len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    e = _find_identity(mul)
    if e != 0:
        # relabel so the identity sits at id 0 (swap ids 0 and e)
        perm = np.arange(n, dtype=np.int32)
        perm[0], perm[e] = e, 0
        mul = perm[mul[np.ix_(perm, perm)]]
        if labels is not None:
            labels = list(labels)
            labels[0], labels[e] = labels[e], labels[0]
    inv = np.ascontiguousarray(mul.argmin(axis=1).astype(np.int32))
    # argmin finds the unique 0 per row; confirm inverses are two-sided
    if not np.array_equal(mul[inv, np.arange(n)], np.zeros(n, dtype=mul.dtype)):
        x = int(np.flatnonzero(mul[inv, np.arange(n)] != 0)[0])
        raise NoInverse(f"element {x} has no two-sided inverse")
    if check_assoc:
        _check_associative(mul, exhaustive_cap)
    mul.flags.writeable = False
    inv.flags.writeable = False
    if labels is not None:
        labels = tuple(str(s) for s in labels)
    return Group(mul, inv, labels, name or f"table[{n}]")


def build_from_table(table, *, labels: Optional[Sequence[str]] = None, name: Optional[str] = None) -> Group:
    """Validate an n x n multiplication table and wrap it as a Group.

    Checks the Latin-square property, locates the two-sided identity
    (relabelling it to id 0 when needed), derives two-sided inverses, and
    checks associativity exhaustively up to order 512 (10*n^2 fixed-seed
    random triples above that).
    """
    return _finalize_table(table, labels, name, check_assoc=True)


def build_from_permutations(
    generators: Iterable[Sequence[int]],
    *,
    degree: Optional[int] = None,
    order_cap: int = PERM_CLOSURE_CAP,
    name: Optional[str] = None,
) -> Group:
    """Group generated by permutations, closed by BFS from the identity.

    Element order is the BFS discovery order with generators applied in the
    given order, so id assignment is deterministic.  Permutations are tuples
    p acting as i -> p[i]; the product a*b acts as i -> a[b[i]].
    """
    gens = [tuple(int(v) for v in g) for g in generators]
    if degree is None:
        if not gens:
            degree = 1
        else:
            degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ValueError(f"generator {g} is not a permutation of 0..{degree - 1}")
    identity = tuple(range(degree))
    elems = [identity]
    index = {identity: 0}
    head = 0
    while head < len(elems):
        p = elems[head]
        head += 1
        for g in gens:
            q = tuple(p[g[i]] for i in range(degree))
            if q not in index:
                if len(elems) >= order_cap:
                    raise OrderCapExceeded(
                        f"permutation closure exceeded the cap of {order_cap} elements"
                    )
                index[q] = len(elems)
                elems.append(q)
    n = len(elems)
    perms = np.array(elems, dtype=np.int32).reshape(n, degree)
    keys = {perms[i].tobytes(): i for i in range(n)}
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        composed = perms[a][perms]  # composed[b] = a*b
        table[a] = [keys[row.tobytes()] for row in composed]
    return _finalize_table(table, None, name or f"perm[{n}]", check_assoc=True)


def direct_product(g: Group, h: Group, *, order_cap: Optional[int] = None) -> Group:
    """Direct product with element id = g_id * |h| + h_id."""
    cap = current_order_cap() if order_cap is None else order_cap
    n = g.order * h.order
    if n > cap:
        raise OrderCapExceeded(f"product order {n} exceeds cap {cap}")
    big = g.mul.astype(np.int64)[:, None, :, None] * h.order + h.mul[None, :, None, :]
    table = big.reshape(n, n).astype(np.int32)
    labels = None
    if g.labels is not None and h.labels is not None:
        labels = [f"({a},{b})" for a in g.labels for b in h.labels]
    # associativity is inherited componentwise from the validated factors
    return _finalize_table(table, labels, f"{g.name}x{h.name}", check_assoc=False)


# ---------------------------------------------------------------------------
# element-level operations


def subgroup_closure(seed: Subset) -> Subset:
    """Smallest subgroup containing the seed set."""
    group = seed.group
    if seed.size == 0:
        raise EmptySet("subgroup_closure needs a nonempty seed set")
    cur = np.unique(np.concatenate([[group.identity], seed.ids, group.inv[seed.ids]]))
    while True:
        nxt = np.unique(group.mul[np.ix_(cur, cur)])
        if nxt.size == cur.size:
            return Subset.from_ids(group, cur)
        cur = nxt


def centralizer_in(x: Subset, g: int) -> Subset:
    """Elements of x commuting with g."""
    group = x.group
    eq = group.mul[:, g] == group.mul[g, :]
    return Subset(group, x.mask & eq, _trusted=True)


def conjugacy_class_under(g: int, x: Subset) -> Subset:
    """Conjugates {x^-1 g x} of g by elements of x."""
    group = x.group
    mask = np.zeros(group.order, dtype=bool)
    if x.size:
        t = group.mul[group.inv[x.ids], g]
        mask[group.mul[t, x.ids]] = True
    return Subset(group, mask, _trusted=True)


def conjugacy_classes(group: Group) -> list[Subset]:
    """All conjugacy classes, ordered by their minimal element id."""
    full = Subset.full(group)
    assigned = np.zeros(group.order, dtype=bool)
    classes = []
    for g in range(group.order):
        if not assigned[g]:
            cls = conjugacy_class_under(g, full)
            classes.append(cls)
            assigned |= cls.mask
    return classes


def center(group: Group) -> Subset:
    """Elements commuting with everything."""
    return Subset(group, np.all(group.mul == group.mul.T, axis=1), _trusted=True)


def is_subgroup(x: Subset) -> bool:
    """True when x is nonempty and closed under the product."""
    if x.size == 0:
        return False
    return product(x, x) == x


def is_normal(x: Subset) -> bool:
    """True when x is a subgroup invariant under conjugation by the whole group."""
    if not is_subgroup(x):
        return False
    group = x.group
    for g in range(group.order):
        conj = group.mul[group.mul[group.inv[g], x.ids], g]
        if not x.mask[conj].all():
            return False
    return True


def normal_subgroups(group: Group, *, class_cap: int = DEFAULT_CLASS_CAP) -> list[Subset]:
    """All normal subgroups, each a union of conjugacy classes.

    Walks the lattice of class-closed unions: starting from the identity
    class, repeatedly adjoin one conjugacy class and close under products.
    Every normal subgroup is a closure of this kind, and only subgroups are
    ever visited, so the walk needs #normals * #classes closures rather than
    an exponential scan of all unions.
    """
    classes = conjugacy_classes(group)
    k = len(classes)
    if k > class_cap:
        raise ClassCountCapExceeded(f"{k} conjugacy classes exceed the cap of {class_cap}")
    class_of = np.empty(group.order, dtype=np.int32)
    for idx, cls in enumerate(classes):
        class_of[cls.ids] = idx
    memo: dict[frozenset[int], frozenset[int]] = {}

    def close(idxs: frozenset[int]) -> frozenset[int]:
        got = memo.get(idxs)
        if got is not None:
            return got
        mask = np.zeros(group.order, dtype=bool)
        for idx in idxs:
            mask |= classes[idx].mask
        cur = np.flatnonzero(mask)
        while True:
            nxt = np.unique(group.mul[np.ix_(cur, cur)])
            if nxt.size == cur.size:
                break
            cur = nxt
        result = frozenset(int(i) for i in np.unique(class_of[cur]))
        memo[idxs] = result
        return result

    trivial = close(frozenset({int(class_of[group.identity])}))
    found = {trivial}
    queue = [trivial]
    while queue:
        base = queue.pop()
        for cidx in range(k):
            if cidx not in base:
                grown = close(base | {cidx})
                if grown not in found:
                    found.add(grown)
                    queue.append(grown)
    out = []
    for idxs in found:
        mask = np.zeros(group.order, dtype=bool)
        for idx in idxs:
            mask |= classes[idx].mask
        out.append(Subset(group, mask, _trusted=True))
    out.sort(key=lambda s: (s.size, s.mask.tobytes()))
    return out


def commutator_subgroup(x: Subset, y: Subset) -> Subset:
    """Subgroup generated by the commutators [a, b] = a^-1 b^-1 a b."""
    group = x.group
    if y.group is not group:
        raise GroupMismatch("commutator_subgroup operands belong to different groups")
    if x.size == 0 or y.size == 0:
        return Subset.from_ids(group, [group.identity])
    out = np.zeros(group.order, dtype=bool)
    inv_y = group.inv[y.ids]
    for a in x.ids:
        t = group.mul[group.mul[group.inv[a], inv_y], a]
        out[group.mul[t, y.ids]] = True
    return subgroup_closure(Subset(group, out, _trusted=True))


def quotient(group: Group, n_sub: Subset) -> QuotientMap:
    """Quotient by a normal subgroup, on minimal coset representatives."""
    if n_sub.group is not group:
        raise GroupMismatch("normal subgroup belongs to a different group")
    if n_sub.size == 0 or not is_subgroup(n_sub):
        raise NotSubgroup("quotient requires a subgroup")
    if not is_normal(n_sub):
        raise NotNormal("quotient requires a normal subgroup")
    cosets = group.mul[:, n_sub.ids]
    rep = cosets.min(axis=1).astype(np.int32)
    reps_sorted = np.unique(rep)
    proj = np.searchsorted(reps_sorted, rep).astype(np.int32)
    table = proj[group.mul[np.ix_(reps_sorted, reps_sorted)]]
    labels = None
    if group.labels is not None:
        labels = [group.labels[int(r)] for r in reps_sorted]
    target = _finalize_table(
        table, labels, f"{group.name}/N{n_sub.size}", check_assoc=False
    )
    # full homomorphism check; with the source verified this also certifies
    # the target's associativity on every product
    lhs = proj[group.mul]
    rhs = target.mul[proj[:, None], proj[None, :]]
    if not np.array_equal(lhs, rhs):
        raise ApproxCommuteError("internal error: quotient projection is not a homomorphism")
    proj.flags.writeable = False
    return QuotientMap(group, target, proj)
