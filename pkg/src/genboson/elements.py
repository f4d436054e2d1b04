"""Shared machinery for normal-ordered elements and their tensor powers.

An element is ``sum_{k,m} R^k f_{k,m}(t) L^m`` with ``R`` the raising-type
generator (a-dagger or x), ``L`` the lowering-type one (a or y) and ``f``
an :class:`~genboson.coeffring.ExpPoly` in the commuting middle variable
(N-tilde or z).  Tensors are stored fully expanded over *atoms*
``(k, m, p, lam)`` = ``R^k t^p exp(lam t) L^m``, one atom per leg, which
makes them canonical without a multivariate coefficient ring.
"""
from __future__ import annotations

import itertools
from numbers import Number

from .coeffring import ExpPoly


def atom_degree(atom):
    return atom[0] + atom[1]


def key_degree(key):
    return sum(a[0] + a[1] for a in key)


class NormalOrdered:
    """Base class; subclasses implement :meth:`_product_terms`."""

    __slots__ = ("params", "_data", "order", "dropped")

    def __init__(self, params, data=None, order=None, dropped=(0, 0.0)):
        self.params = params
        self.order = order
        acc: dict = {}
        n_drop, max_drop = dropped
        for (k, m), f in (data or {}).items():
            if not isinstance(f, ExpPoly):
                f = ExpPoly.constant(f)
            if order is not None and k + m > order:
                if f:
                    n_drop += 1
                    max_drop = max(max_drop, f.max_abs_coeff())
                continue
            acc[(k, m)] = acc[(k, m)] + f if (k, m) in acc else f
        self._data = {km: f for km, f in acc.items() if f}
        self.dropped = (n_drop, max_drop)

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, params, order=None):
        return cls(params, {}, order)

    @classmethod
    def one(cls, params, order=None):
        return cls(params, {(0, 0): ExpPoly.constant(1)}, order)

    @classmethod
    def from_atom(cls, params, atom, coeff=1.0, order=None):
        k, m, p, lam = atom
        return cls(params, {(k, m): ExpPoly.monomial(p, lam, coeff)}, order)

    def with_order(self, order):
        return type(self)(self.params, self._data, order, self.dropped)

    # views --------------------------------------------------------------
    @property
    def terms(self):
        return dict(self._data)

    def items(self):
        return self._data.items()

    def __getitem__(self, km):
        return self._data.get(km, ExpPoly())

    def atoms(self):
        for (k, m), f in self._data.items():
            for (p, lam), c in f.items():
                yield (k, m, p, lam), c

    def degree(self):
        return max((k + m for k, m in self._data), default=0)

    def max_abs(self):
        return max((f.max_abs_coeff() for f in self._data.values()), default=0.0)

    def is_zero(self, tol=0.0):
        return self.max_abs() <= tol

    def __repr__(self):
        body = ", ".join(f"{km}: {f!r}" for km, f in sorted(self._data.items()))
        return f"{type(self).__name__}({{{body}}})"

    # linear structure ---------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.params != self.params:
            raise ValueError("elements carry different deformation parameters")

    def _merge_order(self, other):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, Number):
            other = type(self).one(self.params) * other
        self._check(other)
        out = dict(self._data)
        for km, f in other._data.items():
            out[km] = out[km] + f if km in out else f
        return type(self)(self.params, out, self._merge_order(other),
                          _add_drops(self.dropped, other.dropped))

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.params, {km: -f for km, f in self._data.items()}, self.order,
                          self.dropped)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return type(self)(self.params, {km: f * other for km, f in self._data.items()},
                              self.order, self.dropped)
        self._check(other)
        order = self._merge_order(other)
        out: dict = {}
        n_drop, max_drop = _add_drops(self.dropped, other.dropped)
        for (k1, m1), f in self._data.items():
            for (k2, m2), g in other._data.items():
                if order is not None and k1 + m1 + k2 + m2 > order:
                    n_drop += 1
                    max_drop = max(max_drop, f.max_abs_coeff() * g.max_abs_coeff())
                    continue
                for km, h in self._product_terms(k1, m1, f, k2, m2, g):
                    out[km] = out[km] + h if km in out else h
        return type(self)(self.params, out, order, (n_drop, max_drop))

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        out = type(self).one(self.params, self.order)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = type(self).one(self.params) * other
        if not isinstance(other, NormalOrdered):
            return NotImplemented
        return (self - other).is_zero(1e-12)

    __hash__ = None

    def commutator(self, other):
        return self * other - other * self

    def _product_terms(self, k1, m1, f, k2, m2, g):
        raise NotImplementedError

    @classmethod
    def atom_product(cls, params, a1, a2):
        """Product of two atoms, as a tuple of (atom, coeff)."""
        return _atom_product_cached(cls, params, a1, a2)


def _add_drops(d1, d2):
    return d1[0] + d2[0], max(d1[1], d2[1])


_ATOM_CACHE: dict = {}


def _atom_product_cached(cls, params, a1, a2):
    key = (cls, params, a1, a2)
    got = _ATOM_CACHE.get(key)
    if got is None:
        e = cls.from_atom(params, a1) * cls.from_atom(params, a2)
        got = tuple(e.atoms())
        _ATOM_CACHE[key] = got
    return got


class Tensor:
    """Element of a tensor power of one algebra, expanded over atoms.

    ``data`` maps a tuple of atoms (one per leg) to a complex coefficient.
    ``order`` (optional) truncates at total (R, L)-degree summed over legs.
    """

    __slots__ = ("kind", "params", "rank", "order", "_data", "dropped")

    def __init__(self, kind, params, rank, data=None, order=None, dropped=(0, 0.0)):
        self.kind = kind
        self.params = params
        self.rank = rank
        self.order = order
        n_drop, max_drop = dropped
        acc: dict = {}
        for key, c in (data or {}).items():
            if len(key) != rank:
                raise ValueError("key rank mismatch")
            if order is not None and key_degree(key) > order:
                n_drop += 1
                max_drop = max(max_drop, abs(c))
                continue
            acc[key] = acc.get(key, 0) + c
        self._data = {k: complex(v) for k, v in acc.items() if abs(v) > 1e-300}
        self.dropped = (n_drop, max_drop)

    @classmethod
    def outer(cls, *elements, coeff=1.0, order=None):
        kind = type(elements[0])
        params = elements[0].params
        data: dict = {}
        for combo in itertools.product(*(tuple(e.atoms()) for e in elements)):
            key = tuple(a for a, _ in combo)
            c = coeff
            for _, ci in combo:
                c *= ci
            data[key] = data.get(key, 0) + c
        return cls(kind, params, len(elements), data, order)

    @classmethod
    def one(cls, kind, params, rank, order=None):
        return cls(kind, params, rank, {((0, 0, 0, 0j),) * rank: 1.0}, order)

    def items(self):
        return self._data.items()

    def __len__(self):
        return len(self._data)

    def max_abs(self):
        return max((abs(c) for c in self._data.values()), default=0.0)

    def is_zero(self, tol=0.0):
        return self.max_abs() <= tol

    def truncate(self, order):
        return Tensor(self.kind, self.params, self.rank, self._data, order, self.dropped)

    def _new(self, data, order, dropped=(0, 0.0)):
        return Tensor(self.kind, self.params, self.rank, data, order, dropped)

    def _merge_order(self, other):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def _check(self, other):
        if not isinstance(other, Tensor) or other.rank != self.rank or other.kind is not self.kind:
            raise TypeError("incompatible tensors")

    def __add__(self, other):
        self._check(other)
        out = dict(self._data)
        for k, c in other._data.items():
            out[k] = out.get(k, 0) + c
        return self._new(out, self._merge_order(other), _add_drops(self.dropped, other.dropped))

    def __neg__(self):
        return self._new({k: -c for k, c in self._data.items()}, self.order, self.dropped)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return self._new({k: c * other for k, c in self._data.items()}, self.order, self.dropped)
        self._check(other)
        order = self._merge_order(other)
        n_drop, max_drop = _add_drops(self.dropped, other.dropped)
        out: dict = {}
        prod = self.kind.atom_product
        params = self.params
        other_items = [(k, c, key_degree(k)) for k, c in other._data.items()]
        for k1, c1 in self._data.items():
            d1 = key_degree(k1)
            for k2, c2, d2 in other_items:
                if order is not None and d1 + d2 > order:
                    n_drop += 1
                    max_drop = max(max_drop, abs(c1 * c2))
                    continue
                legs = [prod(params, a, b) for a, b in zip(k1, k2)]
                base = c1 * c2
                for combo in itertools.product(*legs):
                    c = base
                    key = []
                    for atom, ci in combo:
                        c *= ci
                        key.append(atom)
                    key = tuple(key)
                    out[key] = out.get(key, 0) + c
        return self._new(out, order, (n_drop, max_drop))

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        out = Tensor.one(self.kind, self.params, self.rank, self.order)
        for _ in range(n):
            out = out * self
        return out

    def commutator(self, other):
        return self * other - other * self

    def leg_element(self, key_index, leg):
        return self.kind.from_atom(self.params, key_index[leg])

    def __repr__(self):
        return f"Tensor(rank={self.rank}, terms={len(self._data)}, order={self.order})"


