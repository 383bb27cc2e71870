"""Invariant tensors on m and the derivation action of gl(m).

A tensor of valence (1, s) is stored with its output index first:
``comp[k, i_1, ..., i_s]``. A (0, s) tensor is ``comp[i_1, ..., i_s]``.
An endomorphism ``A`` has ``A[k, i] = (A x_i)^k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InputShapeError
from .rational import QArray, tdot


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass(frozen=True, eq=False)
class InvariantTensor:
    valence: tuple
    comp: QArray
    symmetry: str | None = None  # "alternating", "symmetric" or None

    def __post_init__(self):
        r, s = self.valence
        if r not in (0, 1):
            raise InputShapeError("only valence (0, s) and (1, s) tensors are supported")
        comp = QArray.of(self.comp)
        object.__setattr__(self, "comp", comp)
        if comp.ndim != r + s or (comp.ndim and len(set(comp.shape)) != 1):
            raise InputShapeError(f"components of shape {comp.shape} do not match valence {self.valence}")
        if self.symmetry is not None and s >= 2:
            if not self._symmetry_holds():
                raise InputShapeError(f"declared {self.symmetry} symmetry does not hold")

    @classmethod
    def of(cls, valence, comp, symmetry=None) -> "InvariantTensor":
        return cls(tuple(valence), QArray.of(comp), symmetry)

    @property
    def r(self) -> int:
        return self.valence[0]

    @property
    def s(self) -> int:
        return self.valence[1]

    @property
    def dim(self) -> int:
        return self.comp.shape[0] if self.comp.ndim else 0

    def _symmetry_holds(self) -> bool:
        r = self.r
        s = self.s
        for a, b in itertools.combinations(range(s), 2):
            axes = list(range(r + s))
            axes[r + a], axes[r + b] = axes[r + b], axes[r + a]
            t = self.comp.transpose(*axes)
            if self.symmetry == "alternating" and not (t + self.comp).is_zero():
                return False
            if self.symmetry == "symmetric" and not (t - self.comp).is_zero():
                return False
        return True

    def is_zero(self) -> bool:
        return self.comp.is_zero()

    def __add__(self, other: "InvariantTensor") -> "InvariantTensor":
        _check_same(self, other)
        sym = self.symmetry if self.symmetry == other.symmetry else None
        return InvariantTensor(self.valence, self.comp + other.comp, sym)

    def __sub__(self, other: "InvariantTensor") -> "InvariantTensor":
        _check_same(self, other)
        sym = self.symmetry if self.symmetry == other.symmetry else None
        return InvariantTensor(self.valence, self.comp - other.comp, sym)

    def __neg__(self) -> "InvariantTensor":
        return InvariantTensor(self.valence, -self.comp, self.symmetry)

    def __mul__(self, s) -> "InvariantTensor":
        return InvariantTensor(self.valence, self.comp * s, self.symmetry)

    __rmul__ = __mul__

    def equals(self, other: "InvariantTensor") -> bool:
        return self.valence == other.valence and self.comp.equals(other.comp)

    def lower(self, G) -> "InvariantTensor":
        """(1, s) → (0, s+1) with the output slot moved last: g(τ(...), ·)."""
        if self.r != 1:
            raise InputShapeError("lowering needs a (1, s) tensor")
        c = tdot(self.comp, QArray.of(G), ([0], [0]))
        return InvariantTensor((0, self.s + 1), c)

    def raise_last(self, Ginv) -> "InvariantTensor":
        """(0, s) → (1, s-1): the last slot becomes the output."""
        if self.r != 0 or self.s == 0:
            raise InputShapeError("raising needs a (0, s) tensor with s ≥ 1")
        c = tdot(QArray.of(Ginv), self.comp, ([1], [self.s - 1]))
        return InvariantTensor((1, self.s - 1), c)


def _check_same(a: InvariantTensor, b: InvariantTensor) -> None:
    if a.valence != b.valence or a.comp.shape != b.comp.shape:
        raise InputShapeError("tensor valence or dimension mismatch")


def _as_comp(tau):
    if isinstance(tau, InvariantTensor):
        return tau.valence, tau.comp
    raise InputShapeError("expected an InvariantTensor")


def gl_action_batch(As: QArray, valence, comp: QArray) -> QArray:
    """Apply a stack of endomorphisms ``As[x]`` to one tensor.

    Returns components indexed ``[x, *tensor indices]``.
    """
    r, s = valence
    As = QArray.of(As)
    comp = QArray.of(comp)
    nA = As.shape[0]
    total = None
    if r == 1:
        # (A∘τ)[x,k,...] = A[x,k,p] τ[p,...]
        total = tdot(As, comp, ([2], [0]))
    for slot in range(s):
        ax = r + slot
        # τ(..., A y, ...) : contract τ's slot with A's output index
        t = tdot(comp, As, ([ax], [1]))  # shape: comp-without-ax, x, y
        nd = comp.ndim
        # current axes: [0..nd-2] = comp axes except ax, nd-1 = x, nd = y
        order = [nd - 1]
        rest = list(range(nd - 1))
        rest.insert(ax, nd)
        order += rest
        t = t.transpose(*order)
        total = -t if total is None else total - t
    if total is None:
        return QArray.zeros((nA,) + comp.shape)
    return total


def gl_action(A, tau: InvariantTensor) -> InvariantTensor:
    """Derivation action (A·τ) of an endomorphism on a tensor."""
    A = QArray.of(A)
    out = gl_action_batch(QArray.stack([A]), tau.valence, tau.comp)[0]
    return InvariantTensor(tau.valence, out)


def contract_first(tau: InvariantTensor, v) -> QArray:
    """Endomorphism ``v ⌟ τ`` for a (1, 2) tensor: Y ↦ τ(v, Y)."""
    if tau.valence != (1, 2):
        raise InputShapeError("interior product defined here for (1, 2) tensors")
    return tdot(tau.comp, QArray.of(v), ([1], [0]))


def endo_commutator(A, B) -> QArray:
    return tdot(A, B, 1) - tdot(B, A, 1)


def alternation_check(comp: QArray) -> bool:
    """Total antisymmetry of a (0, s) array."""
    nd = comp.ndim
    for a, b in itertools.combinations(range(nd), 2):
        axes = list(range(nd))
        axes[a], axes[b] = axes[b], axes[a]
        if not (comp.transpose(*axes) + comp).is_zero():
            return False
    return True


def alternate_pairs(beta: QArray, k: int) -> QArray:
    """Σ_{i<j} (−1)^{i+j} β(X_i, X_j, X_0, …, X̂_i, …, X̂_j, …, X_k)."""
    total = None
    for i, j in itertools.combinations(range(k + 1), 2):
        order = [i, j] + [p for p in range(k + 1) if p not in (i, j)]
        axes = list(np.argsort(order))
        t = beta.transpose(*axes)
        if (i + j) % 2:
            t = -t
        total = t if total is None else total + t
    return total


perm_sign = _perm_sign
