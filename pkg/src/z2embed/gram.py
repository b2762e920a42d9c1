"""Gram realizations ``A = Y^T Omega Y`` over GF(2) for ``Omega`` in ``{I_m, H_g}``."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .gf2 import FormType, Gf2Error, Gf2Matrix, congruence_normal_form, form_type, rank


class OmegaKind(enum.Enum):
    TYPE_I = "I"
    TYPE_H = "H"

    @classmethod
    def parse(cls, s: "str | OmegaKind") -> "OmegaKind":
        if isinstance(s, cls):
            return s
        try:
            return cls(str(s).upper().removeprefix("TYPE"))
        except ValueError:
            raise ValueError(f"unknown intersection form kind {s!r} (use I or H)") from None


@dataclass(frozen=True)
class OmegaSpec:
    """Intersection form ``I_beta`` (kind I) or ``H_{beta/2}`` (kind H)."""

    kind: OmegaKind
    beta: int

    def __post_init__(self):
        object.__setattr__(self, "kind", OmegaKind.parse(self.kind))
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.kind is OmegaKind.TYPE_H and self.beta % 2:
            raise ValueError(f"kind H needs even beta, got {self.beta}")

    def matrix(self) -> Gf2Matrix:
        if self.kind is OmegaKind.TYPE_I:
            return Gf2Matrix.identity(self.beta)
        return Gf2Matrix.hyperbolic(self.beta // 2)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "beta": self.beta}

    @classmethod
    def from_json(cls, d: dict) -> "OmegaSpec":
        return cls(OmegaKind.parse(d["kind"]), int(d["beta"]))


def required_beta(a: Gf2Matrix, kind: OmegaKind | str) -> int | None:
    """Least ``beta`` realizing ``a`` for the given kind, or None if no ``beta`` does."""
    kind = OmegaKind.parse(kind)
    r = rank(a)
    alternating = form_type(a) is FormType.ALTERNATING
    if kind is OmegaKind.TYPE_H:
        return r if alternating else None
    if r == 0:
        return 0
    return r + 1 if alternating else r


def realizable(a: Gf2Matrix, spec: OmegaSpec) -> bool:
    need = required_beta(a, spec.kind)
    return need is not None and need <= spec.beta


def min_beta(a: Gf2Matrix, kind: OmegaKind | str) -> int:
    need = required_beta(a, kind)
    if need is None:
        raise Gf2Error("a non-alternating form has no realization with a hyperbolic Omega")
    return need


def construct_Y(a: Gf2Matrix, spec: OmegaSpec) -> Gf2Matrix:
    """A ``beta x m`` matrix ``Y`` with ``Y^T Omega Y = a``.

    The congruence normal form ``S^T a S = D`` is embedded blockwise into
    ``(GF(2)^beta, Omega)`` as columns ``Z`` with ``Z^T Omega Z = D``; then
    ``Y = Z S^{-1}``.
    """
    if not realizable(a, spec):
        raise Gf2Error(f"form of rank {rank(a)} is not realizable with {spec}")
    m = a.rows
    s, nf = congruence_normal_form(a)
    cols = [0] * m
    if spec.kind is OmegaKind.TYPE_H:
        for p in range(nf.hyperbolic_pairs):
            cols[nf.ones + 2 * p] = 1 << (2 * p)
            cols[nf.ones + 2 * p + 1] = 1 << (2 * p + 1)
    elif nf.ones or nf.hyperbolic_pairs:
        # I_1 (+) H_1 = I_3: carry one unit vector w through the hyperbolic blocks
        nxt = 0
        for i in range(nf.ones):
            cols[i] = 1 << nxt
            nxt += 1
        if nf.ones:
            w_slot = nf.ones - 1
            w = cols[w_slot]
        else:
            w_slot = None
            w = 1 << nxt
            nxt += 1
        for p in range(nf.hyperbolic_pairs):
            ea, eb = 1 << nxt, 1 << (nxt + 1)
            nxt += 2
            cols[nf.ones + 2 * p] = w ^ ea
            cols[nf.ones + 2 * p + 1] = w ^ eb
            w ^= ea ^ eb
        if w_slot is not None:
            cols[w_slot] = w
    z = Gf2Matrix.from_columns(cols, spec.beta)
    y = z @ s.inverse()
    if y.T @ spec.matrix() @ y != a:
        raise Gf2Error("internal error: constructed Y does not reproduce the form")
    return y


def gram(y: Gf2Matrix, spec: OmegaSpec) -> Gf2Matrix:
    """``Y^T Omega Y``."""
    if y.rows != spec.beta:
        raise Gf2Error(f"Y has {y.rows} rows, Omega has size {spec.beta}")
    return y.T @ spec.matrix() @ y
