"""Valuations on based free modules extending a character.

A valuation assigns to each basis cell a value; on a translated cell the
character value of the translation is added, and on a chain the minimum
over the support is taken.  The zero chain gets +infinity (represented by
float("inf"), the only float in the package; all finite values are exact
Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .groups import Character, sum_character
from .resolutions import BasisCell, Chain, Resolution, split_tensor_element

INF = float("inf")


@dataclass
class Valuation:
    resolution: Resolution
    character: Character
    cell_values: dict
    basic: bool = False

    def of_cell(self, cell: BasisCell):
        return self.cell_values[cell]

    def of_key(self, g, cell: BasisCell):
        cv = self.cell_values[cell]
        if cv == INF:
            return INF
        return self.character.evaluate(g) + cv

    def value(self, chain: Chain):
        if chain.is_zero:
            return INF
        best = INF
        for (g, cell) in chain.terms:
            v = self.of_key(g, cell)
            if v < best:
                best = v
        return best

    def __call__(self, chain: Chain):
        return self.value(chain)


def basic_valuation(F: Resolution, chi: Character) -> Valuation:
    """Cell values 0 in degree 0 and the boundary value inductively above."""
    if chi.group != F.group:
        raise ValueError("character group does not match the resolution")
    cell_values: dict = {}
    for d in F.degrees():
        for cell in F.cells(d):
            if d == 0:
                cell_values[cell] = Fraction(0)
                continue
            bd = F.boundary_table.get(cell)
            if bd is None or bd.is_zero:
                raise ValueError(
                    f"cell {cell.label} has zero boundary; basic valuation undefined"
                )
            best = None
            for (g, cell2) in bd.terms:
                v = chi.evaluate(g) + cell_values[cell2]
                if best is None or v < best:
                    best = v
            cell_values[cell] = best
    v = Valuation(F, chi, cell_values, basic=True)
    return v


def value(v: Valuation, chain: Chain):
    return v.value(chain)


@dataclass
class AxiomReport:
    ok: bool
    checked: int
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_axioms(v: Valuation, samples: Iterable) -> AxiomReport:
    """Verify the four valuation axioms on (chain, chain, group element, unit)
    samples; the two chains of a sample must share a degree."""
    failures = []
    count = 0
    F = v.resolution
    for m, m2, g, r in samples:
        count += 1
        lhs = v.value(m.add(m2))
        rhs = min(v.value(m), v.value(m2))
        if lhs < rhs:
            failures.append(f"superadditivity failed: v(m+m')={lhs} < {rhs}")
        shifted = v.value(F.translate(g, m))
        expect = v.character.evaluate(g) + v.value(m) if not m.is_zero else INF
        if shifted != expect:
            failures.append(f"translation failed: v(gm)={shifted} != {expect}")
        if not F.ring.is_unit(r):
            failures.append(f"sample unit {r!r} is not a unit")
        elif v.value(m.scale(r)) != v.value(m):
            failures.append("unit scaling changed the value")
        if v.value(F.zero_chain()) != INF:
            failures.append("v(0) is not infinite")
    return AxiomReport(not failures, count, failures)


def domination_constant(v: Valuation, F: Resolution, n: int) -> Fraction:
    """Least mu >= 0 with v >= v_basic - mu on the n-skeleton.

    Per-cell maxima suffice: both sides shift by the same character value
    under translation, and min-over-support only improves the bound.
    """
    if F is not v.resolution and F.group != v.resolution.group:
        raise ValueError("valuation does not live on the given resolution")
    basic = basic_valuation(v.resolution, v.character)
    mu = Fraction(0)
    for d in v.resolution.degrees():
        if d > n:
            continue
        for cell in v.resolution.cells(d):
            if v.cell_values[cell] == INF:
                continue
            gap = basic.cell_values[cell] - v.cell_values[cell]
            if gap > mu:
                mu = gap
    return mu


def product_valuation(T: Resolution, v: Valuation, vp: Valuation) -> Valuation:
    """Basic valuation on a tensor resolution extending the sum character.

    Only basic inputs are accepted; for those the value of an elementary
    tensor is the sum of the factor values (verified property, exact).
    """
    if T.kind != "tensor":
        raise ValueError("product_valuation needs a tensor resolution")
    if not (v.basic and vp.basic):
        raise ValueError("product_valuation is defined for basic valuations only")
    if T.left.group != v.resolution.group or T.right.group != vp.resolution.group:
        raise ValueError("factor valuations do not match the tensor resolution")
    return basic_valuation(T, sum_character(v.character, vp.character))


def _left_value(T: Resolution, v: Valuation, gh, cell: BasisCell):
    g, _ = split_tensor_element(T, gh)
    x, _ = T.cell_pairs[cell]
    return v.of_key(g, x)


def _right_value(T: Resolution, vp: Valuation, gh, cell: BasisCell):
    _, h = split_tensor_element(T, gh)
    _, y = T.cell_pairs[cell]
    return vp.of_key(h, y)


def split_left(T: Resolution, y: Chain, u, v: Valuation) -> tuple[Chain, Chain]:
    """Split by the left-factor value: terms below the splitter u, then >= u."""
    if T.kind != "tensor":
        raise ValueError("split_left needs a chain in a tensor resolution")
    lam = {}
    rho = {}
    for (gh, cell), c in y.items():
        if _left_value(T, v, gh, cell) >= u:
            rho[(gh, cell)] = c
        else:
            lam[(gh, cell)] = c
    return Chain(y.ring, lam), Chain(y.ring, rho)


def split_bottom(T: Resolution, y: Chain, u, vp: Valuation) -> tuple[Chain, Chain]:
    """Split by the right-factor value: terms below the splitter u', then >= u'."""
    if T.kind != "tensor":
        raise ValueError("split_bottom needs a chain in a tensor resolution")
    beta = {}
    tau = {}
    for (gh, cell), c in y.items():
        if _right_value(T, vp, gh, cell) >= u:
            tau[(gh, cell)] = c
        else:
            beta[(gh, cell)] = c
    return Chain(y.ring, beta), Chain(y.ring, tau)


def valuation_to_obj(v: Valuation) -> dict:
    cells = {}
    for cell, val in sorted(v.cell_values.items()):
        cells[cell.label] = "inf" if val == INF else str(Fraction(val))
    return {"character": v.character.to_dict(), "cells": cells, "basic": v.basic}


def valuation_from_obj(F: Resolution, data: dict) -> Valuation:
    character = Character.from_dict(data["character"])
    cell_values = {}
    for label, text in data["cells"].items():
        cell_values[F.cell_by_label[label]] = INF if text == "inf" else Fraction(text)
    return Valuation(F, character, cell_values, basic=bool(data.get("basic")))
