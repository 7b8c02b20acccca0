"""Deterministic generators for the finite models the test-suite runs on.

Three families:

* torus models: the invariant-form model of a flat 2-complex-dimensional
  torus, full exterior algebra on dz1, dz2, dzb1, dzb2 with gl(r)
  coefficients, multiplicative J, sl(2)-action by derivations, and zero
  connection operators;
* dots and squares: bounded bicomplexes assembled from isolated cohomology
  generators (dots), fully exact 4-element blocks (squares), and the
  elementary strong-lemma violations (zigzags);
* gl(r) coefficient extensions of either family.

Identical recipe + seed gives a bit-identical model.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from dgkit.ddbar import Bicomplex
from dgkit.errors import ModelError
from dgkit.graded import GradedMap, GradedSpace, StructuredAlgebra, adjoint_operator
from dgkit.qdolbeault import (
    DEL,
    DEL_BAR,
    DEL_BAR_J,
    ConnectionModel,
    autoduality_check,
    connection_model_from_full,
)
from dgkit.scalars import ONE, ZERO, Scalar
from dgkit.sl2 import Sl2Module

GENS = ("dz1", "dz2", "dzb1", "dzb2")

# generator-level actions: index -> (index, coefficient)
_H_ACTION = {0: (0, Scalar(-1)), 1: (1, Scalar(-1)), 2: (2, ONE), 3: (3, ONE)}
_E_ACTION = {0: (3, ONE), 1: (2, Scalar(-1))}
_F_ACTION = {2: (1, Scalar(-1)), 3: (0, ONE)}
_J_ACTION = {0: (3, ONE), 1: (2, Scalar(-1)), 2: (1, ONE), 3: (0, Scalar(-1))}


def _sort_sign(seq: Iterable[int]) -> tuple:
    """Sorted tuple and the sign of the sorting permutation; (None, 0) when
    an index repeats (the wedge vanishes)."""
    out: list[int] = []
    sign = 1
    for x in seq:
        pos = len(out)
        while pos > 0 and out[pos - 1] > x:
            pos -= 1
        if pos > 0 and out[pos - 1] == x:
            return None, 0
        sign *= (-1) ** (len(out) - pos)
        out.insert(pos, x)
    return tuple(out), sign


def _merge_sign(left: tuple, right: tuple) -> tuple:
    if set(left) & set(right):
        return None, 0
    return _sort_sign(list(left) + list(right))


def _mono_label(mono: tuple) -> str:
    if not mono:
        return "1"
    return "^".join(GENS[i] for i in mono)


def _derivation_on_monomial(action: dict, mono: tuple) -> dict[tuple, Scalar]:
    """Extend a generator action to a degree-0 derivation on a monomial."""
    out: dict[tuple, Scalar] = {}
    for j, g in enumerate(mono):
        if g not in action:
            continue
        tgt, c = action[g]
        replaced = mono[:j] + (tgt,) + mono[j + 1:]
        merged, sign = _sort_sign(replaced)
        if merged is None:
            continue
        total = c.scale(Fraction(sign))
        acc = out.get(merged, ZERO) + total
        out[merged] = acc
    return {m: c for m, c in out.items() if not c.is_zero()}


def _j_on_monomial(mono: tuple) -> tuple[tuple, Scalar]:
    """Multiplicative J: wedge of the generator images (each a single term)."""
    coeff = ONE
    images = []
    for g in mono:
        tgt, c = _J_ACTION[g]
        coeff = coeff * c
        images.append(tgt)
    merged, sign = _sort_sign(images)
    if merged is None:
        raise ModelError("J image degenerates on a monomial")
    return merged, coeff.scale(Fraction(sign))


def torus_model(r: int = 1) -> ConnectionModel:
    """Invariant-form model of a flat torus with gl(r) coefficients.

    Connection operators are zero (flat trivial connection); J satisfies
    J^2 = -1 on 1-forms and the e/f/h triple is a valid sl(2)-action, both
    verified at build time.
    """
    if r < 1:
        raise ModelError("rank must be at least 1")
    monos = []
    for size in range(5):
        monos.extend(_subsets(4, size))
    e_labels = [f"E{a}_{b}" for a in range(1, r + 1) for b in range(1, r + 1)]

    components: dict[int, list[str]] = {}
    for mono in monos:
        k = len(mono)
        for el in e_labels:
            components.setdefault(k, []).append(f"{_mono_label(mono)}|{el}")
    space = GradedSpace(components)

    def lab(mono, el):
        return f"{_mono_label(mono)}|{el}"

    triples = []
    for m1 in monos:
        for m2 in monos:
            merged, sign = _merge_sign(m1, m2)
            if merged is None:
                continue
            c = Scalar(sign)
            for a in range(1, r + 1):
                for b in range(1, r + 1):
                    for d in range(1, r + 1):
                        triples.append((lab(m1, f"E{a}_{b}"), lab(m2, f"E{b}_{d}"),
                                        lab(merged, f"E{a}_{d}"), c))

    def derivation_map(action) -> GradedMap:
        entries = []
        for mono in monos:
            img = _derivation_on_monomial(action, mono)
            for tgt, c in img.items():
                for el in e_labels:
                    entries.append((lab(mono, el), lab(tgt, el), c))
        return GradedMap.from_entries(space, space, 0, entries)

    j_entries = []
    for mono in monos:
        tgt, c = _j_on_monomial(mono)
        for el in e_labels:
            j_entries.append((lab(mono, el), lab(tgt, el), c))
    j_map = GradedMap.from_entries(space, space, 0, j_entries)

    maps = {"e": derivation_map(_E_ACTION), "f": derivation_map(_F_ACTION),
            "h": derivation_map(_H_ACTION), "J": j_map}
    diffs = {DEL: GradedMap.zero(space, space, 1),
             DEL_BAR: GradedMap.zero(space, space, 1)}
    full = StructuredAlgebra(space, "associative", diffs,
                             StructuredAlgebra.structure_from_triples(triples),
                             maps)

    # build-time consistency: sl(2) relations and J^2 = -1 on 1-forms
    sl2_report = Sl2Module.from_algebra(full).validate()
    if not sl2_report.passed:
        raise ModelError(f"torus sl(2) action broken: {sl2_report.failures()[0].name}")
    jj = j_map.compose(j_map)
    expect = GradedMap.identity(space).scale(Scalar(-1)).block(1)
    if jj.block(1) != expect:
        raise ModelError("torus J does not square to -1 on 1-forms")

    model = connection_model_from_full(full)
    report = autoduality_check(model)
    if not report.autodual:
        raise ModelError("flat torus model failed autoduality")
    return model


def nilpotent_torus_model(r: int = 2) -> ConnectionModel:
    """Torus model twisted by the constant connection form dzb1 (x) E_{1,r}.

    The form is square-zero, so the twisted operator pair is flat (hence
    autodual) while acting nontrivially; the pair is not a strong-lemma
    pair, so the factorization of the total-complex cohomology genuinely
    fails on this model.
    """
    if r < 2:
        raise ModelError("the nilpotent twist needs coefficient rank >= 2")
    base = torus_model(r)
    full = base.full_model
    theta_label = f"dzb1|E1_{r}"
    _, theta = full.space.basis_vector(theta_label)
    ad_theta = adjoint_operator(full, 1, theta)
    twisted = StructuredAlgebra(
        full.space, full.kind,
        {DEL: GradedMap.zero(full.space, full.space, 1), DEL_BAR: ad_theta},
        full.structure, full.maps)
    model = connection_model_from_full(twisted)
    if not autoduality_check(model).autodual:
        raise ModelError("nilpotent twist failed autoduality")
    return model


def _subsets(n: int, size: int) -> list[tuple]:
    if size == 0:
        return [tuple()]
    out = []

    def rec(start, acc):
        if len(acc) == size:
            out.append(tuple(acc))
            return
        for i in range(start, n):
            rec(i + 1, acc + [i])

    rec(0, [])
    return out


# ---------------------------------------------------------------------------
# dots, squares, zigzags


def _random_nonzero(rnd: random.Random) -> Scalar:
    def frac():
        num = rnd.choice([-3, -2, -1, 1, 2, 3])
        den = rnd.choice([1, 1, 2, 3])
        return Fraction(num, den)

    re = frac()
    im = frac() if rnd.random() < 0.3 else Fraction(0)
    return Scalar(re, im)


def dots_squares_model(dots: Optional[dict[int, int]] = None,
                       squares: Sequence[int] = (),
                       zigzags: Sequence[int] = (),
                       seed: int = 0,
                       unit: bool = True) -> Bicomplex:
    """Bicomplex with the given dots (per-degree counts), squares and
    zigzags (base degrees).  Arrow coefficients are seeded random nonzero
    scalars subject to the anticommutation constraint.

    Squares at base degree k contribute a, b, c, e with
        d0 a = l1*b,  d1 a = l2*c,  d1 b = l3*e,  d0 c = -(l1*l3/l2)*e,
    so every square is fully d0d1-exact; zigzags contribute a, b with
    d0 a = b only, the elementary strong-lemma violation.
    """
    rnd = random.Random(seed)
    dots = dict(dots or {})
    components: dict[int, list[str]] = {}

    def push(deg, label):
        components.setdefault(deg, []).append(label)

    if unit:
        push(0, "one")
    for deg in sorted(dots):
        for i in range(dots[deg]):
            push(deg, f"w{deg}_{i}")
    d0_entries = []
    d1_entries = []
    for i, k in enumerate(squares):
        a, b, c, e = (f"s{i}a", f"s{i}b", f"s{i}c", f"s{i}e")
        push(k, a)
        push(k + 1, b)
        push(k + 1, c)
        push(k + 2, e)
        l1, l2, l3 = (_random_nonzero(rnd) for _ in range(3))
        d0_entries.append((a, b, l1))
        d1_entries.append((a, c, l2))
        d1_entries.append((b, e, l3))
        d0_entries.append((c, e, (l1 * l3 / l2).scale(-1)))
    for i, k in enumerate(zigzags):
        a, b = f"z{i}a", f"z{i}b"
        push(k, a)
        push(k + 1, b)
        d0_entries.append((a, b, _random_nonzero(rnd)))

    space = GradedSpace(components)
    triples = []
    if unit:
        for lab in space.all_labels():
            triples.append(("one", lab, lab, ONE))
            if lab != "one":
                triples.append((lab, "one", lab, ONE))
    algebra = StructuredAlgebra(
        space, "associative",
        {"d0": GradedMap.from_entries(space, space, 1, d0_entries),
         "d1": GradedMap.from_entries(space, space, 1, d1_entries)},
        StructuredAlgebra.structure_from_triples(triples))
    return Bicomplex(algebra, "d0", "d1")


def zigzag_model(k: int = 0, seed: int = 0) -> Bicomplex:
    """A single two-element zigzag at base degree k: d0 a = b, d1 = 0."""
    return dots_squares_model({}, (), (k,), seed=seed, unit=False)


# ---------------------------------------------------------------------------
# gl(r) coefficient extension


def tensor_gl(algebra: StructuredAlgebra, r: int) -> StructuredAlgebra:
    """Coefficients in gl(r): products compose, operators act on the form part."""
    if r < 1:
        raise ModelError("rank must be at least 1")
    e_labels = [f"E{a}_{b}" for a in range(1, r + 1) for b in range(1, r + 1)]
    space = GradedSpace({
        k: [f"{lab}|{el}" for lab in algebra.space.labels(k) for el in e_labels]
        for k in algebra.space.degrees()
    })

    def lift(g: GradedMap, shift: int) -> GradedMap:
        entries = []
        for frm, to, c in g.entries():
            for el in e_labels:
                entries.append((f"{frm}|{el}", f"{to}|{el}", c))
        return GradedMap.from_entries(space, space, shift, entries)

    triples = []
    for (l1, l2), targets in algebra.structure.items():
        for lt, c in targets.items():
            for a in range(1, r + 1):
                for b in range(1, r + 1):
                    for d in range(1, r + 1):
                        triples.append((f"{l1}|E{a}_{b}", f"{l2}|E{b}_{d}",
                                        f"{lt}|E{a}_{d}", c))
    return StructuredAlgebra(
        space, algebra.kind,
        {name: lift(g, 1) for name, g in algebra.differentials.items()},
        StructuredAlgebra.structure_from_triples(triples),
        {name: lift(g, 0) for name, g in algebra.maps.items()})


def end_tensor(obj, r: int):
    """gl(r)-coefficient extension of a bicomplex or connection model."""
    if isinstance(obj, Bicomplex):
        return Bicomplex(tensor_gl(obj.algebra, r), obj.d0_name, obj.d1_name)
    if isinstance(obj, ConnectionModel):
        dolbeault = tensor_gl(obj.dolbeault, r)
        full = tensor_gl(obj.full_model, r) if obj.full_model is not None else None
        return ConnectionModel(dolbeault, full)
    raise ModelError(f"cannot tensor object of type {type(obj).__name__}")


# ---------------------------------------------------------------------------
# connection models from bicomplexes, plus seeded corruption


def connection_from_bicomplex(b: Bicomplex) -> ConnectionModel:
    """Use d0 as del_bar_J and d1 as del_bar."""
    diffs = dict(b.algebra.differentials)
    diffs[DEL_BAR_J] = b.d0
    diffs[DEL_BAR] = b.d1
    for name in (b.d0_name, b.d1_name):
        diffs.pop(name, None)
    return ConnectionModel(b.algebra.with_differentials(diffs))


def random_connection_model(seed: int, corrupt: bool = False) -> tuple[ConnectionModel, bool]:
    """Seeded random dots/squares/zigzags connection model.

    With corrupt=True, three fresh chained basis vectors are appended whose
    arrows force one of the three autoduality relations to fail; which
    relation is seed-chosen.  Returns (model, is_autodual).
    """
    rnd = random.Random(seed)
    dots = {k: rnd.randint(0, 2) for k in range(3)}
    squares = [rnd.randint(0, 2) for _ in range(rnd.randint(0, 2))]
    zigzags = [rnd.randint(0, 1) for _ in range(rnd.randint(0, 1))]
    base = dots_squares_model(dots, squares, zigzags, seed=seed, unit=False)
    if not corrupt:
        model = connection_from_bicomplex(base)
        return model, True

    space = base.algebra.space
    k = rnd.randint(0, 1)
    components = {deg: list(space.labels(deg)) for deg in space.degrees()}
    fresh = [f"bad{k}", f"bad{k + 1}", f"bad{k + 2}"]
    for i, labf in enumerate(fresh):
        components.setdefault(k + i, []).append(labf)
    big = GradedSpace(components)

    def relift(g: GradedMap) -> list:
        return list(g.entries())

    d0_entries = relift(base.d0)
    d1_entries = relift(base.d1)
    mode = rnd.choice(["sq0", "sq1", "anti"])
    c1, c2 = _random_nonzero(rnd), _random_nonzero(rnd)
    if mode == "sq0":       # del_bar_J^2 != 0
        d0_entries += [(fresh[0], fresh[1], c1), (fresh[1], fresh[2], c2)]
    elif mode == "sq1":     # del_bar^2 != 0
        d1_entries += [(fresh[0], fresh[1], c1), (fresh[1], fresh[2], c2)]
    else:                   # anticommutator != 0
        d0_entries += [(fresh[0], fresh[1], c1)]
        d1_entries += [(fresh[1], fresh[2], c2)]
    algebra = StructuredAlgebra(
        big, "associative",
        {DEL_BAR_J: GradedMap.from_entries(big, big, 1, d0_entries),
         DEL_BAR: GradedMap.from_entries(big, big, 1, d1_entries)},
        {})
    model = ConnectionModel(algebra)
    if autoduality_check(model).autodual:
        raise ModelError("corruption failed to break autoduality")
    return model, False
