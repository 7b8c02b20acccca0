"""Graded vector spaces, graded maps, and structured (DG/DGLA) algebras.

Bases are labeled; a vector in degree k is a tuple of Scalars indexed by the
degree-k labels.  Products and brackets are sparse structure constants on
basis pairs, extended bilinearly.  Axioms are verified by full enumeration
over basis tuples (with sparse early-out), which stays exact and cheap at
model dimensions.

Sign conventions (Koszul throughout):
    d(a*b)    = d(a)*b + (-1)^deg(a) a*d(b)
    [a,b]     = -(-1)^(deg a * deg b) [b,a]
    [a,[b,c]] = [[a,b],c] + (-1)^(deg a * deg b) [b,[a,c]]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from dgkit.errors import ModelError, PreconditionError
from dgkit.linalg import (
    Matrix,
    Subspace,
    Vector,
    coordinates_in_basis,
    extend_basis,
    image_of,
    kernel_of,
    unit_vector,
    vec_add,
    vec_is_zero,
    vec_scale,
    zero_vector,
)
from dgkit.scalars import ONE, ZERO, Scalar

MINUS_ONE = Scalar(-1)


class GradedSpace:
    """Finite map degree -> ordered basis labels, labels globally unique."""

    def __init__(self, components: dict[int, Sequence[str]]):
        self.components = {k: list(v) for k, v in sorted(components.items()) if v}
        self.label_loc: dict[str, tuple[int, int]] = {}
        for k, labels in self.components.items():
            for i, lab in enumerate(labels):
                if lab in self.label_loc:
                    raise ModelError(f"duplicate basis label {lab!r}")
                self.label_loc[lab] = (k, i)

    def degrees(self) -> list[int]:
        return list(self.components)

    def dim(self, k: int) -> int:
        return len(self.components.get(k, ()))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())

    def labels(self, k: int) -> list[str]:
        return self.components.get(k, [])

    def all_labels(self) -> list[str]:
        return [l for k in self.degrees() for l in self.labels(k)]

    def degree_of(self, label: str) -> int:
        return self.label_loc[label][0]

    def basis_vector(self, label: str) -> tuple[int, Vector]:
        k, i = self.label_loc[label]
        return k, unit_vector(self.dim(k), i)

    def vector_items(self, k: int, v: Vector) -> list[tuple[str, Scalar]]:
        return [(lab, c) for lab, c in zip(self.labels(k), v) if not c.is_zero()]

    def sparse_to_vector(self, k: int, sparse: dict[str, Scalar]) -> Vector:
        out = [ZERO] * self.dim(k)
        for lab, c in sparse.items():
            kk, i = self.label_loc[lab]
            if kk != k:
                raise ModelError(f"label {lab!r} has degree {kk}, expected {k}")
            out[i] = out[i] + c
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self.components == other.components

    def __repr__(self):
        dims = ", ".join(f"{k}:{len(v)}" for k, v in self.components.items())
        return f"GradedSpace({dims})"


def format_vector(space: GradedSpace, k: int, v: Vector) -> list[list[str]]:
    """Labeled coefficient list, the witness format used in reports."""
    return [[lab, str(c)] for lab, c in space.vector_items(k, v)]


class GradedMap:
    """Degree-shift linear map given by one matrix block per source degree."""

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int,
                 blocks: Optional[dict[int, Matrix]] = None):
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = {}
        for k, m in (blocks or {}).items():
            if m.rows != target.dim(k + shift) or m.cols != source.dim(k):
                raise ModelError(
                    f"block at degree {k} has shape {m.rows}x{m.cols}, "
                    f"expected {target.dim(k + shift)}x{source.dim(k)}"
                )
            if not m.is_zero():
                self.blocks[k] = m

    @staticmethod
    def zero(source: GradedSpace, target: GradedSpace, shift: int) -> "GradedMap":
        return GradedMap(source, target, shift, {})

    @staticmethod
    def identity(space: GradedSpace) -> "GradedMap":
        return GradedMap(space, space, 0,
                         {k: Matrix.identity(space.dim(k)) for k in space.degrees()})

    @staticmethod
    def from_entries(source: GradedSpace, target: GradedSpace, shift: int,
                     entries: Iterable[tuple[str, str, Scalar]]) -> "GradedMap":
        blocks: dict[int, Matrix] = {}
        for frm, to, c in entries:
            if frm not in source.label_loc:
                raise ModelError(f"unknown source label {frm!r}")
            if to not in target.label_loc:
                raise ModelError(f"unknown target label {to!r}")
            k, i = source.label_loc[frm]
            kt, j = target.label_loc[to]
            if kt != k + shift:
                raise ModelError(
                    f"entry {frm!r} -> {to!r} violates shift {shift} "
                    f"(degrees {k} -> {kt})"
                )
            m = blocks.setdefault(k, Matrix.zero(target.dim(kt), source.dim(k)))
            m.data[j][i] = m.data[j][i] + c
        return GradedMap(source, target, shift, blocks)

    def block(self, k: int) -> Matrix:
        if k in self.blocks:
            return self.blocks[k]
        return Matrix.zero(self.target.dim(k + self.shift), self.source.dim(k))

    def apply(self, k: int, v: Vector) -> Vector:
        return self.block(k).apply(v)

    def apply_label(self, label: str) -> tuple[int, Vector]:
        k, v = self.source.basis_vector(label)
        return k + self.shift, self.apply(k, v)

    def label_table(self) -> dict[str, dict[str, Scalar]]:
        """Sparse label -> (label -> coefficient) view of the map."""
        table: dict[str, dict[str, Scalar]] = {l: {} for l in self.source.all_labels()}
        for k, m in self.blocks.items():
            src = self.source.labels(k)
            tgt = self.target.labels(k + self.shift)
            for j in range(m.rows):
                row = m.data[j]
                for i in range(m.cols):
                    if not row[i].is_zero():
                        table[src[i]][tgt[j]] = row[i]
        return table

    def compose(self, inner: "GradedMap") -> "GradedMap":
        """self o inner (inner applied first)."""
        shift = self.shift + inner.shift
        blocks = {}
        for k in inner.source.degrees():
            m = self.block(k + inner.shift) * inner.block(k)
            if not m.is_zero():
                blocks[k] = m
        return GradedMap(inner.source, self.target, shift, blocks)

    def add(self, other: "GradedMap") -> "GradedMap":
        if self.shift != other.shift:
            raise ModelError("cannot add maps of different shifts")
        blocks = {}
        for k in set(self.blocks) | set(other.blocks):
            blocks[k] = self.block(k) + other.block(k)
        return GradedMap(self.source, self.target, self.shift, blocks)

    def scale(self, c: Scalar) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {k: m.scale(c) for k, m in self.blocks.items()})

    def neg(self) -> "GradedMap":
        return self.scale(MINUS_ONE)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.shift != other.shift:
            return False
        degrees = set(self.blocks) | set(other.blocks)
        return all(self.block(k) == other.block(k) for k in degrees)

    def entries(self) -> list[tuple[str, str, Scalar]]:
        out = []
        for k in sorted(self.blocks):
            m = self.blocks[k]
            src = self.source.labels(k)
            tgt = self.target.labels(k + self.shift)
            for i, frm in enumerate(src):
                for j, to in enumerate(tgt):
                    if not m.data[j][i].is_zero():
                        out.append((frm, to, m.data[j][i]))
        return out

    def __repr__(self):
        return f"GradedMap(shift {self.shift}, {len(self.entries())} entries)"


# ---------------------------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: Optional[dict] = None

    def to_json(self):
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ValidationReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, witness=None):
        self.checks.append(AxiomCheck(name, passed, witness))

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def to_json(self):
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _sparse_scale(c: Scalar, s: dict) -> dict:
    return {l: c * v for l, v in s.items()}


def _sparse_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for l, c in b.items():
        acc = out.get(l, ZERO) + c
        if acc.is_zero():
            out.pop(l, None)
        else:
            out[l] = acc
    return out


def _sparse_is_zero(s: dict) -> bool:
    return all(c.is_zero() for c in s.values())


class StructuredAlgebra:
    """Graded space with named shift-1 differentials and a product/bracket.

    kind is "associative" (structure = product) or "lie" (structure =
    bracket).  Structure constants map label pairs to sparse vectors.
    """

    def __init__(self, space: GradedSpace, kind: str = "associative",
                 differentials: Optional[dict[str, GradedMap]] = None,
                 structure: Optional[dict] = None,
                 maps: Optional[dict[str, GradedMap]] = None):
        if kind not in ("associative", "lie"):
            raise ModelError(f"unknown algebra kind {kind!r}")
        self.space = space
        self.kind = kind
        self.differentials = dict(differentials or {})
        for name, d in self.differentials.items():
            if d.shift != 1:
                raise ModelError(f"differential {name!r} must have shift 1")
        self.maps = dict(maps or {})  # auxiliary maps (sl2 action, J, ...)
        self.structure: dict[tuple[str, str], dict[str, Scalar]] = {}
        for (l1, l2), targets in (structure or {}).items():
            self._check_triple(l1, l2, targets)
            cleaned = {lt: c for lt, c in targets.items() if not c.is_zero()}
            if cleaned:
                self.structure[(l1, l2)] = cleaned

    def _check_triple(self, l1, l2, targets):
        for lab in (l1, l2):
            if lab not in self.space.label_loc:
                raise ModelError(f"structure references unknown label {lab!r}")
        k1 = self.space.label_loc[l1][0]
        k2 = self.space.label_loc[l2][0]
        for lt in targets:
            if lt not in self.space.label_loc:
                raise ModelError(f"structure references unknown label {lt!r}")
            if self.space.label_loc[lt][0] != k1 + k2:
                raise ModelError(
                    f"structure triple ({l1}, {l2}, {lt}) violates grading: "
                    f"{k1} + {k2} != {self.space.label_loc[lt][0]}"
                )

    @staticmethod
    def structure_from_triples(triples: Iterable[tuple[str, str, str, Scalar]]) -> dict:
        structure: dict[tuple[str, str], dict[str, Scalar]] = {}
        for l1, l2, lt, c in triples:
            tgt = structure.setdefault((l1, l2), {})
            tgt[lt] = tgt.get(lt, ZERO) + c
        return structure

    def structure_triples(self) -> list[tuple[str, str, str, Scalar]]:
        out = []
        for (l1, l2), targets in self.structure.items():
            for lt, c in targets.items():
                out.append((l1, l2, lt, c))
        return out

    # -- multiplication -------------------------------------------------

    def mul_labels(self, l1: str, l2: str) -> dict[str, Scalar]:
        return self.structure.get((l1, l2), {})

    def smul(self, s1: dict[str, Scalar], s2: dict[str, Scalar]) -> dict[str, Scalar]:
        """Product of sparse label vectors."""
        out: dict[str, Scalar] = {}
        for l1, c1 in s1.items():
            if c1.is_zero():
                continue
            for l2, c2 in s2.items():
                targets = self.structure.get((l1, l2))
                if not targets:
                    continue
                c = c1 * c2
                for lt, ct in targets.items():
                    acc = out.get(lt, ZERO) + c * ct
                    if acc.is_zero():
                        out.pop(lt, None)
                    else:
                        out[lt] = acc
        return out

    def mul(self, k1: int, v1: Vector, k2: int, v2: Vector) -> Vector:
        """Bilinear extension of the structure constants; result in degree k1+k2."""
        k = k1 + k2
        out = [ZERO] * self.space.dim(k)
        labels1 = self.space.labels(k1)
        labels2 = self.space.labels(k2)
        nz1 = [(labels1[i], c) for i, c in enumerate(v1) if not c.is_zero()]
        nz2 = [(labels2[j], c) for j, c in enumerate(v2) if not c.is_zero()]
        loc = self.space.label_loc
        for l1, c1 in nz1:
            for l2, c2 in nz2:
                targets = self.structure.get((l1, l2))
                if not targets:
                    continue
                c = c1 * c2
                for lt, ct in targets.items():
                    idx = loc[lt][1]
                    out[idx] = out[idx] + c * ct
        return tuple(out)

    def bracket(self, k1: int, v1: Vector, k2: int, v2: Vector) -> Vector:
        """The bracket: structure itself for lie kind, graded commutator else."""
        if self.kind == "lie":
            return self.mul(k1, v1, k2, v2)
        left = self.mul(k1, v1, k2, v2)
        right = self.mul(k2, v2, k1, v1)
        sign = MINUS_ONE if (k1 * k2) % 2 == 0 else ONE
        return vec_add(left, vec_scale(sign, right))

    def differential(self, name: str) -> GradedMap:
        if name not in self.differentials:
            raise ModelError(f"unknown differential {name!r}")
        return self.differentials[name]

    def with_differentials(self, differentials: dict[str, GradedMap]) -> "StructuredAlgebra":
        return StructuredAlgebra(self.space, self.kind, differentials,
                                 self.structure, self.maps)

    # -- axiom validation -------------------------------------------------

    def _d_squared_check(self, report: ValidationReport, d: GradedMap, name: str):
        sq = d.compose(d)
        if sq.is_zero():
            report.add(f"{name}^2 = 0", True)
            return
        k = next(kk for kk, m in sq.blocks.items() if not m.is_zero())
        lab = next(l for l in self.space.labels(k)
                   if not vec_is_zero(sq.apply(k, self.space.basis_vector(l)[1])))
        img = sq.apply(k, self.space.basis_vector(lab)[1])
        report.add(f"{name}^2 = 0", False,
                   {"label": lab, "image": format_vector(self.space, k + 2, img)})

    def _leibniz_check(self, report: ValidationReport, d: GradedMap, name: str):
        table = d.label_table()
        ok, witness = True, None
        labels = [(l, self.space.degree_of(l)) for l in self.space.all_labels()]
        for l1, k1 in labels:
            d1 = table[l1]
            for l2, k2 in labels:
                d2 = table[l2]
                p12 = self.structure.get((l1, l2))
                relevant = p12 or any((t, l2) in self.structure for t in d1) \
                    or any((l1, t) in self.structure for t in d2)
                if not relevant:
                    continue
                lhs: dict[str, Scalar] = {}
                if p12:
                    for lt, c in p12.items():
                        for lu, cu in table[lt].items():
                            lhs = _sparse_add(lhs, {lu: c * cu})
                rhs: dict[str, Scalar] = {}
                for t, c in d1.items():
                    rhs = _sparse_add(rhs, _sparse_scale(c, self.mul_labels(t, l2)))
                sign = ONE if k1 % 2 == 0 else MINUS_ONE
                for t, c in d2.items():
                    rhs = _sparse_add(rhs, _sparse_scale(sign * c, self.mul_labels(l1, t)))
                diff = _sparse_add(lhs, _sparse_scale(MINUS_ONE, rhs))
                if not _sparse_is_zero(diff):
                    ok = False
                    witness = {"pair": [l1, l2],
                               "difference": [[l, str(c)] for l, c in diff.items()]}
                    break
            if not ok:
                break
        report.add(f"Leibniz({name})", ok, witness)

    def validate_dg_algebra(self, d_name: str) -> ValidationReport:
        """d^2 = 0, Leibniz on all basis pairs, associativity on all triples."""
        if self.kind != "associative":
            raise PreconditionError("validate_dg_algebra requires an associative algebra")
        d = self.differential(d_name)
        report = ValidationReport()
        self._d_squared_check(report, d, d_name)
        self._leibniz_check(report, d, d_name)
        ok, witness = True, None
        labels = self.space.all_labels()
        # A triple can only violate associativity if one of the two inner
        # products is nonzero, so walk the sparse pair set.
        candidates = set()
        for (a, b) in self.structure:
            for c in labels:
                candidates.add((a, b, c))
                candidates.add((c, a, b))
        for l1, l2, l3 in sorted(candidates):
            lhs: dict[str, Scalar] = {}
            for lt, c in self.mul_labels(l1, l2).items():
                lhs = _sparse_add(lhs, _sparse_scale(c, self.mul_labels(lt, l3)))
            rhs: dict[str, Scalar] = {}
            for lt, c in self.mul_labels(l2, l3).items():
                rhs = _sparse_add(rhs, _sparse_scale(c, self.mul_labels(l1, lt)))
            diff = _sparse_add(lhs, _sparse_scale(MINUS_ONE, rhs))
            if not _sparse_is_zero(diff):
                ok, witness = False, {"triple": [l1, l2, l3]}
                break
        report.add("associativity", ok, witness)
        return report

    def validate_dgla(self, d_name: str) -> ValidationReport:
        """d^2, Leibniz, graded skew-symmetry, Jacobi, plus the char-0
        consequences [a,a] = 0 (a even) and [a,[a,a]] = 0 (a odd)."""
        if self.kind != "lie":
            raise PreconditionError("validate_dgla requires a lie algebra")
        d = self.differential(d_name)
        report = ValidationReport()
        self._d_squared_check(report, d, d_name)
        self._leibniz_check(report, d, d_name)

        ok, witness = True, None
        labels = self.space.all_labels()
        checked = set(self.structure) | {(b, a) for (a, b) in self.structure}
        for (l1, l2) in sorted(checked):
            k1 = self.space.degree_of(l1)
            k2 = self.space.degree_of(l2)
            # [a,b] + (-1)^(deg a deg b) [b,a] must vanish
            koszul = ONE if (k1 * k2) % 2 == 0 else MINUS_ONE
            diff = _sparse_add(self.mul_labels(l1, l2),
                               _sparse_scale(koszul, self.mul_labels(l2, l1)))
            if not _sparse_is_zero(diff):
                ok, witness = False, {"pair": [l1, l2]}
                break
        report.add("skew-symmetry", ok, witness)

        ok, witness = True, None
        candidates = set()
        for (a, b) in self.structure:
            for c in labels:
                candidates.add((c, a, b))   # [l1,[l2,l3]] with (l2,l3) in S
                candidates.add((a, b, c))   # [[l1,l2],l3]
                candidates.add((a, c, b))   # [l2,[l1,l3]] with (l1,l3) in S
        for l1, l2, l3 in sorted(candidates):
            k1 = self.space.degree_of(l1)
            k2 = self.space.degree_of(l2)
            lhs: dict[str, Scalar] = {}
            for lt, c in self.mul_labels(l2, l3).items():
                lhs = _sparse_add(lhs, _sparse_scale(c, self.mul_labels(l1, lt)))
            rhs: dict[str, Scalar] = {}
            for lt, c in self.mul_labels(l1, l2).items():
                rhs = _sparse_add(rhs, _sparse_scale(c, self.mul_labels(lt, l3)))
            sign = ONE if (k1 * k2) % 2 == 0 else MINUS_ONE
            for lt, c in self.mul_labels(l1, l3).items():
                rhs = _sparse_add(rhs, _sparse_scale(sign * c, self.mul_labels(l2, lt)))
            diff = _sparse_add(lhs, _sparse_scale(MINUS_ONE, rhs))
            if not _sparse_is_zero(diff):
                ok, witness = False, {"triple": [l1, l2, l3]}
                break
        report.add("Jacobi", ok, witness)

        ok, witness = True, None
        for lab in labels:
            k = self.space.degree_of(lab)
            sq = self.mul_labels(lab, lab)
            if k % 2 == 0:
                if not _sparse_is_zero(sq):
                    ok, witness = False, {"label": lab, "identity": "[a,a]=0 (even)"}
                    break
            else:
                bianchi: dict[str, Scalar] = {}
                for lt, c in sq.items():
                    bianchi = _sparse_add(bianchi, _sparse_scale(c, self.mul_labels(lab, lt)))
                if not _sparse_is_zero(bianchi):
                    ok, witness = False, {"label": lab, "identity": "[a,[a,a]]=0 (odd)"}
                    break
        report.add("char-0 consequences", ok, witness)
        return report

    def commutator_dgla(self, validate: bool = True) -> "StructuredAlgebra":
        """The DGLA with [x,y] = x*y - (-1)^(deg x deg y) y*x."""
        if self.kind != "associative":
            raise PreconditionError("commutator_dgla requires an associative algebra")
        if validate:
            for name in self.differentials:
                rep = self.validate_dg_algebra(name)
                if not rep.passed:
                    raise PreconditionError(
                        f"commutator_dgla on unvalidated input: {rep.failures()[0].name}")
        structure: dict[tuple[str, str], dict[str, Scalar]] = {}
        pairs = set(self.structure) | {(b, a) for (a, b) in self.structure}
        for (l1, l2) in pairs:
            k1 = self.space.degree_of(l1)
            k2 = self.space.degree_of(l2)
            sign = MINUS_ONE if (k1 * k2) % 2 == 0 else ONE
            br = _sparse_add(self.mul_labels(l1, l2),
                             _sparse_scale(sign, self.mul_labels(l2, l1)))
            br = {l: c for l, c in br.items() if not c.is_zero()}
            if br:
                structure[(l1, l2)] = br
        return StructuredAlgebra(self.space, "lie", self.differentials,
                                 structure, self.maps)


# ---------------------------------------------------------------------------
# cohomology


class CohomologyPresentation:
    """Cohomology of (A, d): representatives, projection, induced structure.

    Representatives span a complement of im(d) inside ker(d); the complement
    is the deterministic echelon extension, no metric enters.  The induced
    product/bracket is computed on representatives and verified well-defined
    by `check_well_defined`.
    """

    def __init__(self, algebra: StructuredAlgebra, d_name: str):
        self.algebra = algebra
        self.d_name = d_name
        d = algebra.differential(d_name)
        sq = d.compose(d)
        for k in algebra.space.degrees():
            if not sq.block(k).is_zero():
                raise PreconditionError(f"{d_name}^2 != 0 at degree {k}")
        self.d = d
        space = algebra.space
        self.kernels: dict[int, Subspace] = {}
        self.images: dict[int, Subspace] = {}
        self.reps: dict[int, list[Vector]] = {}
        self._proj_basis: dict[int, list[Vector]] = {}
        for k in space.degrees():
            n = space.dim(k)
            if n == 0:
                continue
            ker = kernel_of(d.block(k))
            im = image_of(d.block(k - 1))
            self.kernels[k] = ker
            self.images[k] = im
            comp = extend_basis(im, ker)
            self.reps[k] = comp
            self._proj_basis[k] = im.vectors() + comp

        self.h_space = GradedSpace({
            k: [f"h{k}_{i}" for i in range(len(reps))]
            for k, reps in self.reps.items() if reps
        })
        self._induced = None

    def dims(self) -> dict[int, int]:
        return {k: len(v) for k, v in self.reps.items() if v}

    def dim(self, k: int) -> int:
        return len(self.reps.get(k, ()))

    def rep_vector(self, k: int, i: int) -> Vector:
        return self.reps[k][i]

    def project(self, k: int, v: Vector) -> Vector:
        """Coordinates of a closed vector's class in the representative basis."""
        return self.project_many(k, [v])[0]

    def project_many(self, k: int, vectors: Sequence[Vector]) -> list[Vector]:
        h_dim = self.dim(k)
        if not vectors:
            return []
        if self.algebra.space.dim(k) == 0:
            return [tuple()] * len(vectors)
        basis = self._proj_basis.get(k)
        if not basis:
            if any(not vec_is_zero(v) for v in vectors):
                raise PreconditionError(f"vector at degree {k} is not closed")
            return [zero_vector(h_dim) for _ in vectors]
        coords = coordinates_in_basis(basis, list(vectors))
        if coords is None:
            raise PreconditionError(f"vector at degree {k} is not closed")
        n_im = len(basis) - h_dim
        return [tuple(c[n_im:]) for c in coords]

    def class_of(self, k: int, v: Vector) -> Vector:
        return self.project(k, v)

    def induced_structure(self) -> dict:
        """Structure constants inherited on cohomology classes."""
        if self._induced is not None:
            return self._induced
        triples = []
        for k1, reps1 in self.reps.items():
            for k2, reps2 in self.reps.items():
                if not reps1 or not reps2:
                    continue
                k = k1 + k2
                if self.algebra.space.dim(k) == 0:
                    continue
                prods = [self.algebra.mul(k1, r1, k2, r2)
                         for r1 in reps1 for r2 in reps2]
                classes = self.project_many(k, prods)
                idx = 0
                for i in range(len(reps1)):
                    for j in range(len(reps2)):
                        cls = classes[idx]
                        idx += 1
                        for t, c in enumerate(cls):
                            if not c.is_zero():
                                triples.append((f"h{k1}_{i}", f"h{k2}_{j}", f"h{k}_{t}", c))
        self._induced = StructuredAlgebra.structure_from_triples(triples)
        return self._induced

    def as_algebra(self) -> StructuredAlgebra:
        """Cohomology as a structured algebra with zero differential."""
        return StructuredAlgebra(
            self.h_space, self.algebra.kind,
            {self.d_name: GradedMap.zero(self.h_space, self.h_space, 1)},
            self.induced_structure())

    def check_well_defined(self) -> ValidationReport:
        """Induced structure is independent of the representative choice."""
        report = ValidationReport()
        ok, witness = True, None
        for k1, reps1 in self.reps.items():
            if not ok:
                break
            boundaries = self.images.get(k1, Subspace.zero(0)).vectors()
            for r1 in reps1:
                for b in boundaries:
                    shifted = vec_add(r1, b)
                    for k2, reps2 in self.reps.items():
                        k = k1 + k2
                        if self.algebra.space.dim(k) == 0:
                            continue
                        for r2 in reps2:
                            p1 = self.algebra.mul(k1, shifted, k2, r2)
                            p2 = self.algebra.mul(k1, r1, k2, r2)
                            if self.project(k, p1) != self.project(k, p2):
                                ok = False
                                witness = {"degree_pair": [k1, k2]}
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                if not ok:
                    break
        report.add("induced structure representative-independent", ok, witness)
        return report


def cohomology(algebra: StructuredAlgebra, d_name: str) -> CohomologyPresentation:
    return CohomologyPresentation(algebra, d_name)


def adjoint_operator(algebra: StructuredAlgebra, degree: int, v: Vector) -> GradedMap:
    """The graded commutator u -> v*u - (-1)^(deg v * deg u) u*v."""
    space = algebra.space
    minus = Scalar(-1)
    blocks = {}
    for k in space.degrees():
        n = space.dim(k)
        rows = space.dim(k + degree)
        if n == 0 or rows == 0:
            continue
        m = Matrix(rows, n)
        for j, lab in enumerate(space.labels(k)):
            _, u = space.basis_vector(lab)
            left = algebra.mul(degree, v, k, u)
            right = algebra.mul(k, u, degree, v)
            sign = minus if (degree * k) % 2 == 0 else ONE
            for i in range(rows):
                m.data[i][j] = left[i] + sign * right[i]
        blocks[k] = m
    return GradedMap(space, space, degree, blocks)


def induced_map_on_cohomology(f: GradedMap, source: CohomologyPresentation,
                              target: CohomologyPresentation,
                              sign: Optional[Callable[[int], Scalar]] = None) -> dict[int, Matrix]:
    """Matrix of the map induced on cohomology by a chain map f (shift 0).

    f must send kernels to kernels and images to images; the projection
    raises otherwise.
    """
    out = {}
    for k, reps in source.reps.items():
        if not reps:
            continue
        imgs = [f.apply(k, r) for r in reps]
        if sign is not None:
            imgs = [vec_scale(sign(k), v) for v in imgs]
        classes = target.project_many(k, imgs)
        h_dim = target.dim(k)
        m = Matrix(h_dim, len(reps))
        for j, cls in enumerate(classes):
            for i, c in enumerate(cls):
                m.data[i][j] = c
        out[k] = m
    return out
