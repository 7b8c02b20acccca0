"""sl(2) actions on graded spaces: weight decomposition, the low-weight
ideal, and the quotient algebra it defines.

The action is given by three shift-0 maps e (raising), f (lowering), h
(Cartan) with [h,e] = 2e, [h,f] = -2f, [e,f] = h.  Group invariance is
operationalized as weight 0 under this action: the group is recovered from
the algebra action on finite-dimensional representations, so no group
element is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from dgkit.errors import InternalCheckError, ModelError
from dgkit.graded import (
    GradedMap,
    GradedSpace,
    StructuredAlgebra,
    ValidationReport,
    format_vector,
)
from dgkit.linalg import (
    Matrix,
    Subspace,
    Vector,
    coordinates_in_basis,
    extend_basis,
    kernel_of,
    vec_is_zero,
)
from dgkit.scalars import ONE, ZERO, Scalar


class Sl2Module:
    """A graded space with a degree-preserving sl(2)-action."""

    def __init__(self, space: GradedSpace, e: GradedMap, f: GradedMap, h: GradedMap):
        for name, op in (("e", e), ("f", f), ("h", h)):
            if op.shift != 0:
                raise ModelError(f"sl(2) operator {name} must preserve degree")
        self.space = space
        self.e = e
        self.f = f
        self.h = h

    @staticmethod
    def from_algebra(algebra: StructuredAlgebra) -> "Sl2Module":
        try:
            return Sl2Module(algebra.space, algebra.maps["e"],
                             algebra.maps["f"], algebra.maps["h"])
        except KeyError as exc:
            raise ModelError(f"algebra carries no sl(2) map {exc}") from exc

    def validate(self) -> ValidationReport:
        """[h,e] = 2e, [h,f] = -2f, [e,f] = h, checked blockwise."""
        report = ValidationReport()
        two = Scalar(2)

        def comm(a: GradedMap, b: GradedMap) -> GradedMap:
            return a.compose(b).add(b.compose(a).neg())

        report.add("[h,e] = 2e", comm(self.h, self.e) == self.e.scale(two))
        report.add("[h,f] = -2f", comm(self.h, self.f) == self.f.scale(-two))
        report.add("[e,f] = h", comm(self.e, self.f) == self.h)
        return report


def _charpoly(m: Matrix) -> list[Scalar]:
    """Monic characteristic polynomial by Faddeev-LeVerrier, highest first."""
    n = m.rows
    coeffs = [ONE]
    mk = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m * mk
        trace = ZERO
        for i in range(n):
            trace = trace + mk.data[i][i]
        ck = trace.scale(-1) / Scalar(k)
        coeffs.append(ck)
        if k < n:
            mk = mk + Matrix.identity(n).scale(ck)
    return coeffs


def _poly_eval(coeffs: list[Scalar], x: Scalar) -> Scalar:
    acc = ZERO
    for c in coeffs:
        acc = acc * x + c
    return acc


def _poly_deflate(coeffs: list[Scalar], root: Scalar) -> list[Scalar]:
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(out[-1] * root + c)
    return out


def integer_spectrum(m: Matrix, bound: Optional[int] = None) -> dict[int, int]:
    """Integer eigenvalues with algebraic multiplicity.

    Tries every integer in [-bound, bound] (default: matrix size) against
    the exact characteristic polynomial.  Raises ModelError naming the
    residual factor when the spectrum is not fully integer within bounds.
    """
    n = m.rows
    if n == 0:
        return {}
    if bound is None:
        bound = n
    poly = _charpoly(m)
    roots: dict[int, int] = {}
    candidates = [0] + [s * v for v in range(1, bound + 1) for s in (1, -1)]
    progress = True
    while len(poly) > 1 and progress:
        progress = False
        for lam in candidates:
            if _poly_eval(poly, Scalar(lam)).is_zero():
                roots[lam] = roots.get(lam, 0) + 1
                poly = _poly_deflate(poly, Scalar(lam))
                progress = True
                break
    if len(poly) > 1:
        residual = " ".join(str(c) for c in poly)
        raise ModelError(
            f"non-integral h-spectrum; residual characteristic factor "
            f"[{residual}] (eigenvalue not an integer in [-{bound}, {bound}])")
    return roots


@dataclass
class IsotypicDecomposition:
    """Per degree and weight: highest-weight subspaces and multiplicities."""

    module: Sl2Module
    highest_weight: dict = field(default_factory=dict)   # (degree, w) -> Subspace
    eigenspaces: dict = field(default_factory=dict)      # (degree, lam) -> Subspace

    def multiplicity(self, degree: int, w: int) -> int:
        sub = self.highest_weight.get((degree, w))
        return sub.dim if sub else 0

    def weights(self, degree: int) -> list[int]:
        return sorted(w for (k, w), sub in self.highest_weight.items()
                      if k == degree and sub.dim > 0)

    def isotypic_vectors(self, degree: int, w: int) -> list[Vector]:
        """Spanning vectors of the weight-w isotypic piece: f^j on HW vectors."""
        sub = self.highest_weight.get((degree, w))
        if not sub or sub.dim == 0:
            return []
        out = []
        f = self.module.f
        for v in sub.vectors():
            cur = v
            out.append(cur)
            for _ in range(w):
                cur = f.apply(degree, cur)
                out.append(cur)
        return out

    def isotypic_subspace(self, degree: int, w: int) -> Subspace:
        n = self.module.space.dim(degree)
        return Subspace.from_vectors(n, self.isotypic_vectors(degree, w))

    def to_json(self):
        table = {}
        for (k, w), sub in sorted(self.highest_weight.items()):
            if sub.dim:
                table.setdefault(str(k), {})[str(w)] = sub.dim
        return {"multiplicities": table}


def weight_decomposition(module: Sl2Module) -> IsotypicDecomposition:
    """Decompose each degree block into isotypic pieces.

    Verifies the dimension identity sum_w mult(w)(w+1) = dim and that the
    f-orbits of highest-weight vectors span the block.
    """
    report = module.validate()
    if not report.passed:
        raise ModelError(f"not an sl(2) action: {report.failures()[0].name}")
    decomp = IsotypicDecomposition(module)
    space = module.space
    for k in space.degrees():
        n = space.dim(k)
        if n == 0:
            continue
        h_block = module.h.block(k)
        spectrum = integer_spectrum(h_block)
        geo_total = 0
        for lam in spectrum:
            eig = kernel_of(h_block - Matrix.identity(n).scale(Scalar(lam)))
            decomp.eigenspaces[(k, lam)] = eig
            geo_total += eig.dim
        if geo_total != n:
            raise ModelError(
                f"h is not diagonalizable at degree {k}: eigenspaces span "
                f"{geo_total} of {n} dimensions")
        dim_count = 0
        for lam, _mult in spectrum.items():
            if lam < 0:
                continue
            e_ker = kernel_of(module.e.block(k))
            hw = decomp.eigenspaces[(k, lam)].intersect(e_ker)
            decomp.highest_weight[(k, lam)] = hw
            dim_count += hw.dim * (lam + 1)
        if dim_count != n:
            raise ModelError(
                f"weight multiplicities do not add up at degree {k}: "
                f"{dim_count} != {n}")
        spanning = []
        for w in decomp.weights(k):
            spanning.extend(decomp.isotypic_vectors(k, w))
        if Subspace.from_vectors(n, spanning).dim != n:
            raise ModelError(f"f-orbits of highest-weight vectors do not span "
                             f"degree {k}")
    return decomp


def low_weight_ideal(algebra: StructuredAlgebra,
                     decomp: IsotypicDecomposition) -> dict[int, Subspace]:
    """Smallest two-sided graded ideal containing, in each degree k, every
    isotypic component of weight strictly less than k.

    Closure is computed by iterating products with all basis elements to a
    fixed point; monotone, so it terminates within total_dim steps.
    """
    space = algebra.space
    ideal = {k: Subspace.zero(space.dim(k)) for k in space.degrees()}
    frontier: list[tuple[int, Vector]] = []
    for k in space.degrees():
        gens = []
        for w in decomp.weights(k):
            if w < k:
                gens.extend(decomp.isotypic_vectors(k, w))
        if gens:
            ideal[k] = Subspace.from_vectors(space.dim(k), gens)
            frontier.extend((k, v) for v in ideal[k].vectors())

    labels = [(l, space.degree_of(l)) for l in space.all_labels()]
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > space.total_dim() + 1:
            raise InternalCheckError("ideal closure failed to stabilize")
        new_frontier: list[tuple[int, Vector]] = []
        for kv, v in frontier:
            for lab, kl in labels:
                _, unit = space.basis_vector(lab)
                for deg, prod in ((kv + kl, algebra.mul(kl, unit, kv, v)),
                                  (kv + kl, algebra.mul(kv, v, kl, unit))):
                    if space.dim(deg) == 0 or vec_is_zero(prod):
                        continue
                    if not ideal[deg].contains(prod):
                        ideal[deg] = ideal[deg].add(
                            Subspace.from_vectors(space.dim(deg), [prod]))
                        new_frontier.append((deg, prod))
        frontier = new_frontier
    return ideal


@dataclass
class QuotientResult:
    """The quotient algebra, the projection, and its certificates."""

    algebra: StructuredAlgebra            # the quotient
    qmap: GradedMap                       # projection from the source
    reps: dict                            # degree -> list of representative vectors
    bidegrees: dict                       # quotient label -> (p, q), when h-graded
    checks: ValidationReport
    embedding_injective: Optional[bool] = None

    def dims(self) -> dict[int, int]:
        return {k: self.algebra.space.dim(k) for k in self.algebra.space.degrees()}

    def bigraded_dims(self) -> dict:
        out: dict = {}
        for lab, (p, q) in self.bidegrees.items():
            out[(p, q)] = out.get((p, q), 0) + 1
        return out

    def to_json(self):
        return {
            "dims": {str(k): v for k, v in self.dims().items()},
            "bigraded_dims": {f"{p},{q}": v for (p, q), v in sorted(self.bigraded_dims().items())},
            "checks": self.checks.to_json(),
            "embedding_injective": self.embedding_injective,
        }


def plus_quotient(algebra: StructuredAlgebra, ideal: dict[int, Subspace],
                  decomp: Optional[IsotypicDecomposition] = None) -> QuotientResult:
    """Quotient of the algebra by a graded two-sided differential-stable ideal.

    Rejects (ModelError, with witness) if the ideal is not two-sided or not
    stable under every named differential.  When an sl(2) decomposition is
    supplied, representatives are chosen inside h-eigenspaces so the quotient
    inherits the bigrading (p, q) = ((k - lam)/2, (k + lam)/2).
    """
    space = algebra.space
    checks = ValidationReport()

    # two-sided ideal check
    ok, witness = True, None
    labels = [(l, space.degree_of(l)) for l in space.all_labels()]
    for k, sub in ideal.items():
        for v in sub.vectors():
            for lab, kl in labels:
                _, unit = space.basis_vector(lab)
                left = algebra.mul(kl, unit, k, v)
                right = algebra.mul(k, v, kl, unit)
                for deg, prod in ((kl + k, left), (k + kl, right)):
                    if vec_is_zero(prod):
                        continue
                    if deg not in ideal or not ideal[deg].contains(prod):
                        ok, witness = False, {"degree": k, "label": lab}
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    checks.add("two-sided ideal", ok, witness)
    if not ok:
        raise ModelError(f"not a two-sided ideal: {witness}")

    # differential stability
    for name, d in algebra.differentials.items():
        ok, witness = True, None
        for k, sub in ideal.items():
            for v in sub.vectors():
                img = d.apply(k, v)
                if vec_is_zero(img):
                    continue
                tgt = ideal.get(k + 1)
                if tgt is None or not tgt.contains(img):
                    ok = False
                    witness = {"differential": name, "degree": k,
                               "vector": format_vector(space, k, v)}
                    break
            if not ok:
                break
        checks.add(f"ideal stable under {name}", ok, witness)
        if not ok:
            raise ModelError(f"ideal not stable under differential {name!r}: "
                             f"degree {witness['degree']}")

    h = algebra.maps.get("h")
    reps: dict[int, list[Vector]] = {}
    bidegrees: dict[str, tuple[int, int]] = {}
    rep_weights: dict[int, list[Optional[int]]] = {}
    for k in space.degrees():
        n = space.dim(k)
        ik = ideal.get(k, Subspace.zero(n))
        chosen: list[Vector] = []
        weights: list[Optional[int]] = []
        if h is not None:
            h_block = h.block(k)
            spectrum = integer_spectrum(h_block)
            covered = 0
            for lam in sorted(spectrum):
                eig = kernel_of(h_block - Matrix.identity(n).scale(Scalar(lam)))
                i_lam = ik.intersect(eig)
                covered += i_lam.dim
                for v in extend_basis(i_lam, eig):
                    chosen.append(v)
                    weights.append(lam)
            if covered != ik.dim:
                raise ModelError(
                    f"ideal is not h-stable at degree {k}; bigraded quotient "
                    f"unavailable")
        else:
            full = Subspace.full(n)
            chosen = extend_basis(ik, full)
            weights = [None] * len(chosen)
        reps[k] = chosen
        rep_weights[k] = weights

    q_space = GradedSpace({k: [f"q{k}_{i}" for i in range(len(v))]
                           for k, v in reps.items() if v})
    for k, chosen in reps.items():
        for i, lam in enumerate(rep_weights[k]):
            if lam is None:
                continue
            if (k - lam) % 2 == 0:
                bidegrees[f"q{k}_{i}"] = ((k - lam) // 2, (k + lam) // 2)

    # projection blocks: coordinates in [ideal basis | representatives]
    proj_blocks = {}
    proj_basis = {}
    for k in space.degrees():
        n = space.dim(k)
        ik = ideal.get(k, Subspace.zero(n))
        basis = ik.vectors() + reps[k]
        proj_basis[k] = (basis, ik.dim)
        if not reps[k]:
            continue
        targets = [space.basis_vector(l)[1] for l in space.labels(k)]
        coords = coordinates_in_basis(basis, targets)
        if coords is None:
            raise InternalCheckError("ideal + representatives do not span")
        m = Matrix(len(reps[k]), n)
        for j, cv in enumerate(coords):
            for i in range(len(reps[k])):
                m.data[i][j] = cv[ik.dim + i]
        proj_blocks[k] = m
    qmap = GradedMap(space, q_space, 0, proj_blocks)

    # quotient structure and differentials through the projection
    triples = []
    for k1, reps1 in reps.items():
        for k2, reps2 in reps.items():
            if not reps1 or not reps2 or q_space.dim(k1 + k2) == 0:
                continue
            for i, r1 in enumerate(reps1):
                for j, r2 in enumerate(reps2):
                    prod = algebra.mul(k1, r1, k2, r2)
                    cls = qmap.apply(k1 + k2, prod)
                    for t, c in enumerate(cls):
                        if not c.is_zero():
                            triples.append((f"q{k1}_{i}", f"q{k2}_{j}",
                                            f"q{k1 + k2}_{t}", c))
    q_diffs = {}
    for name, d in algebra.differentials.items():
        blocks = {}
        for k, chosen in reps.items():
            if not chosen or q_space.dim(k + 1) == 0:
                continue
            m = Matrix(q_space.dim(k + 1), len(chosen))
            for j, r in enumerate(chosen):
                img = qmap.apply(k + 1, d.apply(k, r))
                for i, c in enumerate(img):
                    m.data[i][j] = c
            blocks[k] = m
        q_diffs[name] = GradedMap(q_space, q_space, 1, blocks)

    q_maps = {}
    if h is not None:
        # sl(2) operators descend when the ideal is stable; build and verify
        for name in ("e", "f", "h"):
            op = algebra.maps.get(name)
            if op is None:
                continue
            stable = all(
                ideal.get(k, Subspace.zero(space.dim(k))).contains(op.apply(k, v))
                for k, sub in ideal.items() for v in sub.vectors())
            checks.add(f"ideal stable under {name}", stable)
            if not stable:
                continue
            blocks = {}
            for k, chosen in reps.items():
                if not chosen or q_space.dim(k) == 0:
                    continue
                m = Matrix(q_space.dim(k), len(chosen))
                for j, r in enumerate(chosen):
                    img = qmap.apply(k, op.apply(k, r))
                    for i, c in enumerate(img):
                        m.data[i][j] = c
                blocks[k] = m
            q_maps[name] = GradedMap(q_space, q_space, 0, blocks)

    q_algebra = StructuredAlgebra(
        q_space, algebra.kind, q_diffs,
        StructuredAlgebra.structure_from_triples(triples), q_maps)

    # certificates: projection is a surjective algebra chain map
    ok, witness = True, None
    for lab1, k1 in labels:
        _, v1 = space.basis_vector(lab1)
        q1 = qmap.apply(k1, v1)
        for lab2, k2 in labels:
            if q_space.dim(k1 + k2) == 0 and space.dim(k1 + k2) == 0:
                continue
            _, v2 = space.basis_vector(lab2)
            lhs = qmap.apply(k1 + k2, algebra.mul(k1, v1, k2, v2))
            rhs = q_algebra.mul(k1, q1, k2, qmap.apply(k2, v2))
            if tuple(lhs) != tuple(rhs):
                ok, witness = False, {"pair": [lab1, lab2]}
                break
        if not ok:
            break
    checks.add("projection is an algebra map", ok, witness)
    for name, d in algebra.differentials.items():
        lhs = qmap.compose(d)
        rhs = q_diffs[name].compose(qmap)
        checks.add(f"projection chain map for {name}", lhs == rhs)

    result = QuotientResult(q_algebra, qmap, reps, bidegrees, checks)

    if decomp is not None:
        # the top-weight part of each degree embeds injectively
        injective = True
        for k in space.degrees():
            vecs = decomp.isotypic_vectors(k, k)
            if not vecs:
                continue
            imgs = [qmap.apply(k, v) for v in vecs]
            rank = Subspace.from_vectors(q_space.dim(k), imgs).dim
            if rank != Subspace.from_vectors(space.dim(k), vecs).dim:
                injective = False
        result.embedding_injective = injective
        checks.add("top-weight part embeds", injective)

    if not checks.passed:
        raise InternalCheckError(f"quotient certificates failed: "
                                 f"{checks.failures()[0].name}")
    return result
