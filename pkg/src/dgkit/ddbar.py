"""Bicomplexes with anticommuting differentials and the strong-lemma engine.

A bicomplex here is a graded space with two square-zero anticommuting
differentials d0, d1.  The strong lemma is the subspace identity

    ker(d0) ∩ ker(d1) ∩ (im(d0) + im(d1)) = im(d0 d1)

per degree; it is equivalent to the two one-sided identities

    b :  ker(d1) ∩ im(d0) = im(d0 d1)
    b*:  ker(d0) ∩ im(d1) = im(d0 d1)

and each of these is in turn equivalent to the acyclicity of the subcomplex
(im(d0), d1) resp. (im(d1), d0) — conditions c and c*, which this module
computes by an independent route and cross-checks.

When the algebra carries a product for which both differentials are
derivations and the strong lemma holds, `formality_zigzag` produces the
explicit zig-zag of algebra quasi-isomorphisms

    (A, d0)  <--inclusion--  (ker d1, d0)  --projection-->  (H_{d1}(A), 0)

with machine-checkable certificates (induced matrices on cohomology are
invertible, products are preserved).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from dgkit.errors import InternalCheckError, PreconditionError
from dgkit.graded import (
    CohomologyPresentation,
    GradedMap,
    GradedSpace,
    StructuredAlgebra,
    ValidationReport,
    cohomology,
    format_vector,
    induced_map_on_cohomology,
)
from dgkit.linalg import (
    Matrix,
    Subspace,
    coordinates_in_basis,
    image_of,
    invert,
    kernel_of,
    vec_is_zero,
)


class Bicomplex:
    """A structured algebra with two named anticommuting differentials."""

    def __init__(self, algebra: StructuredAlgebra, d0_name: str = "d0",
                 d1_name: str = "d1"):
        self.algebra = algebra
        self.d0_name = d0_name
        self.d1_name = d1_name
        self.d0 = algebra.differential(d0_name)
        self.d1 = algebra.differential(d1_name)

    @property
    def space(self) -> GradedSpace:
        return self.algebra.space

    def swapped(self) -> "Bicomplex":
        return Bicomplex(self.algebra, self.d1_name, self.d0_name)

    def validate_structure(self) -> ValidationReport:
        """d0^2 = 0, d1^2 = 0, d0 d1 + d1 d0 = 0, with witness degrees."""
        report = ValidationReport()
        for name, d in ((self.d0_name, self.d0), (self.d1_name, self.d1)):
            sq = d.compose(d)
            bad = next((k for k, m in sq.blocks.items() if not m.is_zero()), None)
            report.add(f"{name}^2 = 0", bad is None,
                       None if bad is None else {"degree": bad})
        anti = self.d0.compose(self.d1).add(self.d1.compose(self.d0))
        bad = next((k for k, m in anti.blocks.items() if not m.is_zero()), None)
        report.add("anticommutation", bad is None,
                   None if bad is None else {"degree": bad})
        return report

    def require_structure(self):
        report = self.validate_structure()
        if not report.passed:
            failing = report.failures()[0]
            raise PreconditionError(
                f"bicomplex invariant failed: {failing.name} at degree "
                f"{(failing.witness or {}).get('degree')}")

    def derivation_report(self) -> ValidationReport:
        """Both differentials are derivations for the product/bracket."""
        report = ValidationReport()
        self.algebra._leibniz_check(report, self.d0, self.d0_name)
        self.algebra._leibniz_check(report, self.d1, self.d1_name)
        return report


@dataclass
class DegreeConditions:
    degree: int
    b: bool
    bstar: bool
    c: bool
    cstar: bool
    strong: bool
    dims: dict

    def to_json(self):
        return {"degree": self.degree, "b": self.b, "bstar": self.bstar,
                "c": self.c, "cstar": self.cstar, "strong": self.strong,
                "dims": self.dims}


@dataclass
class DdbarVerdict:
    """Outcome of the condition checks on a bicomplex.

    `strong_lemma` is the conjunction over degrees of the three-way subspace
    identity; by the equivalence lemma it must equal condition_b and
    condition_bstar jointly, and this agreement is enforced.
    """

    anticommute: bool
    per_degree: list[DegreeConditions] = field(default_factory=list)
    condition_b: bool = True
    condition_bstar: bool = True
    condition_c: bool = True
    condition_cstar: bool = True
    strong_lemma: bool = True
    witnesses: dict = field(default_factory=dict)
    is_ddbar_algebra: Optional[bool] = None

    def to_json(self):
        out = {
            "anticommute": self.anticommute,
            "per_degree": [d.to_json() for d in self.per_degree],
            "condition_b": self.condition_b,
            "condition_bstar": self.condition_bstar,
            "condition_c": self.condition_c,
            "condition_cstar": self.condition_cstar,
            "strong_lemma": self.strong_lemma,
            "witnesses": self.witnesses,
        }
        if self.is_ddbar_algebra is not None:
            out["is_ddbar_algebra"] = self.is_ddbar_algebra
        return out


class _DegreeData:
    """Kernels/images of both differentials per degree, computed once."""

    def __init__(self, b: Bicomplex):
        self.bicomplex = b
        space = b.space
        d0, d1 = b.d0, b.d1
        d0d1 = d0.compose(d1)
        self.ker0, self.ker1 = {}, {}
        self.im0, self.im1, self.im01 = {}, {}, {}
        for k in space.degrees():
            self.ker0[k] = kernel_of(d0.block(k))
            self.ker1[k] = kernel_of(d1.block(k))
            self.im0[k] = image_of(d0.block(k - 1))
            self.im1[k] = image_of(d1.block(k - 1))
            self.im01[k] = image_of(d0d1.block(k - 2))


def _restricted_complex_acyclic(b: Bicomplex, im_of: GradedMap, d_rest: GradedMap):
    """Cohomology dims of (im(first map), second map restricted).

    Returns {degree: dim}; the subcomplex is acyclic iff all dims vanish.
    Independent of the subspace-identity route: works in the coordinates of
    the image bases.
    """
    space = b.space
    bases = {k: image_of(im_of.block(k - 1)).vectors() for k in space.degrees()}
    mats = {}
    for k in space.degrees():
        basis = bases.get(k, [])
        if not basis:
            continue
        imgs = [d_rest.apply(k, v) for v in basis]
        target = bases.get(k + 1, [])
        if not target:
            if any(not vec_is_zero(v) for v in imgs):
                raise InternalCheckError(
                    "restricted differential leaves the image subcomplex")
            mats[k] = Matrix(0, len(basis))
            continue
        coords = coordinates_in_basis(target, imgs)
        if coords is None:
            raise InternalCheckError(
                "restricted differential leaves the image subcomplex")
        m = Matrix(len(target), len(basis))
        for j, cvec in enumerate(coords):
            for i, c in enumerate(cvec):
                m.data[i][j] = c
        mats[k] = m
    dims = {}
    for k in space.degrees():
        basis = bases.get(k, [])
        if not basis:
            continue
        mk = mats.get(k, Matrix(0, len(basis)))
        rank_in = mats[k - 1].rank() if (k - 1) in mats else 0
        dims[k] = (len(basis) - mk.rank()) - rank_in
    return dims


def _first_missing_vector(lhs: Subspace, rhs: Subspace):
    for v in lhs.vectors():
        if not rhs.contains(v):
            return v
    return None


def ddbar_condition_check(b: Bicomplex) -> DdbarVerdict:
    """Evaluate the one-sided conditions b, b* per degree, plus their
    cohomological reformulations c, c*; the two routes must agree."""
    b.require_structure()
    data = _DegreeData(b)
    c_dims = _restricted_complex_acyclic(b, b.d0, b.d1)
    cstar_dims = _restricted_complex_acyclic(b, b.d1, b.d0)
    verdict = DdbarVerdict(anticommute=True)
    for k in b.space.degrees():
        lhs_b = data.ker1[k].intersect(data.im0[k])
        lhs_bstar = data.ker0[k].intersect(data.im1[k])
        rhs = data.im01[k]
        if not lhs_b.contains_subspace(rhs) or not lhs_bstar.contains_subspace(rhs):
            raise InternalCheckError("im(d0 d1) escapes a one-sided left side")
        ok_b = lhs_b == rhs
        ok_bstar = lhs_bstar == rhs
        # condition c at degree k: H^k of (im d0, d1) = 0; likewise c*
        ok_c = c_dims.get(k, 0) == 0
        ok_cstar = cstar_dims.get(k, 0) == 0
        if ok_b != ok_c or ok_bstar != ok_cstar:
            raise InternalCheckError(
                f"subspace and subcomplex routes disagree at degree {k}")
        strong_lhs = data.ker0[k].intersect(data.ker1[k]).intersect(
            data.im0[k].add(data.im1[k]))
        ok_strong = strong_lhs == rhs
        verdict.per_degree.append(DegreeConditions(
            k, ok_b, ok_bstar, ok_c, ok_cstar, ok_strong,
            {"ker_d0": data.ker0[k].dim, "ker_d1": data.ker1[k].dim,
             "im_d0": data.im0[k].dim, "im_d1": data.im1[k].dim,
             "im_d0d1": rhs.dim}))
        if not ok_b and "b" not in verdict.witnesses:
            w = _first_missing_vector(lhs_b, rhs)
            verdict.witnesses["b"] = {"degree": k,
                                      "vector": format_vector(b.space, k, w)}
        if not ok_bstar and "bstar" not in verdict.witnesses:
            w = _first_missing_vector(lhs_bstar, rhs)
            verdict.witnesses["bstar"] = {"degree": k,
                                          "vector": format_vector(b.space, k, w)}
        if not ok_strong and "strong" not in verdict.witnesses:
            w = _first_missing_vector(strong_lhs, rhs)
            verdict.witnesses["strong"] = {"degree": k,
                                           "vector": format_vector(b.space, k, w)}
    verdict.condition_b = all(d.b for d in verdict.per_degree)
    verdict.condition_bstar = all(d.bstar for d in verdict.per_degree)
    verdict.condition_c = all(d.c for d in verdict.per_degree)
    verdict.condition_cstar = all(d.cstar for d in verdict.per_degree)
    verdict.strong_lemma = all(d.strong for d in verdict.per_degree)
    return verdict


def strong_lemma_check(b: Bicomplex) -> DdbarVerdict:
    """Full verdict; enforces strong = b ∧ b* degreewise (the equivalence)."""
    verdict = ddbar_condition_check(b)
    for row in verdict.per_degree:
        if row.strong != (row.b and row.bstar):
            raise InternalCheckError(
                f"strong lemma disagrees with b ∧ b* at degree {row.degree}")
    return verdict


def is_ddbar_algebra(b: Bicomplex) -> DdbarVerdict:
    """strong_lemma_check plus derivation checks for both differentials."""
    verdict = strong_lemma_check(b)
    deriv = b.derivation_report()
    verdict.is_ddbar_algebra = verdict.strong_lemma and deriv.passed
    if not deriv.passed:
        verdict.witnesses["derivation"] = deriv.failures()[0].to_json()
    return verdict


# ---------------------------------------------------------------------------
# induced differentials on cohomology


@dataclass
class InducedDifferentialReport:
    d0_on_h_d1_zero: bool
    d1_on_h_d0_zero: bool
    condition_b_holds: bool
    condition_bstar_holds: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "d0_on_h_d1_zero": self.d0_on_h_d1_zero,
            "d1_on_h_d0_zero": self.d1_on_h_d0_zero,
            "condition_b_holds": self.condition_b_holds,
            "condition_bstar_holds": self.condition_bstar_holds,
            "witnesses": self.witnesses,
        }


def induced_differential_triviality(b: Bicomplex) -> InducedDifferentialReport:
    """The map induced by each differential on the other's cohomology.

    One-sided condition b forces the map induced by d0 on H_{d1} to vanish
    (and b* symmetrically); the report also records the computed maps on
    models where the condition fails, naming the failed condition.
    """
    b.require_structure()
    conditions = ddbar_condition_check(b)
    h1 = cohomology(b.algebra, b.d1_name)
    h0 = cohomology(b.algebra, b.d0_name)
    witnesses = {}

    def induced_is_zero(h: CohomologyPresentation, d: GradedMap, key: str) -> bool:
        for k, reps in h.reps.items():
            for i, r in enumerate(reps):
                img = d.apply(k, r)
                cls = h.project(k + 1, img)
                if not vec_is_zero(cls):
                    witnesses[key] = {"degree": k, "class_index": i,
                                      "image_class": [str(c) for c in cls]}
                    return False
        return True

    ok0 = induced_is_zero(h1, b.d0, "d0_on_h_d1")
    ok1 = induced_is_zero(h0, b.d1, "d1_on_h_d0")
    report = InducedDifferentialReport(
        ok0, ok1, conditions.condition_b, conditions.condition_bstar, witnesses)
    if conditions.condition_b and not ok0:
        raise InternalCheckError("condition b holds but induced d0 is nonzero")
    if conditions.condition_bstar and not ok1:
        raise InternalCheckError("condition b* holds but induced d1 is nonzero")
    return report


# ---------------------------------------------------------------------------
# formality


@dataclass
class QuasiIsoCertificate:
    dims_source: dict
    dims_target: dict
    matrices: dict  # degree -> Matrix
    invertible: bool

    def to_json(self):
        return {"dims_source": {str(k): v for k, v in self.dims_source.items()},
                "dims_target": {str(k): v for k, v in self.dims_target.items()},
                "invertible": self.invertible}


@dataclass
class FormalityZigzag:
    """(A, d0) <- (A1 = ker d1, d0) -> (H_{d1}(A), 0) with certificates."""

    bicomplex: Bicomplex
    a1_algebra: StructuredAlgebra
    h_algebra: StructuredAlgebra
    inclusion: GradedMap
    projection: GradedMap
    h_d0: CohomologyPresentation
    h_d0_a1: CohomologyPresentation
    h_d1: CohomologyPresentation
    iota_certificate: QuasiIsoCertificate = None
    rho_certificate: QuasiIsoCertificate = None
    morphism_checks: ValidationReport = None
    product_preserved: bool = True

    @property
    def certified(self) -> bool:
        return (self.iota_certificate.invertible and self.rho_certificate.invertible
                and self.morphism_checks.passed and self.product_preserved)

    def to_json(self):
        return {
            "h_d0_dims": {str(k): v for k, v in self.h_d0.dims().items()},
            "h_d0_a1_dims": {str(k): v for k, v in self.h_d0_a1.dims().items()},
            "h_d1_dims": {str(k): v for k, v in self.h_d1.dims().items()},
            "iota": self.iota_certificate.to_json(),
            "rho": self.rho_certificate.to_json(),
            "morphisms": self.morphism_checks.to_json(),
            "product_preserved_on_cohomology": self.product_preserved,
            "certified": self.certified,
        }


def _algebra_map_check(report: ValidationReport, name: str,
                       f: GradedMap, src: StructuredAlgebra, tgt: StructuredAlgebra):
    """f(x*y) = f(x)*f(y) on all basis pairs of the source."""
    ok, witness = True, None
    labels = [(l, src.space.degree_of(l)) for l in src.space.all_labels()]
    for l1, k1 in labels:
        _, v1 = src.space.basis_vector(l1)
        f1 = f.apply(k1, v1)
        for l2, k2 in labels:
            _, v2 = src.space.basis_vector(l2)
            prod = src.mul(k1, v1, k2, v2)
            lhs = f.apply(k1 + k2, prod)
            rhs = tgt.mul(k1, f1, k2, f.apply(k2, v2))
            if lhs != rhs:
                ok, witness = False, {"pair": [l1, l2]}
                break
        if not ok:
            break
    report.add(name, ok, witness)


def _chain_map_check(report: ValidationReport, name: str, f: GradedMap,
                     d_src: GradedMap, d_tgt: GradedMap):
    lhs = f.compose(d_src)
    rhs = d_tgt.compose(f)
    diff = lhs.add(rhs.neg())
    bad = next((k for k, m in diff.blocks.items() if not m.is_zero()), None)
    report.add(name, bad is None, None if bad is None else {"degree": bad})


def _quasi_iso_certificate(mats: dict, src: CohomologyPresentation,
                           tgt: CohomologyPresentation) -> QuasiIsoCertificate:
    dims_s, dims_t = src.dims(), tgt.dims()
    invertible = set(dims_s) == set(dims_t) and all(
        dims_s[k] == dims_t[k] for k in dims_s)
    if invertible:
        for k, n in dims_s.items():
            m = mats.get(k, Matrix(dims_t.get(k, 0), n))
            if m.rows != m.cols or invert(m) is None:
                invertible = False
                break
    return QuasiIsoCertificate(dims_s, dims_t, mats, invertible)


def _induced_algebra_map_ok(mats: dict, src_h: CohomologyPresentation,
                            tgt_h: CohomologyPresentation) -> bool:
    """The cohomology-level map is itself an algebra morphism."""
    src_alg = src_h.as_algebra()
    tgt_alg = tgt_h.as_algebra()
    for k1 in src_alg.space.degrees():
        for k2 in src_alg.space.degrees():
            k = k1 + k2
            m1 = mats.get(k1)
            m2 = mats.get(k2)
            mk = mats.get(k)
            for i in range(src_alg.space.dim(k1)):
                for j in range(src_alg.space.dim(k2)):
                    _, vi = src_alg.space.basis_vector(src_alg.space.labels(k1)[i])
                    _, vj = src_alg.space.basis_vector(src_alg.space.labels(k2)[j])
                    prod = src_alg.mul(k1, vi, k2, vj)
                    lhs = mk.apply(prod) if mk is not None else tuple()
                    fi = m1.column(i) if m1 is not None else tuple()
                    fj = m2.column(j) if m2 is not None else tuple()
                    rhs = tgt_alg.mul(k1, fi, k2, fj)
                    if tuple(lhs) != tuple(rhs):
                        return False
    return True


def formality_zigzag(b: Bicomplex) -> FormalityZigzag:
    """Build and certify the formality zig-zag of a strong-lemma algebra.

    Raises PreconditionError naming the failing axiom when the input is not
    a strong-lemma algebra with derivation differentials; raises
    InternalCheckError if a certificate fails on certified input (that would
    contradict the formality theorem, so it is treated as a self-test).
    """
    verdict = is_ddbar_algebra(b)
    if not verdict.strong_lemma:
        raise PreconditionError("formality requires the strong lemma; "
                                f"witness: {verdict.witnesses}")
    deriv = b.derivation_report()
    if not deriv.passed:
        raise PreconditionError(
            f"formality requires derivation differentials: {deriv.failures()[0].name}")

    alg = b.algebra
    space = alg.space
    d0, d1 = b.d0, b.d1

    # A1 = ker(d1) as a sub-structured-algebra
    ker_bases = {k: kernel_of(d1.block(k)).vectors() for k in space.degrees()}
    a1_space = GradedSpace({k: [f"k{k}_{i}" for i in range(len(v))]
                            for k, v in ker_bases.items() if v})

    d0_blocks = {}
    for k, basis in ker_bases.items():
        if not basis:
            continue
        imgs = [d0.apply(k, v) for v in basis]
        target = ker_bases.get(k + 1, [])
        if not target:
            if any(not vec_is_zero(v) for v in imgs):
                raise InternalCheckError("d0 does not preserve ker(d1)")
            continue
        coords = coordinates_in_basis(target, imgs)
        if coords is None:
            raise InternalCheckError("d0 does not preserve ker(d1)")
        m = Matrix(len(target), len(basis))
        for j, cv in enumerate(coords):
            for i, c in enumerate(cv):
                m.data[i][j] = c
        d0_blocks[k] = m

    triples = []
    for k1, basis1 in ker_bases.items():
        for k2, basis2 in ker_bases.items():
            if not basis1 or not basis2:
                continue
            k = k1 + k2
            target = ker_bases.get(k, [])
            prods = [alg.mul(k1, v1, k2, v2) for v1 in basis1 for v2 in basis2]
            if not target:
                if any(not vec_is_zero(p) for p in prods):
                    raise InternalCheckError("ker(d1) is not closed under the product")
                continue
            coords = coordinates_in_basis(target, prods)
            if coords is None:
                raise InternalCheckError("ker(d1) is not closed under the product")
            idx = 0
            for i in range(len(basis1)):
                for j in range(len(basis2)):
                    for t, c in enumerate(coords[idx]):
                        if not c.is_zero():
                            triples.append((f"k{k1}_{i}", f"k{k2}_{j}", f"k{k}_{t}", c))
                    idx += 1

    a1 = StructuredAlgebra(
        a1_space, alg.kind,
        {b.d0_name: GradedMap(a1_space, a1_space, 1, d0_blocks)},
        StructuredAlgebra.structure_from_triples(triples))

    inclusion = GradedMap(a1_space, space, 0, {
        k: Matrix(space.dim(k), len(basis),
                  [[basis[j][i] for j in range(len(basis))] for i in range(space.dim(k))])
        for k, basis in ker_bases.items() if basis
    })

    h_d1 = cohomology(alg, b.d1_name)
    h_alg = StructuredAlgebra(
        h_d1.h_space, alg.kind,
        {b.d0_name: GradedMap.zero(h_d1.h_space, h_d1.h_space, 1)},
        h_d1.induced_structure())

    proj_blocks = {}
    for k, basis in ker_bases.items():
        if not basis:
            continue
        classes = h_d1.project_many(k, list(basis))
        h_dim = h_d1.dim(k)
        if h_dim == 0:
            continue
        m = Matrix(h_dim, len(basis))
        for j, cls in enumerate(classes):
            for i, c in enumerate(cls):
                m.data[i][j] = c
        proj_blocks[k] = m
    projection = GradedMap(a1_space, h_d1.h_space, 0, proj_blocks)

    checks = ValidationReport()
    _algebra_map_check(checks, "inclusion preserves product", inclusion, a1, alg)
    _algebra_map_check(checks, "projection preserves product", projection, a1, h_alg)
    _chain_map_check(checks, "inclusion chain map", inclusion,
                     a1.differential(b.d0_name), d0)
    _chain_map_check(checks, "projection chain map", projection,
                     a1.differential(b.d0_name),
                     h_alg.differential(b.d0_name))

    h_d0 = cohomology(alg, b.d0_name)
    h_d0_a1 = cohomology(a1, b.d0_name)
    h_h = cohomology(h_alg, b.d0_name)

    iota_mats = induced_map_on_cohomology(inclusion, h_d0_a1, h_d0)
    rho_mats = induced_map_on_cohomology(projection, h_d0_a1, h_h)
    iota_cert = _quasi_iso_certificate(iota_mats, h_d0_a1, h_d0)
    rho_cert = _quasi_iso_certificate(rho_mats, h_d0_a1, h_h)

    product_ok = (_induced_algebra_map_ok(iota_mats, h_d0_a1, h_d0)
                  and _induced_algebra_map_ok(rho_mats, h_d0_a1, h_h))

    zigzag = FormalityZigzag(b, a1, h_alg, inclusion, projection,
                             h_d0, h_d0_a1, h_d1,
                             iota_cert, rho_cert, checks, product_ok)
    if not zigzag.certified:
        raise InternalCheckError(
            "formality certificate failed on strong-lemma input: "
            f"{zigzag.to_json()}")
    return zigzag


# ---------------------------------------------------------------------------
# derived constructions


def sum_twist(b: Bicomplex) -> Bicomplex:
    """(d0, d1) -> (d0 + d1, d1); the result is again a strong-lemma bicomplex.

    The twisted pair's strong lemma is asserted (it is a theorem for
    strong-lemma inputs, so failure raises InternalCheckError).
    """
    verdict = is_ddbar_algebra(b)
    if not (verdict.strong_lemma and verdict.is_ddbar_algebra):
        raise PreconditionError("sum_twist requires a strong-lemma algebra "
                                "with derivation differentials")
    total_name = f"{b.d0_name}_plus_{b.d1_name}"
    total = b.d0.add(b.d1)
    new_diffs = dict(b.algebra.differentials)
    new_diffs[total_name] = total
    twisted = Bicomplex(b.algebra.with_differentials(new_diffs),
                        total_name, b.d1_name)
    check = strong_lemma_check(twisted)
    if not check.strong_lemma:
        raise InternalCheckError("sum twist lost the strong lemma")
    return twisted


@dataclass
class SameCohomologyReport:
    dims_equal: bool
    dims_d0: dict
    dims_d1: dict
    product_tables_agree: bool

    def to_json(self):
        return {"dims_equal": self.dims_equal,
                "dims_d0": {str(k): v for k, v in self.dims_d0.items()},
                "dims_d1": {str(k): v for k, v in self.dims_d1.items()},
                "product_tables_agree": self.product_tables_agree}


def same_cohomology_check(b: Bicomplex) -> SameCohomologyReport:
    """dim H_{d0} = dim H_{d1} degreewise and the zig-zag identification
    preserves the induced product."""
    zig = formality_zigzag(b)
    dims0 = zig.h_d0.dims()
    dims1 = zig.h_d1.dims()
    dims_equal = dims0 == dims1
    # transport H_{d0}(A) -> H_{d0}(A1) -> H_{d1}(A) through the certificates
    transport = {}
    for k in dims0:
        inv = invert(zig.iota_certificate.matrices[k])
        if inv is None:
            return SameCohomologyReport(dims_equal, dims0, dims1, False)
        transport[k] = zig.rho_certificate.matrices[k] * inv
    product_ok = _induced_algebra_map_ok(transport, zig.h_d0, zig.h_d1)
    return SameCohomologyReport(dims_equal, dims0, dims1, product_ok)


@dataclass
class HomotopyAbelianVerdict:
    formal: Optional[bool]
    induced_bracket_trivial: Optional[bool]
    homotopy_abelian: Optional[bool]
    note: str = ""

    def to_json(self):
        return {"formal": self.formal,
                "induced_bracket_trivial": self.induced_bracket_trivial,
                "homotopy_abelian": self.homotopy_abelian,
                "note": self.note}


def homotopy_abelian_verdict(l: StructuredAlgebra, d_name: str,
                             certificate: Optional[FormalityZigzag]) -> HomotopyAbelianVerdict:
    """Homotopy abelian = formal (certified) + trivial bracket on cohomology."""
    if l.kind != "lie":
        raise PreconditionError("homotopy_abelian_verdict expects a DGLA")
    if certificate is None:
        return HomotopyAbelianVerdict(None, None, None,
                                      "unknown: formality not established")
    h = cohomology(l, d_name)
    bracket_trivial = not h.induced_structure()
    formal = certificate.certified
    return HomotopyAbelianVerdict(formal, bracket_trivial,
                                  formal and bracket_trivial)
