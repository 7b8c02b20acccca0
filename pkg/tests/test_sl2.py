import pytest

from dgkit.errors import ModelError
from dgkit.graded import GradedMap, GradedSpace, StructuredAlgebra
from dgkit.linalg import Subspace
from dgkit.models import torus_model
from dgkit.scalars import ONE, Scalar
from dgkit.sl2 import (
    Sl2Module,
    integer_spectrum,
    low_weight_ideal,
    plus_quotient,
    weight_decomposition,
)
from dgkit.linalg import Matrix


def sl2_on(space, e_entries, f_entries, h_entries):
    return Sl2Module(
        space,
        GradedMap.from_entries(space, space, 0, e_entries),
        GradedMap.from_entries(space, space, 0, f_entries),
        GradedMap.from_entries(space, space, 0, h_entries),
    )


def test_defining_representation_weight_one():
    # V: e(v-) = v+, f(v+) = v-, h = diag(1, -1)
    space = GradedSpace({0: ["vp", "vm"]})
    mod = sl2_on(space,
                 [("vm", "vp", ONE)],
                 [("vp", "vm", ONE)],
                 [("vp", "vp", ONE), ("vm", "vm", Scalar(-1))])
    decomp = weight_decomposition(mod)
    assert decomp.weights(0) == [1]
    assert decomp.multiplicity(0, 1) == 1


def test_tensor_square_clebsch_gordan():
    # V (x) V = weight 2 + weight 0: 4 = 3 + 1
    labels = ["pp", "pm", "mp", "mm"]
    space = GradedSpace({0: labels})
    # h eigenvalues 2, 0, 0, -2; e, f act on each tensor slot
    e = [("pm", "pp", ONE), ("mp", "pp", ONE), ("mm", "pm", ONE), ("mm", "mp", ONE)]
    f = [("pp", "mp", ONE), ("pp", "pm", ONE), ("pm", "mm", ONE), ("mp", "mm", ONE)]
    h = [("pp", "pp", Scalar(2)), ("mm", "mm", Scalar(-2))]
    decomp = weight_decomposition(sl2_on(space, e, f, h))
    assert decomp.weights(0) == [0, 2]
    assert decomp.multiplicity(0, 2) == 1
    assert decomp.multiplicity(0, 0) == 1


def test_trivial_action_all_weight_zero():
    space = GradedSpace({0: ["a", "b", "c"]})
    zero = GradedMap.zero(space, space, 0)
    decomp = weight_decomposition(Sl2Module(space, zero, zero, zero))
    assert decomp.weights(0) == [0]
    assert decomp.multiplicity(0, 0) == 3


def test_sl2_relations_enforced():
    space = GradedSpace({0: ["x", "y"]})
    bad = sl2_on(space, [("y", "x", ONE)], [("x", "y", ONE)], [])  # h = 0
    with pytest.raises(ModelError):
        weight_decomposition(bad)


def test_non_integral_spectrum_rejected():
    m = Matrix.from_rows([[Scalar(1) / Scalar(2)]])
    with pytest.raises(ModelError):
        integer_spectrum(m)


def test_torus_weights_match_form_types():
    full = torus_model(1).full_model
    decomp = weight_decomposition(Sl2Module.from_algebra(full))
    assert decomp.weights(0) == [0]
    assert decomp.multiplicity(1, 1) == 2
    assert decomp.multiplicity(2, 0) == 3
    assert decomp.multiplicity(2, 2) == 1
    assert decomp.multiplicity(3, 1) == 2
    assert decomp.multiplicity(4, 0) == 1


def test_torus_ideal_and_quotient_dims():
    model = torus_model(1)
    full = model.full_model
    decomp = weight_decomposition(Sl2Module.from_algebra(full))
    ideal = low_weight_ideal(full, decomp)
    # the invariant 2-forms generate; degrees 3 and 4 fall in after closure
    assert {k: s.dim for k, s in ideal.items()} == {0: 0, 1: 0, 2: 3, 3: 4, 4: 1}
    quotient = plus_quotient(full, ideal, decomp)
    assert quotient.dims() == {0: 1, 1: 4, 2: 3}
    d = model.dolbeault.space
    expected = {}
    for k in d.degrees():
        for p in range(0, k + 1):
            expected[(p, k - p)] = d.dim(k)
    assert quotient.bigraded_dims() == expected
    assert quotient.embedding_injective


def test_zero_ideal_quotient_is_the_algebra():
    full = torus_model(1).full_model
    decomp = weight_decomposition(Sl2Module.from_algebra(full))
    zero_ideal = {k: Subspace.zero(full.space.dim(k)) for k in full.space.degrees()}
    quotient = plus_quotient(full, zero_ideal, decomp)
    assert quotient.dims() == {k: full.space.dim(k) for k in full.space.degrees()}


def test_everything_positive_degree_ideal():
    full = torus_model(1).full_model
    ideal = {k: (Subspace.full(full.space.dim(k)) if k >= 1
                 else Subspace.zero(full.space.dim(k)))
             for k in full.space.degrees()}
    quotient = plus_quotient(full, ideal)
    assert quotient.dims() == {0: 1}


def test_differential_unstable_ideal_rejected():
    # a model with d(x) = y where x generates the ideal but y is not in it
    space = GradedSpace({0: ["u"], 1: ["x"], 2: ["y"]})
    d = GradedMap.from_entries(space, space, 1, [("x", "y", ONE)])
    alg = StructuredAlgebra(space, "associative", {"d": d}, {})
    ideal = {0: Subspace.zero(1), 1: Subspace.full(1), 2: Subspace.zero(1)}
    with pytest.raises(ModelError):
        plus_quotient(alg, ideal)


def test_idempotent_restriction_of_decomposition():
    # restricting to one isotypic component returns a single weight
    full = torus_model(1).full_model
    decomp = weight_decomposition(Sl2Module.from_algebra(full))
    sub = decomp.isotypic_subspace(2, 2)
    assert sub.dim == 3  # weight-2 irrep is 3-dimensional
