import pytest

from dgkit.ddbar import (
    Bicomplex,
    ddbar_condition_check,
    formality_zigzag,
    homotopy_abelian_verdict,
    induced_differential_triviality,
    same_cohomology_check,
    strong_lemma_check,
    sum_twist,
)
from dgkit.errors import PreconditionError
from dgkit.graded import GradedMap, GradedSpace, StructuredAlgebra
from dgkit.models import dots_squares_model, end_tensor, zigzag_model
from dgkit.scalars import ONE



def zero_pair(space_dict, kind="associative", structure=None):
    space = GradedSpace(space_dict)
    zero = GradedMap.zero(space, space, 1)
    alg = StructuredAlgebra(space, kind, {"d0": zero, "d1": zero}, structure or {})
    return Bicomplex(alg, "d0", "d1")


def test_zero_differentials_all_conditions_pass():
    b = zero_pair({0: ["x"], 1: ["y", "z"]})
    v = strong_lemma_check(b)
    assert v.strong_lemma and v.condition_b and v.condition_bstar
    assert v.condition_c and v.condition_cstar


def test_square_model_passes_b_and_bstar(square):
    v = ddbar_condition_check(Bicomplex(square, "d0", "d1"))
    assert v.condition_b and v.condition_bstar and v.strong_lemma


def test_zigzag_fails_with_witness():
    v = strong_lemma_check(zigzag_model(0))
    assert not v.strong_lemma and not v.condition_b
    # the witness is the middle vector of the zigzag
    assert v.witnesses["b"]["vector"][0][0] == "z0b"


def test_conditions_agree_with_subcomplex_route():
    for seed in range(5):
        b = dots_squares_model({0: 1, 1: 2}, [0, 1], seed=seed)
        v = ddbar_condition_check(b)
        for row in v.per_degree:
            assert row.b == row.c and row.bstar == row.cstar


def test_strong_equals_b_and_bstar_on_mixed_models():
    for seed in range(5):
        b = dots_squares_model({0: 1}, [0], [1], seed=seed)
        v = strong_lemma_check(b)
        assert v.strong_lemma == (v.condition_b and v.condition_bstar)


def test_swapping_differentials_preserves_the_lemma():
    b = dots_squares_model({0: 2, 2: 1}, [0, 0, 1], seed=9)
    assert strong_lemma_check(b).strong_lemma
    assert strong_lemma_check(b.swapped()).strong_lemma


def test_invariant_failure_rejected():
    space = GradedSpace({0: ["x"], 1: ["y"], 2: ["z"]})
    d0 = GradedMap.from_entries(space, space, 1, [("x", "y", ONE), ("y", "z", ONE)])
    d1 = GradedMap.zero(space, space, 1)
    alg = StructuredAlgebra(space, "associative", {"d0": d0, "d1": d1}, {})
    with pytest.raises(PreconditionError):
        strong_lemma_check(Bicomplex(alg, "d0", "d1"))


# -- induced differentials ----------------------------------------------------


def test_induced_differentials_vanish_on_strong_models(square):
    rep = induced_differential_triviality(Bicomplex(square, "d0", "d1"))
    assert rep.d0_on_h_d1_zero and rep.d1_on_h_d0_zero


def test_zero_differentials_induce_zero():
    rep = induced_differential_triviality(zero_pair({0: ["x"], 1: ["y"]}))
    assert rep.d0_on_h_d1_zero and rep.d1_on_h_d0_zero


def test_zigzag_induced_map_detected_nonzero():
    rep = induced_differential_triviality(zigzag_model(0))
    assert not rep.condition_b_holds and not rep.d0_on_h_d1_zero
    assert rep.d1_on_h_d0_zero  # b* holds for the zigzag


# -- formality ----------------------------------------------------------------


def test_formality_zero_differentials_identity_zigzag(exterior2):
    space = exterior2.space
    zero = GradedMap.zero(space, space, 1)
    alg = StructuredAlgebra(space, "associative", {"d0": zero, "d1": zero},
                            exterior2.structure)
    zig = formality_zigzag(Bicomplex(alg, "d0", "d1"))
    assert zig.certified
    assert zig.h_d0.dims() == {0: 1, 1: 2, 2: 1}
    # ker(d1) is everything, so the zig-zag collapses to identities
    assert zig.a1_algebra.space.total_dim() == space.total_dim()


def test_formality_dots_squares_dims_are_dot_counts():
    b = dots_squares_model({0: 2, 1: 3}, [0, 1], seed=2)
    zig = formality_zigzag(b)
    # unit + dots survive in cohomology; squares are acyclic for both
    expected = {0: 3, 1: 3}
    assert zig.h_d0.dims() == expected
    assert zig.h_d0_a1.dims() == expected
    assert zig.h_d1.dims() == expected


def test_formality_end_tensor_r2():
    b = end_tensor(dots_squares_model({0: 1, 1: 1}, [0], seed=5), 2)
    zig = formality_zigzag(b)
    assert zig.certified
    assert all(m.passed for m in zig.morphism_checks.checks)


def test_formality_requires_the_strong_lemma():
    with pytest.raises(PreconditionError):
        formality_zigzag(zigzag_model(0))


def test_same_cohomology_and_product_transport():
    b = dots_squares_model({0: 2, 1: 1, 2: 2}, [0], seed=3)
    rep = same_cohomology_check(b)
    assert rep.dims_equal and rep.product_tables_agree


def test_sum_twist_stays_strong():
    b = dots_squares_model({0: 1, 1: 1}, [0, 1], seed=7)
    twisted = sum_twist(b)
    assert strong_lemma_check(twisted).strong_lemma
    assert twisted.d0 == b.d0.add(b.d1)


def test_sum_twist_rejects_non_strong_input():
    with pytest.raises(PreconditionError):
        sum_twist(zigzag_model(1))


# -- homotopy abelian ---------------------------------------------------------


def test_gl2_formal_but_not_homotopy_abelian(gl2):
    lie = gl2.commutator_dgla()
    space = lie.space
    zero = GradedMap.zero(space, space, 1)
    pair = StructuredAlgebra(space, "lie", {"d0": zero, "d1": zero}, lie.structure)
    cert = formality_zigzag(Bicomplex(pair, "d0", "d1"))
    verdict = homotopy_abelian_verdict(lie, "d", cert)
    assert verdict.formal is True
    assert verdict.induced_bracket_trivial is False
    assert verdict.homotopy_abelian is False


def test_dots_only_abelian_model_is_homotopy_abelian():
    b = dots_squares_model({0: 2, 1: 2}, [], seed=0, unit=False)
    lie = b.algebra.commutator_dgla()
    cert = formality_zigzag(Bicomplex(lie, "d0", "d1"))
    verdict = homotopy_abelian_verdict(lie, "d0", cert)
    assert verdict.homotopy_abelian is True


def test_missing_certificate_gives_unknown(gl2):
    lie = gl2.commutator_dgla()
    verdict = homotopy_abelian_verdict(lie, "d", None)
    assert verdict.homotopy_abelian is None
    assert "unknown" in verdict.note
