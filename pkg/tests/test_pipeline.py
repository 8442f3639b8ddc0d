import pytest

from midconv import PINNED, MulChar, PointOrbit, make_field
from midconv.errors import PointCollision
from midconv.pipeline import (PipelineStep, associativity_probe, constant_sheaf, middle_tensor,
                              run_pipeline, transcript)
from midconv.localdata import kummer_sheaf
from midconv.oracle import ExplicitSheaf


def _legendre_steps(B):
    eps = MulChar.quadratic(B)
    return [PipelineStep.MT(eps, PointOrbit.rational(B, 0)),
            PipelineStep.MT(eps, PointOrbit.rational(B, 1)),
            PipelineStep.MC(eps)]


def test_middle_tensor_of_constant_is_kummer(F7):
    eta = MulChar(F7, 1, 2)
    a = PointOrbit.rational(F7, 3)
    G = middle_tensor(constant_sheaf(F7), eta, a)
    K = kummer_sheaf(F7, [(a, eta)])
    assert G.rank == 1
    assert G.infinity_character() == K.infinity_character()
    for y in (0, 1, 5):
        assert G.stalk_det(y) == K.stalk_det(y)


def test_trivial_tensor_is_identity(F7):
    F = constant_sheaf(F7)
    assert middle_tensor(F, MulChar.trivial(F7), PointOrbit.rational(F7, 0)) is F


def test_legendre_pipeline_with_oracle(F7):
    state = run_pipeline(F7, _legendre_steps(F7), with_oracle=True, samples=[2, 3, 4, 5])
    assert state.sheaf.rank == 2
    assert [e["rank"] for e in state.log] == [1, 1, 2]
    last = state.log[-1]
    assert "oracle_dropped" not in last
    assert len(last["checks"]) == 3


def test_pipeline_through_degree_two_point(F7):
    B = F7
    steps = [PipelineStep.MT(MulChar(B, 1, 2), PointOrbit(B, (1, 0, 1))),
             PipelineStep.MT(MulChar(B, 1, 1), PointOrbit.rational(B, 2)),
             PipelineStep.MC(MulChar(B, 1, 3))]
    state = run_pipeline(B, steps, with_oracle=True, samples=[0, 1, 3])
    assert state.sheaf.rank >= 1
    for entry in state.log:
        for c in entry["checks"]:
            assert c["rank"] == entry["rank"]


def test_transcript_fields(F7):
    steps = _legendre_steps(F7)
    state = run_pipeline(F7, steps)
    tr = transcript(F7, steps, state)
    assert tr["conventions"] == PINNED.to_json()
    assert tr["rigidity_index"] == 2
    assert len(tr["steps"]) == 3


def test_step_validation(F7):
    with pytest.raises(ValueError):
        PipelineStep("XX", MulChar(F7, 1, 1))
    with pytest.raises(ValueError):
        PipelineStep("MT", MulChar(F7, 1, 1))


def test_associativity_probe(F7):
    s0, s1 = PointOrbit.rational(F7, 0), PointOrbit.rational(F7, 6)
    fac = ((s0, MulChar(F7, 1, 3)), (s1, MulChar(F7, 1, 2)))
    F = kummer_sheaf(F7, list(fac))
    rep = associativity_probe(F, MulChar(F7, 1, 1), MulChar(F7, 1, 2),
                              explicit=ExplicitSheaf(F7, fac), ys=[2, 3])
    assert rep["items"]
    assert rep["agree"], rep
