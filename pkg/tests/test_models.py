import json

import numpy as np
import pytest
from hypothesis import given

from jbstar.algebra import involution, is_unitary
from jbstar.errors import InvalidDescriptor, ModelMismatch, StructureViolation
from jbstar.models import (
    ModelDescriptor as D,
    build_model,
    distance,
    dumps,
    element_from_json,
    element_to_json,
    loads,
    random_element,
    random_selfadjoint,
    random_unitary,
)

from conftest import ALL_MODELS, model_id, seeds


@pytest.mark.parametrize("bad", [
    {"kind": "full_matrix", "n": 0},
    {"kind": "full_matrix", "n": 2.5},
    {"kind": "symmetric_matrix"},
    {"kind": "octonion", "n": 3},
    {"kind": "circle_function", "N": 7, "fiber": {"kind": "full_matrix", "n": 1}},
    {"kind": "circle_function", "N": 4, "fiber": {"kind": "full_matrix", "n": 1}},
    {"kind": "circle_function", "fiber": {"kind": "circle_function", "fiber": {"kind": "full_matrix", "n": 1}}},
    {"kind": "direct_sum", "parts": []},
    {"kind": "full_matrix", "n": 2, "colour": "red"},
])
def test_invalid_descriptors(bad):
    with pytest.raises(InvalidDescriptor):
        build_model(bad)


@pytest.mark.parametrize("desc", ALL_MODELS, ids=model_id)
def test_descriptor_json_round_trip(desc):
    d = desc.to_dict()
    assert D.from_dict(json.loads(json.dumps(d))) == desc
    assert build_model(json.dumps(d)).descriptor == desc


def test_default_grid_and_dims():
    m = build_model(D.circle(D.symmetric(2)))
    assert m.grid_size == 256 and m.n == 2
    assert m.fiber_dim == 3 and m.complex_dim == 3 * 256
    s = build_model(D.direct_sum(D.full(2), D.symmetric(3)))
    assert s.n == 5 and s.complex_dim == 4 + 6 and s.real_dim == 20


def test_symmetric_element_rejects_asymmetric_data():
    m = build_model(D.symmetric(2))
    with pytest.raises(StructureViolation):
        m.element(np.array([[1, 2], [0, 1]]))
    x = m.element(np.array([[1, 2], [2 + 1e-13, 1]]))
    assert np.array_equal(x.data[0], x.data[0].T)


def test_direct_sum_rejects_off_block_entries():
    m = build_model(D.direct_sum(D.full(1), D.full(1)))
    with pytest.raises(StructureViolation):
        m.element(np.array([[1, 1], [0, 1]]))


def test_direct_sum_norm_is_max_of_blocks():
    m = build_model(D.direct_sum(D.full(2), D.symmetric(2)))
    x = m.element(np.diag([3.0, 0.5, -1.0, 2.0]))
    assert x.norm() == pytest.approx(3.0)
    y = m.element(np.diag([0.2, 0.5, -1.0, 2.0]))
    assert y.norm() == pytest.approx(2.0)


def test_circle_norm_is_sup_over_grid():
    m = build_model(D.circle(D.full(1), 16))
    x = m.from_function(lambda z: 1 + z)
    assert x.norm() == pytest.approx(2.0)


def test_mixing_models_raises():
    a = build_model(D.full(2)).one()
    b = build_model(D.symmetric(2)).one()
    with pytest.raises(ModelMismatch):
        distance(a, b)


@pytest.mark.parametrize("desc", ALL_MODELS, ids=model_id)
@given(seed=seeds)
def test_coordinates_round_trip(desc, seed):
    m = build_model(desc)
    x = random_element(m, seed)
    assert np.allclose(m.from_coords(m.coords(x)).data, x.data)
    assert np.allclose(m.from_real(m.to_real(x)).data, x.data)
    h = random_selfadjoint(m, seed)
    c = m.selfadjoint_coords(h)
    assert np.allclose(c.imag, 0, atol=1e-12)
    rebuilt = sum((b * float(v.real) for b, v in zip(m.selfadjoint_basis(), c)), m.zero())
    assert np.allclose(rebuilt.data, h.data)


@pytest.mark.parametrize("desc", ALL_MODELS, ids=model_id)
def test_random_generators(desc):
    m = build_model(desc)
    x = random_element(m, 1, scale=2.5)
    assert x.norm() == pytest.approx(2.5)
    h = random_selfadjoint(m, 2, scale=0.7)
    assert np.allclose(involution(h).data, h.data) and h.norm() == pytest.approx(0.7)
    u = random_unitary(m, 3, scale=2.0)
    assert is_unitary(u)
    assert np.allclose(random_element(m, 9).data, random_element(m, 9).data)


def test_symmetric_selfadjoint_elements_are_real():
    m = build_model(D.symmetric(3))
    h = random_selfadjoint(m, 4)
    assert np.allclose(h.data.imag, 0)


@pytest.mark.parametrize("desc", ALL_MODELS, ids=model_id)
def test_element_json_round_trip(desc):
    m = build_model(desc)
    x = random_element(m, 5)
    y = loads(dumps(x))
    assert y.model.descriptor == desc and np.array_equal(x.data, y.data)
    assert element_from_json(element_to_json(x), desc).allclose(x, 0)


def test_element_json_validation():
    m = build_model(D.full(2))
    d = element_to_json(m.one())
    d["data"][0][0][0][0] = float("nan")
    with pytest.raises(StructureViolation):
        element_from_json(d)
    with pytest.raises(StructureViolation):
        element_from_json({"model": {"kind": "full_matrix", "n": 3}, "data": element_to_json(m.one())["data"]})
    with pytest.raises(ModelMismatch):
        element_from_json(element_to_json(m.one()), D.full(3))
