"""Geometry: Bernstein basis, CST surfaces, coordinate and OBJ exports."""

import numpy as np
import pytest

from setfoil import CstParams, FlowConditions, export_coordinates, export_obj, generate_airfoil, parse_coordinates
from setfoil.geometry import bernstein, chord_stations, class_function, shape_function, surface_y
from setfoil.sampling import DesignSpace


def random_params(rng, space=None):
    space = space or DesignSpace()
    vec = rng.uniform(space.lower(), space.upper())
    return CstParams.from_vector(vec)


def test_bernstein_partition_of_unity():
    x = np.linspace(0.0, 1.0, 101)
    total = sum(bernstein(i, 4, x) for i in range(5))
    assert np.max(np.abs(total - 1.0)) < 1e-12


def test_bernstein_known_value():
    # B_{2,4}(0.5) = 6 * 0.25 * 0.25
    assert bernstein(2, 4, 0.5) == pytest.approx(0.375, abs=1e-15)


def test_bernstein_rejects_bad_index_and_domain():
    with pytest.raises(ValueError):
        bernstein(5, 4, 0.5)
    with pytest.raises(ValueError):
        bernstein(-1, 4, 0.5)
    with pytest.raises(ValueError):
        bernstein(1, 4, 1.5)


def test_class_function_endpoints():
    x = np.array([0.0, 1.0])
    assert np.all(class_function(x) == 0.0)
    # interior maximum of x^0.5 (1-x) is at x = 1/3
    xs = np.linspace(0, 1, 1001)
    assert abs(xs[np.argmax(class_function(xs))] - 1 / 3) < 2e-3


def test_shape_function_constant_weights():
    # partition of unity makes S(x) = c when all weights equal c
    x = np.linspace(0, 1, 57)
    s = shape_function(np.full(5, 0.3), x)
    assert np.max(np.abs(s - 0.3)) < 1e-12


def test_surface_endpoints_and_te_offset():
    params = CstParams(w_u=(0.1, 0.12, 0.15, 0.15, 0.17), w_l=(0.2, 0.1, 0.05, -0.03), y_te=0.002)
    for weights, sign in ((params.w_u, 1.0), (params.lower_full, -1.0)):
        assert surface_y(weights, np.array([0.0]), params.y_te, sign)[0] == pytest.approx(0.0, abs=1e-15)
    assert surface_y(params.w_u, np.array([1.0]), params.y_te, 1.0)[0] == pytest.approx(0.002, abs=1e-15)
    assert surface_y(params.lower_full, np.array([1.0]), params.y_te, -1.0)[0] == pytest.approx(-0.002, abs=1e-15)


def test_symmetric_params_mirror_exactly():
    rng = np.random.default_rng(4)
    x = np.linspace(0, 1, 73)
    for _ in range(50):
        w = rng.uniform(0.05, 0.3, size=5)
        params = CstParams(w_u=tuple(w), w_l=tuple(w[1:]))
        up = surface_y(params.w_u, x, params.y_te, 1.0)
        lo = surface_y(params.lower_full, x, params.y_te, -1.0)
        assert np.max(np.abs(up + lo)) < 1e-12


def test_generate_airfoil_loop_structure():
    params = CstParams(w_u=(0.1, 0.12, 0.15, 0.15, 0.17), w_l=(0.2, 0.1, 0.05, -0.03))
    geom = generate_airfoil(params, n_points=101)
    assert geom.upper.shape == (101, 2)
    assert geom.lower.shape == (101, 2)
    assert geom.loop.shape == (201, 2)
    # loop runs TE -> LE over the upper surface, then LE -> TE on the lower
    assert geom.loop[0, 0] == pytest.approx(1.0)
    assert geom.loop[100, 0] == pytest.approx(0.0)
    assert geom.loop[-1, 0] == pytest.approx(1.0)


def test_generate_airfoil_rejects_tiny_point_count():
    params = CstParams(w_u=(0.1, 0.12, 0.15, 0.15, 0.17), w_l=(0.2, 0.1, 0.05, -0.03))
    with pytest.raises(ValueError):
        generate_airfoil(params, n_points=5)


def test_chord_stations_cosine_clusters_leading_edge():
    x = chord_stations(101, "cosine")
    assert x[0] == 0.0 and x[-1] == 1.0
    assert np.all(np.diff(x) > 0)
    # cosine spacing puts more points near the ends than uniform
    uniform = chord_stations(101, "uniform")
    assert x[1] < uniform[1]


def test_export_import_round_trip_random_shapes():
    rng = np.random.default_rng(11)
    for _ in range(25):
        params = random_params(rng)
        geom = generate_airfoil(params, n_points=61)
        name, loop = parse_coordinates(export_coordinates(geom, name="foil-x"))
        assert name == "foil-x"
        assert np.max(np.abs(loop - geom.loop)) < 1e-9


def test_parse_coordinates_rejects_garbage():
    with pytest.raises(ValueError):
        parse_coordinates("")
    with pytest.raises(ValueError):
        parse_coordinates("name\n0.1 0.2\nnot numbers here\n")


def test_obj_vertex_and_face_rule():
    # blunt trailing edge: loop endpoints differ, export closes the gap
    params = CstParams(w_u=(0.1, 0.12, 0.15, 0.15, 0.17), w_l=(0.2, 0.1, 0.05, -0.03), y_te=0.002)
    geom = generate_airfoil(params, n_points=51)
    text = export_obj(geom, span=0.2)
    lines = text.splitlines()
    n = len(geom.loop)
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(verts) == 2 * n
    # side quads between consecutive loop points, one closing quad at the
    # blunt trailing edge, plus the two end caps
    assert len(faces) == (n - 1) + 1 + 2
    zs = {v.split()[3] for v in verts}
    assert len(zs) == 2


def test_obj_closed_te_has_no_closing_quad():
    params = CstParams(w_u=(0.1, 0.12, 0.15, 0.15, 0.17), w_l=(0.2, 0.1, 0.05, -0.03), y_te=0.0)
    geom = generate_airfoil(params, n_points=31)
    # y_te = 0 makes the loop endpoints coincide
    assert np.allclose(geom.loop[0], geom.loop[-1])
    faces = [ln for ln in export_obj(geom).splitlines() if ln.startswith("f ")]
    assert len(faces) == (len(geom.loop) - 1) + 2


def test_flow_conditions_range_check():
    flow = FlowConditions()
    assert flow.ma == 0.6 and flow.aoa_deg == 2.5 and flow.re == 6.3e6
    assert flow.in_range()
    assert not FlowConditions(ma=0.9).in_range()
    assert not FlowConditions(aoa_deg=8.0).in_range()


def test_cst_vector_round_trip():
    rng = np.random.default_rng(3)
    for _ in range(20):
        params = random_params(rng)
        again = CstParams.from_vector(params.as_vector())
        assert again == params
    with pytest.raises(ValueError):
        CstParams.from_vector(np.zeros(8))


def test_lower_full_ties_leading_edge_weight():
    params = CstParams(w_u=(0.11, 0.12, 0.13, 0.14, 0.15), w_l=(0.2, 0.1, 0.05, -0.03))
    full = params.lower_full
    assert full[0] == params.w_u[0]
    assert tuple(full[1:]) == params.w_l
